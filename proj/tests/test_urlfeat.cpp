#include <gtest/gtest.h>

#include <algorithm>

#include "misinfo/rng.hpp"
#include "misinfo/urlfeat.hpp"
#include "url_golden.hpp"

using namespace misinfo;
using namespace misinfo::url;

TEST(ParseUrl, FullForm) {
    const auto p = parse_url("https://www.example.com/path");
    EXPECT_EQ(p.scheme, Scheme::https);
    EXPECT_EQ(p.third_level, "www");
    EXPECT_EQ(p.second_level, "example");
    EXPECT_EQ(p.tld, "com");
    EXPECT_EQ(p.full_host, "www.example.com");
    EXPECT_EQ(p.path, "/path");
}

TEST(ParseUrl, SchemelessTyposquat) {
    const auto p = parse_url("paypal--accounts.com");
    EXPECT_EQ(p.scheme, Scheme::absent);
    EXPECT_EQ(p.second_level, "paypal--accounts");
    EXPECT_EQ(p.tld, "com");
    EXPECT_TRUE(p.path.empty());
}

TEST(ParseUrl, LastLabelIsTld) {
    const auto p = parse_url("abcnews.com.co");
    ASSERT_EQ(p.host_labels.size(), 3u);
    EXPECT_EQ(p.host_labels[0], "abcnews");
    EXPECT_EQ(p.tld, "co");
    EXPECT_EQ(p.second_level, "com");
    EXPECT_EQ(p.third_level, "abcnews");
}

TEST(ParseUrl, HostLowercasedPathCasePreserved) {
    const auto p = parse_url("HTTPS://WWW.Example.COM/Path/File.HTML");
    EXPECT_EQ(p.scheme, Scheme::https);
    EXPECT_EQ(p.full_host, "www.example.com");
    EXPECT_EQ(p.path, "/Path/File.HTML");
}

TEST(ParseUrl, PortStrippedFromAuthority) {
    const auto p = parse_url("http://example.org:8080/x");
    EXPECT_EQ(p.full_host, "example.org");
    EXPECT_EQ(p.tld, "org");
}

TEST(ParseUrl, Ipv6BracketedHost) {
    const auto p = parse_url("https://[2001:db8::1]/secure");
    EXPECT_EQ(p.full_host, "[2001:db8::1]");
    EXPECT_TRUE(host_flags(p).domain_is_ip);
}

TEST(ParseUrl, Errors) {
    EXPECT_THROW(parse_url(""), ParseError);
    EXPECT_THROW(parse_url("https:///nohost"), ParseError);
    EXPECT_THROW(parse_url("https://bad..labels.com/x"), ParseError);
}

TEST(TokenizeUrl, ZonesAndDelimiters) {
    const auto tokens = tokenize_url("https://fox-news24.com/a_b");
    const std::vector<std::pair<std::string, TokenZone>> expected = {
        {"https", TokenZone::scheme}, {"fox", TokenZone::host}, {"news24", TokenZone::host},
        {"com", TokenZone::tld},      {"a", TokenZone::path},   {"b", TokenZone::path}};
    ASSERT_EQ(tokens.size(), expected.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        EXPECT_EQ(tokens[i].text, expected[i].first) << i;
        EXPECT_EQ(tokens[i].zone, expected[i].second) << i;
    }
}

TEST(TokenizeUrl, MinimalHost) {
    const auto tokens = tokenize_url("x.com");
    ASSERT_EQ(tokens.size(), 2u);
    EXPECT_EQ(tokens[0].text, "x");
    EXPECT_EQ(tokens[0].zone, TokenZone::host);
    EXPECT_EQ(tokens[1].text, "com");
    EXPECT_EQ(tokens[1].zone, TokenZone::tld);
}

// Joining the token texts with any delimiter and re-tokenizing gives the
// same texts back (zones aside).
TEST(TokenizeUrl, LosslessModuloDelimiters) {
    const std::vector<std::string> urls = {
        "https://www.example.com/a-b_c/d=e?f", "http://1.2.3.4/x", "fox-news24.com/a_b-c.d"};
    for (const auto& url : urls) {
        const auto tokens = tokenize_url(url);
        for (const std::string delim : {"/", ".", "-", "_", "="}) {
            std::string joined = "host.com";
            for (const auto& t : tokens) joined += delim + t.text;
            const auto again = tokenize_url(joined);
            std::vector<std::string> expected = {"host", "com"};
            for (const auto& t : tokens) expected.push_back(t.text);
            ASSERT_EQ(again.size(), expected.size()) << url << " delim " << delim;
            for (std::size_t i = 0; i < again.size(); ++i)
                EXPECT_EQ(again[i].text, expected[i]);
        }
    }
}

TEST(LexicalCounts, SpecExamples) {
    const auto c1 = lexical_counts("https://abcnews.com.co/news-article");
    EXPECT_EQ(c1.url_length, 35);
    EXPECT_EQ(c1.dot_count, 2);
    EXPECT_EQ(c1.hyphen_count, 1);
    EXPECT_EQ(c1.slash_count, 3);
    EXPECT_EQ(c1.digit_count, 0);
    EXPECT_EQ(c1.at_count, 0);

    const auto c2 = lexical_counts("http://1.2.3.4/a?b=1&c=2");
    EXPECT_EQ(c2.dot_count, 3);
    EXPECT_EQ(c2.question_count, 1);
    EXPECT_EQ(c2.equal_count, 2);
    EXPECT_EQ(c2.ampersand_count, 1);
    EXPECT_EQ(c2.digit_count, 6);
}

TEST(WordFlags, PinnedLists) {
    EXPECT_TRUE(word_flags("https://politicalfilm.wordpress.com/2020/").word_blog);
    EXPECT_TRUE(word_flags("https://site.com/coronavirus-update").word_covid);
    const auto cnn = word_flags("https://www.cnn.com/x");
    EXPECT_FALSE(cnn.word_blog);
    EXPECT_FALSE(cnn.word_social);
    EXPECT_FALSE(cnn.word_news);
    EXPECT_FALSE(cnn.word_covid);
    EXPECT_TRUE(word_flags("HTTPS://TWITTER.COM/UPPER").word_social);
}

TEST(HostFlags, SpecExamples) {
    const auto ip = host_flags(parse_url("http://1.2.3.4/x"));
    EXPECT_TRUE(ip.scheme_http);
    EXPECT_TRUE(ip.domain_is_ip);

    const auto f = host_flags(parse_url("https://5gnews.org"));
    EXPECT_TRUE(f.domain_starts_with_digit);
    EXPECT_TRUE(f.tld_org);
    EXPECT_TRUE(f.scheme_https);

    const auto co = host_flags(parse_url("https://abcnews.com.co"));
    EXPECT_FALSE(co.tld_com);
    EXPECT_FALSE(co.tld_org);
    EXPECT_FALSE(co.tld_gov);
    EXPECT_FALSE(co.tld_net);
}

TEST(HostFlags, NotEveryDottedQuadIsAnIp) {
    EXPECT_FALSE(host_flags(parse_url("http://1.2.3.400/x")).domain_is_ip);
    EXPECT_FALSE(host_flags(parse_url("http://a.2.3.4/x")).domain_is_ip);
}

TEST(ExtractUrlFeatures, GoldenSuite) {
    auto provider = reference::seeded_age_provider();
    for (const auto& c : reference::url_golden_cases()) {
        std::optional<int> age;
        try {
            age = provider.lookup_age(registrable_domain(c.url));
        } catch (const ValidationError&) {
            age = std::nullopt;  // e.g. userinfo left in the host
        }
        const auto got = extract_url_features(c.url, age);
        EXPECT_EQ(got, c.expected) << c.url;
    }
}

TEST(ExtractUrlFeatures, MissingAgeLeftMissing) {
    const auto f = extract_url_features("https://unknown-domain.com/x", std::nullopt);
    EXPECT_FALSE(f.age_year.has_value());
    EXPECT_EQ(f.url_length, 28);
    bool missing = false;
    const auto row = f.to_row(&missing);
    EXPECT_TRUE(missing);
    EXPECT_EQ(row.size(), 24u);
}

TEST(ExtractUrlFeatures, PureGivenAge) {
    const auto a = extract_url_features("https://cnn-trending.com/x", 2017);
    const auto b = extract_url_features("https://cnn-trending.com/x", 2017);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.hyphen_count, 1);
    EXPECT_TRUE(a.tld_com);
    EXPECT_EQ(a.age_year, 2017);
}

TEST(UrlInvariants, RandomizedProperties) {
    auto rng = make_rng(20240807);
    for (int trial = 0; trial < 500; ++trial) {
        std::string url;
        const int scheme_pick = static_cast<int>(uniform_index(rng, 3));
        if (scheme_pick == 0) url += "http://";
        else if (scheme_pick == 1) url += "https://";
        const int labels = 1 + static_cast<int>(uniform_index(rng, 3));
        for (int l = 0; l < labels; ++l) {
            if (l) url += '.';
            for (int i = 0; i < 3 + static_cast<int>(uniform_index(rng, 5)); ++i)
                url += static_cast<char>('a' + uniform_index(rng, 26));
        }
        const int segs = static_cast<int>(uniform_index(rng, 3));
        for (int s = 0; s < segs; ++s) {
            url += '/';
            for (int i = 0; i < 1 + static_cast<int>(uniform_index(rng, 6)); ++i) {
                static const char pool[] = "abcde-_=?&.0123456789";
                url += pool[uniform_index(rng, sizeof(pool) - 1)];
            }
        }
        const auto parsed = parse_url(url);
        std::string joined;
        for (std::size_t i = 0; i < parsed.host_labels.size(); ++i) {
            if (i) joined += '.';
            joined += parsed.host_labels[i];
        }
        EXPECT_EQ(joined, parsed.full_host);
        EXPECT_EQ(parsed.tld, parsed.host_labels.back());

        const auto counts = lexical_counts(url);
        EXPECT_GE(counts.url_length, counts.host_length);
        const auto host_dots = std::count(parsed.full_host.begin(), parsed.full_host.end(), '.');
        EXPECT_EQ(host_dots, static_cast<long>(parsed.host_labels.size()) - 1);

        const auto flags = host_flags(parsed);
        EXPECT_LE(int(flags.scheme_http) + int(flags.scheme_https), 1);
        const auto f = extract_url_features(url, std::nullopt);  // total past the parse
        EXPECT_EQ(f.url_length, counts.url_length);
    }
}

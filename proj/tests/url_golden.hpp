#pragma once

// Golden URL feature fixtures: expected rows were counted independently of
// the extractor (character-by-character recount; see
// reference/gen_reference_values.py for the companion statistical oracles).
// Ages come from the seeded cache in seeded_age_provider().

#include <optional>
#include <string>
#include <vector>

#include "misinfo/domain_age.hpp"
#include "misinfo/urlfeat.hpp"

namespace reference {

struct UrlGoldenCase {
    std::string url;
    misinfo::url::UrlFeatures expected;
};

// Registration years for the typosquatting comparison set plus their
// legitimate counterparts.
inline misinfo::age::DomainAgeProvider seeded_age_provider() {
    using misinfo::age::AgeRecord;
    using misinfo::age::AgeSource;
    misinfo::age::DomainAgeProvider p;
    const char* ts = "2020-08-01T00:00:00Z";
    p.insert(AgeRecord{"cnn-trending.com", 2017, AgeSource::whois, ts});
    p.insert(AgeRecord{"fox-news24.com", 2018, AgeSource::whois, ts});
    p.insert(AgeRecord{"abcnews.com.co", 2016, AgeSource::whois, ts});
    // The last-label TLD rule makes "com.co" the registrable domain of
    // abcnews.com.co, so pipeline lookups use that key.
    p.insert(AgeRecord{"com.co", 2016, AgeSource::whois, ts});
    p.insert(AgeRecord{"ilfattoquotidaino.it", 2016, AgeSource::whois, ts});
    p.insert(AgeRecord{"paypal.com", 1999, AgeSource::whois, ts});
    p.insert(AgeRecord{"facebook.com", 1997, AgeSource::whois, ts});
    p.insert(AgeRecord{"cnn.com", 1993, AgeSource::wayback, ts});
    p.insert(AgeRecord{"foxnews.com", 1995, AgeSource::whois, ts});
    p.insert(AgeRecord{"abcnews.com", 1995, AgeSource::whois, ts});
    p.insert(AgeRecord{"ilfattoquotidiano.it", 2009, AgeSource::whois, ts});
    return p;
}

inline const std::vector<UrlGoldenCase>& url_golden_cases() {
    static const std::vector<UrlGoldenCase> cases = {
    {"paypal--accounts.com",
     {20, false, false, true, false, false, false, {},
      false, false, false, false, false, false,
      1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 20}},
    {"fr.facebok.com",
     {14, false, false, true, false, false, false, {},
      false, false, false, false, false, false,
      2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 14}},
    {"cnn-trending.com",
     {16, false, false, true, false, false, false, 2017,
      false, false, false, false, false, false,
      1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 16}},
    {"fox-news24.com",
     {14, false, false, true, false, false, false, 2018,
      false, false, true, false, false, false,
      1, 0, 0, 0, 1, 0, 0, 0, 0, 2, 14}},
    {"abcnews.com.co",
     {14, false, false, false, false, false, false, 2016,
      false, false, true, false, false, false,
      2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 14}},
    {"ilfattoquotidaino.it",
     {20, false, false, false, false, false, false, 2016,
      false, false, false, false, false, false,
      1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 20}},
    {"https://www.paypal.com/signin",
     {29, false, false, true, false, false, false, 1999,
      false, false, false, false, false, true,
      2, 0, 0, 3, 0, 0, 0, 0, 0, 0, 14}},
    {"https://www.facebook.com/groups/covid",
     {37, false, false, true, false, false, false, 1997,
      false, true, false, true, false, true,
      2, 0, 0, 4, 0, 0, 0, 0, 0, 0, 16}},
    {"https://www.cnn.com/x",
     {21, false, false, true, false, false, false, 1993,
      false, false, false, false, false, true,
      2, 0, 0, 3, 0, 0, 0, 0, 0, 0, 11}},
    {"https://www.foxnews.com/politics",
     {32, false, false, true, false, false, false, 1995,
      false, false, true, false, false, true,
      2, 0, 0, 3, 0, 0, 0, 0, 0, 0, 15}},
    {"https://abcnews.com.co/news-article",
     {35, false, false, false, false, false, false, 2016,
      false, false, true, false, false, true,
      2, 0, 0, 3, 1, 0, 0, 0, 0, 0, 14}},
    {"https://www.ilfattoquotidiano.it/2020/03/",
     {41, false, false, false, false, false, false, 2009,
      false, false, false, false, false, true,
      2, 0, 0, 5, 0, 0, 0, 0, 0, 6, 24}},
    {"https://www.example.com/path",
     {28, false, false, true, false, false, false, {},
      false, false, false, false, false, true,
      2, 0, 0, 3, 0, 0, 0, 0, 0, 0, 15}},
    {"http://1.2.3.4/a?b=1&c=2",
     {24, true, true, false, false, false, false, {},
      false, false, false, false, true, false,
      3, 0, 1, 3, 0, 0, 2, 1, 0, 6, 7}},
    {"https://5gnews.org",
     {18, true, false, false, true, false, false, {},
      false, false, true, false, false, true,
      1, 0, 0, 2, 0, 0, 0, 0, 0, 1, 10}},
    {"https://politicalfilm.wordpress.com/2020/03/20/event-201-october-18-2019/",
     {73, false, false, true, false, false, false, {},
      true, false, true, false, false, true,
      2, 0, 0, 7, 4, 0, 0, 0, 0, 17, 27}},
    {"https://site.com/coronavirus-update",
     {35, false, false, true, false, false, false, {},
      false, false, false, true, false, true,
      1, 0, 0, 3, 1, 0, 0, 0, 0, 0, 8}},
    {"http://www.drugtodayonline.com/medical-news/latest/10597-sun-exposure.html",
     {74, false, false, true, false, false, false, {},
      false, false, true, false, true, false,
      3, 0, 0, 5, 3, 0, 0, 0, 0, 5, 23}},
    {"https://prepareforchange.net/2020/01/27/event-201/",
     {50, false, false, false, false, false, true, {},
      false, false, false, false, false, true,
      1, 0, 0, 7, 1, 0, 0, 0, 0, 11, 20}},
    {"https://www.theepochtimes.com/the-closing_3281291.html",
     {54, false, false, true, false, false, false, {},
      false, false, false, false, false, true,
      3, 0, 0, 3, 1, 1, 0, 0, 0, 7, 21}},
    {"https://beforeitsnews.com/conspiracy-theories/2020/03/follow-the-money-2516522.html",
     {83, false, false, true, false, false, false, {},
      false, false, true, false, false, true,
      2, 0, 0, 6, 4, 0, 0, 0, 0, 13, 17}},
    {"https://productivityhub.org/2020/04/04/bill-gates-calls/",
     {56, false, false, false, true, false, false, {},
      false, false, false, false, false, true,
      1, 0, 0, 7, 2, 0, 0, 0, 0, 8, 19}},
    {"ftp://files.archive.org/pub/data",
     {32, false, false, false, true, false, false, {},
      false, false, false, false, false, false,
      2, 0, 0, 4, 0, 0, 0, 0, 0, 0, 17}},
    {"http://user@evil.com/login?next=/home",
     {37, false, false, true, false, false, false, {},
      false, false, false, false, true, false,
      1, 0, 0, 4, 0, 0, 1, 1, 1, 0, 13}},
    {"https://www.gov.uk/coronavirus",
     {30, false, false, false, false, false, false, {},
      false, false, false, true, false, true,
      2, 0, 0, 3, 0, 0, 0, 0, 0, 0, 10}},
    {"twitter.com/status;id=5",
     {23, false, false, true, false, false, false, {},
      false, true, false, false, false, false,
      1, 1, 0, 1, 0, 0, 1, 0, 0, 1, 11}},
    {"https://blog.example.net/post_1?a=b&c=d",
     {39, false, false, false, false, false, true, {},
      true, false, false, false, false, true,
      2, 0, 1, 3, 0, 1, 2, 1, 0, 1, 16}},
    {"http://example.org:8080/port/test",
     {33, false, false, false, true, false, false, {},
      false, false, false, false, true, false,
      1, 0, 0, 4, 0, 0, 0, 0, 0, 4, 11}},
    {"https://www.bbc.co.uk/news/av/stories-51974040",
     {46, false, false, false, false, false, false, {},
      false, false, true, false, false, true,
      3, 0, 0, 5, 1, 0, 0, 0, 0, 8, 13}},
    {"x.com",
     {5, false, false, true, false, false, false, {},
      false, false, false, false, false, false,
      1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 5}},
    };
    return cases;
}

}  // namespace reference

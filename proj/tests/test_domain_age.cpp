#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "misinfo/domain_age.hpp"
#include "url_golden.hpp"

using namespace misinfo;
using namespace misinfo::age;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST(LookupAge, SeededCacheHits) {
    auto provider = reference::seeded_age_provider();
    EXPECT_EQ(provider.lookup_age("cnn.com"), 1993);
    EXPECT_EQ(provider.lookup_age("ilfattoquotidaino.it"), 2016);
    EXPECT_EQ(provider.lookup_age("ilfattoquotidiano.it"), 2009);
    EXPECT_EQ(provider.lookup_age("unknown-site.com"), std::nullopt);
}

TEST(LookupAge, MalformedDomainErrors) {
    auto provider = reference::seeded_age_provider();
    EXPECT_THROW(provider.lookup_age(""), ValidationError);
    EXPECT_THROW(provider.lookup_age("Upper.Com"), ValidationError);
    EXPECT_THROW(provider.lookup_age("has space.com"), ValidationError);
    EXPECT_THROW(provider.lookup_age(".leading.dot"), ValidationError);
}

TEST(LookupAge, OfflineNeverCallsRemote) {
    DomainAgeProvider provider(DomainAgeProvider::Mode::offline, 0);
    bool called = false;
    provider.set_remote_fetcher([&called](const std::string& d) -> std::optional<AgeRecord> {
        called = true;
        return AgeRecord{d, 2000, AgeSource::whois, "t"};
    });
    EXPECT_EQ(provider.lookup_age("example.com"), std::nullopt);
    EXPECT_FALSE(called);
    EXPECT_TRUE(provider.cache().empty());  // no mutation in offline mode
}

TEST(LookupAge, OnlineFetchesCachesAndNegativeCaches) {
    DomainAgeProvider provider(DomainAgeProvider::Mode::online, 0);
    int calls = 0;
    provider.set_remote_fetcher([&calls](const std::string& d) -> std::optional<AgeRecord> {
        ++calls;
        if (d == "known.com") return AgeRecord{d, 2004, AgeSource::wayback, "t"};
        return std::nullopt;
    });
    EXPECT_EQ(provider.lookup_age("known.com"), 2004);
    EXPECT_EQ(provider.lookup_age("known.com"), 2004);
    EXPECT_EQ(calls, 1);  // second hit served from cache

    EXPECT_EQ(provider.lookup_age("gone.org"), std::nullopt);
    EXPECT_EQ(provider.lookup_age("gone.org"), std::nullopt);
    EXPECT_EQ(calls, 2);  // failure cached as a miss
}

TEST(LookupAge, RemoteThrowBecomesMiss) {
    DomainAgeProvider provider(DomainAgeProvider::Mode::online, 0);
    provider.set_remote_fetcher([](const std::string&) -> std::optional<AgeRecord> {
        throw std::runtime_error("timeout");
    });
    EXPECT_EQ(provider.lookup_age("slow.com"), std::nullopt);  // never aborts a run
}

TEST(AgeRecordValidation, YearRange) {
    DomainAgeProvider provider;
    EXPECT_THROW(provider.insert(AgeRecord{"old.com", 1920, AgeSource::whois, "t"}),
                 ValidationError);
    EXPECT_THROW(
        provider.insert(AgeRecord{"future.com", current_year_utc() + 1, AgeSource::whois, "t"}),
        ValidationError);
    provider.insert(AgeRecord{"fine.com", 1985, AgeSource::manual, "t"});
    EXPECT_EQ(provider.lookup_age("fine.com"), 1985);
}

TEST(CacheFile, SaveLoadRoundTrip) {
    auto provider = reference::seeded_age_provider();
    const auto path = temp_path("mi_age_cache.jsonl");
    provider.save_cache(path);
    const auto loaded = DomainAgeProvider::load_cache(path);
    EXPECT_EQ(loaded.cache(), provider.cache());
}

TEST(CacheFile, EmptyRoundTrip) {
    DomainAgeProvider provider;
    const auto path = temp_path("mi_age_empty.jsonl");
    provider.save_cache(path);
    const auto loaded = DomainAgeProvider::load_cache(path);
    EXPECT_TRUE(loaded.cache().empty());
}

TEST(CacheFile, DuplicateDomainLastWinsWithWarning) {
    const auto path = temp_path("mi_age_dup.jsonl");
    {
        std::ofstream out(path, std::ios::trunc);
        out << R"({"domain":"a.com","year":2001,"source":"whois","fetched_at":"t"})" << "\n";
        out << R"({"domain":"a.com","year":2009,"source":"wayback","fetched_at":"t"})" << "\n";
    }
    std::vector<std::string> warnings;
    auto provider =
        DomainAgeProvider::load_cache(path, DomainAgeProvider::Mode::offline, &warnings);
    EXPECT_EQ(provider.lookup_age("a.com"), 2009);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("a.com"), std::string::npos);
}

TEST(CacheFile, CorruptLineNamesLineNumber) {
    const auto path = temp_path("mi_age_corrupt.jsonl");
    {
        std::ofstream out(path, std::ios::trunc);
        out << R"({"domain":"a.com","year":2001,"source":"whois","fetched_at":"t"})" << "\n";
        out << "not json\n";
    }
    try {
        DomainAgeProvider::load_cache(path);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(CacheFile, MissingFileIsIoError) {
    EXPECT_THROW(DomainAgeProvider::load_cache("/nonexistent/cache.jsonl"), IoError);
}

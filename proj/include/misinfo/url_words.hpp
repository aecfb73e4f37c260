#pragma once

#include <array>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "misinfo/common.hpp"

namespace misinfo::url {

// Pinned keyword lists for the four word-based URL flags. The defaults below
// are the canonical lists; data/url_words_*.txt ship the same content and a
// test keeps them in sync. Lists are deliberately frozen: extending them
// changes extracted features and must be an explicit config decision.
inline const std::vector<std::string>& default_blog_words() {
    static const std::vector<std::string> words = {"blogspot", "blog", "wordpress", "blogger"};
    return words;
}

inline const std::vector<std::string>& default_social_words() {
    static const std::vector<std::string> words = {"facebook", "twitter", "instagram"};
    return words;
}

inline const std::vector<std::string>& default_news_words() {
    static const std::vector<std::string> words = {"news", "press", "journal", "publisher"};
    return words;
}

inline const std::vector<std::string>& default_covid_words() {
    static const std::vector<std::string> words = {"coronavirus", "virus", "covid"};
    return words;
}

struct WordLists {
    std::vector<std::string> blog = default_blog_words();
    std::vector<std::string> social = default_social_words();
    std::vector<std::string> news = default_news_words();
    std::vector<std::string> covid = default_covid_words();
};

// One lowercase word per line; blank lines and '#' comments skipped.
inline std::vector<std::string> load_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open word list " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        words.push_back(to_lower_ascii(line));
    }
    return words;
}

}  // namespace misinfo::url

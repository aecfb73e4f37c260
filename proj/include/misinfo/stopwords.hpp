#pragma once

#include <fstream>
#include <set>
#include <string>

#include "misinfo/common.hpp"

namespace misinfo::text {

// Built-in English stopword list. data/stopwords_en.txt ships the same words
// (a test keeps them in sync); the file path is the override mechanism.
inline const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
        "any", "are", "aren", "as", "at", "be", "because", "been", "before", "being",
        "below", "between", "both", "but", "by", "can", "cannot", "could", "couldn",
        "d", "did", "didn", "do", "does", "doesn", "doing", "don", "down", "during",
        "each", "few", "for", "from", "further", "had", "hadn", "has", "hasn", "have",
        "haven", "having", "he", "her", "here", "hers", "herself", "him", "himself",
        "his", "how", "i", "if", "in", "into", "is", "isn", "it", "its", "itself",
        "just", "ll", "m", "ma", "me", "might", "mightn", "more", "most", "must",
        "mustn", "my", "myself", "needn", "no", "nor", "not", "now", "o", "of", "off",
        "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over",
        "own", "re", "s", "same", "shan", "she", "should", "shouldn", "so", "some",
        "such", "t", "than", "that", "the", "their", "theirs", "them", "themselves",
        "then", "there", "these", "they", "this", "those", "through", "to", "too",
        "under", "until", "up", "ve", "very", "was", "wasn", "we", "were", "weren",
        "what", "when", "where", "which", "while", "who", "whom", "why", "will",
        "with", "won", "would", "wouldn", "y", "you", "your", "yours", "yourself",
        "yourselves"};
    return words;
}

// One token per line, UTF-8; blank lines and '#' comments skipped.
inline std::set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stopword list " + path);
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        words.insert(to_lower_ascii(line));
    }
    return words;
}

}  // namespace misinfo::text

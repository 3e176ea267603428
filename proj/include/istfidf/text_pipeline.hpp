// Copyright 2026 The istfidf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Raw text -> normalized tokens -> term counts.
//
// Tokens are maximal runs of Unicode alphabetic code points, lowercased with
// the simple (1:1) case mapping. Digits, punctuation and whitespace all act as
// separators, so numbers never survive. Stop words and tokens shorter than the
// configured minimum (in code points) are dropped. No stemming.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "istfidf/errors.hpp"

namespace istfidf {

using Term = std::string;
using TokenList = std::vector<Term>;

/// Raw occurrence counts of one document. `total` is always the sum of counts.
struct TermCounts {
    std::map<Term, std::uint64_t> counts;
    std::uint64_t total = 0;

    TermCounts() = default;
    TermCounts(std::initializer_list<std::pair<const Term, std::uint64_t>> init) {
        for (const auto& [term, n] : init) add(term, n);
    }

    bool empty() const noexcept { return total == 0; }
    std::size_t size() const noexcept { return counts.size(); }

    std::uint64_t count(std::string_view term) const {
        auto it = counts.find(Term(term));
        return it == counts.end() ? 0 : it->second;
    }

    void add(const Term& term, std::uint64_t n = 1) {
        if (n == 0) return;
        counts[term] += n;
        total += n;
    }

    void merge(const TermCounts& other) {
        for (const auto& [term, n] : other.counts) add(term, n);
    }

    friend bool operator==(const TermCounts&, const TermCounts&) = default;
};

// Snowball English list as shipped by the R tm package (stopwords("english")).
inline constexpr std::string_view kSnowballEnglish[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your",
    "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she",
    "her", "hers", "herself", "it", "its", "itself", "they", "them", "their",
    "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being",
    "have", "has", "had", "having", "do", "does", "did", "doing", "would",
    "should", "could", "ought", "i'm", "you're", "he's", "she's", "it's",
    "we're", "they're", "i've", "you've", "we've", "they've", "i'd", "you'd",
    "he'd", "she'd", "we'd", "they'd", "i'll", "you'll", "he'll", "she'll",
    "we'll", "they'll", "isn't", "aren't", "wasn't", "weren't", "hasn't",
    "haven't", "hadn't", "doesn't", "don't", "didn't", "won't", "wouldn't",
    "shan't", "shouldn't", "can't", "cannot", "couldn't", "mustn't", "let's",
    "that's", "who's", "what's", "here's", "there's", "when's", "where's",
    "why's", "how's", "a", "an", "the", "and", "but", "if", "or", "because",
    "as", "until", "while", "of", "at", "by", "for", "with", "about",
    "against", "between", "into", "through", "during", "before", "after",
    "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",
    "over", "under", "again", "further", "then", "once", "here", "there",
    "when", "where", "why", "how", "all", "any", "both", "each", "few", "more",
    "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same",
    "so", "than", "too", "very",
};

using Stoplist = std::unordered_set<std::string>;

inline Stoplist snowball_english_stoplist() {
    Stoplist words;
    for (auto w : kSnowballEnglish) words.emplace(w);
    return words;
}

/// Reads a stoplist file: one UTF-8 term per line, '#' starts a comment line.
/// Surrounding whitespace is trimmed and blank lines are skipped.
inline Stoplist load_stoplist(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open stoplist: " + path.string());
    Stoplist words;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || line[first] == '#') continue;
        auto last = line.find_last_not_of(" \t\r\n");
        words.emplace(line.substr(first, last - first + 1));
    }
    return words;
}

struct PipelineConfig {
    Stoplist stopwords = snowball_english_stoplist();
    std::size_t min_length = 2;

    static PipelineConfig with_stoplist(const std::filesystem::path& path) {
        PipelineConfig cfg;
        cfg.stopwords = load_stoplist(path);
        return cfg;
    }
};

namespace detail {

inline void append_utf8(std::string& out, UChar32 c) {
    char buf[U8_MAX_LENGTH];
    int32_t len = 0;
    U8_APPEND_UNSAFE(buf, len, c);
    out.append(buf, static_cast<std::size_t>(len));
}

} // namespace detail

inline TokenList preprocess(std::string_view raw_text, const PipelineConfig& config = {}) {
    TokenList tokens;
    std::string current;
    std::size_t current_len = 0;

    auto flush = [&] {
        if (current_len >= config.min_length && !config.stopwords.contains(current))
            tokens.push_back(current);
        current.clear();
        current_len = 0;
    };

    const auto* s = reinterpret_cast<const uint8_t*>(raw_text.data());
    const auto length = static_cast<int32_t>(raw_text.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(s, i, length, c);
        if (c >= 0 && u_isalpha(c)) {
            detail::append_utf8(current, u_tolower(c));
            ++current_len;
        } else if (!current.empty()) {
            flush();
        }
    }
    if (!current.empty()) flush();
    return tokens;
}

inline TermCounts term_counts(const TokenList& tokens) {
    TermCounts out;
    for (const auto& t : tokens) out.add(t);
    return out;
}

} // namespace istfidf

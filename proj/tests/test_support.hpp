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

// Fixtures and brute-force oracles shared by the test binaries. Nothing in
// here calls into the incremental similarity path.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "istfidf/istfidf.hpp"

namespace istfidf::testing {

inline constexpr const char* kDoc1Text = "New Amazing Truck Impact Test Dummy";
inline constexpr const char* kDoc2Text = "Car Impact Test Dummy";
inline constexpr const char* kDoc3Text = "Truck Test";

inline TermCounts counts_of(const char* text) { return term_counts(preprocess(text)); }

/// Engine after the two snapshots of the running example (doc1 then doc2).
inline Engine fig1_engine() {
    Engine e;
    e.ingest({{"doc1", counts_of(kDoc1Text)}});
    e.ingest({{"doc2", counts_of(kDoc2Text)}});
    return e;
}

inline Engine fig1_engine_with_doc3() {
    auto e = fig1_engine();
    e.ingest({{"doc3", counts_of(kDoc3Text)}});
    return e;
}

/// Hand-derived reference numbers for the three-document state.
struct HandOracle {
    static double idf1() { return std::log2(3.0); }       // df 1 of 3
    static double idf2() { return std::log2(3.0 / 2.0); } // df 2 of 3
    static double doc1_norm() {
        const double a = idf1() / 6.0, b = idf2() / 6.0;
        return std::sqrt(2 * a * a + 3 * b * b);
    }
    static double doc3_norm() { return idf2() / 2.0; }
    static double cos13() { return (idf2() / 6.0) * (idf2() / 2.0) / (doc1_norm() * doc3_norm()); }
};

/// A stream of chunks over a small random vocabulary. `sds` lets later
/// chunks revisit earlier document ids.
struct RandomStream {
    std::vector<Chunk> chunks;
};

inline std::string vocab_word(std::size_t i) {
    std::string w;
    do {
        w.push_back(static_cast<char>('a' + i % 26));
        i /= 26;
    } while (i > 0);
    return "w" + w;
}

inline RandomStream random_stream(std::mt19937_64& rng, bool sds, std::size_t max_docs = 30,
                                  std::size_t max_vocab = 100) {
    std::uniform_int_distribution<std::size_t> vocab_dist(2, max_vocab);
    const std::size_t vocab = vocab_dist(rng);
    std::uniform_int_distribution<std::size_t> docs_dist(1, max_docs);
    const std::size_t n_docs = docs_dist(rng);
    std::uniform_int_distribution<std::size_t> term_dist(0, vocab - 1);
    std::uniform_int_distribution<std::size_t> len_dist(1, 12);
    std::uniform_int_distribution<std::size_t> chunk_dist(1, 5);

    RandomStream s;
    std::size_t created = 0;
    while (created < n_docs) {
        Chunk chunk;
        std::set<DocId> in_chunk;
        const auto size = chunk_dist(rng);
        for (std::size_t k = 0; k < size && created < n_docs; ++k) {
            DocId id;
            if (sds && created > 0 && rng() % 3 == 0) {
                id = "d" + std::to_string(rng() % created);
            } else {
                id = "d" + std::to_string(created++);
            }
            if (!in_chunk.insert(id).second) continue;
            TermCounts c;
            const auto len = len_dist(rng);
            for (std::size_t t = 0; t < len; ++t) c.add(vocab_word(term_dist(rng)));
            chunk.emplace_back(id, std::move(c));
        }
        if (!chunk.empty()) s.chunks.push_back(std::move(chunk));
    }
    return s;
}

/// Accumulates a chunk history into the equivalent batch corpus.
class Accumulator {
public:
    void add(const Chunk& chunk) {
        for (const auto& [id, counts] : chunk) docs_[id].merge(counts);
    }

    BatchCorpus corpus() const {
        BatchCorpus out;
        for (const auto& [id, counts] : docs_) out.emplace_back(id, counts);
        return out;
    }

    const std::map<DocId, TermCounts>& docs() const { return docs_; }

private:
    std::map<DocId, TermCounts> docs_;
};

/// { (a,b) : a != b and some term of `terms` occurs in both }.
inline std::set<DocPair> brute_force_affected(const std::map<DocId, TermCounts>& docs, const std::set<Term>& terms) {
    std::set<DocPair> out;
    for (auto i = docs.begin(); i != docs.end(); ++i) {
        for (auto j = std::next(i); j != docs.end(); ++j) {
            for (const auto& t : terms) {
                if (i->second.count(t) > 0 && j->second.count(t) > 0) {
                    out.emplace(i->first, j->first);
                    break;
                }
            }
        }
    }
    return out;
}

} // namespace istfidf::testing

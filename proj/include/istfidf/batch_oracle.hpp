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

// From-scratch TF-IDF and all-pairs cosine over an accumulated corpus.
//
// Shares nothing with the incremental path beyond the plain data types: N and
// df are recounted on every call, candidate pairs come from a term-grouped
// inverted pass, and cosines use hash lookups instead of sorted merges.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "istfidf/bipartite_index.hpp"
#include "istfidf/errors.hpp"
#include "istfidf/text_pipeline.hpp"

namespace istfidf {

using BatchCorpus = std::vector<std::pair<DocId, TermCounts>>;
using WeightTable = std::map<DocId, std::map<Term, double>>;
using SimilarityTable = std::map<DocPair, double>;

struct BatchResult {
    WeightTable weights;
    /// Every pair with a nonempty term intersection, and no others.
    SimilarityTable similarities;
};

inline WeightTable batch_tfidf(const BatchCorpus& corpus) {
    std::unordered_map<Term, std::size_t> df;
    std::set<DocId> seen;
    for (const auto& [id, counts] : corpus) {
        if (!seen.insert(id).second) throw InvalidArgument("batch_tfidf: duplicate id " + id);
        if (counts.empty()) throw InvalidArgument("batch_tfidf: empty document " + id);
        for (const auto& [term, n] : counts.counts)
            if (n > 0) ++df[term];
    }

    const auto n_docs = static_cast<double>(corpus.size());
    WeightTable weights;
    for (const auto& [id, counts] : corpus) {
        auto& row = weights[id];
        const auto length = static_cast<double>(counts.total);
        for (const auto& [term, n] : counts.counts) {
            if (n == 0) continue;
            const double idf = std::log2(n_docs / static_cast<double>(df.at(term)));
            row[term] = static_cast<double>(n) / length * idf;
        }
    }
    return weights;
}

inline SimilarityTable batch_all_pairs(const WeightTable& weights) {
    std::unordered_map<Term, std::vector<const DocId*>> postings;
    std::unordered_map<const DocId*, std::unordered_map<Term, double>> lookup;
    std::unordered_map<const DocId*, double> norms;
    for (const auto& [id, row] : weights) {
        double sq = 0.0;
        auto& hashed = lookup[&id];
        for (const auto& [term, w] : row) {
            postings[term].push_back(&id);
            hashed.emplace(term, w);
            sq += w * w;
        }
        norms[&id] = std::sqrt(sq);
    }

    std::set<std::pair<const DocId*, const DocId*>> candidates;
    for (const auto& [term, docs] : postings)
        for (std::size_t i = 0; i < docs.size(); ++i)
            for (std::size_t j = i + 1; j < docs.size(); ++j)
                candidates.emplace(std::min(docs[i], docs[j]), std::max(docs[i], docs[j]));

    SimilarityTable out;
    for (const auto& [x, y] : candidates) {
        const auto& small = lookup[x].size() <= lookup[y].size() ? lookup[x] : lookup[y];
        const auto& large = &small == &lookup[x] ? lookup[y] : lookup[x];
        double dot = 0.0;
        for (const auto& [term, w] : small) {
            auto it = large.find(term);
            if (it != large.end()) dot += w * it->second;
        }
        const double denom = norms[x] * norms[y];
        out.emplace(DocPair{*x, *y}, denom > 0.0 ? dot / denom : 0.0);
    }
    return out;
}

inline SimilarityTable batch_all_pairs(const BatchCorpus& corpus) {
    return batch_all_pairs(batch_tfidf(corpus));
}

inline BatchResult batch_run(const BatchCorpus& corpus) {
    BatchResult r;
    r.weights = batch_tfidf(corpus);
    r.similarities = batch_all_pairs(r.weights);
    return r;
}

} // namespace istfidf

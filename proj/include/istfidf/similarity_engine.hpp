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

// Incremental cosine similarity over a Corpus.
//
// After each chunk only the pairs adjacent (through the bipartite index) to a
// touched term are recomputed. Every other stored entry keeps the value and
// version it was computed at, so after idf drift it may be stale; the
// computed_at stamp and staleness_audit make that visible.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "istfidf/batch_oracle.hpp"
#include "istfidf/bipartite_index.hpp"
#include "istfidf/errors.hpp"
#include "istfidf/tfidf_core.hpp"

namespace istfidf {

struct SimilarityEntry {
    double value = 0.0;
    std::uint64_t computed_at = 0;

    friend bool operator==(const SimilarityEntry&, const SimilarityEntry&) = default;
};

struct UpdateReport {
    /// Distinct pairs whose cosine was recomputed.
    std::uint64_t recomputed = 0;
    /// Pairs enumerated before deduplication.
    std::uint64_t generated = 0;
};

namespace detail {

inline double norm(const SparseVector& v) {
    double sq = 0.0;
    for (const auto& [term, w] : v) sq += w * w;
    return std::sqrt(sq);
}

inline double dot(const SparseVector& x, const SparseVector& y) {
    double sum = 0.0;
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() && j != y.end()) {
        if (i->first < j->first) {
            ++i;
        } else if (j->first < i->first) {
            ++j;
        } else {
            sum += i->second * j->second;
            ++i;
            ++j;
        }
    }
    return sum;
}

struct NormedVector {
    SparseVector weights;
    double norm = 0.0;

    explicit NormedVector(SparseVector v) : weights(std::move(v)), norm(detail::norm(weights)) {}
};

inline double cosine(const NormedVector& x, const NormedVector& y) {
    if (x.norm == 0.0 || y.norm == 0.0) return 0.0;
    return dot(x.weights, y.weights) / (x.norm * y.norm);
}

} // namespace detail

/// Cosine of the current TF-IDF vectors. Zero-norm vectors give 0; a document
/// compared with itself gives exactly 1 when its norm is nonzero.
inline double cosine(const Corpus& corpus, const DocId& a, const DocId& b) {
    detail::NormedVector va(corpus.vector(a));
    if (a == b) return va.norm > 0.0 ? 1.0 : 0.0;
    detail::NormedVector vb(corpus.vector(b));
    return detail::cosine(va, vb);
}

class SimilarityStore {
public:
    using Entries = std::map<DocPair, SimilarityEntry>;

    SimilarityStore() = default;
    explicit SimilarityStore(Entries entries) : pairs_(std::move(entries)) {}

    /// Recomputes every pair adjacent to a touched term of `summary`.
    UpdateReport update(const Corpus& corpus, const ChunkSummary& summary) {
        if (summary.version != corpus.version())
            throw VersionMismatch("update: summary version " + std::to_string(summary.version) +
                                  " does not match corpus version " + std::to_string(corpus.version()));
        const auto& index = corpus.index();
        std::vector<BipartiteIndex::TermId> ids;
        ids.reserve(summary.touched_terms.size());
        for (const auto& term : summary.touched_terms)
            if (auto t = index.find_term(term)) ids.push_back(*t);
        auto affected = index.affected_handle_pairs(ids);
        recompute(corpus, affected.pairs);
        return {affected.pairs.size(), affected.generated};
    }

    /// Recomputes every intersecting pair at the current version.
    std::uint64_t refresh_all(const Corpus& corpus) {
        std::vector<BipartiteIndex::TermId> ids(corpus.index().term_count());
        std::iota(ids.begin(), ids.end(), BipartiteIndex::TermId{0});
        auto affected = corpus.index().affected_handle_pairs(ids);
        recompute(corpus, affected.pairs);
        return affected.pairs.size();
    }

    /// Stored entry, or (0, current version) for a pair that was never stored.
    SimilarityEntry get(const Corpus& corpus, const DocId& a, const DocId& b) const {
        if (!corpus.contains(a)) throw LookupError("unknown document: " + a);
        if (!corpus.contains(b)) throw LookupError("unknown document: " + b);
        if (a == b) return {cosine(corpus, a, a), corpus.version()};
        auto it = pairs_.find(DocPair{a, b});
        if (it == pairs_.end()) return {0.0, corpus.version()};
        return it->second;
    }

    /// Largest |stored-or-implicit - oracle| over all document pairs.
    double staleness_audit(const Corpus& corpus, const BatchResult& oracle) const {
        auto ids = corpus.document_ids();
        if (ids.size() != oracle.weights.size() ||
            !std::equal(ids.begin(), ids.end(), oracle.weights.begin(),
                        [](const DocId& id, const auto& row) { return id == row.first; }))
            throw InvalidArgument("staleness_audit: oracle was computed over a different corpus");

        double worst = 0.0;
        for (const auto& [pair, expected] : oracle.similarities) {
            auto it = pairs_.find(pair);
            const double stored = it == pairs_.end() ? 0.0 : it->second.value;
            worst = std::max(worst, std::abs(stored - expected));
        }
        for (const auto& [pair, entry] : pairs_) {
            if (!oracle.similarities.contains(pair)) worst = std::max(worst, std::abs(entry.value));
        }
        return worst;
    }

    const Entries& entries() const noexcept { return pairs_; }
    std::size_t size() const noexcept { return pairs_.size(); }

    friend bool operator==(const SimilarityStore&, const SimilarityStore&) = default;

private:
    using DocHandle = BipartiteIndex::DocHandle;

    // Pairs arrive grouped by their first handle. The first document's weights
    // are scattered into a dense term-indexed array once per group and each
    // partner gathers against it in its own term-text order. That visits the
    // shared terms in the same order as detail::dot, so stored values are
    // bit-identical to cosine().
    void recompute(const Corpus& corpus, const std::vector<std::pair<DocHandle, DocHandle>>& pairs) {
        if (pairs.empty()) return;
        const auto& index = corpus.index();
        const auto version = corpus.version();

        std::vector<std::vector<double>> weights(index.doc_count());
        std::vector<double> norms(index.doc_count(), -1.0);
        auto prepare = [&](DocHandle d) {
            if (norms[d] >= 0.0) return;
            auto edges = index.edges(d);
            auto& w = weights[d];
            w.reserve(edges.size());
            double sq = 0.0;
            for (const auto& e : edges) {
                w.push_back(corpus.weight(d, e));
                sq += w.back() * w.back();
            }
            norms[d] = std::sqrt(sq);
        };

        std::vector<double> dense(index.term_count(), 0.0);
        auto scatter = [&](DocHandle d, bool clear) {
            auto edges = index.edges(d);
            for (std::size_t i = 0; i < edges.size(); ++i) dense[edges[i].term] = clear ? 0.0 : weights[d][i];
        };

        DocHandle current = pairs.front().first;
        prepare(current);
        scatter(current, false);
        for (const auto& [a, b] : pairs) {
            if (a != current) {
                scatter(current, true);
                current = a;
                prepare(current);
                scatter(current, false);
            }
            prepare(b);
            double value = 0.0;
            if (norms[a] > 0.0 && norms[b] > 0.0) {
                double sum = 0.0;
                auto edges = index.edges(b);
                for (std::size_t i = 0; i < edges.size(); ++i) {
                    const double wa = dense[edges[i].term];
                    if (wa != 0.0) sum += wa * weights[b][i];
                }
                value = sum / (norms[a] * norms[b]);
            }

            DocPair key{index.doc_name(a), index.doc_name(b)};
            auto it = pairs_.find(key);
            if (it != pairs_.end()) {
                it->second = {value, version};
            } else if (value != 0.0) {
                pairs_.emplace(std::move(key), SimilarityEntry{value, version});
            }
        }
    }

    Entries pairs_;
};

} // namespace istfidf

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

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ranges>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "istfidf/errors.hpp"
#include "istfidf/text_pipeline.hpp"

namespace istfidf {

using DocId = std::string;

/// Unordered document pair stored canonically with a < b.
struct DocPair {
    DocId a;
    DocId b;

    DocPair() = default;
    DocPair(DocId x, DocId y) : a(std::move(x)), b(std::move(y)) {
        if (a == b) throw InvalidArgument("self-pair: " + a);
        if (b < a) std::swap(a, b);
    }

    friend auto operator<=>(const DocPair&, const DocPair&) = default;
};

struct AffectedPairs {
    std::set<DocPair> pairs;
    /// Pairs emitted before deduplication: sum of n(n-1)/2 over the terms.
    std::uint64_t generated = 0;
};

/// Two-typed graph of term nodes and document nodes. An edge (doc, term)
/// carries the number of occurrences of the term in the document; these edge
/// counts are the only copy of per-document term counts in the engine.
///
/// Terms and documents are interned to dense ids in arrival order. Ids are
/// an internal detail: nothing observable depends on them, and every
/// per-document edge list is kept in term-text order.
///
/// Append/update only: nodes and edges are never removed.
class BipartiteIndex {
public:
    using TermId = std::uint32_t;
    using DocHandle = std::uint32_t;

    struct Edge {
        TermId term;
        std::uint64_t count;
    };

    struct HandlePairs {
        /// Grouped by first handle ascending; first < second in every pair.
        std::vector<std::pair<DocHandle, DocHandle>> pairs;
        std::uint64_t generated = 0;
    };

    /// Adds `counts` onto the edges of `doc`, creating the document and any
    /// missing term nodes. Returns the terms that had no node before the call.
    std::set<Term> upsert_edges(const DocId& doc, const TermCounts& counts) {
        if (counts.empty())
            throw InvalidArgument("upsert_edges: empty term counts for document " + doc);
        std::set<Term> created;
        const DocHandle d = intern_doc(doc);
        auto& edges = doc_edges_[d];
        for (const auto& [term, n] : counts.counts) {
            if (n == 0) continue;
            auto [t, inserted] = intern_term(term);
            if (inserted) created.insert(term);

            auto pos = std::lower_bound(edges.begin(), edges.end(), term,
                                        [&](const Edge& e, const Term& key) { return term_names_[e.term] < key; });
            if (pos != edges.end() && pos->term == t) {
                pos->count += n;
                continue;
            }
            edges.insert(pos, Edge{t, n});
            auto& posting = postings_[t];
            posting.insert(std::upper_bound(posting.begin(), posting.end(), d), d);
        }
        return created;
    }

    /// Documents adjacent to `term`; empty when the term was never seen.
    std::set<DocId> doc_neighbors(const Term& term) const {
        std::set<DocId> out;
        if (auto t = find_term(term))
            for (DocHandle d : postings_[*t]) out.insert(doc_names_[d]);
        return out;
    }

    std::set<Term> term_neighbors(const DocId& doc) const {
        std::set<Term> out;
        for (const auto& e : edges(handle_of(doc))) out.insert(term_names_[e.term]);
        return out;
    }

    std::uint64_t edge_count(const DocId& doc, const Term& term) const {
        const auto d = handle_of(doc);
        auto t = find_term(term);
        if (!t) return 0;
        for (const auto& e : doc_edges_[d])
            if (e.term == *t) return e.count;
        return 0;
    }

    std::size_t df(const Term& term) const {
        auto t = find_term(term);
        return t ? postings_[*t].size() : 0;
    }

    bool contains_doc(const DocId& doc) const { return doc_ids_.contains(doc); }
    bool contains_term(const Term& term) const { return term_ids_.contains(term); }
    std::size_t doc_count() const noexcept { return doc_names_.size(); }
    std::size_t term_count() const noexcept { return term_names_.size(); }

    /// Every term, in text order.
    std::vector<Term> terms() const {
        std::vector<Term> out(term_names_);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Union over `terms` of every unordered pair of documents adjacent to the
    /// same term. Terms with a single neighbor contribute nothing.
    template <std::ranges::input_range Terms>
    AffectedPairs affected_pairs(const Terms& terms) const {
        std::vector<TermId> ids;
        for (const auto& term : terms)
            if (auto t = find_term(term)) ids.push_back(*t);
        auto hp = affected_handle_pairs(ids);
        AffectedPairs out;
        out.generated = hp.generated;
        for (const auto& [x, y] : hp.pairs) out.pairs.emplace(doc_names_[x], doc_names_[y]);
        return out;
    }

    /// Handle-level affected pairs. Each distinct pair is emitted once,
    /// without materializing the generated multiset.
    HandlePairs affected_handle_pairs(std::span<const TermId> term_ids) const {
        HandlePairs out;
        std::vector<TermId> ids(term_ids.begin(), term_ids.end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

        // touched terms per document, restricted to terms with >= 2 neighbors
        std::vector<std::vector<TermId>> by_doc(doc_names_.size());
        std::vector<DocHandle> docs;
        for (TermId t : ids) {
            const auto n = static_cast<std::uint64_t>(postings_[t].size());
            if (n < 2) continue;
            out.generated += n * (n - 1) / 2;
            for (DocHandle d : postings_[t]) {
                if (by_doc[d].empty()) docs.push_back(d);
                by_doc[d].push_back(t);
            }
        }
        std::sort(docs.begin(), docs.end());

        std::vector<DocHandle> stamp(doc_names_.size(), kNoHandle);
        std::vector<DocHandle> partners;
        for (DocHandle a : docs) {
            partners.clear();
            for (TermId t : by_doc[a]) {
                const auto& posting = postings_[t];
                for (auto it = std::upper_bound(posting.begin(), posting.end(), a); it != posting.end(); ++it) {
                    if (stamp[*it] != a) {
                        stamp[*it] = a;
                        partners.push_back(*it);
                    }
                }
            }
            std::sort(partners.begin(), partners.end());
            for (DocHandle b : partners) out.pairs.emplace_back(a, b);
        }
        return out;
    }

    /// Full scan of the symmetry and edge-count invariants.
    bool consistent() const {
        std::size_t edge_total = 0;
        for (DocHandle d = 0; d < doc_edges_.size(); ++d) {
            const auto& edges = doc_edges_[d];
            for (std::size_t i = 0; i < edges.size(); ++i) {
                if (edges[i].count == 0) return false;
                if (i > 0 && !(term_names_[edges[i - 1].term] < term_names_[edges[i].term])) return false;
                const auto& posting = postings_[edges[i].term];
                if (!std::binary_search(posting.begin(), posting.end(), d)) return false;
            }
            edge_total += edges.size();
        }
        std::size_t posting_total = 0;
        for (const auto& posting : postings_) {
            if (posting.empty() || !std::is_sorted(posting.begin(), posting.end())) return false;
            posting_total += posting.size();
        }
        return posting_total == edge_total;
    }

    std::optional<DocHandle> find_doc(const DocId& doc) const {
        auto it = doc_ids_.find(doc);
        if (it == doc_ids_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<TermId> find_term(const Term& term) const {
        auto it = term_ids_.find(term);
        if (it == term_ids_.end()) return std::nullopt;
        return it->second;
    }

    DocHandle handle_of(const DocId& doc) const {
        auto h = find_doc(doc);
        if (!h) throw LookupError("unknown document: " + doc);
        return *h;
    }

    const DocId& doc_name(DocHandle d) const { return doc_names_.at(d); }
    const Term& term_name(TermId t) const { return term_names_.at(t); }
    std::span<const Edge> edges(DocHandle d) const { return doc_edges_.at(d); }
    std::span<const DocHandle> postings(TermId t) const { return postings_.at(t); }
    std::size_t df(TermId t) const { return postings_.at(t).size(); }

private:
    static constexpr DocHandle kNoHandle = ~DocHandle{0};

    DocHandle intern_doc(const DocId& doc) {
        auto [it, inserted] = doc_ids_.try_emplace(doc, static_cast<DocHandle>(doc_names_.size()));
        if (inserted) {
            doc_names_.push_back(doc);
            doc_edges_.emplace_back();
        }
        return it->second;
    }

    std::pair<TermId, bool> intern_term(const Term& term) {
        auto [it, inserted] = term_ids_.try_emplace(term, static_cast<TermId>(term_names_.size()));
        if (inserted) {
            term_names_.push_back(term);
            postings_.emplace_back();
        }
        return {it->second, inserted};
    }

    std::unordered_map<Term, TermId> term_ids_;
    std::vector<Term> term_names_;
    std::vector<std::vector<DocHandle>> postings_; // sorted handles

    std::unordered_map<DocId, DocHandle> doc_ids_;
    std::vector<DocId> doc_names_;
    std::vector<std::vector<Edge>> doc_edges_; // sorted by term text
};

} // namespace istfidf

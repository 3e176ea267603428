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

// Corpus statistics with lazily evaluated TF-IDF weights.
//
// Only raw counts and document frequencies are stored. A chunk that adds a
// document changes N and therefore every idf, so weights are computed on read:
//
//   tf(d, t)     = count(d, t) / |d|
//   idf(t)       = log2(N / df(t))
//   weight(d, t) = tf(d, t) * idf(t)
//
// Every read is exact with respect to the current corpus state.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "istfidf/bipartite_index.hpp"
#include "istfidf/errors.hpp"
#include "istfidf/text_pipeline.hpp"

namespace istfidf {

enum class Weighting {
    /// count / length  x  log2(N / df), no smoothing.
    kRelativeTfLog2Idf,
};

using SparseVector = std::map<Term, double>;
using Chunk = std::vector<std::pair<DocId, TermCounts>>;

struct Document {
    DocId id;
    TermCounts counts;
    /// Corpus version of the last chunk that created or extended the document.
    std::uint64_t version = 0;
};

/// Terms and documents touched by one applied chunk.
struct ChunkSummary {
    std::set<Term> touched_terms;
    std::set<DocId> touched_docs;
    /// Subset of touched_terms that had no node before the chunk.
    std::set<Term> new_terms;
    std::uint64_t version = 0;
};

class Corpus {
public:
    using DocHandle = BipartiteIndex::DocHandle;
    using TermId = BipartiteIndex::TermId;

    explicit Corpus(Weighting weighting = Weighting::kRelativeTfLog2Idf) : weighting_(weighting) {}

    /// Creates new documents and additively merges counts into existing ones.
    /// The chunk is validated as a whole before any state changes.
    ChunkSummary apply_chunk(const Chunk& chunk) {
        if (chunk.empty()) throw InvalidArgument("apply_chunk: empty chunk");
        std::unordered_set<DocId> ids;
        for (const auto& [id, counts] : chunk) {
            if (id.empty()) throw InvalidArgument("apply_chunk: empty document id");
            if (counts.empty()) throw InvalidArgument("apply_chunk: empty term counts for " + id);
            if (!ids.insert(id).second) throw InvalidArgument("apply_chunk: duplicate id in chunk: " + id);
        }

        ChunkSummary summary;
        summary.version = ++version_;
        for (const auto& [id, counts] : chunk) {
            auto created = index_.upsert_edges(id, counts);
            summary.new_terms.insert(created.begin(), created.end());
            for (const auto& [term, n] : counts.counts) summary.touched_terms.insert(term);
            summary.touched_docs.insert(id);

            const auto d = index_.handle_of(id);
            if (d == meta_.size()) meta_.emplace_back();
            meta_[d].total += counts.total;
            meta_[d].version = version_;
        }
        return summary;
    }

    double tf(const DocId& doc, const Term& term) const {
        const auto& meta = lookup(doc);
        auto n = index_.edge_count(doc, term);
        return static_cast<double>(n) / static_cast<double>(meta.total);
    }

    double idf(const Term& term) const {
        auto t = index_.find_term(term);
        if (!t) throw LookupError("idf of unseen term: " + term);
        return idf(*t);
    }

    double weight(const DocId& doc, const Term& term) const {
        const auto& meta = lookup(doc);
        auto n = index_.edge_count(doc, term);
        if (n == 0) return 0.0;
        return weight_of(n, meta.total, index_.df(term));
    }

    /// Weights over exactly the document's terms; zero weights are kept.
    SparseVector vector(const DocId& doc) const {
        const auto d = index_.handle_of(doc);
        SparseVector out;
        for (const auto& e : index_.edges(d))
            out.emplace_hint(out.end(), index_.term_name(e.term), weight(d, e));
        return out;
    }

    Document document(const DocId& doc) const {
        const auto d = index_.handle_of(doc);
        Document out{doc, {}, meta_[d].version};
        for (const auto& e : index_.edges(d)) out.counts.add(index_.term_name(e.term), e.count);
        return out;
    }

    /// All documents ordered by id.
    std::vector<Document> documents() const {
        std::vector<Document> out;
        for (const auto& id : document_ids()) out.push_back(document(id));
        return out;
    }

    std::vector<DocId> document_ids() const {
        std::vector<DocId> ids;
        ids.reserve(meta_.size());
        for (DocHandle d = 0; d < meta_.size(); ++d) ids.push_back(index_.doc_name(d));
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    bool contains(const DocId& doc) const { return index_.contains_doc(doc); }
    std::size_t df(const Term& term) const { return index_.df(term); }
    std::size_t n_docs() const noexcept { return meta_.size(); }
    std::uint64_t version() const noexcept { return version_; }
    std::uint64_t length(const DocId& doc) const { return lookup(doc).total; }
    std::uint64_t doc_version(const DocId& doc) const { return lookup(doc).version; }
    Weighting weighting() const noexcept { return weighting_; }
    const BipartiteIndex& index() const noexcept { return index_; }

    // Handle-level reads used by the similarity engine. They evaluate the
    // same expressions as the string-keyed reads above.
    double idf(TermId t) const { return idf_of(index_.df(t)); }
    double weight(DocHandle d, const BipartiteIndex::Edge& e) const {
        return weight_of(e.count, meta_[d].total, index_.df(e.term));
    }

    /// Rebuilds a corpus from previously exported documents.
    static Corpus restore(std::uint64_t version, const std::vector<Document>& documents,
                          Weighting weighting = Weighting::kRelativeTfLog2Idf) {
        Corpus c(weighting);
        for (const auto& d : documents) {
            if (d.version > version)
                throw FormatError("document " + d.id + " is newer than the corpus version");
            if (d.id.empty()) throw FormatError("document with an empty id");
            if (c.index_.contains_doc(d.id)) throw FormatError("duplicate document: " + d.id);
            c.index_.upsert_edges(d.id, d.counts);
            c.meta_.push_back(DocMeta{d.counts.total, d.version});
        }
        c.version_ = version;
        return c;
    }

private:
    struct DocMeta {
        std::uint64_t total = 0;
        std::uint64_t version = 0;
    };

    const DocMeta& lookup(const DocId& doc) const { return meta_[index_.handle_of(doc)]; }

    double idf_of(std::size_t df) const {
        return std::log2(static_cast<double>(meta_.size()) / static_cast<double>(df));
    }

    double weight_of(std::uint64_t count, std::uint64_t total, std::size_t df) const {
        return static_cast<double>(count) / static_cast<double>(total) * idf_of(df);
    }

    Weighting weighting_;
    BipartiteIndex index_;
    std::vector<DocMeta> meta_; // by document handle
    std::uint64_t version_ = 0;
};

} // namespace istfidf

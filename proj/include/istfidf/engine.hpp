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

#include <string_view>
#include <utility>

#include "istfidf/batch_oracle.hpp"
#include "istfidf/similarity_engine.hpp"
#include "istfidf/text_pipeline.hpp"
#include "istfidf/tfidf_core.hpp"

namespace istfidf {

struct IngestResult {
    ChunkSummary summary;
    UpdateReport report;
};

/// Corpus plus similarity store, advanced one chunk at a time.
class Engine {
public:
    explicit Engine(PipelineConfig pipeline = {}) : pipeline_(std::move(pipeline)) {}

    Engine(PipelineConfig pipeline, Corpus corpus, SimilarityStore store)
        : pipeline_(std::move(pipeline)), corpus_(std::move(corpus)), store_(std::move(store)) {}

    IngestResult ingest(const Chunk& chunk) {
        IngestResult r;
        r.summary = corpus_.apply_chunk(chunk);
        r.report = store_.update(corpus_, r.summary);
        return r;
    }

    TermCounts analyze(std::string_view text) const { return term_counts(preprocess(text, pipeline_)); }

    SimilarityEntry similarity(const DocId& a, const DocId& b) const { return store_.get(corpus_, a, b); }
    double cosine(const DocId& a, const DocId& b) const { return istfidf::cosine(corpus_, a, b); }
    std::uint64_t refresh_all() { return store_.refresh_all(corpus_); }
    double staleness_audit(const BatchResult& oracle) const { return store_.staleness_audit(corpus_, oracle); }

    const PipelineConfig& pipeline() const noexcept { return pipeline_; }
    const Corpus& corpus() const noexcept { return corpus_; }
    const SimilarityStore& store() const noexcept { return store_; }

    /// Compares everything observable: documents with counts and versions,
    /// corpus version and the similarity store (bit-exact values).
    friend bool same_state(const Engine& x, const Engine& y) {
        if (x.corpus_.version() != y.corpus_.version()) return false;
        if (x.corpus_.n_docs() != y.corpus_.n_docs()) return false;
        auto dx = x.corpus_.documents();
        auto dy = y.corpus_.documents();
        for (std::size_t i = 0; i < dx.size(); ++i) {
            if (dx[i].id != dy[i].id || dx[i].version != dy[i].version || !(dx[i].counts == dy[i].counts))
                return false;
        }
        return x.store_ == y.store_;
    }

private:
    PipelineConfig pipeline_;
    Corpus corpus_;
    SimilarityStore store_;
};

} // namespace istfidf

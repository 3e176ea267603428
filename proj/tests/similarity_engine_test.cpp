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

#include <gtest/gtest.h>

#include <random>

#include "istfidf/engine.hpp"
#include "test_support.hpp"

namespace istfidf {
namespace {

using testing::counts_of;
using testing::HandOracle;

TEST(Cosine, RunningExampleIsZero) {
    auto e = testing::fig1_engine();
    // impact, test and dummy are in both documents, so their idf is 0
    EXPECT_EQ(e.cosine("doc1", "doc2"), 0.0);
}

TEST(Cosine, SelfSimilarity) {
    auto e = testing::fig1_engine_with_doc3();
    EXPECT_EQ(e.cosine("doc1", "doc1"), 1.0);
    EXPECT_EQ(e.cosine("doc3", "doc3"), 1.0);
}

TEST(Cosine, ThreeDocuments) {
    auto e = testing::fig1_engine_with_doc3();
    EXPECT_NEAR(e.cosine("doc1", "doc3"), HandOracle::cos13(), 1e-12);
    EXPECT_NEAR(e.cosine("doc1", "doc3"), 0.2378, 5e-5);
    EXPECT_NEAR(HandOracle::doc1_norm(), 0.409971, 1e-6);
    EXPECT_NEAR(HandOracle::doc3_norm(), 0.2924813, 1e-7);
    EXPECT_EQ(e.cosine("doc1", "doc3"), e.cosine("doc3", "doc1"));
}

TEST(Cosine, ZeroNormConventions) {
    Engine e;
    e.ingest({{"solo", counts_of("alpha beta")}});
    EXPECT_EQ(e.cosine("solo", "solo"), 0.0);
    e.ingest({{"twin", counts_of("alpha beta")}});
    EXPECT_EQ(e.cosine("solo", "twin"), 0.0);
    EXPECT_THROW(e.cosine("solo", "missing"), LookupError);
}

TEST(Update, RunningExampleRecomputesOnePair) {
    Engine e;
    e.ingest({{"doc1", counts_of(testing::kDoc1Text)}});
    auto r = e.ingest({{"doc2", counts_of(testing::kDoc2Text)}});
    EXPECT_EQ(r.report.recomputed, 1u);
    EXPECT_EQ(r.report.generated, 3u);
    // the value is 0 and the pair was never stored, so nothing is stored
    EXPECT_EQ(e.store().size(), 0u);
    EXPECT_EQ(e.similarity("doc1", "doc2"), (SimilarityEntry{0.0, 2}));
}

TEST(Update, SingletonTermsRecomputeNothing) {
    auto e = testing::fig1_engine();
    auto r = e.ingest({{"doc3", counts_of("zebra yak")}});
    EXPECT_EQ(r.report.recomputed, 0u);
    EXPECT_EQ(r.report.generated, 0u);
}

TEST(Update, ThirdDocument) {
    auto e = testing::fig1_engine();
    auto r = e.ingest({{"doc3", counts_of(testing::kDoc3Text)}});
    EXPECT_EQ(r.report.recomputed, 3u);
    auto s = e.similarity("doc1", "doc3");
    EXPECT_NEAR(s.value, 0.2378, 5e-5);
    EXPECT_EQ(s.computed_at, 3u);
    // doc2 and doc3 share only "test" (idf 0): never stored, implicit zero
    EXPECT_EQ(e.similarity("doc2", "doc3"), (SimilarityEntry{0.0, 3}));
    EXPECT_EQ(e.similarity("doc3", "doc1"), s);
}

TEST(Update, StoredZeroIsRefreshed) {
    Engine e;
    e.ingest({{"a", counts_of("alpha beta")}, {"b", counts_of("alpha gamma")}, {"c", counts_of("delta")}});
    ASSERT_GT(e.similarity("a", "b").value, 0.0);
    // alpha now in every document: a and b drop to cosine 0, and the stored
    // entry is overwritten rather than dropped
    e.ingest({{"c", counts_of("alpha")}});
    EXPECT_EQ(e.similarity("a", "b"), (SimilarityEntry{0.0, 2}));
    EXPECT_EQ(e.store().entries().count(DocPair{"a", "b"}), 1u);
}

TEST(Update, VersionMismatch) {
    Corpus c;
    SimilarityStore store;
    auto s1 = c.apply_chunk({{"a", counts_of("alpha")}});
    c.apply_chunk({{"b", counts_of("alpha")}});
    EXPECT_THROW(store.update(c, s1), VersionMismatch);
}

TEST(GetSimilarity, Errors) {
    auto e = testing::fig1_engine();
    EXPECT_THROW(e.similarity("doc1", "nope"), LookupError);
    Engine disjoint;
    disjoint.ingest({{"x", counts_of("alpha")}, {"y", counts_of("beta")}});
    EXPECT_EQ(disjoint.similarity("x", "y"), (SimilarityEntry{0.0, 1}));
}

TEST(RefreshAll, Counts) {
    auto e = testing::fig1_engine();
    EXPECT_EQ(e.refresh_all(), 1u);
    Engine single;
    single.ingest({{"only", counts_of("alpha beta")}});
    EXPECT_EQ(single.refresh_all(), 0u);
    auto three = testing::fig1_engine_with_doc3();
    EXPECT_EQ(three.refresh_all(), 3u);
}

TEST(StalenessAudit, ZeroAfterRefreshAndAfterSingleChunk) {
    testing::Accumulator acc;
    Chunk chunk{{"a", counts_of("alpha beta")}, {"b", counts_of("alpha gamma")}, {"c", counts_of("gamma delta")}};
    Engine e;
    e.ingest(chunk);
    acc.add(chunk);
    EXPECT_LE(e.staleness_audit(batch_run(acc.corpus())), 1e-12);
    e.refresh_all();
    EXPECT_LE(e.staleness_audit(batch_run(acc.corpus())), 1e-12);
}

TEST(StalenessAudit, TwoChunkRegressionFixture) {
    testing::Accumulator acc;
    Chunk first{{"a", counts_of("alpha beta")}, {"b", counts_of("alpha gamma")}, {"c", counts_of("delta epsilon")}};
    Chunk second{{"d", counts_of("delta zeta")}};
    Engine e;
    e.ingest(first);
    e.ingest(second);
    acc.add(first);
    acc.add(second);

    // (a, b) was computed at N=3 and is not adjacent to delta/zeta. True
    // value at N=4 is 1/(1+4); stored is l^2/(l^2+m^2), l=log2 1.5, m=log2 3.
    const double l = std::log2(1.5), m = std::log2(3.0);
    const double expected = 0.2 - l * l / (l * l + m * m);
    const double staleness = e.staleness_audit(batch_run(acc.corpus()));
    EXPECT_NEAR(staleness, expected, 1e-12);
    EXPECT_NEAR(staleness, 0.0801167869360109, 1e-12);
    EXPECT_EQ(e.similarity("a", "b").computed_at, 1u);

    e.refresh_all();
    EXPECT_LE(e.staleness_audit(batch_run(acc.corpus())), 1e-12);
    EXPECT_EQ(e.similarity("a", "b").computed_at, 2u);
}

TEST(StalenessAudit, CorpusMismatch) {
    auto e = testing::fig1_engine();
    BatchCorpus other{{"doc1", counts_of(testing::kDoc1Text)}};
    EXPECT_THROW(e.staleness_audit(batch_run(other)), InvalidArgument);
}

// Exactness on touch, range, symmetry, zero-overlap soundness and work bound
// on random streams.
TEST(UpdateProperty, TouchedPairsMatchOracle) {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 60; ++round) {
        auto stream = testing::random_stream(rng, round % 2 == 1);
        Engine e;
        testing::Accumulator acc;
        for (const auto& chunk : stream.chunks) {
            auto r = e.ingest(chunk);
            acc.add(chunk);
            const auto oracle = batch_run(acc.corpus());
            auto touched = testing::brute_force_affected(acc.docs(), r.summary.touched_terms);
            ASSERT_EQ(r.report.recomputed, touched.size());
            ASSERT_LE(r.report.recomputed, oracle.similarities.size());
            for (const auto& p : touched) {
                auto it = oracle.similarities.find(p);
                ASSERT_NE(it, oracle.similarities.end());
                const auto got = e.similarity(p.a, p.b);
                EXPECT_NEAR(got.value, it->second, 1e-9);
                EXPECT_EQ(got.computed_at, e.corpus().version());
                // cached-vector pass and the public cosine agree bit for bit
                EXPECT_EQ(got.value, e.cosine(p.a, p.b));
            }
            for (const auto& [p, entry] : e.store().entries()) {
                EXPECT_TRUE(oracle.similarities.contains(p));
                EXPECT_GE(entry.value, 0.0);
                EXPECT_LE(entry.value, 1.0 + 1e-12);
                EXPECT_EQ(e.similarity(p.b, p.a), entry);
            }
        }
    }
}

} // namespace
} // namespace istfidf

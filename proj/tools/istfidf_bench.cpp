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

// istfidf_bench: incremental vs batch TF-IDF + cosine over a record stream.
//
//   istfidf_bench --input corpus.jsonl --mode sds --warmup-days 1 --out results/
//   istfidf_bench --synthetic data/synthetic_spec.json --seed 7 --out results/

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "istfidf/bench_harness.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"Incremental sparse TF-IDF and cosine similarity benchmark"};

    std::string input;
    std::string mode = "ods";
    std::size_t warmup_days = 1;
    std::string weighting = "tf_log2idf";
    std::string stoplist;
    std::string out = "bench_out";
    std::size_t reps = 1;
    std::string synthetic;
    std::optional<std::uint64_t> seed;
    bool generate_only = false;

    app.add_option("--input", input, "Line-delimited JSON corpus (id, content, published)");
    app.add_option("--mode", mode, "Streaming mode")->check(CLI::IsMember({"ods", "sds"}));
    app.add_option("--warmup-days", warmup_days, "Distinct days folded into the first snapshot")
        ->check(CLI::PositiveNumber);
    app.add_option("--weighting", weighting, "Weighting variant")->check(CLI::IsMember({"tf_log2idf"}));
    app.add_option("--stoplist", stoplist, "Stop word file (default: bundled Snowball English)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out, "Output directory for tables and raw metrics");
    app.add_option("--reps", reps, "Repetitions; timings are the per-snapshot median")->check(CLI::PositiveNumber);
    app.add_option("--synthetic", synthetic, "Synthetic corpus spec (JSON); generated corpus is benchmarked")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Override the synthetic spec seed");
    app.add_flag("--generate-only", generate_only, "With --synthetic: write the corpus and stop");

    CLI11_PARSE(app, argc, argv);

    try {
        istfidf::BenchConfig config;
        config.mode = istfidf::parse_mode(mode);
        config.warmup_days = warmup_days;
        config.output_dir = out;
        config.repetitions = reps;
        if (!stoplist.empty()) config.stoplist_path = stoplist;

        if (!synthetic.empty()) {
            auto spec = istfidf::load_synthetic_spec(synthetic);
            if (seed) spec.seed = *seed;
            fs::create_directories(config.output_dir);
            config.input_path = input.empty() ? config.output_dir / "synthetic_corpus.jsonl" : fs::path(input);
            istfidf::generate_synthetic(spec, config.input_path);
            std::cout << "wrote " << spec.n_snapshots * spec.docs_per_snapshot << " records to "
                      << config.input_path.string() << '\n';
            if (generate_only) return 0;
        } else if (input.empty()) {
            std::cerr << "error: one of --input or --synthetic is required\n";
            return 2;
        } else {
            config.input_path = input;
        }

        auto metrics = istfidf::run_benchmark(config);

        std::cout << "snapshot  batch_s     incr_s      cum_batch_s cum_incr_s  speedup   recomputed/batch_pairs\n";
        for (const auto& m : metrics) {
            std::printf("%8zu  %-10.6f  %-10.6f  %-10.6f  %-10.6f  %-8.3f  %llu/%llu\n", m.index,
                        m.elapsed_batch_seconds, m.elapsed_incremental_seconds, m.cumulative_batch_seconds,
                        m.cumulative_incremental_seconds, m.speedup,
                        static_cast<unsigned long long>(m.recomputed_pairs),
                        static_cast<unsigned long long>(m.batch_pairs));
        }
        std::cout << "tables written to " << config.output_dir.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "istfidf/engine.hpp"
#include "istfidf/errors.hpp"
#include "istfidf/stream_driver.hpp"

namespace istfidf {

struct BenchConfig {
    std::filesystem::path input_path;
    StreamMode mode = StreamMode::kOds;
    std::size_t warmup_days = 1;
    Weighting weighting = Weighting::kRelativeTfLog2Idf;
    std::optional<std::filesystem::path> stoplist_path;
    std::filesystem::path output_dir = ".";
    std::size_t repetitions = 1;
};

// ---------------------------------------------------------------------------
// Tables

namespace detail {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw Error("failed writing " + path.string());
}

} // namespace detail

inline constexpr const char* kElapsedTable = "elapsed_time.txt";
inline constexpr const char* kCumulativeTable = "cum_time.txt";
inline constexpr const char* kSpeedupTable = "speedup.txt";
inline constexpr const char* kRawMetrics = "raw_metrics.csv";

/// Writes elapsed_time.txt, cum_time.txt and speedup.txt (';'-separated).
inline void emit_tables(const std::vector<SnapshotMetrics>& metrics, const std::filesystem::path& dir) {
    if (metrics.empty()) throw InvalidArgument("emit_tables: no metrics");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    auto write = [&](const char* name, const char* header, auto row) {
        const auto path = dir / name;
        auto out = detail::open_for_write(path);
        out << header << '\n';
        for (const auto& m : metrics) out << m.index << ';' << row(m) << '\n';
        detail::finish(out, path);
    };
    write(kElapsedTable, "snapshot;batch;istfidf_ics", [](const SnapshotMetrics& m) {
        return detail::fixed6(m.elapsed_batch_seconds) + ';' + detail::fixed6(m.elapsed_incremental_seconds);
    });
    write(kCumulativeTable, "snapshot;batch;istfidf_ics", [](const SnapshotMetrics& m) {
        return detail::fixed6(m.cumulative_batch_seconds) + ';' + detail::fixed6(m.cumulative_incremental_seconds);
    });
    write(kSpeedupTable, "snapshot;speedup", [](const SnapshotMetrics& m) { return detail::fixed6(m.speedup); });
}

inline constexpr const char* kRawMetricsHeader =
    "index,mode,elapsed_incremental_seconds,elapsed_batch_seconds,cumulative_incremental_seconds,"
    "cumulative_batch_seconds,speedup,increment_speedup,recomputed_pairs,generated_pairs,batch_pairs";

inline void write_raw_metrics(const std::vector<SnapshotMetrics>& metrics, const std::filesystem::path& path) {
    auto out = detail::open_for_write(path);
    out << kRawMetricsHeader << '\n';
    for (const auto& m : metrics) {
        out << m.index << ',' << to_string(m.mode) << ',' << detail::fixed6(m.elapsed_incremental_seconds) << ','
            << detail::fixed6(m.elapsed_batch_seconds) << ',' << detail::fixed6(m.cumulative_incremental_seconds)
            << ',' << detail::fixed6(m.cumulative_batch_seconds) << ',' << detail::fixed6(m.speedup) << ','
            << detail::fixed6(m.increment_speedup) << ',' << m.recomputed_pairs << ',' << m.generated_pairs << ','
            << m.batch_pairs << '\n';
    }
    detail::finish(out, path);
}

inline std::vector<SnapshotMetrics> read_raw_metrics(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kRawMetricsHeader) throw FormatError("unexpected raw metrics header");
    std::vector<SnapshotMetrics> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 11) throw FormatError("raw metrics row has " + std::to_string(f.size()) + " fields");
        try {
            SnapshotMetrics m;
            m.index = std::stoull(f[0]);
            m.mode = parse_mode(f[1]);
            m.elapsed_incremental_seconds = std::stod(f[2]);
            m.elapsed_batch_seconds = std::stod(f[3]);
            m.cumulative_incremental_seconds = std::stod(f[4]);
            m.cumulative_batch_seconds = std::stod(f[5]);
            m.speedup = std::stod(f[6]);
            m.increment_speedup = std::stod(f[7]);
            m.recomputed_pairs = std::stoull(f[8]);
            m.generated_pairs = std::stoull(f[9]);
            m.batch_pairs = std::stoull(f[10]);
            out.push_back(m);
        } catch (const std::logic_error&) {
            throw FormatError("bad raw metrics row: " + line);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic corpus

struct SyntheticSpec {
    std::size_t n_snapshots = 20;
    std::size_t docs_per_snapshot = 15;
    std::size_t vocab_size = 20000;
    std::size_t doc_length_mean = 12;
    double zipf_exponent = 0.8;
    std::uint64_t seed = 42;

    void validate() const {
        if (n_snapshots == 0 || docs_per_snapshot == 0 || vocab_size == 0 || doc_length_mean == 0 ||
            !(zipf_exponent > 0.0))
            throw InvalidArgument("synthetic spec: every field must be positive");
    }
};

inline SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open synthetic spec: " + path.string());
    auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw FormatError("synthetic spec is not a JSON object");
    auto count = [&](const char* name, std::size_t fallback) -> std::size_t {
        auto it = j.find(name);
        if (it == j.end()) return fallback;
        if (!it->is_number_unsigned()) throw FormatError(std::string("synthetic spec: ") + name + " must be a positive integer");
        return it->get<std::size_t>();
    };
    SyntheticSpec s;
    s.n_snapshots = count("n_snapshots", s.n_snapshots);
    s.docs_per_snapshot = count("docs_per_snapshot", s.docs_per_snapshot);
    s.vocab_size = count("vocab_size", s.vocab_size);
    s.doc_length_mean = count("doc_length_mean", s.doc_length_mean);
    s.seed = count("seed", s.seed);
    if (auto it = j.find("zipf_exponent"); it != j.end()) {
        if (!it->is_number()) throw FormatError("synthetic spec: zipf_exponent must be a number");
        s.zipf_exponent = it->get<double>();
    }
    s.validate();
    return s;
}

namespace detail {

/// Rank -> pronounceable CVCVCV word; distinct for ranks below 70^3.
inline std::string synthetic_word(std::size_t rank) {
    static constexpr std::string_view consonants = "bdfgklmnprstvz";
    static constexpr std::string_view vowels = "aeiou";
    constexpr std::size_t syllables = 14 * 5;
    std::string w;
    for (int i = 0; i < 3; ++i) {
        const auto syl = rank % syllables;
        rank /= syllables;
        w.push_back(consonants[syl / 5]);
        w.push_back(vowels[syl % 5]);
    }
    if (rank > 0) w += synthetic_word(rank - 1);
    return w;
}

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementations.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

} // namespace detail

/// Zipf-distributed terms, one UTC day per snapshot starting 2015-09-01.
/// The same spec always produces the same records.
inline std::vector<StreamRecord> generate_synthetic_records(const SyntheticSpec& spec) {
    using namespace std::chrono;
    spec.validate();
    std::vector<std::string> words(spec.vocab_size);
    std::vector<double> cdf(spec.vocab_size);
    double acc = 0.0;
    for (std::size_t k = 0; k < spec.vocab_size; ++k) {
        words[k] = detail::synthetic_word(k);
        acc += 1.0 / std::pow(static_cast<double>(k + 1), spec.zipf_exponent);
        cdf[k] = acc;
    }
    for (auto& c : cdf) c /= acc;

    std::mt19937_64 rng(spec.seed);
    const sys_days start = 2015y / September / 1;
    std::vector<StreamRecord> records;
    records.reserve(spec.n_snapshots * spec.docs_per_snapshot);
    for (std::size_t s = 0; s < spec.n_snapshots; ++s) {
        for (std::size_t i = 0; i < spec.docs_per_snapshot; ++i) {
            const auto length = 1 + rng() % (2 * spec.doc_length_mean - 1);
            std::string text;
            for (std::uint64_t t = 0; t < length; ++t) {
                auto it = std::upper_bound(cdf.begin(), cdf.end(), detail::unit_uniform(rng));
                const auto rank = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), spec.vocab_size - 1);
                if (!text.empty()) text.push_back(' ');
                text += words[rank];
            }
            StreamRecord r;
            r.id = "syn-" + std::to_string(s + 1) + "-" + std::to_string(i + 1);
            r.text = std::move(text);
            r.timestamp = start + days{s} + minutes{i};
            records.push_back(std::move(r));
        }
    }
    return records;
}

inline void generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out_path) {
    auto records = generate_synthetic_records(spec);
    auto out = detail::open_for_write(out_path);
    for (const auto& r : records) out << record_to_json(r) << '\n';
    detail::finish(out, out_path);
}

// ---------------------------------------------------------------------------
// Benchmark

/// Runs the incremental engine and the batch baseline over the same snapshots
/// `repetitions` times, keeps the per-snapshot median timings, and writes the
/// three tables plus raw_metrics.csv into the output directory.
inline std::vector<SnapshotMetrics> run_benchmark(const BenchConfig& config, const DriverOptions& options = {}) {
    if (config.repetitions == 0) throw InvalidArgument("repetitions must be at least 1");
    auto records = read_records(config.input_path);
    if (records.empty()) throw InvalidArgument("corpus is empty: " + config.input_path.string());
    const auto snapshots = chunk_by_day(std::move(records), config.warmup_days);

    PipelineConfig pipeline;
    if (config.stoplist_path) pipeline = PipelineConfig::with_stoplist(*config.stoplist_path);

    DriverOptions run_options = options;
    run_options.run_batch = true;

    std::vector<std::vector<SnapshotMetrics>> runs;
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        Engine engine(pipeline);
        runs.push_back(run_stream(config.mode, snapshots, engine, run_options));
        if (rep > 0) {
            const auto& first = runs.front();
            const auto& last = runs.back();
            for (std::size_t i = 0; i < first.size(); ++i)
                if (first[i].recomputed_pairs != last[i].recomputed_pairs || first[i].batch_pairs != last[i].batch_pairs)
                    throw Error("non-deterministic work counts across repetitions");
        }
    }

    auto median_us = [&](std::size_t row, double SnapshotMetrics::*field) {
        std::vector<std::int64_t> v;
        for (const auto& run : runs) v.push_back(std::llround(run[row].*field * 1e6));
        std::sort(v.begin(), v.end());
        const auto mid = v.size() / 2;
        return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
    };

    auto metrics = runs.front();
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        metrics[i].elapsed_incremental_seconds =
            static_cast<double>(median_us(i, &SnapshotMetrics::elapsed_incremental_seconds)) / 1e6;
        metrics[i].elapsed_batch_seconds = static_cast<double>(median_us(i, &SnapshotMetrics::elapsed_batch_seconds)) / 1e6;
    }
    accumulate_metrics(metrics);

    if (metrics.empty()) throw InvalidArgument("no snapshot produced any tokens");
    emit_tables(metrics, config.output_dir);
    write_raw_metrics(metrics, config.output_dir / kRawMetrics);
    return metrics;
}

} // namespace istfidf

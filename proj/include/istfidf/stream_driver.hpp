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

// Stream records -> daily snapshots -> engine, under either of two modes:
//
//   ODS  every snapshot becomes one new document "snapshot-<index>".
//   SDS  records keep their own ids; a repeated id appends to its document.
//
// Each snapshot is timed for the incremental path and, optionally, for a
// from-scratch batch run over the whole accumulated corpus.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "istfidf/batch_oracle.hpp"
#include "istfidf/engine.hpp"
#include "istfidf/errors.hpp"

namespace istfidf {

struct StreamRecord {
    DocId id;
    std::string text;
    std::chrono::sys_seconds timestamp;
};

struct Snapshot {
    std::size_t index = 0; // 1-based
    std::vector<StreamRecord> records;
};

enum class StreamMode { kOds, kSds };

inline std::string_view to_string(StreamMode mode) { return mode == StreamMode::kOds ? "ods" : "sds"; }

inline StreamMode parse_mode(std::string_view s) {
    if (s == "ods" || s == "ODS") return StreamMode::kOds;
    if (s == "sds" || s == "SDS") return StreamMode::kSds;
    throw InvalidArgument("unknown stream mode: " + std::string(s));
}

struct SnapshotMetrics {
    std::size_t index = 0;
    StreamMode mode = StreamMode::kOds;
    double elapsed_incremental_seconds = 0.0;
    double elapsed_batch_seconds = 0.0;
    double cumulative_incremental_seconds = 0.0;
    double cumulative_batch_seconds = 0.0;
    /// cumulative batch / cumulative incremental; 0 while the denominator is 0.
    double speedup = 0.0;
    /// elapsed batch / elapsed incremental for this snapshot alone.
    double increment_speedup = 0.0;
    std::uint64_t recomputed_pairs = 0;
    std::uint64_t generated_pairs = 0;
    std::uint64_t batch_pairs = 0;
};

// ---------------------------------------------------------------------------
// Timestamps

namespace detail {

inline bool parse_digits(std::string_view s, std::size_t& pos, std::size_t n, int& out) {
    if (pos + n > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    pos += n;
    out = v;
    return true;
}

inline bool expect(std::string_view s, std::size_t& pos, char c) {
    if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

} // namespace detail

/// Parses ISO-8601 "YYYY-MM-DD[(T| )HH:MM[:SS[.frac]]][Z|(+|-)HH[:]MM]".
/// Fractional seconds are truncated; a missing offset means UTC.
inline std::chrono::sys_seconds parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    auto fail = [&]() -> sys_seconds { throw FormatError("bad timestamp: '" + std::string(s) + "'"); };

    std::size_t pos = 0;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!detail::parse_digits(s, pos, 4, y) || !detail::expect(s, pos, '-') ||
        !detail::parse_digits(s, pos, 2, mo) || !detail::expect(s, pos, '-') ||
        !detail::parse_digits(s, pos, 2, d))
        return fail();
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return fail();

    if (pos < s.size() && (s[pos] == 'T' || s[pos] == 't' || s[pos] == ' ')) {
        ++pos;
        if (!detail::parse_digits(s, pos, 2, h) || !detail::expect(s, pos, ':') ||
            !detail::parse_digits(s, pos, 2, mi))
            return fail();
        if (detail::expect(s, pos, ':')) {
            if (!detail::parse_digits(s, pos, 2, sec)) return fail();
            if (detail::expect(s, pos, '.') || detail::expect(s, pos, ',')) {
                std::size_t start = pos;
                while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
                if (pos == start) return fail();
            }
        }
        if (h > 23 || mi > 59 || sec > 60) return fail();
    }

    int offset_minutes = 0;
    if (pos < s.size()) {
        if (s[pos] == 'Z' || s[pos] == 'z') {
            ++pos;
        } else if (s[pos] == '+' || s[pos] == '-') {
            const int sign = s[pos] == '-' ? -1 : 1;
            ++pos;
            int oh = 0, om = 0;
            if (!detail::parse_digits(s, pos, 2, oh)) return fail();
            detail::expect(s, pos, ':');
            if (!detail::parse_digits(s, pos, 2, om)) return fail();
            offset_minutes = sign * (oh * 60 + om);
        }
    }
    if (pos != s.size()) return fail();

    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} - minutes{offset_minutes};
}

inline std::string format_timestamp(std::chrono::sys_seconds t) {
    using namespace std::chrono;
    auto day_point = floor<days>(t);
    year_month_day ymd{day_point};
    hh_mm_ss hms{t - day_point};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long long>(hms.seconds().count()));
    return buf;
}

// ---------------------------------------------------------------------------
// Corpus input: one JSON object per line with "id", "content", "published".

inline StreamRecord parse_record(std::string_view line) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw FormatError("record is not a JSON object");
    auto field = [&](const char* name) -> std::string {
        auto it = j.find(name);
        if (it == j.end() || !it->is_string()) throw FormatError(std::string("record field '") + name + "' missing or not a string");
        return it->get<std::string>();
    };
    StreamRecord r{field("id"), field("content"), parse_timestamp(field("published"))};
    if (r.id.empty()) throw FormatError("record has an empty id");
    return r;
}

inline std::vector<StreamRecord> read_records(std::istream& in) {
    std::vector<StreamRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_record(line));
        } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<StreamRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus: " + path.string());
    return read_records(in);
}

inline std::string record_to_json(const StreamRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["content"] = r.text;
    j["published"] = format_timestamp(r.timestamp);
    return j.dump();
}

// ---------------------------------------------------------------------------
// Snapshots

/// The first snapshot holds the first `warmup_days` distinct UTC days that
/// have records; every later day with records becomes its own snapshot.
inline std::vector<Snapshot> chunk_by_day(std::vector<StreamRecord> records, std::size_t warmup_days) {
    using namespace std::chrono;
    if (records.empty()) throw InvalidArgument("chunk_by_day: no records");
    if (warmup_days == 0) throw InvalidArgument("chunk_by_day: warmup_days must be at least 1");
    std::stable_sort(records.begin(), records.end(),
                     [](const StreamRecord& x, const StreamRecord& y) { return x.timestamp < y.timestamp; });

    std::vector<Snapshot> out;
    std::size_t days_seen = 0;
    sys_days current{};
    for (auto& r : records) {
        auto day = floor<days>(r.timestamp);
        if (days_seen == 0 || day != current) {
            ++days_seen;
            current = day;
            if (days_seen == 1 || days_seen > warmup_days) out.push_back(Snapshot{out.size() + 1, {}});
        }
        out.back().records.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Runs

struct DriverOptions {
    /// Time a batch recomputation over the accumulated corpus at each snapshot.
    bool run_batch = true;
    std::function<void(const std::string&)> warn = [](const std::string& msg) {
        std::cerr << "warning: " << msg << '\n';
    };
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline std::int64_t micros_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
}

inline double seconds_of(std::int64_t us) { return static_cast<double>(us) / 1e6; }

inline std::int64_t micros_of(double seconds) { return std::llround(seconds * 1e6); }

inline double ratio(std::int64_t num, std::int64_t den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

/// Accumulated raw text per document, in first-seen order.
class TextCorpus {
public:
    void append(const DocId& id, const std::string& text) {
        auto [it, inserted] = slot_.try_emplace(id, texts_.size());
        if (inserted) {
            texts_.emplace_back(id, text);
        } else {
            auto& t = texts_[it->second].second;
            t.push_back(' ');
            t += text;
        }
    }

    /// Full-corpus preprocessing + batch TF-IDF + all pairs. Returns the
    /// number of intersecting pairs.
    std::uint64_t run_batch(const PipelineConfig& pipeline) const {
        BatchCorpus corpus;
        corpus.reserve(texts_.size());
        for (const auto& [id, text] : texts_) {
            auto counts = term_counts(preprocess(text, pipeline));
            if (!counts.empty()) corpus.emplace_back(id, std::move(counts));
        }
        return batch_all_pairs(corpus).size();
    }

private:
    std::vector<std::pair<DocId, std::string>> texts_;
    std::map<DocId, std::size_t> slot_;
};

inline std::string join_texts(const std::vector<StreamRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        if (!out.empty()) out.push_back(' ');
        out += r.text;
    }
    return out;
}

template <class BuildChunk>
std::vector<SnapshotMetrics> run_stream(const std::vector<Snapshot>& snapshots, Engine& engine,
                                        const DriverOptions& options, StreamMode mode, BuildChunk build_chunk) {
    if (options.run_batch && engine.corpus().n_docs() != 0)
        throw InvalidArgument("batch comparison needs a freshly initialized engine");
    std::vector<SnapshotMetrics> metrics;
    TextCorpus accumulated;
    std::size_t last_index = 0;
    for (const auto& snapshot : snapshots) {
        if (snapshot.index <= last_index) throw InvalidArgument("snapshot indices must strictly increase");
        last_index = snapshot.index;

        SnapshotMetrics m;
        m.index = snapshot.index;
        m.mode = mode;

        auto start = Clock::now();
        Chunk chunk = build_chunk(snapshot, accumulated);
        if (chunk.empty()) {
            options.warn("snapshot " + std::to_string(snapshot.index) + " has no tokens; skipped");
            continue;
        }
        auto result = engine.ingest(chunk);
        m.elapsed_incremental_seconds = seconds_of(micros_since(start));
        m.recomputed_pairs = result.report.recomputed;
        m.generated_pairs = result.report.generated;

        if (options.run_batch) {
            auto batch_start = Clock::now();
            m.batch_pairs = accumulated.run_batch(engine.pipeline());
            m.elapsed_batch_seconds = seconds_of(micros_since(batch_start));
        }
        metrics.push_back(m);
    }
    return metrics;
}

} // namespace detail

/// Recomputes cumulative columns and both speedups from the elapsed columns.
/// Times are handled as whole microseconds so the emitted tables re-derive
/// exactly.
inline void accumulate_metrics(std::vector<SnapshotMetrics>& metrics) {
    std::int64_t inc = 0, batch = 0;
    for (auto& m : metrics) {
        const auto e_inc = detail::micros_of(m.elapsed_incremental_seconds);
        const auto e_batch = detail::micros_of(m.elapsed_batch_seconds);
        m.elapsed_incremental_seconds = detail::seconds_of(e_inc);
        m.elapsed_batch_seconds = detail::seconds_of(e_batch);
        inc += e_inc;
        batch += e_batch;
        m.cumulative_incremental_seconds = detail::seconds_of(inc);
        m.cumulative_batch_seconds = detail::seconds_of(batch);
        m.speedup = detail::ratio(batch, inc);
        m.increment_speedup = detail::ratio(e_batch, e_inc);
    }
}

inline std::vector<SnapshotMetrics> run_ods(const std::vector<Snapshot>& snapshots, Engine& engine,
                                            const DriverOptions& options = {}) {
    auto metrics = detail::run_stream(
        snapshots, engine, options, StreamMode::kOds,
        [&](const Snapshot& s, detail::TextCorpus& accumulated) {
            const DocId id = "snapshot-" + std::to_string(s.index);
            if (engine.corpus().contains(id)) throw InvalidArgument("document " + id + " already exists");
            const auto text = detail::join_texts(s.records);
            auto counts = engine.analyze(text);
            Chunk chunk;
            if (!counts.empty()) {
                chunk.emplace_back(id, std::move(counts));
                accumulated.append(id, text);
            }
            return chunk;
        });
    accumulate_metrics(metrics);
    return metrics;
}

inline std::vector<SnapshotMetrics> run_sds(const std::vector<Snapshot>& snapshots, Engine& engine,
                                            const DriverOptions& options = {}) {
    auto metrics = detail::run_stream(
        snapshots, engine, options, StreamMode::kSds,
        [&](const Snapshot& s, detail::TextCorpus& accumulated) {
            // Records sharing an id inside one snapshot collapse into one entry.
            std::vector<DocId> order;
            std::map<DocId, TermCounts> merged;
            for (const auto& r : s.records) {
                auto counts = engine.analyze(r.text);
                if (counts.empty()) {
                    options.warn("record " + r.id + " in snapshot " + std::to_string(s.index) +
                                 " has no tokens; dropped");
                    continue;
                }
                auto [it, inserted] = merged.try_emplace(r.id);
                if (inserted) order.push_back(r.id);
                it->second.merge(counts);
                accumulated.append(r.id, r.text);
            }
            Chunk chunk;
            chunk.reserve(order.size());
            for (const auto& id : order) chunk.emplace_back(id, std::move(merged[id]));
            return chunk;
        });
    accumulate_metrics(metrics);
    return metrics;
}

inline std::vector<SnapshotMetrics> run_stream(StreamMode mode, const std::vector<Snapshot>& snapshots,
                                               Engine& engine, const DriverOptions& options = {}) {
    return mode == StreamMode::kOds ? run_ods(snapshots, engine, options) : run_sds(snapshots, engine, options);
}

// ---------------------------------------------------------------------------
// Checkpoints
//
// JSON lines. Line 1 is a header carrying the format tag and version and the
// expected document and pair counts, followed by one line per document, one
// line per stored pair and a closing {"end":true}. Doubles are written in
// shortest round-trip form, so restore is bit-exact.

inline constexpr std::string_view kCheckpointFormat = "istfidf-checkpoint";
inline constexpr int kCheckpointVersion = 1;

inline void save_checkpoint(const Engine& engine, std::ostream& out) {
    using nlohmann::ordered_json;
    const auto& corpus = engine.corpus();
    const auto& store = engine.store();
    const auto docs = corpus.documents();

    ordered_json header;
    header["format"] = std::string(kCheckpointFormat);
    header["format_version"] = kCheckpointVersion;
    header["corpus_version"] = corpus.version();
    header["documents"] = docs.size();
    header["pairs"] = store.size();
    out << header.dump() << '\n';

    for (const auto& d : docs) {
        ordered_json j;
        j["id"] = d.id;
        j["version"] = d.version;
        j["counts"] = d.counts.counts;
        out << j.dump() << '\n';
    }
    for (const auto& [pair, entry] : store.entries()) {
        ordered_json j;
        j["a"] = pair.a;
        j["b"] = pair.b;
        j["value"] = entry.value;
        j["computed_at"] = entry.computed_at;
        out << j.dump() << '\n';
    }
    out << R"({"end":true})" << '\n';
}

inline void save_checkpoint(const Engine& engine, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint: " + path.string());
    save_checkpoint(engine, out);
    out.flush();
    if (!out) throw Error("failed writing checkpoint: " + path.string());
}

inline Engine load_checkpoint(std::istream& in, PipelineConfig pipeline = {}) {
    using nlohmann::json;
    std::string line;
    std::size_t lineno = 0;
    auto next = [&](const char* what) -> json {
        if (!std::getline(in, line)) throw FormatError(std::string("checkpoint truncated: expected ") + what);
        ++lineno;
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw FormatError("checkpoint line " + std::to_string(lineno) + " is not a JSON object");
        return j;
    };

    try {
        auto header = next("header");
        if (header.value("format", "") != kCheckpointFormat) throw FormatError("not an istfidf checkpoint");
        if (header.at("format_version").get<int>() != kCheckpointVersion)
            throw FormatError("unsupported checkpoint format version " + header.at("format_version").dump());
        const auto corpus_version = header.at("corpus_version").get<std::uint64_t>();
        const auto n_docs = header.at("documents").get<std::size_t>();
        const auto n_pairs = header.at("pairs").get<std::size_t>();

        std::vector<Document> docs;
        docs.reserve(n_docs);
        for (std::size_t i = 0; i < n_docs; ++i) {
            auto j = next("document");
            Document d;
            d.id = j.at("id").get<std::string>();
            d.version = j.at("version").get<std::uint64_t>();
            for (const auto& [term, n] : j.at("counts").items()) d.counts.add(term, n.get<std::uint64_t>());
            if (d.counts.empty()) throw FormatError("checkpoint document " + d.id + " has no terms");
            docs.push_back(std::move(d));
        }

        SimilarityStore::Entries entries;
        for (std::size_t i = 0; i < n_pairs; ++i) {
            auto j = next("pair");
            DocPair pair{j.at("a").get<std::string>(), j.at("b").get<std::string>()};
            SimilarityEntry e{j.at("value").get<double>(), j.at("computed_at").get<std::uint64_t>()};
            if (e.computed_at > corpus_version) throw FormatError("pair computed after the corpus version");
            if (!entries.emplace(std::move(pair), e).second) throw FormatError("duplicate pair in checkpoint");
        }
        if (!next("end marker").value("end", false)) throw FormatError("checkpoint missing end marker");

        auto corpus = Corpus::restore(corpus_version, docs);
        for (const auto& [pair, e] : entries)
            if (!corpus.contains(pair.a) || !corpus.contains(pair.b))
                throw FormatError("checkpoint pair references an unknown document");
        return Engine(std::move(pipeline), std::move(corpus), SimilarityStore(std::move(entries)));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed checkpoint: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("malformed checkpoint: ") + e.what());
    }
}

inline Engine load_checkpoint(const std::filesystem::path& path, PipelineConfig pipeline = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint: " + path.string());
    return load_checkpoint(in, std::move(pipeline));
}

} // namespace istfidf

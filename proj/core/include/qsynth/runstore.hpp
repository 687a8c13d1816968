#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qsynth/evaluator.hpp"
#include "qsynth/optimizer.hpp"

namespace qsynth {

inline constexpr int kRunSchemaVersion = 1;

/// One experiment as persisted on disk (JSON, circuits in gate-list text).
struct RunLogFile {
    int schema_version = kRunSchemaVersion;
    std::string label;
    std::string started_at;   // ISO-8601 UTC
    std::string finished_at;
    ExperimentResult result;

    bool operator==(const RunLogFile&) const = default;
};

std::string to_json_text(const RunLogFile& run);
// Throws SchemaVersionError for a missing or unknown schema_version,
// RunStoreError for anything else malformed.
RunLogFile from_json_text(std::string_view text);

// Writes to a sibling temporary file and renames it into place.
void write_run(const std::filesystem::path& path, const RunLogFile& run);
RunLogFile read_run(const std::filesystem::path& path);

// 16 hex digits of FNV-1a over the canonical config JSON.
std::string config_hash(const OptimizerConfig& config);
// "run-<hash>.json"
std::string run_file_name(const OptimizerConfig& config);

std::string utc_timestamp();

struct VerifyMismatch {
    std::string where;     // "initial", "query 2 step 7", "best", ...
    double recorded = 0.0;
    double recomputed = 0.0;
};

struct VerifyReport {
    int checked = 0;
    std::vector<VerifyMismatch> mismatches;
    std::vector<std::string> inconsistencies;  // bookkeeping that does not add up

    bool ok() const { return mismatches.empty() && inconsistencies.empty(); }
};

/// Re-scores every stored circuit and compares with the recorded values.
VerifyReport replay_verify(const RunLogFile& run, const Evaluator& evaluator, double tolerance = 1e-9);

struct TableRow {
    std::string label;
    double initial_q = 0.0;
    std::vector<std::string> cells;  // "a→b", "no improv." or "done", one per query
};

struct TableSpec {
    std::size_t num_queries = 0;
    std::vector<TableRow> rows;
};

// 2 decimals with trailing zeros dropped: 0.66, 0.8, 1.
std::string format_score(double q);

TableSpec build_table(const std::vector<RunLogFile>& runs);
std::string render_table(const TableSpec& table);

}  // namespace qsynth

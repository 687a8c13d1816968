#include "qsynth/runstore.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "qsynth/errors.hpp"
#include "qsynth/gatelist.hpp"

namespace qsynth {

namespace {

using json = nlohmann::json;

json circuit_to_json(const Circuit& c) { return {{"num_qubits", c.num_qubits}, {"gates", serialize(c)}}; }

Circuit circuit_from_json(const json& j) {
    const int n = j.at("num_qubits").get<int>();
    auto parsed = parse(j.at("gates").get<std::string>(), n);
    if (!parsed) throw RunStoreError("stored circuit does not parse: " + parsed.error().describe());
    return std::move(parsed).value();
}

json config_to_json(const OptimizerConfig& c) {
    json j = {
        {"num_qubits", c.num_qubits},
        {"gate_budget", c.gate_budget},
        {"angles", c.angles.values()},
        {"queries", c.queries},
        {"steps_per_query", c.steps_per_query},
        {"feedback_enabled", c.feedback_enabled},
        {"strict_gate_count", c.strict_gate_count},
        {"proposer", c.proposer},
        {"proposer_params", c.proposer_params},
        {"evaluator", c.evaluator},
        {"seed", c.seed},
    };
    j["initial_circuit"] = c.initial_circuit ? circuit_to_json(*c.initial_circuit) : json(nullptr);
    return j;
}

OptimizerConfig config_from_json(const json& j) {
    OptimizerConfig c;
    c.num_qubits = j.at("num_qubits").get<int>();
    c.gate_budget = j.at("gate_budget").get<int>();
    c.angles = AngleSet(j.at("angles").get<std::vector<double>>());
    c.queries = j.at("queries").get<int>();
    c.steps_per_query = j.at("steps_per_query").get<int>();
    c.feedback_enabled = j.at("feedback_enabled").get<bool>();
    c.strict_gate_count = j.at("strict_gate_count").get<bool>();
    c.proposer = j.at("proposer").get<std::string>();
    c.proposer_params = j.at("proposer_params").get<std::map<std::string, std::string>>();
    c.evaluator = j.at("evaluator").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("initial_circuit").is_null()) c.initial_circuit = circuit_from_json(j.at("initial_circuit"));
    return c;
}

template <typename T>
json optional_to_json(const std::optional<T>& value) {
    return value ? json(*value) : json(nullptr);
}

json step_to_json(const StepRecord& s) {
    return {
        {"query_index", s.query_index},
        {"step_index", s.step_index},
        {"raw_text", s.raw_text},
        {"parse_ok", s.parse_ok},
        {"circuit", s.circuit ? circuit_to_json(*s.circuit) : json(nullptr)},
        {"q", optional_to_json(s.q)},
        {"delta_q", s.delta_q},
        {"rejected_reason", s.rejected == RejectReason::None ? json(nullptr) : json(to_string(s.rejected))},
        {"detail", s.detail},
        {"is_new_best", s.is_new_best},
        {"latency_seconds", s.latency_seconds},
    };
}

StepRecord step_from_json(const json& j) {
    StepRecord s;
    s.query_index = j.at("query_index").get<int>();
    s.step_index = j.at("step_index").get<int>();
    s.raw_text = j.at("raw_text").get<std::string>();
    s.parse_ok = j.at("parse_ok").get<bool>();
    if (!j.at("circuit").is_null()) s.circuit = circuit_from_json(j.at("circuit"));
    if (!j.at("q").is_null()) s.q = j.at("q").get<double>();
    s.delta_q = j.at("delta_q").get<double>();
    if (!j.at("rejected_reason").is_null()) s.rejected = reject_reason_from_string(j.at("rejected_reason").get<std::string>());
    s.detail = j.at("detail").get<std::string>();
    s.is_new_best = j.at("is_new_best").get<bool>();
    s.latency_seconds = j.at("latency_seconds").get<double>();
    return s;
}

json query_to_json(const QueryResult& q) {
    json steps = json::array();
    for (const auto& s : q.steps) steps.push_back(step_to_json(s));
    return {
        {"query_index", q.query_index},
        {"status", q.status == QueryStatus::Done ? "done" : "ran"},
        {"start_circuit", circuit_to_json(q.start_circuit)},
        {"start_q", q.start_q},
        {"best_circuit", circuit_to_json(q.best_circuit)},
        {"best_q", q.best_q},
        {"evaluations", q.evaluations},
        {"steps", steps},
    };
}

QueryResult query_from_json(const json& j) {
    QueryResult q;
    q.query_index = j.at("query_index").get<int>();
    const auto status = j.at("status").get<std::string>();
    if (status != "done" && status != "ran") throw RunStoreError("unknown query status '" + status + "'");
    q.status = status == "done" ? QueryStatus::Done : QueryStatus::Ran;
    q.start_circuit = circuit_from_json(j.at("start_circuit"));
    q.start_q = j.at("start_q").get<double>();
    q.best_circuit = circuit_from_json(j.at("best_circuit"));
    q.best_q = j.at("best_q").get<double>();
    q.evaluations = j.at("evaluations").get<int>();
    for (const auto& s : j.at("steps")) q.steps.push_back(step_from_json(s));
    return q;
}

std::size_t display_width(const std::string& s) {
    std::size_t width = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++width;
    }
    return width;
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

}  // namespace

std::string to_json_text(const RunLogFile& run) {
    const ExperimentResult& r = run.result;
    json queries = json::array();
    for (const auto& q : r.queries) queries.push_back(query_to_json(q));
    json j = {
        {"schema_version", run.schema_version},
        {"label", run.label},
        {"started_at", run.started_at},
        {"finished_at", run.finished_at},
        {"config", config_to_json(r.config)},
        {"initial_circuit", circuit_to_json(r.initial_circuit)},
        {"initial_q", r.initial_q},
        {"queries", queries},
        {"best_circuit", circuit_to_json(r.best_circuit)},
        {"best_q", r.best_q},
        {"evaluations", r.evaluations},
        {"early_stopped", r.early_stopped},
    };
    return j.dump(2) + "\n";
}

RunLogFile from_json_text(std::string_view text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) throw RunStoreError("run file is not a JSON object");
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
        throw SchemaVersionError("run file has no integer schema_version");
    }
    const int version = j["schema_version"].get<int>();
    if (version != kRunSchemaVersion) {
        throw SchemaVersionError("unsupported schema_version " + std::to_string(version) + " (this build reads " +
                                 std::to_string(kRunSchemaVersion) + ")");
    }
    try {
        RunLogFile run;
        run.schema_version = version;
        run.label = j.at("label").get<std::string>();
        run.started_at = j.at("started_at").get<std::string>();
        run.finished_at = j.at("finished_at").get<std::string>();
        ExperimentResult& r = run.result;
        r.config = config_from_json(j.at("config"));
        r.initial_circuit = circuit_from_json(j.at("initial_circuit"));
        r.initial_q = j.at("initial_q").get<double>();
        for (const auto& q : j.at("queries")) r.queries.push_back(query_from_json(q));
        r.best_circuit = circuit_from_json(j.at("best_circuit"));
        r.best_q = j.at("best_q").get<double>();
        r.evaluations = j.at("evaluations").get<int>();
        r.early_stopped = j.at("early_stopped").get<bool>();
        return run;
    } catch (const json::exception& e) {
        throw RunStoreError(std::string("malformed run file: ") + e.what());
    } catch (const ParameterError& e) {
        throw RunStoreError(std::string("malformed run file: ") + e.what());
    }
}

void write_run(const std::filesystem::path& path, const RunLogFile& run) {
    const std::string text = to_json_text(run);
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw RunStoreError("cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out) throw RunStoreError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw RunStoreError("cannot move run file into place at " + path.string());
    }
}

RunLogFile read_run(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RunStoreError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

std::string config_hash(const OptimizerConfig& config) {
    const std::string text = config_to_json(config).dump();
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string run_file_name(const OptimizerConfig& config) { return "run-" + config_hash(config) + ".json"; }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

VerifyReport replay_verify(const RunLogFile& run, const Evaluator& evaluator, double tolerance) {
    VerifyReport report;
    const ExperimentResult& r = run.result;
    auto check = [&](const std::string& where, const Circuit& circuit, double recorded) {
        const double q = evaluator(circuit);
        ++report.checked;
        if (!close(q, recorded, tolerance)) report.mismatches.push_back({where, recorded, q});
    };

    check("initial", r.initial_circuit, r.initial_q);
    double max_q = r.initial_q;
    int evaluations = 0;
    const Circuit* previous_best = &r.initial_circuit;
    for (const auto& query : r.queries) {
        const std::string prefix = "query " + std::to_string(query.query_index);
        if (query.start_circuit != *previous_best) report.inconsistencies.push_back(prefix + " did not start from the previous best");
        check(prefix + " start", query.start_circuit, query.start_q);
        int query_evaluations = 0;
        for (const auto& step : query.steps) {
            if (!step.q) continue;
            const std::string where = prefix + " step " + std::to_string(step.step_index);
            if (!step.circuit) {
                report.inconsistencies.push_back(where + " has a score but no circuit");
                continue;
            }
            check(where, *step.circuit, *step.q);
            max_q = std::max(max_q, *step.q);
            ++query_evaluations;
        }
        if (query_evaluations != query.evaluations) report.inconsistencies.push_back(prefix + " evaluation count disagrees with its steps");
        evaluations += query_evaluations;
        check(prefix + " best", query.best_circuit, query.best_q);
        previous_best = &query.best_circuit;
    }
    check("best", r.best_circuit, r.best_q);
    if (!close(max_q, r.best_q, tolerance)) report.inconsistencies.push_back("best_q is not the maximum recorded score");
    if (evaluations != r.evaluations) report.inconsistencies.push_back("evaluation total disagrees with the step records");
    if (r.evaluations > r.config.evaluation_budget()) report.inconsistencies.push_back("evaluations exceed the configured budget");
    return report;
}

std::string format_score(double q) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", q);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

TableSpec build_table(const std::vector<RunLogFile>& runs) {
    TableSpec table;
    for (const auto& run : runs) {
        TableRow row;
        row.label = run.label;
        row.initial_q = run.result.initial_q;
        for (const auto& query : run.result.queries) {
            if (query.status == QueryStatus::Done) {
                row.cells.push_back("done");
            } else if (query.improved()) {
                row.cells.push_back(format_score(query.start_q) + "→" + format_score(query.best_q));
            } else {
                row.cells.push_back("no improv.");
            }
        }
        table.num_queries = std::max(table.num_queries, row.cells.size());
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string render_table(const TableSpec& table) {
    if (table.rows.empty()) return "";
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header = {"test", "initial"};
    for (std::size_t q = 0; q < table.num_queries; ++q) header.push_back("query " + std::to_string(q + 1));
    grid.push_back(header);
    for (const auto& row : table.rows) {
        char initial[32];
        std::snprintf(initial, sizeof initial, "%.2f", row.initial_q);
        std::vector<std::string> line = {row.label, initial};
        line.insert(line.end(), row.cells.begin(), row.cells.end());
        line.resize(header.size());
        grid.push_back(std::move(line));
    }
    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& line : grid) {
        for (std::size_t c = 0; c < line.size(); ++c) widths[c] = std::max(widths[c], display_width(line[c]));
    }
    std::ostringstream out;
    for (std::size_t r = 0; r < grid.size(); ++r) {
        for (std::size_t c = 0; c < grid[r].size(); ++c) {
            if (c) out << " | ";
            out << grid[r][c];
            if (c + 1 < grid[r].size()) out << std::string(widths[c] - display_width(grid[r][c]), ' ');
        }
        out << "\n";
        if (r == 0) {
            for (std::size_t c = 0; c < widths.size(); ++c) {
                if (c) out << "-+-";
                out << std::string(widths[c], '-');
            }
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace qsynth

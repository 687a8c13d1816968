#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/evaluator.hpp"
#include "qsynth/proposer.hpp"

namespace qsynth {

// Scores at or above this count as the maximum and end the experiment.
inline constexpr double kDoneThreshold = 1.0 - 1e-9;

struct OptimizerConfig {
    int num_qubits = 25;
    int gate_budget = 25;
    AngleSet angles = AngleSet::standard();
    int queries = 3;
    int steps_per_query = 15;
    bool feedback_enabled = false;
    bool strict_gate_count = true;
    std::string proposer = "hillclimb";                     // hillclimb | replay | llm
    std::map<std::string, std::string> proposer_params;     // e.g. model, base_url, script
    std::string evaluator = "factored";                     // factored | dense | dense-f32
    std::uint64_t seed = 0;
    std::optional<Circuit> initial_circuit;                 // nullopt: random from `seed`

    int evaluation_budget() const { return queries * steps_per_query; }
    // Throws ParameterError.
    void validate() const;
    bool operator==(const OptimizerConfig&) const = default;
};

enum class RejectReason { None, Parse, Invalid, GateCount, AngleSet, Proposer };

// "", "parse", "invalid", "gate-count", "angle-set", "proposer"
const char* to_string(RejectReason reason);
RejectReason reject_reason_from_string(const std::string& text);

struct StepRecord {
    int query_index = 0;
    int step_index = 0;
    std::string raw_text;
    bool parse_ok = false;
    std::optional<Circuit> circuit;        // present whenever the text parsed
    std::optional<double> q;               // present only for evaluated candidates
    double delta_q = 0.0;                  // feeds the next step's prompt
    RejectReason rejected = RejectReason::None;
    std::string detail;                    // parse error / violation / failure text
    bool is_new_best = false;
    double latency_seconds = 0.0;

    bool operator==(const StepRecord&) const = default;
};

enum class QueryStatus { Ran, Done };

struct QueryResult {
    int query_index = 0;
    QueryStatus status = QueryStatus::Ran;  // Done: skipped after an earlier query hit the maximum
    Circuit start_circuit;
    double start_q = 0.0;
    std::vector<StepRecord> steps;
    Circuit best_circuit;
    double best_q = 0.0;
    int evaluations = 0;

    bool improved() const { return best_q > start_q; }
    bool operator==(const QueryResult&) const = default;
};

struct ExperimentResult {
    OptimizerConfig config;
    Circuit initial_circuit;
    double initial_q = 0.0;
    std::vector<QueryResult> queries;
    Circuit best_circuit;
    double best_q = 0.0;
    int evaluations = 0;      // candidate evaluations; the initial score is not counted
    bool early_stopped = false;

    bool operator==(const ExperimentResult&) const = default;
};

/**
 * One query of `steps_per_query` proposals. The prompt chain follows each
 * accepted candidate whether or not it improved; rejected proposals keep the
 * previous circuit and report a zero delta next step. Rejections consume a
 * step but no evaluation. Stops early once best_q reaches kDoneThreshold.
 */
QueryResult run_query(const Circuit& start, double start_q, int query_index, const OptimizerConfig& config,
                      Proposer& proposer, const Evaluator& evaluator);

/// Restart-from-best: query 1 starts from the initial circuit, each later
/// query from the best circuit found so far. Queries after a perfect score
/// are marked Done and not run.
ExperimentResult run_experiment(const OptimizerConfig& config, Proposer& proposer, const Evaluator& evaluator);

// Initial circuit the experiment will start from.
Circuit starting_circuit(const OptimizerConfig& config);

struct ComparisonRow {
    std::uint64_t seed = 0;
    double initial_q = 0.0;
    double hillclimb_best_q = 0.0;
    std::optional<double> proposer_best_q;
    std::string proposer_id;
    int hillclimb_evaluations = 0;
    int proposer_evaluations = 0;
};

using ProposerFactory = std::function<std::unique_ptr<Proposer>(std::uint64_t seed)>;

/// Per seed: one hill-climb run and (when a factory is given) one loop
/// experiment, both from the same start and with the same evaluation budget.
/// The start is config.initial_circuit when set, else random_circuit(seed).
std::vector<ComparisonRow> compare_budget_matched(const OptimizerConfig& config, const std::vector<std::uint64_t>& seeds,
                                                  const Evaluator& evaluator, const ProposerFactory& proposer_factory = {});

}  // namespace qsynth

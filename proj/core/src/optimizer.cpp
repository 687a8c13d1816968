#include "qsynth/optimizer.hpp"

#include <chrono>

#include "qsynth/errors.hpp"

namespace qsynth {

void OptimizerConfig::validate() const {
    if (num_qubits < 1) throw ParameterError("num_qubits must be positive");
    if (gate_budget < 1) throw ParameterError("gate_budget must be positive");
    if (queries < 1) throw ParameterError("queries must be >= 1");
    if (steps_per_query < 1) throw ParameterError("steps_per_query must be >= 1");
    if (initial_circuit) {
        if (initial_circuit->num_qubits != num_qubits) throw ParameterError("initial circuit has the wrong qubit count");
        if (auto v = qsynth::validate(*initial_circuit); !v) throw ParameterError("initial circuit: " + v.describe());
        if (strict_gate_count && static_cast<int>(initial_circuit->size()) != gate_budget) {
            throw ParameterError("initial circuit has " + std::to_string(initial_circuit->size()) +
                                 " gates but the gate budget is " + std::to_string(gate_budget));
        }
    }
}

const char* to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::None: return "";
        case RejectReason::Parse: return "parse";
        case RejectReason::Invalid: return "invalid";
        case RejectReason::GateCount: return "gate-count";
        case RejectReason::AngleSet: return "angle-set";
        case RejectReason::Proposer: return "proposer";
    }
    return "?";
}

RejectReason reject_reason_from_string(const std::string& text) {
    for (auto r : {RejectReason::None, RejectReason::Parse, RejectReason::Invalid, RejectReason::GateCount,
                   RejectReason::AngleSet, RejectReason::Proposer}) {
        if (text == to_string(r)) return r;
    }
    throw ParameterError("unknown rejection reason '" + text + "'");
}

QueryResult run_query(const Circuit& start, double start_q, int query_index, const OptimizerConfig& config,
                      Proposer& proposer, const Evaluator& evaluator) {
    QueryResult result;
    result.query_index = query_index;
    result.start_circuit = start;
    result.start_q = start_q;
    result.best_circuit = start;
    result.best_q = start_q;

    Circuit memory = start;
    double memory_q = start_q;
    std::optional<double> delta;

    for (int step = 1; step <= config.steps_per_query; ++step) {
        if (result.best_q >= kDoneThreshold) break;

        ProposalContext context{memory, memory_q, delta, step, query_index, config.angles, config.gate_budget};
        ProposalOutcome outcome = proposer.propose(context);

        StepRecord record;
        record.query_index = query_index;
        record.step_index = step;
        record.raw_text = std::move(outcome.raw_text);
        record.latency_seconds = std::chrono::duration<double>(outcome.latency).count();

        if (const auto* failure = std::get_if<ProposalFailure>(&outcome.parsed)) {
            record.rejected = RejectReason::Proposer;
            record.detail = failure->reason;
        } else if (const auto* error = std::get_if<ParseError>(&outcome.parsed)) {
            record.rejected = RejectReason::Parse;
            record.detail = error->describe();
        } else if (const auto* invalid = std::get_if<InvalidProposal>(&outcome.parsed)) {
            record.rejected = RejectReason::Invalid;
            record.parse_ok = true;
            record.detail = invalid->validation.describe();
        } else {
            const Circuit& candidate = std::get<Circuit>(outcome.parsed);
            record.parse_ok = true;
            record.circuit = candidate;
            if (config.strict_gate_count && static_cast<int>(candidate.size()) != config.gate_budget) {
                record.rejected = RejectReason::GateCount;
                record.detail = std::to_string(candidate.size()) + " gates, budget " + std::to_string(config.gate_budget);
            } else if (auto v = validate_against_angle_set(candidate, config.angles); !v) {
                record.rejected = RejectReason::AngleSet;
                record.detail = v.describe();
            }
        }

        if (record.rejected == RejectReason::None) {
            const double q = evaluator(*record.circuit);
            ++result.evaluations;
            record.q = q;
            record.delta_q = q - memory_q;
            if (q > result.best_q) {
                record.is_new_best = true;
                result.best_q = q;
                result.best_circuit = *record.circuit;
            }
            memory = *record.circuit;
            memory_q = q;
        } else {
            record.delta_q = 0.0;
        }
        delta = record.delta_q;
        result.steps.push_back(std::move(record));
    }
    return result;
}

Circuit starting_circuit(const OptimizerConfig& config) {
    if (config.initial_circuit) return *config.initial_circuit;
    return random_circuit(config.num_qubits, config.gate_budget, config.angles, config.seed);
}

ExperimentResult run_experiment(const OptimizerConfig& config, Proposer& proposer, const Evaluator& evaluator) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    result.initial_circuit = starting_circuit(config);
    result.initial_q = evaluator(result.initial_circuit);
    result.best_circuit = result.initial_circuit;
    result.best_q = result.initial_q;

    for (int query = 1; query <= config.queries; ++query) {
        if (result.best_q >= kDoneThreshold) {
            QueryResult done;
            done.query_index = query;
            done.status = QueryStatus::Done;
            done.start_circuit = result.best_circuit;
            done.start_q = result.best_q;
            done.best_circuit = result.best_circuit;
            done.best_q = result.best_q;
            result.queries.push_back(std::move(done));
            result.early_stopped = true;
            continue;
        }
        QueryResult q = run_query(result.best_circuit, result.best_q, query, config, proposer, evaluator);
        result.evaluations += q.evaluations;
        if (q.best_q > result.best_q) {
            result.best_q = q.best_q;
            result.best_circuit = q.best_circuit;
        }
        result.queries.push_back(std::move(q));
    }
    if (result.best_q >= kDoneThreshold) result.early_stopped = true;
    return result;
}

std::vector<ComparisonRow> compare_budget_matched(const OptimizerConfig& config, const std::vector<std::uint64_t>& seeds,
                                                  const Evaluator& evaluator, const ProposerFactory& proposer_factory) {
    if (seeds.empty()) throw ParameterError("compare_budget_matched needs at least one seed");
    config.validate();
    std::vector<ComparisonRow> rows;
    rows.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        OptimizerConfig run_config = config;
        run_config.seed = seed;
        run_config.initial_circuit = starting_circuit(run_config);

        ComparisonRow row;
        row.seed = seed;
        row.initial_q = evaluator(*run_config.initial_circuit);
        const HillClimbResult climb = hillclimb_run(*run_config.initial_circuit, row.initial_q,
                                                    run_config.evaluation_budget(), run_config.angles, seed, evaluator);
        row.hillclimb_best_q = climb.best_q;
        row.hillclimb_evaluations = climb.evaluations;
        if (proposer_factory) {
            std::unique_ptr<Proposer> proposer = proposer_factory(seed);
            const ExperimentResult experiment = run_experiment(run_config, *proposer, evaluator);
            row.proposer_best_q = experiment.best_q;
            row.proposer_evaluations = experiment.evaluations;
            row.proposer_id = proposer->id();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace qsynth

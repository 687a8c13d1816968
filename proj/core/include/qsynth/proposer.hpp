#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/evaluator.hpp"
#include "qsynth/gatelist.hpp"

namespace qsynth {

/// What a proposer sees at one step: the previous step's circuit and score,
/// and the score change that produced it (absent on a query's first step).
struct ProposalContext {
    Circuit current_circuit;
    double current_q = 0.0;
    std::optional<double> delta_q;
    int step_index = 0;
    int query_index = 0;
    AngleSet allowed_angles = AngleSet::standard();
    int gate_budget = 0;
};

// Proposer could not produce text at all (transport error, exhausted script).
struct ProposalFailure {
    std::string reason;
    bool operator==(const ProposalFailure&) const = default;
};

// Parsed but failed `validate` (e.g. a wire outside the register).
struct InvalidProposal {
    ValidationResult validation;
};

struct ProposalOutcome {
    std::string raw_text;
    std::variant<Circuit, ParseError, InvalidProposal, ProposalFailure> parsed;
    std::chrono::nanoseconds latency{0};
    std::string proposer_id;

    const Circuit* circuit() const { return std::get_if<Circuit>(&parsed); }
    bool ok() const { return circuit() != nullptr; }
};

// curate + parse + validate raw text into an outcome.
ProposalOutcome interpret_proposal(std::string raw_text, int num_qubits, std::string proposer_id);

class Proposer {
public:
    virtual ~Proposer() = default;
    virtual ProposalOutcome propose(const ProposalContext& context) = 0;
    virtual std::string id() const = 0;
};

struct MoveProbabilities {
    double replace = 0.5;
    double rewire = 0.4;
    double swap = 0.1;
};

/**
 * Applies exactly one random move and returns the edited copy:
 *   replace - overwrite one gate with a fresh random gate,
 *   rewire  - redraw the wires of one gate, keeping kind and angle,
 *   swap    - exchange two distinct positions.
 * Swap is skipped for single-gate circuits. Replace and rewire always change
 * the chosen gate; swapping two identical gates leaves the list as it was.
 */
Circuit hillclimb_mutate(const Circuit& circuit, const AngleSet& angles, std::mt19937_64& rng,
                         const MoveProbabilities& moves = {});

struct HillClimbResult {
    Circuit best_circuit;
    double best_q = 0.0;
    double initial_q = 0.0;
    std::vector<double> candidate_q;   // every evaluated candidate, in order
    std::vector<double> incumbent_q;   // incumbent after each evaluation
    int evaluations = 0;
};

/// Mutate-evaluate loop that keeps a candidate only if it strictly improves
/// the incumbent. Calls `evaluator` exactly `budget` times; `initial_q` is the
/// caller's score for `initial` and is not re-evaluated.
HillClimbResult hillclimb_run(const Circuit& initial, double initial_q, int budget, const AngleSet& angles,
                              std::uint64_t seed, const Evaluator& evaluator, const MoveProbabilities& moves = {});

// Hill climbing behind the proposer contract: mutates its incumbent, and
// adopts the loop's current circuit as incumbent only when its score beats it.
class HillClimbProposer final : public Proposer {
public:
    explicit HillClimbProposer(std::uint64_t seed, MoveProbabilities moves = {});
    ProposalOutcome propose(const ProposalContext& context) override;
    std::string id() const override { return "hillclimb"; }

private:
    std::mt19937_64 rng_;
    MoveProbabilities moves_;
    std::optional<Circuit> incumbent_;
    double incumbent_q_ = 0.0;
};

// Returns scripted texts in order; afterwards every call fails with "script exhausted".
class ReplayProposer final : public Proposer {
public:
    explicit ReplayProposer(std::vector<std::string> script);
    ProposalOutcome propose(const ProposalContext& context) override;
    std::string id() const override { return "replay"; }
    std::size_t consumed() const { return next_; }

private:
    std::vector<std::string> script_;
    std::size_t next_ = 0;
};

// Splits a replay script file: entries are separated by lines holding only "---".
std::vector<std::string> split_replay_script(std::string_view text);

}  // namespace qsynth

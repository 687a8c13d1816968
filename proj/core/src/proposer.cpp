#include "qsynth/proposer.hpp"

#include <algorithm>

#include "qsynth/errors.hpp"

namespace qsynth {

ProposalOutcome interpret_proposal(std::string raw_text, int num_qubits, std::string proposer_id) {
    ProposalOutcome outcome;
    outcome.proposer_id = std::move(proposer_id);
    auto parsed = parse_proposal(raw_text, num_qubits);
    if (!parsed) {
        outcome.parsed = parsed.error();
    } else if (auto v = validate(parsed.value()); !v) {
        outcome.parsed = InvalidProposal{std::move(v)};
    } else {
        outcome.parsed = std::move(parsed).value();
    }
    outcome.raw_text = std::move(raw_text);
    return outcome;
}

namespace {

enum class Move { Replace, Rewire, Swap };

Move draw_move(std::size_t gate_count, const MoveProbabilities& moves, std::mt19937_64& rng) {
    const double swap = gate_count >= 2 ? moves.swap : 0.0;
    const double total = moves.replace + moves.rewire + swap;
    if (!(total > 0.0)) throw ParameterError("move probabilities must have a positive sum");
    const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    if (u < moves.replace) return Move::Replace;
    if (u < moves.replace + moves.rewire || swap == 0.0) return Move::Rewire;
    return Move::Swap;
}

// Up to this many redraws when a draw happens to reproduce the original gate.
constexpr int kRedrawLimit = 1000;

}  // namespace

Circuit hillclimb_mutate(const Circuit& circuit, const AngleSet& angles, std::mt19937_64& rng,
                         const MoveProbabilities& moves) {
    const int n = circuit.num_qubits;
    if (n < 2) throw ParameterError("hill-climb moves need at least 2 qubits");
    if (circuit.gates.empty()) throw ParameterError("hill-climb moves need at least one gate");
    if (moves.replace < 0 || moves.rewire < 0 || moves.swap < 0) throw ParameterError("negative move probability");

    Circuit out = circuit;
    auto& gates = out.gates;
    std::uniform_int_distribution<std::size_t> pick(0, gates.size() - 1);
    std::uniform_int_distribution<int> wire(0, n - 1);

    switch (draw_move(gates.size(), moves, rng)) {
        case Move::Replace: {
            const std::size_t i = pick(rng);
            Gate fresh = random_gate(n, angles, rng);
            for (int k = 0; k < kRedrawLimit && fresh == gates[i]; ++k) fresh = random_gate(n, angles, rng);
            gates[i] = fresh;
            break;
        }
        case Move::Rewire: {
            const std::size_t i = pick(rng);
            const Gate original = gates[i];
            Gate& g = gates[i];
            for (int k = 0; k < kRedrawLimit && g == original; ++k) {
                if (g.kind == GateKind::CNOT) {
                    g.control = wire(rng);
                    g.target = std::uniform_int_distribution<int>(0, n - 2)(rng);
                    if (g.target >= g.control) ++g.target;
                } else {
                    g.target = wire(rng);
                }
            }
            break;
        }
        case Move::Swap: {
            const std::size_t i = pick(rng);
            std::size_t j = std::uniform_int_distribution<std::size_t>(0, gates.size() - 2)(rng);
            if (j >= i) ++j;
            std::swap(gates[i], gates[j]);
            break;
        }
    }
    return out;
}

HillClimbResult hillclimb_run(const Circuit& initial, double initial_q, int budget, const AngleSet& angles,
                              std::uint64_t seed, const Evaluator& evaluator, const MoveProbabilities& moves) {
    if (budget < 1) throw ParameterError("hill-climb budget must be at least 1");
    std::mt19937_64 rng(seed);
    HillClimbResult result;
    result.best_circuit = initial;
    result.best_q = initial_q;
    result.initial_q = initial_q;
    result.candidate_q.reserve(static_cast<std::size_t>(budget));
    result.incumbent_q.reserve(static_cast<std::size_t>(budget));
    for (int step = 0; step < budget; ++step) {
        Circuit candidate = hillclimb_mutate(result.best_circuit, angles, rng, moves);
        const double q = evaluator(candidate);
        ++result.evaluations;
        result.candidate_q.push_back(q);
        if (q > result.best_q) {
            result.best_q = q;
            result.best_circuit = std::move(candidate);
        }
        result.incumbent_q.push_back(result.best_q);
    }
    return result;
}

HillClimbProposer::HillClimbProposer(std::uint64_t seed, MoveProbabilities moves) : rng_(seed), moves_(moves) {}

ProposalOutcome HillClimbProposer::propose(const ProposalContext& context) {
    const auto start = std::chrono::steady_clock::now();
    if (!incumbent_ || context.current_q > incumbent_q_) {
        incumbent_ = context.current_circuit;
        incumbent_q_ = context.current_q;
    }
    const Circuit candidate = hillclimb_mutate(*incumbent_, context.allowed_angles, rng_, moves_);
    ProposalOutcome outcome = interpret_proposal(serialize(candidate), candidate.num_qubits, id());
    outcome.latency = std::chrono::steady_clock::now() - start;
    return outcome;
}

ReplayProposer::ReplayProposer(std::vector<std::string> script) : script_(std::move(script)) {}

ProposalOutcome ReplayProposer::propose(const ProposalContext& context) {
    if (next_ >= script_.size()) {
        ProposalOutcome outcome;
        outcome.proposer_id = id();
        outcome.parsed = ProposalFailure{"script exhausted"};
        return outcome;
    }
    return interpret_proposal(script_[next_++], context.current_circuit.num_qubits, id());
}

std::vector<std::string> split_replay_script(std::string_view text) {
    std::vector<std::string> entries;
    std::string current;
    bool has_content = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (line.ends_with('\r')) line.remove_suffix(1);
        if (line == "---") {
            entries.push_back(std::move(current));
            current.clear();
            has_content = false;
        } else {
            if (has_content) current.push_back('\n');
            current.append(line);
            has_content = true;
        }
        if (eol == text.size()) break;
        pos = eol + 1;
    }
    // a trailing newline leaves an empty final line, not an entry
    while (!current.empty() && current.back() == '\n') current.pop_back();
    if (!current.empty()) entries.push_back(std::move(current));
    return entries;
}

}  // namespace qsynth

#include <gtest/gtest.h>

#include <map>

#include "qsynth/errors.hpp"
#include "qsynth/evaluator.hpp"
#include "qsynth/proposer.hpp"
#include "support.hpp"

using namespace qsynth;

namespace {

// Number of positions at which two equal-length gate lists differ.
int diff_count(const Circuit& a, const Circuit& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.gates.size(); ++i) d += !(a.gates[i] == b.gates[i]);
    return d;
}

}  // namespace

TEST(hillclimb_mutate, one_local_edit_within_the_gate_set) {
    std::mt19937_64 rng(1);
    const AngleSet angles = AngleSet::standard();
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const Circuit c = random_circuit(6, 10, angles, seed);
        const Circuit m = hillclimb_mutate(c, angles, rng);
        ASSERT_EQ(m.size(), c.size());
        ASSERT_TRUE(validate(m).ok());
        ASSERT_TRUE(validate_against_angle_set(m, angles).ok());
        EXPECT_LE(diff_count(c, m), 2);
    }
}

TEST(hillclimb_mutate, replace_and_rewire_always_change_a_gate) {
    std::mt19937_64 rng(2);
    const AngleSet angles = AngleSet::standard();
    for (const MoveProbabilities moves : {MoveProbabilities{1, 0, 0}, MoveProbabilities{0, 1, 0}}) {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const Circuit c = random_circuit(2, 5, angles, seed);
            const Circuit m = hillclimb_mutate(c, angles, rng, moves);
            EXPECT_EQ(diff_count(c, m), 1);
        }
    }
}

TEST(hillclimb_mutate, rewire_keeps_kind_and_angle) {
    std::mt19937_64 rng(3);
    const Circuit c = random_circuit(5, 12, AngleSet::standard(), 9);
    for (int i = 0; i < 200; ++i) {
        const Circuit m = hillclimb_mutate(c, AngleSet::standard(), rng, {0, 1, 0});
        for (std::size_t k = 0; k < c.size(); ++k) {
            EXPECT_EQ(m.gates[k].kind, c.gates[k].kind);
            if (c.gates[k].kind == GateKind::RY) EXPECT_EQ(m.gates[k].angle, c.gates[k].angle);
        }
    }
}

TEST(hillclimb_mutate, swap_exchanges_two_positions) {
    std::mt19937_64 rng(4);
    const Circuit c(3, {Gate::h(0), Gate::cnot(0, 1), Gate::ry(3.0, 2)});
    for (int i = 0; i < 100; ++i) {
        const Circuit m = hillclimb_mutate(c, AngleSet::standard(), rng, {0, 0, 1});
        EXPECT_EQ(diff_count(c, m), 2);
        EXPECT_TRUE(std::is_permutation(m.gates.begin(), m.gates.end(), c.gates.begin()));
    }
}

TEST(hillclimb_mutate, move_frequencies_follow_the_probabilities) {
    // Distinct gates, so every move is identifiable from the diff.
    const Circuit c(4, {Gate::h(0), Gate::ry(3.0, 1), Gate::cnot(2, 3), Gate::ry(10.0, 2), Gate::h(3)});
    std::mt19937_64 rng(5);
    std::map<std::string, int> counts;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        const Circuit m = hillclimb_mutate(c, AngleSet::standard(), rng);
        if (diff_count(c, m) == 2) {
            ++counts["swap"];
            continue;
        }
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (m.gates[k] == c.gates[k]) continue;
            const bool same_shape = m.gates[k].kind == c.gates[k].kind &&
                                    (m.gates[k].kind != GateKind::RY || m.gates[k].angle == c.gates[k].angle);
            // a replace can land on a rewire-looking gate; that only inflates rewire slightly
            ++counts[same_shape ? "rewire-like" : "replace"];
        }
    }
    EXPECT_NEAR(counts["swap"] / double(trials), 0.1, 0.01);
    EXPECT_GT(counts["replace"] / double(trials), 0.3);
    EXPECT_GT(counts["rewire-like"] / double(trials), 0.4);
}

TEST(hillclimb_mutate, rejects_degenerate_inputs) {
    std::mt19937_64 rng(0);
    EXPECT_THROW(hillclimb_mutate(Circuit(1, {Gate::h(0)}), AngleSet::standard(), rng), ParameterError);
    EXPECT_THROW(hillclimb_mutate(Circuit(3, {}), AngleSet::standard(), rng), ParameterError);
}

TEST(hillclimb_run, calls_the_evaluator_exactly_budget_times) {
    int calls = 0;
    const Evaluator counting = [&](const Circuit& c) {
        ++calls;
        return evaluate_factored(c).q;
    };
    const Circuit start = random_circuit(8, 10, AngleSet::standard(), 3);
    const auto r = hillclimb_run(start, evaluate_factored(start).q, 45, AngleSet::standard(), 7, counting);
    EXPECT_EQ(calls, 45);
    EXPECT_EQ(r.evaluations, 45);
    EXPECT_EQ(r.candidate_q.size(), 45u);
}

TEST(hillclimb_run, incumbent_trace_is_monotone_and_reproducible) {
    const Circuit start = random_circuit(10, 12, AngleSet::standard(), 11);
    const Evaluator ev = make_evaluator(EvaluatorKind::Factored);
    const auto a = hillclimb_run(start, ev(start), 60, AngleSet::standard(), 2, ev);
    const auto b = hillclimb_run(start, ev(start), 60, AngleSet::standard(), 2, ev);
    EXPECT_EQ(a.incumbent_q, b.incumbent_q);
    EXPECT_EQ(a.best_circuit, b.best_circuit);
    double prev = a.initial_q;
    for (double q : a.incumbent_q) {
        EXPECT_GE(q, prev);
        prev = q;
    }
    EXPECT_EQ(a.best_q, a.incumbent_q.back());
    EXPECT_NEAR(ev(a.best_circuit), a.best_q, 0.0);
}

TEST(hillclimb_run, ties_do_not_replace_the_incumbent) {
    const Circuit start(3, {Gate::h(0), Gate::h(1)});
    const Evaluator flat = [](const Circuit&) { return 0.25; };
    const auto r = hillclimb_run(start, 0.25, 30, AngleSet::standard(), 1, flat);
    EXPECT_EQ(r.best_circuit, start);
    EXPECT_EQ(r.best_q, 0.25);
}

TEST(hillclimb_proposer, follows_its_own_incumbent) {
    HillClimbProposer p(9);
    const Circuit start = random_circuit(4, 6, AngleSet::standard(), 0);
    ProposalContext ctx{start, 0.3, std::nullopt, 1, 1, AngleSet::standard(), 6};
    const ProposalOutcome first = p.propose(ctx);
    ASSERT_TRUE(first.ok());
    EXPECT_EQ(first.proposer_id, "hillclimb");
    EXPECT_LE(diff_count(start, *first.circuit()), 2);

    // A worse current circuit is not adopted: the next proposal is again one move from `start`.
    Circuit worse = start;
    worse.gates[0] = Gate::cnot(2, 3);
    ctx.current_circuit = worse;
    ctx.current_q = 0.1;
    const ProposalOutcome second = p.propose(ctx);
    ASSERT_TRUE(second.ok());
    EXPECT_LE(diff_count(start, *second.circuit()), 2);
}

TEST(replay_proposer, returns_script_then_fails) {
    ReplayProposer p({"[('H', [0])]", "garbage", "[('CNOT', [0, 7])]"});
    ProposalContext ctx{Circuit(2, {Gate::h(0)}), 0.0, std::nullopt, 1, 1, AngleSet::standard(), 1};
    const auto a = p.propose(ctx);
    ASSERT_TRUE(a.ok());
    EXPECT_EQ(*a.circuit(), Circuit(2, {Gate::h(0)}));
    const auto b = p.propose(ctx);
    ASSERT_TRUE(std::holds_alternative<ParseError>(b.parsed));
    EXPECT_EQ(b.raw_text, "garbage");
    const auto c = p.propose(ctx);
    ASSERT_TRUE(std::holds_alternative<InvalidProposal>(c.parsed));
    const auto d = p.propose(ctx);
    ASSERT_TRUE(std::holds_alternative<ProposalFailure>(d.parsed));
    EXPECT_EQ(std::get<ProposalFailure>(d.parsed).reason, "script exhausted");
    EXPECT_EQ(p.consumed(), 3u);
}

TEST(split_replay_script, separators_and_newlines) {
    EXPECT_EQ(split_replay_script("a\n---\nb\nc\n---\n"), (std::vector<std::string>{"a", "b\nc"}));
    EXPECT_EQ(split_replay_script("a\r\n---\r\nb"), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(split_replay_script("---\nx"), (std::vector<std::string>{"", "x"}));
    EXPECT_TRUE(split_replay_script("").empty());
    EXPECT_EQ(split_replay_script("a ---\nb"), (std::vector<std::string>{"a ---\nb"}));
}

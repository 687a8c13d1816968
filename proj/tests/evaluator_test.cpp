#include <gtest/gtest.h>

#include "qsynth/errors.hpp"
#include "qsynth/evaluator.hpp"
#include "support.hpp"

using namespace qsynth;

TEST(evaluate_factored, matches_dense_on_random_circuits) {
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        const int n = 2 + static_cast<int>(seed % 11);
        const Circuit c = random_circuit(n, 4 + static_cast<int>(seed % 20), AngleSet::standard(), seed);
        const MWReport dense = evaluate_dense(c);
        const MWReport factored = evaluate_factored(c);
        ASSERT_NEAR(dense.q, factored.q, 1e-12) << seed;
        ASSERT_EQ(dense.purities.size(), factored.purities.size());
        for (std::size_t i = 0; i < dense.purities.size(); ++i) EXPECT_NEAR(dense.purities[i], factored.purities[i], 1e-12);
    }
}

TEST(evaluate_factored, untouched_qubits_are_pure) {
    const MWReport r = evaluate_factored(Circuit(5, {Gate::h(0), Gate::cnot(0, 1)}));
    EXPECT_EQ(r.purities.size(), 5u);
    EXPECT_NEAR(r.purities[0], 0.5, 1e-15);
    EXPECT_NEAR(r.purities[1], 0.5, 1e-15);
    for (int i = 2; i < 5; ++i) EXPECT_EQ(r.purities[static_cast<std::size_t>(i)], 1.0);
    EXPECT_NEAR(r.q, 2.0 / 5.0, 1e-15);
}

TEST(evaluate_factored, handles_registers_beyond_the_dense_cap) {
    // 40 qubits, 20 disjoint Bell pairs: far too large densely, trivial factored.
    Circuit c(40, {});
    for (int i = 0; i < 40; i += 2) {
        c.gates.push_back(Gate::h(i));
        c.gates.push_back(Gate::cnot(i, i + 1));
    }
    EXPECT_NEAR(evaluate_factored(c).q, 1.0, 1e-14);
    EXPECT_THROW(evaluate_dense(c), ResourceError);
}

TEST(evaluate_factored, rejects_invalid_circuits) {
    EXPECT_THROW(evaluate_factored(Circuit(3, {Gate::cnot(1, 1)})), ParameterError);
}

TEST(evaluate, kinds_agree_on_reference_circuits) {
    for (const auto& name : testkit::reference_circuit_names()) {
        const Circuit c = testkit::reference_circuit(name);
        const double factored = make_evaluator(EvaluatorKind::Factored)(c);
        EXPECT_NEAR(evaluate(c, EvaluatorKind::Factored).q, factored, 0.0) << name;
        EXPECT_NEAR(evaluate(testkit::reference_circuit(name), EvaluatorKind::DenseF32).q, factored, 1e-4) << name;
    }
}

TEST(evaluate, dense_matches_factored_on_one_reference_circuit) {
    // One full 25-qubit dense run keeps the suite fast while covering the large path.
    const Circuit c = testkit::reference_circuit("green_box_1");
    EXPECT_NEAR(evaluate_dense(c).q, evaluate_factored(c).q, 1e-12);
}

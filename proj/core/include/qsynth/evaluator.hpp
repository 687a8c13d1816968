#pragma once

#include <functional>

#include "qsynth/circuit.hpp"
#include "qsynth/statevector.hpp"

namespace qsynth {

// Scores a circuit by the Meyer-Wallach value of its output state.
using Evaluator = std::function<double(const Circuit&)>;

enum class EvaluatorKind {
    Dense,     // one full-register simulation in double precision
    DenseF32,  // same, single precision
    Factored,  // one simulation per interaction-graph component
};

// simulate + meyer_wallach on the full register.
MWReport evaluate_dense(const Circuit& circuit);
MWReport evaluate_dense_f32(const Circuit& circuit);

// Exact as well: the output state is a tensor product over interaction-graph
// components, and single-qubit purities only depend on a qubit's own factor.
// Each component must fit within kMaxQubits; the register as a whole may not.
MWReport evaluate_factored(const Circuit& circuit);

MWReport evaluate(const Circuit& circuit, EvaluatorKind kind);

Evaluator make_evaluator(EvaluatorKind kind);

}  // namespace qsynth

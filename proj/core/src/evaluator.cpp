#include "qsynth/evaluator.hpp"

#include "qsynth/analyzer.hpp"
#include "qsynth/errors.hpp"

namespace qsynth {

MWReport evaluate_dense(const Circuit& circuit) { return meyer_wallach(simulate<double>(circuit)); }

MWReport evaluate_dense_f32(const Circuit& circuit) { return meyer_wallach(simulate<float>(circuit)); }

MWReport evaluate_factored(const Circuit& circuit) {
    if (auto v = validate(circuit); !v) throw ParameterError("invalid circuit: " + v.describe());
    const InteractionGraph graph = interaction_graph(circuit);
    std::vector<double> purities(static_cast<std::size_t>(circuit.num_qubits), 1.0);
    for (const auto& component : graph.components) {
        Circuit sub = restrict_circuit(circuit, component);
        if (sub.gates.empty()) continue;  // untouched qubits stay |0>
        const std::vector<double> local = qubit_purities(simulate<double>(sub));
        for (std::size_t k = 0; k < component.size(); ++k) {
            purities[static_cast<std::size_t>(component[k])] = local[k];
        }
    }
    return mw_from_purities(std::move(purities));
}

MWReport evaluate(const Circuit& circuit, EvaluatorKind kind) {
    switch (kind) {
        case EvaluatorKind::Dense: return evaluate_dense(circuit);
        case EvaluatorKind::DenseF32: return evaluate_dense_f32(circuit);
        case EvaluatorKind::Factored: return evaluate_factored(circuit);
    }
    throw ParameterError("unknown evaluator kind");
}

Evaluator make_evaluator(EvaluatorKind kind) {
    return [kind](const Circuit& circuit) { return evaluate(circuit, kind).q; };
}

}  // namespace qsynth

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/statevector.hpp"

namespace qsynth {

/// Qubits as nodes, one undirected edge per distinct CNOT-coupled pair.
struct InteractionGraph {
    int num_qubits = 0;
    std::vector<std::pair<int, int>> edges;      // (low, high), sorted, unique
    std::vector<std::vector<int>> components;    // each sorted; ordered by smallest member
};

InteractionGraph interaction_graph(const Circuit& circuit);

// Gates touching `qubits`, rewired so qubits[k] becomes wire k. Every gate of
// the circuit must act either entirely inside or entirely outside the set.
Circuit restrict_circuit(const Circuit& circuit, const std::vector<int>& qubits);

// True iff no RY gate has an angle that differs from 0 modulo 2*pi.
bool is_clifford(const Circuit& circuit);

enum class StateClass { GHZ, BELL, PLUS, ZERO, ROTATED_PAIR, UNCLASSIFIED };

inline constexpr double kClassificationFidelity = 0.999;
inline constexpr int kMaxClassifiedComponent = 12;

struct ComponentReport {
    std::vector<int> qubits;
    StateClass kind = StateClass::UNCLASSIFIED;
    double fidelity = 0.0;               // best candidate fidelity, up to global phase
    std::optional<double> theta;          // ROTATED_PAIR: cos(theta/2)|00> + sin(theta/2)|11>
    std::vector<double> purities;         // aligned with `qubits`
    double q = 0.0;                       // Meyer-Wallach of the component alone
    std::string note;                     // why UNCLASSIFIED, when there is a reason

    // "GHZ_3", "BELL", "PLUS", "ZERO", "ROTATED_PAIR", "UNCLASSIFIED"
    std::string label() const;
};

struct AnalysisReport {
    MWReport mw;                          // global, assembled from component purities
    InteractionGraph graph;
    std::vector<ComponentReport> components;
    bool clifford = false;

    // Counts per label, most frequent first: "11 × BELL, 1 × GHZ_3".
    std::string summary() const;
};

/**
 * Simulates each interaction-graph component on its own (CNOTs never cross
 * components, so the full state is their tensor product) and matches it
 * against GHZ_k, BELL, PLUS, ZERO and ROTATED_PAIR. The first candidate with
 * fidelity >= kClassificationFidelity wins. Components above
 * kMaxClassifiedComponent qubits are reported UNCLASSIFIED.
 */
AnalysisReport classify_components(const Circuit& circuit);

}  // namespace qsynth

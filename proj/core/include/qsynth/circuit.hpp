#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace qsynth {

enum class GateKind : std::uint8_t { H, RY, CNOT };

// Upper-case mnemonic used in the gate-list text format ("H", "RY", "CNOT").
const char* gate_name(GateKind kind);

/**
 * One gate of the restricted set {H, RY, CNOT}.
 *
 * For H and RY only `target` is meaningful; CNOT uses (control, target).
 * `angle` is in radians and only meaningful for RY. Gates are plain values:
 * a Gate with an out-of-range wire can exist, `validate` reports it.
 */
struct Gate {
    GateKind kind = GateKind::H;
    int control = -1;
    int target = 0;
    double angle = 0.0;

    static Gate h(int wire) { return Gate{GateKind::H, -1, wire, 0.0}; }
    static Gate ry(double angle, int wire) { return Gate{GateKind::RY, -1, wire, angle}; }
    static Gate cnot(int control, int target) { return Gate{GateKind::CNOT, control, target, 0.0}; }

    bool is_two_qubit() const { return kind == GateKind::CNOT; }

    // Wires in argument order: {target} or {control, target}.
    std::vector<int> wires() const;

    bool operator==(const Gate& other) const;
};

/// Ordered gate list over a fixed register. Application order is list order.
struct Circuit {
    int num_qubits = 0;
    std::vector<Gate> gates;

    Circuit() = default;
    Circuit(int n, std::vector<Gate> g) : num_qubits(n), gates(std::move(g)) {}
    Circuit(int n, std::initializer_list<Gate> g) : num_qubits(n), gates(g) {}

    std::size_t size() const { return gates.size(); }
    bool operator==(const Circuit&) const = default;
};

/// Allowed RY angles in radians. Never empty, every value finite.
class AngleSet {
public:
    explicit AngleSet(std::vector<double> angles);

    // {3.0, 10.0, 25.0}
    static AngleSet standard();

    bool contains(double angle) const;
    const std::vector<double>& values() const { return angles_; }
    bool operator==(const AngleSet&) const = default;

private:
    std::vector<double> angles_;
};

struct Violation {
    std::size_t gate_index = 0;
    std::string reason;

    bool operator==(const Violation&) const = default;
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    explicit operator bool() const { return ok(); }
    // "gate 3: wire 25 out of range; gate 7: ..." or "ok".
    std::string describe() const;
};

// Checks wire ranges, arity and control != target. Total over any gate list.
ValidationResult validate(const Circuit& circuit);

ValidationResult validate_against_angle_set(const Circuit& circuit, const AngleSet& angles);

// Draws one gate: kind uniform over {H, RY, CNOT}, wires uniform without
// replacement, RY angle uniform over `angles`. Requires num_qubits >= 2.
Gate random_gate(int num_qubits, const AngleSet& angles, std::mt19937_64& rng);

/// Samples `num_gates` independent random gates; deterministic in `seed`.
/// Throws ParameterError if num_qubits < 2 or num_gates < 1.
Circuit random_circuit(int num_qubits, int num_gates, const AngleSet& angles, std::uint64_t seed);

// Relabels every wire w as permutation[w]. permutation must be a bijection on [0, n).
Circuit permute_qubits(const Circuit& circuit, const std::vector<int>& permutation);

}  // namespace qsynth

#include "qsynth/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qsynth/errors.hpp"

namespace qsynth {

const char* gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::RY: return "RY";
        case GateKind::CNOT: return "CNOT";
    }
    return "?";
}

std::vector<int> Gate::wires() const {
    if (kind == GateKind::CNOT) return {control, target};
    return {target};
}

bool Gate::operator==(const Gate& other) const {
    if (kind != other.kind || target != other.target) return false;
    switch (kind) {
        case GateKind::H: return true;
        case GateKind::RY: return angle == other.angle;
        case GateKind::CNOT: return control == other.control;
    }
    return false;
}

AngleSet::AngleSet(std::vector<double> angles) : angles_(std::move(angles)) {
    if (angles_.empty()) throw ParameterError("angle set must not be empty");
    for (double a : angles_) {
        if (!std::isfinite(a)) throw ParameterError("angle set contains a non-finite value");
    }
}

AngleSet AngleSet::standard() { return AngleSet({3.0, 10.0, 25.0}); }

bool AngleSet::contains(double angle) const {
    return std::find(angles_.begin(), angles_.end(), angle) != angles_.end();
}

std::string ValidationResult::describe() const {
    if (ok()) return "ok";
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) out << "; ";
        out << violations[i].reason << " at gate " << violations[i].gate_index;
    }
    return out.str();
}

ValidationResult validate(const Circuit& circuit) {
    ValidationResult result;
    const int n = circuit.num_qubits;
    if (n < 1) result.violations.push_back({0, "register has no qubits"});
    auto check_wire = [&](std::size_t index, int wire) {
        if (wire < 0 || wire >= n) {
            result.violations.push_back({index, "wire " + std::to_string(wire) + " out of range"});
        }
    };
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const Gate& g = circuit.gates[i];
        switch (g.kind) {
            case GateKind::H:
                check_wire(i, g.target);
                break;
            case GateKind::RY:
                check_wire(i, g.target);
                if (!std::isfinite(g.angle)) result.violations.push_back({i, "non-finite angle"});
                break;
            case GateKind::CNOT:
                check_wire(i, g.control);
                check_wire(i, g.target);
                if (g.control == g.target) result.violations.push_back({i, "control equals target"});
                break;
        }
    }
    return result;
}

ValidationResult validate_against_angle_set(const Circuit& circuit, const AngleSet& angles) {
    ValidationResult result;
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const Gate& g = circuit.gates[i];
        if (g.kind == GateKind::RY && !angles.contains(g.angle)) {
            std::ostringstream reason;
            reason << "angle " << g.angle << " not in allowed set";
            result.violations.push_back({i, reason.str()});
        }
    }
    return result;
}

Gate random_gate(int num_qubits, const AngleSet& angles, std::mt19937_64& rng) {
    if (num_qubits < 2) throw ParameterError("random gates need at least 2 qubits");
    std::uniform_int_distribution<int> kind_dist(0, 2);
    std::uniform_int_distribution<int> wire_dist(0, num_qubits - 1);
    switch (kind_dist(rng)) {
        case 0:
            return Gate::h(wire_dist(rng));
        case 1: {
            std::uniform_int_distribution<std::size_t> angle_dist(0, angles.values().size() - 1);
            const double angle = angles.values()[angle_dist(rng)];
            return Gate::ry(angle, wire_dist(rng));
        }
        default: {
            const int control = wire_dist(rng);
            // second wire uniform over the remaining n-1
            int target = std::uniform_int_distribution<int>(0, num_qubits - 2)(rng);
            if (target >= control) ++target;
            return Gate::cnot(control, target);
        }
    }
}

Circuit random_circuit(int num_qubits, int num_gates, const AngleSet& angles, std::uint64_t seed) {
    if (num_qubits < 2) throw ParameterError("random_circuit needs n >= 2, got " + std::to_string(num_qubits));
    if (num_gates < 1) throw ParameterError("random_circuit needs m >= 1, got " + std::to_string(num_gates));
    std::mt19937_64 rng(seed);
    Circuit circuit;
    circuit.num_qubits = num_qubits;
    circuit.gates.reserve(static_cast<std::size_t>(num_gates));
    for (int i = 0; i < num_gates; ++i) circuit.gates.push_back(random_gate(num_qubits, angles, rng));
    return circuit;
}

Circuit permute_qubits(const Circuit& circuit, const std::vector<int>& permutation) {
    const auto n = static_cast<std::size_t>(circuit.num_qubits);
    if (permutation.size() != n) throw ParameterError("permutation size does not match qubit count");
    std::vector<int> sorted = permutation;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    if (sorted != identity) throw ParameterError("not a permutation of the register");

    Circuit out = circuit;
    for (Gate& g : out.gates) {
        g.target = permutation.at(static_cast<std::size_t>(g.target));
        if (g.kind == GateKind::CNOT) g.control = permutation.at(static_cast<std::size_t>(g.control));
    }
    return out;
}

}  // namespace qsynth

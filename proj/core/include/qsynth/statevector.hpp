#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qsynth/circuit.hpp"

namespace qsynth {

// Largest register the dense simulator accepts (2^26 doubles ~ 1 GiB).
inline constexpr int kMaxQubits = 26;
// Largest register the density-matrix oracle accepts.
inline constexpr int kMaxOracleQubits = 10;

/**
 * Dense pure state over `num_qubits` qubits. Amplitude index bit i holds the
 * computational-basis value of qubit i. Construction yields |0...0>.
 *
 * `Real` is double by default; float halves memory for 24+ qubit registers.
 */
template <typename Real>
class BasicStateVector {
public:
    using Amplitude = std::complex<Real>;

    explicit BasicStateVector(int num_qubits);
    // Takes ownership of 2^num_qubits amplitudes; throws ParameterError on size mismatch.
    BasicStateVector(int num_qubits, std::vector<Amplitude> amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amplitudes_.size(); }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    const Amplitude& operator[](std::size_t index) const { return amplitudes_[index]; }

    // Applies one gate in place. Throws ParameterError for a bad wire.
    void apply(const Gate& gate);

    // Sum of |a|^2, accumulated pairwise in double.
    double norm_squared() const;

private:
    void apply_hadamard(int wire);
    void apply_ry(double angle, int wire);
    void apply_cnot(int control, int target);

    int num_qubits_;
    std::vector<Amplitude> amplitudes_;
};

using StateVector = BasicStateVector<double>;
using StateVectorF32 = BasicStateVector<float>;

extern template class BasicStateVector<double>;
extern template class BasicStateVector<float>;

// Value-returning form of BasicStateVector::apply.
StateVector apply_gate(StateVector state, const Gate& gate);

/// Runs the circuit on |0...0>. Throws ParameterError if the circuit fails
/// `validate`, ResourceError if num_qubits exceeds kMaxQubits.
template <typename Real = double>
BasicStateVector<Real> simulate(const Circuit& circuit);

extern template BasicStateVector<double> simulate<double>(const Circuit&);
extern template BasicStateVector<float> simulate<float>(const Circuit&);

/// Single-qubit reduced purities Tr(rho_i^2), one per qubit.
template <typename Real>
std::vector<double> qubit_purities(const BasicStateVector<Real>& state);

extern template std::vector<double> qubit_purities<double>(const StateVector&);
extern template std::vector<double> qubit_purities<float>(const StateVectorF32&);

struct MWReport {
    double q = 0.0;
    std::vector<double> purities;

    bool operator==(const MWReport&) const = default;
};

// Q = (2/n) * sum_i (1 - purity_i). Throws ParameterError on an empty vector.
MWReport mw_from_purities(std::vector<double> purities);

/// Meyer-Wallach global entanglement of a normalized state.
template <typename Real>
MWReport meyer_wallach(const BasicStateVector<Real>& state) {
    return mw_from_purities(qubit_purities(state));
}

/// Independent check: builds |psi><psi| in full, traces out all but one
/// qubit explicitly, and returns (2/n) sum (1 - Tr rho_i^2). n <= 10.
double meyer_wallach_oracle(const StateVector& state);

}  // namespace qsynth

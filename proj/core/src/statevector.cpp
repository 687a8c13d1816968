#include "qsynth/statevector.hpp"

#include <array>
#include <cmath>
#include <string>

#include "qsynth/errors.hpp"

namespace qsynth {

namespace {

// Kernels below this many amplitudes stay single-threaded.
constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;
// Pairs summed naively before pairwise combination.
constexpr std::size_t kChunk = std::size_t{1} << 12;

inline std::size_t insert_zero_bit(std::size_t value, int bit) {
    const std::size_t low = value & ((std::size_t{1} << bit) - 1);
    return ((value >> bit) << (bit + 1)) | low;
}

void check_register(int num_qubits) {
    if (num_qubits < 1) throw ParameterError("register needs at least one qubit");
    if (num_qubits > kMaxQubits) {
        throw ResourceError(std::to_string(num_qubits) + " qubits exceeds the dense simulator limit of " +
                            std::to_string(kMaxQubits));
    }
}

// Pairwise reduction over per-chunk partial sums; deterministic for any
// thread count since the chunk layout depends only on the register size.
template <std::size_t K>
std::array<double, K> pairwise_sum(std::vector<std::array<double, K>>& partials) {
    std::size_t count = partials.size();
    while (count > 1) {
        const std::size_t half = (count + 1) / 2;
        for (std::size_t i = 0; i + half < count; ++i) {
            for (std::size_t k = 0; k < K; ++k) partials[i][k] += partials[i + half][k];
        }
        count = half;
    }
    if (partials.empty()) return {};
    return partials[0];
}

}  // namespace

template <typename Real>
BasicStateVector<Real>::BasicStateVector(int num_qubits) : num_qubits_(num_qubits) {
    check_register(num_qubits);
    amplitudes_.assign(std::size_t{1} << num_qubits, Amplitude(0, 0));
    amplitudes_[0] = Amplitude(1, 0);
}

template <typename Real>
BasicStateVector<Real>::BasicStateVector(int num_qubits, std::vector<Amplitude> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    check_register(num_qubits);
    if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
        throw ParameterError("expected 2^" + std::to_string(num_qubits) + " amplitudes, got " +
                             std::to_string(amplitudes_.size()));
    }
}

template <typename Real>
void BasicStateVector<Real>::apply(const Gate& gate) {
    auto check_wire = [this](int wire) {
        if (wire < 0 || wire >= num_qubits_) {
            throw ParameterError("wire " + std::to_string(wire) + " out of range for " + std::to_string(num_qubits_) +
                                 " qubits");
        }
    };
    switch (gate.kind) {
        case GateKind::H:
            check_wire(gate.target);
            apply_hadamard(gate.target);
            break;
        case GateKind::RY:
            check_wire(gate.target);
            apply_ry(gate.angle, gate.target);
            break;
        case GateKind::CNOT:
            check_wire(gate.control);
            check_wire(gate.target);
            if (gate.control == gate.target) throw ParameterError("CNOT control equals target");
            apply_cnot(gate.control, gate.target);
            break;
    }
}

template <typename Real>
void BasicStateVector<Real>::apply_hadamard(int wire) {
    const std::size_t stride = std::size_t{1} << wire;
    const std::size_t pairs = amplitudes_.size() / 2;
    const Real inv_sqrt2 = static_cast<Real>(1.0 / std::sqrt(2.0));
    Amplitude* a = amplitudes_.data();
#pragma omp parallel for schedule(static) if (pairs >= kParallelThreshold)
    for (std::size_t j = 0; j < pairs; ++j) {
        const std::size_t i0 = insert_zero_bit(j, wire);
        const std::size_t i1 = i0 | stride;
        const Amplitude x = a[i0];
        const Amplitude y = a[i1];
        a[i0] = (x + y) * inv_sqrt2;
        a[i1] = (x - y) * inv_sqrt2;
    }
}

template <typename Real>
void BasicStateVector<Real>::apply_ry(double angle, int wire) {
    // RY(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]
    const std::size_t stride = std::size_t{1} << wire;
    const std::size_t pairs = amplitudes_.size() / 2;
    const Real c = static_cast<Real>(std::cos(angle / 2));
    const Real s = static_cast<Real>(std::sin(angle / 2));
    Amplitude* a = amplitudes_.data();
#pragma omp parallel for schedule(static) if (pairs >= kParallelThreshold)
    for (std::size_t j = 0; j < pairs; ++j) {
        const std::size_t i0 = insert_zero_bit(j, wire);
        const std::size_t i1 = i0 | stride;
        const Amplitude x = a[i0];
        const Amplitude y = a[i1];
        a[i0] = c * x - s * y;
        a[i1] = s * x + c * y;
    }
}

template <typename Real>
void BasicStateVector<Real>::apply_cnot(int control, int target) {
    const int low = std::min(control, target);
    const int high = std::max(control, target);
    const std::size_t control_bit = std::size_t{1} << control;
    const std::size_t target_bit = std::size_t{1} << target;
    const std::size_t quads = amplitudes_.size() / 4;
    Amplitude* a = amplitudes_.data();
#pragma omp parallel for schedule(static) if (quads >= kParallelThreshold)
    for (std::size_t j = 0; j < quads; ++j) {
        const std::size_t base = insert_zero_bit(insert_zero_bit(j, low), high) | control_bit;
        std::swap(a[base], a[base | target_bit]);
    }
}

template <typename Real>
double BasicStateVector<Real>::norm_squared() const {
    const std::size_t total = amplitudes_.size();
    const std::size_t chunks = (total + kChunk - 1) / kChunk;
    std::vector<std::array<double, 1>> partials(chunks);
    const Amplitude* a = amplitudes_.data();
#pragma omp parallel for schedule(static) if (total >= kParallelThreshold)
    for (std::size_t c = 0; c < chunks; ++c) {
        double acc = 0.0;
        const std::size_t end = std::min(total, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) acc += std::norm(std::complex<double>(a[i]));
        partials[c][0] = acc;
    }
    return pairwise_sum(partials)[0];
}

template class BasicStateVector<double>;
template class BasicStateVector<float>;

StateVector apply_gate(StateVector state, const Gate& gate) {
    state.apply(gate);
    return state;
}

template <typename Real>
BasicStateVector<Real> simulate(const Circuit& circuit) {
    check_register(circuit.num_qubits);
    if (auto v = validate(circuit); !v) throw ParameterError("invalid circuit: " + v.describe());
    BasicStateVector<Real> state(circuit.num_qubits);
    for (const Gate& g : circuit.gates) state.apply(g);
    return state;
}

template BasicStateVector<double> simulate<double>(const Circuit&);
template BasicStateVector<float> simulate<float>(const Circuit&);

template <typename Real>
std::vector<double> qubit_purities(const BasicStateVector<Real>& state) {
    const int n = state.num_qubits();
    const std::size_t pairs = state.size() / 2;
    const std::size_t chunks = (pairs + kChunk - 1) / kChunk;
    const auto* a = state.amplitudes().data();
    std::vector<double> purities(static_cast<std::size_t>(n));
    std::vector<std::array<double, 4>> partials(chunks);

    for (int wire = 0; wire < n; ++wire) {
        const std::size_t stride = std::size_t{1} << wire;
        // reduced density matrix entries rho00, rho11, Re rho01, Im rho01
#pragma omp parallel for schedule(static) if (pairs >= kParallelThreshold)
        for (std::size_t c = 0; c < chunks; ++c) {
            double r00 = 0.0, r11 = 0.0, re01 = 0.0, im01 = 0.0;
            const std::size_t end = std::min(pairs, (c + 1) * kChunk);
            for (std::size_t j = c * kChunk; j < end; ++j) {
                const std::size_t i0 = insert_zero_bit(j, wire);
                const std::complex<double> x(a[i0]);
                const std::complex<double> y(a[i0 | stride]);
                r00 += std::norm(x);
                r11 += std::norm(y);
                const std::complex<double> cross = x * std::conj(y);
                re01 += cross.real();
                im01 += cross.imag();
            }
            partials[c] = {r00, r11, re01, im01};
        }
        const auto [r00, r11, re01, im01] = pairwise_sum(partials);
        purities[static_cast<std::size_t>(wire)] = r00 * r00 + r11 * r11 + 2.0 * (re01 * re01 + im01 * im01);
    }
    return purities;
}

template std::vector<double> qubit_purities<double>(const StateVector&);
template std::vector<double> qubit_purities<float>(const StateVectorF32&);

MWReport mw_from_purities(std::vector<double> purities) {
    if (purities.empty()) throw ParameterError("Meyer-Wallach needs at least one qubit");
    double deficit = 0.0;
    for (double p : purities) deficit += 1.0 - p;
    MWReport report;
    report.q = 2.0 * deficit / static_cast<double>(purities.size());
    report.purities = std::move(purities);
    return report;
}

double meyer_wallach_oracle(const StateVector& state) {
    const int n = state.num_qubits();
    if (n > kMaxOracleQubits) {
        throw ResourceError("density-matrix oracle is limited to " + std::to_string(kMaxOracleQubits) + " qubits, got " +
                            std::to_string(n));
    }
    const std::size_t dim = state.size();
    std::vector<std::complex<double>> rho(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) rho[r * dim + c] = state[r] * std::conj(state[c]);
    }

    double deficit = 0.0;
    for (int wire = 0; wire < n; ++wire) {
        const std::size_t bit = std::size_t{1} << wire;
        std::complex<double> reduced[2][2] = {};
        for (std::size_t rest = 0; rest < dim; ++rest) {
            if (rest & bit) continue;
            for (int x = 0; x < 2; ++x) {
                for (int y = 0; y < 2; ++y) {
                    const std::size_t r = rest | (x ? bit : 0);
                    const std::size_t c = rest | (y ? bit : 0);
                    reduced[x][y] += rho[r * dim + c];
                }
            }
        }
        double purity = 0.0;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) purity += std::norm(reduced[x][y]);
        }
        deficit += 1.0 - purity;
    }
    return 2.0 * deficit / static_cast<double>(n);
}

}  // namespace qsynth

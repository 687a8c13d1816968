#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/gatelist.hpp"
#include "qsynth/statevector.hpp"

namespace qsynth::testkit {

inline std::string fixture_path(const std::string& name) { return std::string(QSYNTH_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name));
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// The four reference listings under fixtures/, all on 25 qubits.
inline Circuit reference_circuit(const std::string& name) {
    auto parsed = parse_proposal(read_fixture(name + ".txt"), 25);
    if (!parsed) throw std::runtime_error(name + ": " + parsed.error().describe());
    return std::move(parsed).value();
}

inline const std::vector<std::string>& reference_circuit_names() {
    static const std::vector<std::string> names = {"blue_box_1", "blue_box_2", "green_box_1", "green_box_2"};
    return names;
}

using Amplitudes = std::vector<std::complex<double>>;

inline StateVector ghz_state(int n) {
    Amplitudes a(std::size_t{1} << n);
    a.front() = a.back() = 1.0 / std::sqrt(2.0);
    return StateVector(n, std::move(a));
}

inline StateVector w_state(int n) {
    Amplitudes a(std::size_t{1} << n);
    for (int i = 0; i < n; ++i) a[std::size_t{1} << i] = 1.0 / std::sqrt(static_cast<double>(n));
    return StateVector(n, std::move(a));
}

inline StateVector plus_product(int n) {
    const std::size_t dim = std::size_t{1} << n;
    Amplitudes a(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    return StateVector(n, std::move(a));
}

// Bell pair on qubits 0,1 with qubits 2.. in |0>.
inline StateVector bell_times_zeros(int n) {
    Amplitudes a(std::size_t{1} << n);
    a[0] = a[3] = 1.0 / std::sqrt(2.0);
    return StateVector(n, std::move(a));
}

/**
 * Test-only reference simulator: builds each gate as a full 2^n x 2^n matrix
 * from Kronecker products / permutation and multiplies it into the state.
 * Shares nothing with the library kernels.
 */
class MatrixSimulator {
public:
    using Matrix = std::vector<std::complex<double>>;

    static Amplitudes run(const Circuit& circuit) {
        const std::size_t dim = std::size_t{1} << circuit.num_qubits;
        Amplitudes state(dim);
        state[0] = 1.0;
        for (const Gate& g : circuit.gates) state = multiply(gate_matrix(g, circuit.num_qubits), state);
        return state;
    }

    static Matrix gate_matrix(const Gate& g, int n) {
        const std::size_t dim = std::size_t{1} << n;
        Matrix m(dim * dim);
        if (g.kind == GateKind::CNOT) {
            for (std::size_t col = 0; col < dim; ++col) {
                std::size_t row = col;
                if ((col >> g.control) & 1) row ^= std::size_t{1} << g.target;
                m[row * dim + col] = 1.0;
            }
            return m;
        }
        std::complex<double> u[2][2];
        if (g.kind == GateKind::H) {
            const double s = 1.0 / std::sqrt(2.0);
            u[0][0] = s, u[0][1] = s, u[1][0] = s, u[1][1] = -s;
        } else {
            const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
            u[0][0] = c, u[0][1] = -s, u[1][0] = s, u[1][1] = c;
        }
        // kron over qubits, highest index leftmost; identity except at target
        Matrix acc = {1.0};
        std::size_t acc_dim = 1;
        for (int q = n - 1; q >= 0; --q) {
            std::complex<double> f[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
            if (q == g.target) {
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c) f[r][c] = u[r][c];
            }
            Matrix next(acc_dim * 2 * acc_dim * 2);
            for (std::size_t r = 0; r < acc_dim; ++r)
                for (std::size_t c = 0; c < acc_dim; ++c)
                    for (int fr = 0; fr < 2; ++fr)
                        for (int fc = 0; fc < 2; ++fc)
                            next[(r * 2 + static_cast<std::size_t>(fr)) * acc_dim * 2 + c * 2 + static_cast<std::size_t>(fc)] =
                                acc[r * acc_dim + c] * f[fr][fc];
            acc = std::move(next);
            acc_dim *= 2;
        }
        return acc;
    }

    static Amplitudes multiply(const Matrix& m, const Amplitudes& v) {
        const std::size_t dim = v.size();
        Amplitudes out(dim);
        for (std::size_t r = 0; r < dim; ++r) {
            std::complex<double> acc = 0.0;
            for (std::size_t c = 0; c < dim; ++c) acc += m[r * dim + c] * v[c];
            out[r] = acc;
        }
        return out;
    }
};

// |<a|b>|^2 for equal-length amplitude vectors.
template <typename A, typename B>
double fidelity(const A& a, const B& b) {
    std::complex<double> overlap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(std::complex<double>(a[i])) * std::complex<double>(b[i]);
    return std::norm(overlap);
}

}  // namespace qsynth::testkit

#include "qsynth/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qsynth/errors.hpp"

namespace qsynth {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            auto& p = parent_[static_cast<std::size_t>(x)];
            p = parent_[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }

private:
    std::vector<int> parent_;
};

double rotated_pair_fidelity(const StateVector& state, double theta) {
    const auto overlap = std::cos(theta / 2) * state[0] + std::sin(theta / 2) * state[3];
    return std::norm(overlap);
}

// Grid over [0, 2*pi) at 1e-3, then golden-section refinement around the best
// grid point. theta and theta + 2*pi differ only by a global sign.
std::pair<double, double> fit_rotated_pair(const StateVector& state) {
    constexpr double step = 1e-3;
    const double two_pi = 2 * std::numbers::pi;
    double best_theta = 0.0;
    double best = -1.0;
    for (double theta = 0.0; theta < two_pi; theta += step) {
        const double f = rotated_pair_fidelity(state, theta);
        if (f > best) {
            best = f;
            best_theta = theta;
        }
    }
    const double phi = (std::sqrt(5.0) - 1) / 2;
    double lo = best_theta - step;
    double hi = best_theta + step;
    for (int iter = 0; iter < 60; ++iter) {
        const double a = hi - phi * (hi - lo);
        const double b = lo + phi * (hi - lo);
        if (rotated_pair_fidelity(state, a) < rotated_pair_fidelity(state, b)) {
            lo = a;
        } else {
            hi = b;
        }
    }
    double theta = (lo + hi) / 2;
    const double refined = rotated_pair_fidelity(state, theta);
    if (refined < best) {
        theta = best_theta;
    } else {
        best = refined;
    }
    theta = std::fmod(theta, two_pi);
    if (theta < 0) theta += two_pi;
    return {theta, best};
}

void classify(ComponentReport& report, const StateVector& state) {
    const std::size_t k = report.qubits.size();
    const std::size_t last = state.size() - 1;
    auto ghz_fidelity = [&] { return std::norm(state[0] + state[last]) / 2; };

    double best = 0.0;
    auto accept = [&](StateClass kind, double fidelity) {
        best = std::max(best, fidelity);
        if (report.kind == StateClass::UNCLASSIFIED && fidelity >= kClassificationFidelity) {
            report.kind = kind;
            report.fidelity = fidelity;
        }
    };

    if (k == 1) {
        accept(StateClass::PLUS, ghz_fidelity());
        accept(StateClass::ZERO, std::norm(state[0]));
    } else if (k == 2) {
        accept(StateClass::BELL, ghz_fidelity());
        const auto [theta, fidelity] = fit_rotated_pair(state);
        if (report.kind == StateClass::UNCLASSIFIED && fidelity >= kClassificationFidelity) report.theta = theta;
        accept(StateClass::ROTATED_PAIR, fidelity);
    } else {
        accept(StateClass::GHZ, ghz_fidelity());
    }
    if (report.kind == StateClass::UNCLASSIFIED) {
        report.fidelity = std::min(best, 1.0);
        report.note = "no candidate reaches fidelity " + std::to_string(kClassificationFidelity);
    }
}

}  // namespace

InteractionGraph interaction_graph(const Circuit& circuit) {
    if (auto v = validate(circuit); !v) throw ParameterError("invalid circuit: " + v.describe());
    InteractionGraph graph;
    graph.num_qubits = circuit.num_qubits;
    DisjointSets sets(circuit.num_qubits);
    for (const Gate& g : circuit.gates) {
        if (g.kind != GateKind::CNOT) continue;
        graph.edges.emplace_back(std::min(g.control, g.target), std::max(g.control, g.target));
        sets.unite(g.control, g.target);
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());

    std::map<int, std::size_t> slot;
    for (int q = 0; q < circuit.num_qubits; ++q) {
        const int root = sets.find(q);
        auto [it, inserted] = slot.try_emplace(root, graph.components.size());
        if (inserted) graph.components.emplace_back();
        graph.components[it->second].push_back(q);
    }
    return graph;
}

Circuit restrict_circuit(const Circuit& circuit, const std::vector<int>& qubits) {
    std::vector<int> local(static_cast<std::size_t>(circuit.num_qubits), -1);
    for (std::size_t k = 0; k < qubits.size(); ++k) local.at(static_cast<std::size_t>(qubits[k])) = static_cast<int>(k);

    Circuit sub;
    sub.num_qubits = static_cast<int>(qubits.size());
    for (const Gate& g : circuit.gates) {
        const int t = local.at(static_cast<std::size_t>(g.target));
        if (g.kind == GateKind::CNOT) {
            const int c = local.at(static_cast<std::size_t>(g.control));
            if ((c < 0) != (t < 0)) throw ParameterError("CNOT crosses the boundary of the qubit subset");
            if (t >= 0) sub.gates.push_back(Gate::cnot(c, t));
        } else if (t >= 0) {
            Gate copy = g;
            copy.target = t;
            sub.gates.push_back(copy);
        }
    }
    return sub;
}

bool is_clifford(const Circuit& circuit) {
    constexpr double tol = 1e-12;
    const double two_pi = 2 * std::numbers::pi;
    for (const Gate& g : circuit.gates) {
        if (g.kind != GateKind::RY) continue;
        double r = std::fmod(g.angle, two_pi);
        if (r < 0) r += two_pi;
        if (r > tol && two_pi - r > tol) return false;
    }
    return true;
}

std::string ComponentReport::label() const {
    switch (kind) {
        case StateClass::GHZ: return "GHZ_" + std::to_string(qubits.size());
        case StateClass::BELL: return "BELL";
        case StateClass::PLUS: return "PLUS";
        case StateClass::ZERO: return "ZERO";
        case StateClass::ROTATED_PAIR: return "ROTATED_PAIR";
        case StateClass::UNCLASSIFIED: return "UNCLASSIFIED";
    }
    return "?";
}

std::string AnalysisReport::summary() const {
    std::vector<std::pair<std::string, int>> counts;
    for (const auto& c : components) {
        const std::string label = c.label();
        auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& e) { return e.first == label; });
        if (it == counts.end()) {
            counts.emplace_back(label, 1);
        } else {
            ++it->second;
        }
    }
    std::stable_sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::ostringstream out;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i) out << ", ";
        out << counts[i].second << " × " << counts[i].first;
    }
    return out.str();
}

AnalysisReport classify_components(const Circuit& circuit) {
    AnalysisReport report;
    report.graph = interaction_graph(circuit);
    report.clifford = is_clifford(circuit);
    std::vector<double> purities(static_cast<std::size_t>(circuit.num_qubits), 1.0);

    for (const auto& qubits : report.graph.components) {
        ComponentReport component;
        component.qubits = qubits;
        const Circuit sub = restrict_circuit(circuit, qubits);
        const StateVector state = simulate<double>(sub);
        component.purities = qubit_purities(state);
        component.q = mw_from_purities(component.purities).q;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            purities[static_cast<std::size_t>(qubits[k])] = component.purities[k];
        }
        if (static_cast<int>(qubits.size()) > kMaxClassifiedComponent) {
            component.note = "component of " + std::to_string(qubits.size()) + " qubits exceeds the " +
                             std::to_string(kMaxClassifiedComponent) + "-qubit classification cap";
        } else {
            classify(component, state);
        }
        report.components.push_back(std::move(component));
    }
    report.mw = mw_from_purities(std::move(purities));
    return report;
}

}  // namespace qsynth

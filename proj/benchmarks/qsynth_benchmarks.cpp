#include <benchmark/benchmark.h>

#include "qsynth/analyzer.hpp"
#include "qsynth/evaluator.hpp"
#include "qsynth/gatelist.hpp"
#include "qsynth/proposer.hpp"
#include "qsynth/statevector.hpp"

namespace {

using namespace qsynth;

void BM_apply_hadamard(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StateVector s(n);
    for (auto _ : state) {
        s.apply(Gate::h(n / 2));
        benchmark::ClobberMemory();
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(s.size() * sizeof(s[0])));
}
BENCHMARK(BM_apply_hadamard)->DenseRange(12, 22, 5);

void BM_apply_cnot(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StateVector s(n);
    s.apply(Gate::h(0));
    for (auto _ : state) {
        s.apply(Gate::cnot(0, n - 1));
        benchmark::ClobberMemory();
    }
}
BENCHMARK(BM_apply_cnot)->DenseRange(12, 22, 5);

void BM_qubit_purities(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const StateVector s = simulate(random_circuit(n, 3 * n, AngleSet::standard(), 1));
    for (auto _ : state) benchmark::DoNotOptimize(qubit_purities(s));
}
BENCHMARK(BM_qubit_purities)->DenseRange(12, 20, 4);

void BM_evaluate_factored_25(benchmark::State& state) {
    const Circuit c = random_circuit(25, 25, AngleSet::standard(), 7);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_factored(c));
}
BENCHMARK(BM_evaluate_factored_25);

void BM_evaluate_dense(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Circuit c = random_circuit(n, 25, AngleSet::standard(), 7);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_dense(c));
}
BENCHMARK(BM_evaluate_dense)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_parse_proposal(benchmark::State& state) {
    const Circuit c = random_circuit(25, static_cast<int>(state.range(0)), AngleSet::standard(), 3);
    const std::string text = "<python>" + serialize(c) + "</python>.";
    for (auto _ : state) benchmark::DoNotOptimize(parse_proposal(text, 25));
}
BENCHMARK(BM_parse_proposal)->Arg(25)->Arg(45);

void BM_serialize(benchmark::State& state) {
    const Circuit c = random_circuit(25, 45, AngleSet::standard(), 3);
    for (auto _ : state) benchmark::DoNotOptimize(serialize(c));
}
BENCHMARK(BM_serialize);

void BM_classify_components(benchmark::State& state) {
    const Circuit c = random_circuit(25, 25, AngleSet::standard(), 11);
    for (auto _ : state) benchmark::DoNotOptimize(classify_components(c));
}
BENCHMARK(BM_classify_components);

}  // namespace
BENCHMARK_MAIN();

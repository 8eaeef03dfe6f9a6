#include <fstream>
#include <sstream>
#include <string>

#include <benchmark/benchmark.h>

#include "cheb/linalg.hpp"
#include "cheb/means.hpp"
#include "cheb/random.hpp"
#include "cheb/speclang.hpp"
#include "cheb/suites.hpp"

namespace {

using cheb::HermitianMatrix;

void BM_HermitianEigen(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  cheb::Rng rng(1);
  const HermitianMatrix a = cheb::random_hermitian(rng, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(cheb::hermitian_eigen(a));
}
BENCHMARK(BM_HermitianEigen)->DenseRange(2, 16, 2);

void BM_Hadamard(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  cheb::Rng rng(2);
  const HermitianMatrix a = cheb::random_hermitian(rng, n), b = cheb::random_hermitian(rng, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(cheb::hadamard(a, b));
}
BENCHMARK(BM_Hadamard)->Arg(4)->Arg(16);

// The tensor route is O(n^4) memory; kept to show why it is test-only.
void BM_HadamardViaTensor(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  cheb::Rng rng(2);
  const HermitianMatrix a = cheb::random_hermitian(rng, n), b = cheb::random_hermitian(rng, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(cheb::hadamard_via_tensor(a.matrix(), b.matrix()));
}
BENCHMARK(BM_HadamardViaTensor)->Arg(4)->Arg(8);

void BM_ApplyMean(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  cheb::Rng rng(3);
  const HermitianMatrix a = cheb::random_psd(rng, n), b = cheb::random_psd(rng, n);
  const auto geo = cheb::parse_mean("geo:0.5");
  for (auto _ : state)
    benchmark::DoNotOptimize(cheb::apply_mean(geo, a, b));
}
BENCHMARK(BM_ApplyMean)->Arg(2)->Arg(6)->Arg(12);

void BM_SuiteTrial(benchmark::State &state, const char *id) {
  std::size_t trial = 0;
  for (auto _ : state) {
    const auto env = cheb::generate_instance(id, 42, trial++, 4);
    benchmark::DoNotOptimize(cheb::suite_margin(id, env, {true, cheb::scored_form(id)}));
  }
}
BENCHMARK_CAPTURE(BM_SuiteTrial, cor2_discrete, "cor2_discrete");
BENCHMARK_CAPTURE(BM_SuiteTrial, thm3_mean, "thm3_mean");
BENCHMARK_CAPTURE(BM_SuiteTrial, thm5_singular_main, "thm5_singular_main");

void BM_ParseSpec(benchmark::State &state) {
  std::ifstream in(std::string(CHEB_SPECS_DIR) + "/thm3_mean.ineq");
  std::stringstream text;
  text << in.rdbuf();
  const std::string src = text.str();
  for (auto _ : state)
    benchmark::DoNotOptimize(cheb::spec::parse_spec(src));
}
BENCHMARK(BM_ParseSpec);

} // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "zkhawk/harness.hpp"
#include "zkhawk/messages.hpp"
#include "zkhawk/pedersen.hpp"
#include "zkhawk/sigma.hpp"

namespace {

using namespace zkhawk;

void BM_Commit(benchmark::State& state) {
  const GroupParams params = GroupParams::standard();
  const Group& grp = params.grp();
  Rng rng(1);
  const Scalar v = grp.scalar_from_u64(12345);
  const Scalar r = grp.random_scalar(rng);
  for (auto _ : state) benchmark::DoNotOptimize(commit(params, v, r));
}
BENCHMARK(BM_Commit);

void BM_BitProve(benchmark::State& state) {
  const GroupParams params = GroupParams::standard();
  const Group& grp = params.grp();
  Rng rng(2);
  const Scalar r = grp.random_scalar(rng);
  const Commitment c = commit(params, grp.scalar_from_u64(1), r);
  const Bytes ctx = bit_proof_context(ContractId{}, 0, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(bnizk_prove(params, c, r, 1, ctx, rng));
}
BENCHMARK(BM_BitProve);

void BM_BitVerify(benchmark::State& state) {
  const GroupParams params = GroupParams::standard();
  const Group& grp = params.grp();
  Rng rng(3);
  const Scalar r = grp.random_scalar(rng);
  const Commitment c = commit(params, grp.scalar_from_u64(0), r);
  const Bytes ctx = bit_proof_context(ContractId{}, 0, 0, 0);
  const BitProof proof = bnizk_prove(params, c, r, 0, ctx, rng);
  for (auto _ : state) benchmark::DoNotOptimize(bnizk_verify(params, c, proof, ctx));
}
BENCHMARK(BM_BitVerify);

void BM_SchnorrProve(benchmark::State& state) {
  const GroupParams params = GroupParams::standard();
  const Group& grp = params.grp();
  Rng rng(4);
  const Scalar w = grp.random_scalar(rng);
  const GroupElement stmt = grp.exp(params.h, w);
  const Bytes ctx(32, 7);
  for (auto _ : state) benchmark::DoNotOptimize(schnorr_prove(grp, stmt, params.h, w, ctx, rng));
}
BENCHMARK(BM_SchnorrProve);

void BM_SchnorrVerify(benchmark::State& state) {
  const GroupParams params = GroupParams::standard();
  const Group& grp = params.grp();
  Rng rng(5);
  const Scalar w = grp.random_scalar(rng);
  const GroupElement stmt = grp.exp(params.h, w);
  const Bytes ctx(32, 7);
  const SchnorrProof proof = schnorr_prove(grp, stmt, params.h, w, ctx, rng);
  for (auto _ : state) benchmark::DoNotOptimize(schnorr_verify(grp, stmt, params.h, proof, ctx));
}
BENCHMARK(BM_SchnorrVerify);

// Full freeze / compute / finalize run; args are party count and ell.
void BM_FullRun(benchmark::State& state) {
  RunConfig cfg;
  cfg.values.assign(static_cast<std::size_t>(state.range(0)), 3);
  cfg.ell = static_cast<std::size_t>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(run_experiment(cfg));
  }
}
BENCHMARK(BM_FullRun)->Args({2, 8})->Args({5, 16})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

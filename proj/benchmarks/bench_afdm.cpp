// bench_afdm.cpp - throughput of the transform, estimator, and detectors
#include <benchmark/benchmark.h>

#include <afdm/chanest.hpp>
#include <afdm/channel.hpp>
#include <afdm/daft.hpp>
#include <afdm/detect.hpp>
#include <afdm/framing.hpp>
#include <afdm/harness.hpp>
#include <afdm/params.hpp>
#include <random>

namespace {

using namespace afdm;

cvec random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  cvec x(n);
  for (int i = 0; i < n; ++i) x[i] = cplx(g(rng), g(rng));
  return x;
}

void BM_daft_forward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const AfdmParams p = make_params(n, 2, 2, 1);
  DaftTransformer tr(p);
  const cvec x = random_vector(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(tr.to_daft(x));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_daft_forward)->Arg(64)->Arg(256)->Arg(1024)->Arg(4096);

void BM_subchannel_band(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const AfdmParams p = make_params(n, 2, 2, 1);
  const DelayDopplerProfile profile{
      {Path{0, 0.4}, Path{1, -1.3}, Path{2, 1.8}}};
  const std::vector<cplx> gains{cplx(0.5, 0.2), cplx(-0.3, 0.6),
                                cplx(0.1, -0.4)};
  for (auto _ : state)
    benchmark::DoNotOptimize(effective_band(p, profile, gains));
}
BENCHMARK(BM_subchannel_band)->Arg(64)->Arg(1024);

void BM_estimate_link(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const AfdmParams p = make_params(n, 2, 2, 1);
  const int n_rx = 2, n_tx = 2;
  const EpaLayout layout = make_epa_layout(p, n_tx, 30.0);
  const TransformFactorTable table(p);
  std::mt19937_64 rng(7);
  const ProfileSpec spec{ProfileSpec::Kind::fixed,
                         {Path{0, 2.0}, Path{1, -1.0}, Path{2, 0.0}},
                         {},
                         0.0,
                         false};
  const MimoChannelRealization ch = sample_channel(spec, p, n_rx, n_tx, rng);
  const std::vector<cvec> frames =
      build_epa_frames(layout, std::vector<cvec>(n_tx, cvec::Zero(n - layout.data_start)));
  DaftTransformer tr(p);
  std::vector<cvec> rx(n_rx, cvec::Zero(n));
  for (int r = 0; r < n_rx; ++r)
    for (int t = 0; t < n_tx; ++t)
      rx[r] += tr.to_daft(apply_time_domain(p, ch.profile, ch.gains_of(r, t),
                                            tr.to_time(frames[t])));
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_mimo(p, rx, layout, 0.05, table));
}
BENCHMARK(BM_estimate_link)->Arg(256)->Arg(1024);

void BM_mp_detect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ExperimentConfig cfg;
  cfg.params = make_params(n, 2, 2, 1);
  cfg.n_rx = 2;
  cfg.n_tx = 2;
  cfg.profile.fixed_paths = {Path{0, 2.0}, Path{1, -1.0}, Path{2, 0.0}};
  const AfdmParams& p = cfg.params;
  std::mt19937_64 rng(11);
  const ProfileSpec spec{ProfileSpec::Kind::fixed, cfg.profile.fixed_paths,
                         {}, 0.0, false};
  const MimoChannelRealization ch = sample_channel(spec, p, 2, 2, rng);
  const EpaLayout layout = make_epa_layout(p, 2, 30.0);
  std::vector<BandedBlock> blocks;
  for (int r = 0; r < 2; ++r)
    for (int t = 0; t < 2; ++t)
      blocks.push_back(effective_band(p, ch.profile, ch.gains_of(r, t)));
  std::vector<int> data_cols;
  for (int c = layout.data_start; c < p.N; ++c) data_cols.push_back(c);
  const SparseSystem sys = assemble_system(blocks, 2, 2, data_cols);
  const Constellation cons(Modulation::qam4);
  cvec x(sys.unknowns());
  for (int i = 0; i < sys.unknowns(); ++i) x[i] = cons.points()[i % 4];
  cvec y = sys.apply(x);
  std::normal_distribution<double> g(0.0, 0.1);
  for (int i = 0; i < y.size(); ++i) y[i] += cplx(g(rng), g(rng));
  MpConfig mp;
  mp.noise_var = 0.02;
  for (auto _ : state) benchmark::DoNotOptimize(detect_mp(sys, y, cons, mp));
}
BENCHMARK(BM_mp_detect)->Arg(64)->Arg(256);

void BM_ml_detect(benchmark::State& state) {
  const AfdmParams p = make_params(6, 1, 1, 0);
  std::mt19937_64 rng(13);
  const ProfileSpec spec{ProfileSpec::Kind::fixed,
                         {Path{0, 0.0}, Path{1, 1.0}},
                         {},
                         0.0,
                         false};
  const MimoChannelRealization ch = sample_channel(spec, p, 2, 2, rng);
  std::vector<BandedBlock> blocks;
  for (int r = 0; r < 2; ++r)
    for (int t = 0; t < 2; ++t)
      blocks.push_back(effective_band(p, ch.profile, ch.gains_of(r, t)));
  std::vector<int> data_cols{0, 1, 2, 3, 4, 5};
  const SparseSystem sys = assemble_system(blocks, 2, 2, data_cols);
  const Constellation cons(Modulation::bpsk);
  cvec x(sys.unknowns());
  for (int i = 0; i < sys.unknowns(); ++i) x[i] = cons.points()[i % 2];
  cvec y = sys.apply(x);
  std::normal_distribution<double> g(0.0, 0.2);
  for (int i = 0; i < y.size(); ++i) y[i] += cplx(g(rng), g(rng));
  const cmat dense = sys.to_dense();
  for (auto _ : state) benchmark::DoNotOptimize(detect_ml(dense, y, cons));
}
BENCHMARK(BM_ml_detect);

}  // namespace

BENCHMARK_MAIN();

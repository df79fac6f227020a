// acceptance.cpp - release criteria, one self-checking scenario per criterion
//
// Usage: afdm_acceptance [1-10 | all]. Each criterion prints one
// [PASS]/[FAIL] line with the measured numbers it was judged on.
#include <afdm/afdma.hpp>
#include <afdm/chanest.hpp>
#include <afdm/channel.hpp>
#include <afdm/config.hpp>
#include <afdm/daft.hpp>
#include <afdm/framing.hpp>
#include <afdm/harness.hpp>
#include <afdm/params.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace afdm;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& out, bool ok, const std::string& what) {
  if (!ok) {
    out.pass = false;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += "FAILED " + what;
  }
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion_overhead() {
  Outcome out;
  note(out, overhead_mimo_afdm(2, 4, 4, 0) == 134, "wide-spread overhead 134");
  note(out, overhead_mimo_otfs(2, 4, 4, 0) == 238, "grid reference 238");
  note(out, overhead_mimo_afdm(2, 2, 2, 1) == 62, "guard-1 overhead 62");
  note(out, overhead_mimo_afdm(2, 2, 2, 4) == 116, "guard-4 overhead 116");
  note(out, overhead_mimo_afdm(2, 2, 2, 8) == 188, "guard-8 overhead 188");
  const std::string rep = overhead_report(2, 2, 2, {1, 4, 8}, 1024);
  for (const char* token : {"62", "116", "188"})
    note(out, rep.find(token) != std::string::npos,
         std::string("report quotes ") + token);
  if (out.pass) out.detail = "134/238 and 62/116/188 as closed forms";
  return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion_unitarity() {
  Outcome out;
  double worst_gram = 0.0, worst_fast = 0.0;
  for (int n : {8, 64, 1024}) {
    const AfdmParams p =
        n >= 64 ? make_params(n, 2, 2, 1) : make_params(n, 1, 1, 0);
    const cmat a = daft_matrix(p);
    const double gram_dev =
        (a * a.adjoint() - cmat::Identity(n, n)).cwiseAbs().maxCoeff();
    worst_gram = std::max(worst_gram, gram_dev);
    DaftTransformer tr(p);
    std::mt19937_64 rng(300 + n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cvec x(n);
    for (int i = 0; i < n; ++i) {
      const double re = u(rng);
      const double im = u(rng);
      x[i] = cplx(re, im);
    }
    const double fast_dev = (tr.to_daft(x) - a * x).cwiseAbs().maxCoeff();
    const double inv_dev =
        (tr.to_time(x) - a.adjoint() * x).cwiseAbs().maxCoeff();
    worst_fast = std::max({worst_fast, fast_dev, inv_dev});
  }
  note(out, worst_gram < 1e-10, fmt("gram deviation %.3g", worst_gram));
  note(out, worst_fast < 1e-10, fmt("fast-path deviation %.3g", worst_fast));
  if (out.pass)
    out.detail = fmt("gram %.2g, fast path %.2g (limit 1e-10)", worst_gram,
                     worst_fast);
  return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion_closed_form() {
  Outcome out;
  const AfdmParams p = make_params(64, 2, 2, 1);
  const cmat a = daft_matrix(p);
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<int> ul(0, p.l_max);
  std::uniform_real_distribution<double> unu(-double(p.alpha_max),
                                             double(p.alpha_max));
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Path path{ul(rng), unu(rng)};
    const cmat direct = subchannel_matrix(p, path);
    const cmat oracle = a * time_subchannel_matrix(p, path) * a.adjoint();
    worst = std::max(worst, (direct - oracle).cwiseAbs().maxCoeff());
  }
  note(out, worst < 1e-10, fmt("conjugation deviation %.3g", worst));

  int bad_rows = 0;
  double mag_dev = 0.0;
  for (const Path path : {Path{0, 0.0}, Path{1, 2.0}, Path{2, -1.0}}) {
    const cmat h = subchannel_matrix(p, path);
    const int ind = index_indicator(p, path);
    for (int m = 0; m < p.N; ++m) {
      int nonzero = 0;
      for (int mp = 0; mp < p.N; ++mp)
        if (std::abs(h(m, mp)) > 1e-12) ++nonzero;
      if (nonzero != 1) ++bad_rows;
      mag_dev = std::max(
          mag_dev, std::abs(std::abs(h(m, (m + ind) % p.N)) - 1.0));
    }
  }
  note(out, bad_rows == 0, fmt("%d integer rows not 1-sparse", bad_rows));
  note(out, mag_dev < 1e-10, fmt("peak magnitude deviation %.3g", mag_dev));
  if (out.pass)
    out.detail = fmt("20 random paths within %.2g; integer rows 1-sparse",
                     worst);
  return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion_reconstructable() {
  Outcome out;
  double worst_walk = 0.0;
  for (int n : {64, 1024}) {
    const AfdmParams p = make_params(n, 2, 2, 1);
    const Path path{1, -1.7};
    const int col = 100 % n;
    // Seed from the true column, then walk every band diagonal with the
    // delay's factors; each step must land on the true entry.
    for (int j = 0; j <= p.band_L(); ++j) {
      int m = mod_n(col + p.band_reach() - j, n);
      int mp = col;
      cplx value = subchannel_entry(p, path, m, mp);
      for (int step = 0; step < n - 1; ++step) {
        value *= transform_factor(p, path.delay, m, mp);
        m = (m + 1) % n;
        mp = (mp + 1) % n;
        worst_walk = std::max(
            worst_walk, std::abs(value - subchannel_entry(p, path, m, mp)));
      }
    }
  }
  note(out, worst_walk < 1e-9, fmt("diagonal walk deviation %.3g", worst_walk));

  // Doppler independence of the step ratio at fixed delay.
  const AfdmParams p = make_params(64, 2, 2, 1);
  const cmat ha = subchannel_matrix(p, Path{2, 0.45});
  const cmat hb = subchannel_matrix(p, Path{2, -1.2});
  double worst_ratio = 0.0;
  for (int m = 0; m < p.N; ++m) {
    for (int mp = 0; mp < p.N; ++mp) {
      if (std::abs(ha(m, mp)) < 1e-6 || std::abs(hb(m, mp)) < 1e-6) continue;
      const int m1 = (m + 1) % p.N, mp1 = (mp + 1) % p.N;
      const cplx ra = ha(m1, mp1) / ha(m, mp);
      const cplx rb = hb(m1, mp1) / hb(m, mp);
      worst_ratio = std::max(worst_ratio, std::abs(ra - rb));
    }
  }
  note(out, worst_ratio < 1e-10,
       fmt("Doppler dependence of ratios %.3g", worst_ratio));
  if (out.pass)
    out.detail = fmt("walk error %.2g (limit 1e-9), ratio spread %.2g",
                     worst_walk, worst_ratio);
  return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion_estimator() {
  Outcome out;
  ExperimentConfig cfg;
  cfg.params = make_params(1024, 2, 2, 1);
  cfg.n_rx = 2;
  cfg.n_tx = 2;
  cfg.snr_d_db = {0.0};  // unused by the probe but validated
  cfg.master_seed = 5;
  cfg.profile.fixed_paths = {Path{0, 2.0}, Path{1, -1.0}, Path{2, 0.0}};
  const NmseReport integer = run_nmse(cfg);
  double worst_int = 0.0;
  for (double v : integer.per_block) worst_int = std::max(worst_int, v);
  note(out, worst_int < 1e-18, fmt("integer-Doppler NMSE %.3g", worst_int));

  cfg.profile.fixed_paths = {Path{0, 0.4}, Path{1, -1.3}, Path{2, 1.8}};
  const NmseReport frac = run_nmse(cfg);
  bool bounded = true;
  for (size_t b = 0; b < frac.per_block.size(); ++b)
    bounded = bounded && frac.per_block[b] <= frac.leakage_bound[b] + 1e-18;
  note(out, bounded, "fractional NMSE within the reconstruction bound");

  // Fixed realization, growing fractional guard: NMSE must not increase.
  std::vector<double> sweep;
  for (int k : {1, 4, 8}) {
    cfg.params = make_params(1024, 2, 2, k);
    sweep.push_back(run_nmse(cfg).aggregate);
  }
  const bool monotone =
      sweep[1] <= sweep[0] * (1 + 1e-12) && sweep[2] <= sweep[1] * (1 + 1e-12);
  note(out, monotone,
       fmt("guard sweep not monotone: %.3g, %.3g, %.3g", sweep[0], sweep[1],
           sweep[2]));
  if (out.pass)
    out.detail = fmt("integer %.2g; fractional bounded; sweep %.2g > %.2g > %.2g",
                     worst_int, sweep[0], sweep[1], sweep[2]);
  return out;
}

// ---------------------------------------------------------------- criterion 6
ExperimentConfig slope_cfg(int n_rx, int n_tx, std::vector<Path> paths,
                           double snr_lo, double snr_hi, double snr_step,
                           long long cap, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.params = make_params(6, 1, 1, 0);
  cfg.n_rx = n_rx;
  cfg.n_tx = n_tx;
  cfg.profile.fixed_paths = std::move(paths);
  cfg.modulation = Modulation::bpsk;
  cfg.detector.kind = DetectorKind::ml;
  cfg.csi = CsiMode::perfect;
  for (double s = snr_lo; s <= snr_hi + 1e-9; s += snr_step)
    cfg.snr_d_db.push_back(s);
  cfg.max_trials = cap;
  cfg.target_errors = 150;
  cfg.batch_size = 512;
  cfg.master_seed = seed;
  return cfg;
}

Outcome criterion_diversity() {
  Outcome out;
  struct Curve {
    const char* name;
    ExperimentConfig cfg;
    double expect;
    double tol;
    // The local log-log slope only approaches the diversity order deep in
    // the waterfall, so the steep 2x2 curves are fitted over BER windows
    // placed below the transition region.
    SlopeWindow window;
  };
  std::vector<Curve> curves;
  curves.push_back({"1x1 two-path",
                    slope_cfg(1, 1, {Path{0, 0.0}, Path{1, 1.0}}, 8, 32, 3,
                              800000, 61),
                    2.0, 0.7, SlopeWindow{}});
  curves.push_back({"1x1 three-path",
                    slope_cfg(1, 1, {Path{0, 0.0}, Path{0, 1.0}, Path{1, 1.0}},
                              6, 27, 3, 800000, 62),
                    3.0, 0.7, SlopeWindow{}});
  curves.push_back({"2x2 two-path",
                    slope_cfg(2, 2, {Path{0, 0.0}, Path{1, 1.0}}, 2, 12, 2,
                              600000, 63),
                    4.0, 1.0, SlopeWindow{1e-5, 1e-3}});
  curves.push_back({"2x2 three-path",
                    slope_cfg(2, 2, {Path{0, 0.0}, Path{0, 1.0}, Path{1, 1.0}},
                              3, 10.5, 0.75, 1600000, 64),
                    6.0, 1.0, SlopeWindow{3e-6, 1e-4}});
  curves.push_back({"1x1 two-path fractional",
                    slope_cfg(1, 1, {Path{0, 0.0}, Path{1, 0.5}}, 8, 32, 3,
                              800000, 65),
                    2.0, 1.0, SlopeWindow{}});
  curves.push_back({"1x1 three-path fractional",
                    slope_cfg(1, 1,
                              {Path{0, 0.0}, Path{0, 0.5}, Path{1, 0.8}}, 6,
                              27, 3, 800000, 66),
                    3.0, 1.0, SlopeWindow{}});
  std::string measured;
  for (const Curve& curve : curves) {
    const BerResult res = run_ber(curve.cfg);
    DiversityReport rep;
    try {
      rep = diversity_slope(res.points, curve.window);
    } catch (const std::exception& e) {
      note(out, false, fmt("%s: %s", curve.name, e.what()));
      continue;
    }
    note(out, std::abs(rep.slope - curve.expect) <= curve.tol,
         fmt("%s slope %.2f (want %.1f +- %.1f, %d points)", curve.name,
             rep.slope, curve.expect, curve.tol, rep.points_used));
    if (!measured.empty()) measured += ", ";
    measured += fmt("%s %.2f", curve.name, rep.slope);
  }
  if (out.pass)
    out.detail = measured;
  else
    out.detail += " | slopes: " + measured;
  return out;
}

// ---------------------------------------------------------------- criterion 7
int phi_rank(const AfdmParams& p, const DelayDopplerProfile& prof,
             const cvec& delta) {
  const cmat phi = build_phi(p, prof, delta);
  const Eigen::JacobiSVD<cmat> svd(phi);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-9 * sv[0]) ++rank;
  return rank;
}

Outcome criterion_rank() {
  Outcome out;
  const AfdmParams p = make_params(6, 1, 1, 0);
  const DelayDopplerProfile two{{Path{0, 0.0}, Path{1, 1.0}}};
  const DelayDopplerProfile three{{Path{0, 0.0}, Path{0, 1.0}, Path{1, 1.0}}};
  for (const auto* prof : {&two, &three}) {
    const int paths = prof->size();
    int min_rank = paths + 1;
    int vectors = 0;
    std::vector<int> digit(6, 0);  // BPSK differences: 0, +2, -2 per entry
    const double levels[3] = {0.0, 2.0, -2.0};
    while (true) {
      int pos = 0;
      while (pos < 6 && ++digit[pos] == 3) {
        digit[pos] = 0;
        ++pos;
      }
      if (pos == 6) break;
      cvec delta(6);
      for (int i = 0; i < 6; ++i) delta[i] = cplx(levels[digit[i]], 0.0);
      min_rank = std::min(min_rank, phi_rank(p, *prof, delta));
      ++vectors;
    }
    note(out, vectors == 728, fmt("enumerated %d difference vectors", vectors));
    note(out, min_rank == paths,
         fmt("%d-path minimum rank %d", paths, min_rank));
    if (out.pass)
      out.detail += fmt("%sP=%d min rank %d over 728 vectors",
                        out.detail.empty() ? "" : "; ", paths, min_rank);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 8
double snr_at_ber(const std::vector<BerPoint>& pts, double target) {
  for (size_t i = 1; i < pts.size(); ++i) {
    if (pts[i - 1].ber >= target && pts[i].ber <= target &&
        pts[i - 1].ber > 0.0 && pts[i].ber > 0.0) {
      const double l0 = std::log10(pts[i - 1].ber);
      const double l1 = std::log10(pts[i].ber);
      const double lt = std::log10(target);
      return pts[i - 1].snr_db +
             (pts[i].snr_db - pts[i - 1].snr_db) * (l0 - lt) / (l0 - l1);
    }
  }
  return std::nan("");
}

Outcome criterion_link() {
  Outcome out;
  ExperimentConfig cfg;
  cfg.params = make_params(1024, 2, 2, 1);
  cfg.n_rx = 2;
  cfg.n_tx = 2;
  cfg.profile.kind = ProfileSpec::Kind::jakes;
  cfg.profile.jakes_delays = {0, 1, 2};
  cfg.profile.nu_max = 2.0;
  cfg.profile.integer_doppler = true;
  cfg.modulation = Modulation::qam4;
  cfg.detector.kind = DetectorKind::mp;
  cfg.snr_d_db = {8, 10, 12, 14, 16};
  cfg.snr_p_db = 50.0;
  cfg.target_errors = 100;
  cfg.max_trials = 3000;
  cfg.batch_size = 16;
  cfg.master_seed = 21;

  cfg.csi = CsiMode::perfect;
  const BerResult perfect = run_ber(cfg);
  cfg.csi = CsiMode::estimated;
  const BerResult estimated = run_ber(cfg);
  const double snr_perfect = snr_at_ber(perfect.points, 1e-3);
  const double snr_estimated = snr_at_ber(estimated.points, 1e-3);
  note(out, std::isfinite(snr_perfect) && std::isfinite(snr_estimated),
       "both curves cross 1e-3 inside the grid");
  const double gap = snr_estimated - snr_perfect;
  if (std::isfinite(gap))
    note(out, std::abs(gap) <= 1.0,
         fmt("CSI gap %.2f dB at BER 1e-3 (limit 1.0)", gap));

  // Detection-threshold bowl: too small keeps noise taps, too large cuts
  // real ones; an interior multiplier must win on a fractional channel.
  ExperimentConfig sweep = cfg;
  sweep.params = make_params(1024, 2, 2, 8);
  sweep.profile.integer_doppler = false;
  sweep.snr_d_db = {14.0};
  sweep.snr_p_db = 40.0;
  sweep.target_errors = 250;
  sweep.max_trials = 400;
  sweep.master_seed = 22;
  const std::vector<double> mults{0.0, 1.0, 3.0, 6.0, 12.0, 50.0, 2000.0};
  std::vector<double> bers;
  for (double m : mults) {
    sweep.zeta_multiplier = m;
    bers.push_back(run_ber(sweep).points[0].ber);
  }
  size_t best = 0;
  for (size_t i = 1; i < bers.size(); ++i)
    if (bers[i] < bers[best]) best = i;
  note(out, best > 0 && best + 1 < bers.size(),
       fmt("threshold minimum at multiplier %.0f is not interior",
           mults[best]));
  note(out, bers.front() > bers[best],
       fmt("zero threshold (%.3g) not worse than best (%.3g)", bers.front(),
           bers[best]));
  note(out, bers.back() > bers[best],
       fmt("huge threshold (%.3g) not worse than best (%.3g)", bers.back(),
           bers[best]));
  if (out.pass)
    out.detail = fmt("CSI gap %.2f dB; bowl best at %.0f N0 "
                     "(edges %.3g / %.3g / %.3g)",
                     gap, mults[best], bers.front(), bers[best], bers.back());
  return out;
}

// ---------------------------------------------------------------- criterion 9
Outcome criterion_cost() {
  Outcome out;
  const AfdmParams p = make_params(1024, 2, 2, 1);
  const TransformFactorTable table(p);
  note(out, table.entry_count() == 4 * p.band_L() + 1,
       fmt("table entries %d != 4L+1", table.entry_count()));

  const int width = p.band_L() + 1;
  cvec full_band = cvec::Constant(width, cplx(1.0, 0.0));
  long long mults = 0;
  reconstruct_diagonal(p, full_band, 20, table, &mults);
  const long long budget = static_cast<long long>(width) * (p.N - 1);
  note(out, mults == budget,
       fmt("full-band reconstruction used %lld of %lld", mults, budget));

  // A thresholded (sparse) band must cost proportionally less.
  cvec sparse_band = cvec::Zero(width);
  sparse_band[3] = cplx(1.0, 0.0);
  sparse_band[9] = cplx(0.5, 0.5);
  long long sparse_mults = 0;
  reconstruct_diagonal(p, sparse_band, 20, table, &sparse_mults);
  note(out, sparse_mults == 2LL * (p.N - 1),
       fmt("sparse reconstruction used %lld", sparse_mults));
  if (out.pass)
    out.detail = fmt("%d factors; %lld <= %lld multiplications",
                     table.entry_count(), mults, budget);
  return out;
}

// --------------------------------------------------------------- criterion 10
Outcome criterion_multiuser() {
  Outcome out;
  const std::vector<AfdmaUser> users{AfdmaUser{1, 15}, AfdmaUser{2, 15},
                                     AfdmaUser{3, 14}};
  const AfdmaPlan down = plan_afdma_downlink(64, users, 3, 3);
  const PlanCheck down_check = validate_plan(down);
  note(out, down_check.ok,
       down_check.violations.empty() ? "downlink invalid"
                                     : down_check.violations.front());
  note(out, down.overhead_slots() == afdma_downlink_overhead(3, 3, users),
       fmt("downlink overhead %lld != closed form %lld", down.overhead_slots(),
           afdma_downlink_overhead(3, 3, users)));

  const AfdmaPlan up = plan_afdma_uplink(
      64, {AfdmaUser{1, 10}, AfdmaUser{2, 12}, AfdmaUser{3, 15}});
  const PlanCheck up_check = validate_plan(up);
  note(out, up_check.ok,
       up_check.violations.empty() ? "uplink invalid"
                                   : up_check.violations.front());
  if (out.pass)
    out.detail = fmt("downlink overhead %lld == closed form; both plans valid",
                     down.overhead_slots());
  return out;
}

struct Entry {
  int id;
  const char* name;
  Outcome (*fn)();
};

const Entry kEntries[] = {
    {1, "pilot overhead closed forms", criterion_overhead},
    {2, "transform unitarity and fast path", criterion_unitarity},
    {3, "subchannel closed form", criterion_closed_form},
    {4, "band reconstructability from one column", criterion_reconstructable},
    {5, "estimator accuracy and guard sweep", criterion_estimator},
    {6, "diversity-order slopes", criterion_diversity},
    {7, "signal-matrix rank", criterion_rank},
    {8, "estimated-CSI link and threshold bowl", criterion_link},
    {9, "estimation cost accounting", criterion_cost},
    {10, "multi-user plans", criterion_multiuser},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1 && std::strcmp(argv[1], "all") != 0) only = std::atoi(argv[1]);
  if (argc > 1 && only == 0 && std::strcmp(argv[1], "all") != 0) {
    std::fprintf(stderr, "usage: %s [1-10|all]\n", argv[0]);
    return 2;
  }
  bool all_pass = true;
  for (const Entry& entry : kEntries) {
    if (only != 0 && entry.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = entry.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] criterion %d: %s - %s (%.1fs)\n",
                out.pass ? "PASS" : "FAIL", entry.id, entry.name,
                out.detail.c_str(), seconds);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}

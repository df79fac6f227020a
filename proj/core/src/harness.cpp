// harness.cpp
#include "afdm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

#include "afdm/daft.hpp"

namespace afdm {

DetectorKind parse_detector(const std::string& name) {
  if (name == "ml") return DetectorKind::ml;
  if (name == "mp") return DetectorKind::mp;
  if (name == "lmmse") return DetectorKind::lmmse;
  throw std::invalid_argument("unknown detector \"" + name +
                              "\" (expected ml, mp, or lmmse)");
}

std::string detector_name(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::ml: return "ml";
    case DetectorKind::mp: return "mp";
    default: return "lmmse";
  }
}

CsiMode parse_csi(const std::string& name) {
  if (name == "perfect") return CsiMode::perfect;
  if (name == "estimated") return CsiMode::estimated;
  throw std::invalid_argument("unknown csi mode \"" + name +
                              "\" (expected perfect or estimated)");
}

std::string csi_name(CsiMode mode) {
  return mode == CsiMode::perfect ? "perfect" : "estimated";
}

double noise_var_of(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

double pilot_amplitude_of(double noise_var, double snr_p_db) {
  return std::sqrt(noise_var * std::pow(10.0, snr_p_db / 10.0));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial_index) {
  return splitmix64(master ^ trial_index);
}

cvec draw_noise(int n, double noise_var, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(noise_var / 2.0));
  cvec v(n);
  for (int i = 0; i < n; ++i) {
    const double re = gauss(rng);  // locals pin the draw order; argument
    const double im = gauss(rng);  // evaluation order is unspecified
    v[i] = cplx(re, im);
  }
  return v;
}

SparseSystem assemble_system(const std::vector<BandedBlock>& blocks, int n_rx,
                             int n_tx, const std::vector<int>& data_cols) {
  if (static_cast<int>(blocks.size()) != n_rx * n_tx)
    throw std::invalid_argument("assemble_system: block count mismatch");
  const int n = blocks.front().rows();
  SparseSystem sys;
  sys.rows = n_rx * n;
  sys.cols.resize(static_cast<size_t>(n_tx) * data_cols.size());
  for (int t = 0; t < n_tx; ++t) {
    for (size_t ci = 0; ci < data_cols.size(); ++ci) {
      auto& col = sys.cols[t * data_cols.size() + ci];
      const int c = data_cols[ci];
      for (int r = 0; r < n_rx; ++r) {
        const BandedBlock& b = blocks[static_cast<size_t>(r) * n_tx + t];
        for (int j = 0; j < b.width(); ++j) {
          const int m = mod_n(static_cast<long long>(c) + b.reach() - j, n);
          const cplx v = b.at(m, j);
          if (v != cplx(0.0, 0.0)) col.emplace_back(r * n + m, v);
        }
      }
    }
  }
  return sys;
}

SparseSystem assemble_system(const std::vector<cmat>& blocks, int n_rx,
                             int n_tx, const std::vector<int>& data_cols) {
  if (static_cast<int>(blocks.size()) != n_rx * n_tx)
    throw std::invalid_argument("assemble_system: block count mismatch");
  const int n = static_cast<int>(blocks.front().rows());
  SparseSystem sys;
  sys.rows = n_rx * n;
  sys.cols.resize(static_cast<size_t>(n_tx) * data_cols.size());
  for (int t = 0; t < n_tx; ++t) {
    for (size_t ci = 0; ci < data_cols.size(); ++ci) {
      auto& col = sys.cols[t * data_cols.size() + ci];
      const int c = data_cols[ci];
      for (int r = 0; r < n_rx; ++r) {
        const cmat& b = blocks[static_cast<size_t>(r) * n_tx + t];
        for (int m = 0; m < n; ++m)
          if (b(m, c) != cplx(0.0, 0.0)) col.emplace_back(r * n + m, b(m, c));
      }
    }
  }
  return sys;
}

namespace {

bool profile_is_integer(const DelayDopplerProfile& profile) {
  for (const auto& path : profile.paths)
    if (doppler_frac(path.doppler) != 0.0) return false;
  return true;
}

struct TrialCounts {
  long long errors = 0;
  long long bits = 0;
  long long nonconverged = 0;

  TrialCounts& operator+=(const TrialCounts& o) {
    errors += o.errors;
    bits += o.bits;
    nonconverged += o.nonconverged;
    return *this;
  }
};

// Immutable per-SNR-point inputs shared by every trial.
struct TrialContext {
  const ExperimentConfig* cfg = nullptr;
  const Constellation* cons = nullptr;
  const EpaLayout* layout = nullptr;            // estimated mode
  const TransformFactorTable* table = nullptr;  // estimated mode
  double noise_var = 0.0;
  double zeta = 0.0;
  std::vector<int> data_cols;
};

TrialCounts run_trial(const TrialContext& ctx, DaftTransformer& dt,
                      std::uint64_t seed) {
  const ExperimentConfig& cfg = *ctx.cfg;
  const AfdmParams& p = cfg.params;
  const Constellation& cons = *ctx.cons;
  std::mt19937_64 rng(seed);

  const auto ch = sample_channel(cfg.profile, p, cfg.n_rx, cfg.n_tx, rng);

  const int n_data = static_cast<int>(ctx.data_cols.size());
  const int bps = cons.bits_per_symbol();
  const int total_bits = n_data * cfg.n_tx * bps;
  std::vector<std::uint8_t> bits(total_bits);
  std::uniform_int_distribution<int> coin(0, 1);
  for (auto& b : bits) b = static_cast<std::uint8_t>(coin(rng));

  std::vector<cvec> data_per_tx(cfg.n_tx);
  for (int t = 0; t < cfg.n_tx; ++t) {
    const std::vector<std::uint8_t> seg(
        bits.begin() + static_cast<size_t>(t) * n_data * bps,
        bits.begin() + static_cast<size_t>(t + 1) * n_data * bps);
    data_per_tx[t] = cons.modulate(seg);
  }
  const std::vector<cvec> tx_frames =
      cfg.csi == CsiMode::estimated ? build_epa_frames(*ctx.layout, data_per_tx)
                                    : data_per_tx;

  std::vector<cvec> time_tx(cfg.n_tx);
  for (int t = 0; t < cfg.n_tx; ++t) time_tx[t] = dt.to_time(tx_frames[t]);

  std::vector<cvec> rx(cfg.n_rx);
  for (int r = 0; r < cfg.n_rx; ++r) {
    cvec y = cvec::Zero(p.N);
    for (int t = 0; t < cfg.n_tx; ++t)
      y += apply_time_domain(p, ch.profile, ch.gains_of(r, t), time_tx[t]);
    y += draw_noise(p.N, ctx.noise_var, rng);
    rx[r] = dt.to_daft(y);
  }

  cvec ystack(static_cast<Eigen::Index>(cfg.n_rx) * p.N);
  for (int r = 0; r < cfg.n_rx; ++r) ystack.segment(r * p.N, p.N) = rx[r];

  TrialCounts out;
  SparseSystem sys;
  if (cfg.csi == CsiMode::estimated) {
    const auto est = estimate_mimo(p, rx, *ctx.layout, ctx.zeta, *ctx.table);
    // Cancel the known pilots through the same channel knowledge the
    // detector uses; the residual mismatch is part of the CSI penalty.
    for (int r = 0; r < cfg.n_rx; ++r) {
      for (int t = 0; t < cfg.n_tx; ++t) {
        const BandedBlock& b = est.block(r, t);
        const int c = ctx.layout->pilot_slots[t];
        for (int j = 0; j < b.width(); ++j) {
          const int m = mod_n(static_cast<long long>(c) + b.reach() - j, p.N);
          ystack[r * p.N + m] -= ctx.layout->pilot_amplitude * b.at(m, j);
        }
      }
    }
    sys = assemble_system(est.blocks, cfg.n_rx, cfg.n_tx, ctx.data_cols);
  } else if (profile_is_integer(ch.profile)) {
    std::vector<BandedBlock> blocks;
    blocks.reserve(static_cast<size_t>(cfg.n_rx) * cfg.n_tx);
    for (int r = 0; r < cfg.n_rx; ++r)
      for (int t = 0; t < cfg.n_tx; ++t)
        blocks.push_back(effective_band(p, ch.profile, ch.gains_of(r, t)));
    sys = assemble_system(blocks, cfg.n_rx, cfg.n_tx, ctx.data_cols);
  } else {
    std::vector<cmat> blocks;
    blocks.reserve(static_cast<size_t>(cfg.n_rx) * cfg.n_tx);
    for (int r = 0; r < cfg.n_rx; ++r)
      for (int t = 0; t < cfg.n_tx; ++t)
        blocks.push_back(effective_matrix(p, ch.profile, ch.gains_of(r, t)));
    sys = assemble_system(blocks, cfg.n_rx, cfg.n_tx, ctx.data_cols);
  }

  cvec detected;
  switch (cfg.detector.kind) {
    case DetectorKind::ml:
      detected = detect_ml(sys.to_dense(), ystack, cons).symbols;
      break;
    case DetectorKind::mp: {
      MpConfig mp;
      mp.n_iter = cfg.detector.n_iter;
      mp.damping = cfg.detector.damping;
      mp.noise_var = ctx.noise_var;
      const MpResult res = detect_mp(sys, ystack, cons, mp);
      detected = res.symbols;
      out.nonconverged = res.converged ? 0 : 1;
      break;
    }
    case DetectorKind::lmmse:
      detected = detect_lmmse(sys.to_dense(), ystack, ctx.noise_var, cons);
      break;
  }

  const auto decided = cons.demodulate(detected);
  for (int i = 0; i < total_bits; ++i)
    out.errors += decided[i] != bits[i] ? 1 : 0;
  out.bits = total_bits;
  return out;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n_rx < 1 || cfg.n_tx < 1)
    throw std::invalid_argument("config: antenna counts must be >= 1");
  if (cfg.snr_d_db.empty())
    throw std::invalid_argument("config: empty SNR grid");
  if (cfg.max_trials < 1 || cfg.target_errors < 1 || cfg.batch_size < 1)
    throw std::invalid_argument("config: trial controls must be >= 1");
  if (cfg.threads < 1)
    throw std::invalid_argument("config: threads must be >= 1");
  if (cfg.zeta_multiplier < 0.0)
    throw std::invalid_argument("config: zeta multiplier must be >= 0");
  if (cfg.profile.kind == ProfileSpec::Kind::fixed &&
      cfg.profile.fixed_paths.empty())
    throw std::invalid_argument("config: fixed profile without paths");
  if (cfg.profile.kind == ProfileSpec::Kind::jakes &&
      cfg.profile.jakes_delays.empty())
    throw std::invalid_argument("config: jakes profile without delays");
}

}  // namespace

BerResult run_ber(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const AfdmParams& p = cfg.params;
  const Constellation cons(cfg.modulation);
  std::optional<TransformFactorTable> table;
  if (cfg.csi == CsiMode::estimated) table.emplace(build_factor_table(p));

  BerResult result;
  for (double snr_db : cfg.snr_d_db) {
    const auto started = std::chrono::steady_clock::now();
    const double n0 = noise_var_of(snr_db);

    TrialContext ctx;
    ctx.cfg = &cfg;
    ctx.cons = &cons;
    ctx.noise_var = n0;
    ctx.zeta = cfg.zeta_multiplier * n0;
    EpaLayout layout;
    if (cfg.csi == CsiMode::estimated) {
      layout = make_epa_layout(p, cfg.n_tx,
                               pilot_amplitude_of(n0, cfg.snr_p_db));
      ctx.layout = &layout;
      ctx.table = &*table;
      ctx.data_cols.resize(layout.data_slots());
      std::iota(ctx.data_cols.begin(), ctx.data_cols.end(), layout.data_start);
    } else {
      ctx.data_cols.resize(p.N);
      std::iota(ctx.data_cols.begin(), ctx.data_cols.end(), 0);
    }

    TrialCounts total;
    long long done = 0;
    DaftTransformer transformer(p);
    while (total.errors < cfg.target_errors && done < cfg.max_trials) {
      const long long batch =
          std::min<long long>(cfg.batch_size, cfg.max_trials - done);
      if (cfg.threads <= 1) {
        for (long long i = 0; i < batch; ++i)
          total += run_trial(ctx, transformer,
                             trial_seed(cfg.master_seed, done + i));
      } else {
        const int workers =
            static_cast<int>(std::min<long long>(cfg.threads, batch));
        std::vector<TrialCounts> parts(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            DaftTransformer local(p);
            for (long long i = w; i < batch; i += workers)
              parts[w] += run_trial(ctx, local,
                                    trial_seed(cfg.master_seed, done + i));
          });
        }
        for (auto& th : pool) th.join();
        for (const auto& part : parts) total += part;
      }
      done += batch;
    }

    BerPoint pt;
    pt.snr_db = snr_db;
    pt.errors = total.errors;
    pt.bits = total.bits;
    pt.trials = done;
    pt.ber = total.bits > 0 ? static_cast<double>(total.errors) / total.bits
                            : 0.0;
    pt.ci_halfwidth =
        total.bits > 0
            ? 1.96 * std::sqrt(pt.ber * (1.0 - pt.ber) / total.bits)
            : 0.0;
    pt.detector_nonconverged = total.nonconverged;
    pt.seed = cfg.master_seed;
    pt.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                               started)
                     .count();
    result.points.push_back(pt);
  }
  return result;
}

DiversityReport diversity_slope(const std::vector<BerPoint>& points,
                                const SlopeWindow& window) {
  std::vector<double> xs, ys;
  DiversityReport report;
  for (const auto& pt : points) {
    if (pt.ber <= 0.0) continue;
    if (pt.ber < window.ber_lo || pt.ber > window.ber_hi) continue;
    if (pt.snr_db < window.snr_lo_db || pt.snr_db > window.snr_hi_db) continue;
    xs.push_back(pt.snr_db / 10.0);
    ys.push_back(-std::log10(pt.ber));
    report.snr_db_used.push_back(pt.snr_db);
  }
  if (xs.size() < 2)
    throw std::runtime_error(
        "diversity_slope: fewer than two usable BER points in the window");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0)
    throw std::runtime_error("diversity_slope: degenerate SNR spread");
  report.slope = sxy / sxx;
  report.points_used = static_cast<int>(xs.size());
  return report;
}

NmseReport nmse_of(const BandedChannelEstimate& est,
                   const std::vector<cmat>& truth, int n_tx) {
  if (truth.size() != est.blocks.size() || n_tx != est.n_tx)
    throw std::invalid_argument("nmse_of: block count mismatch");
  NmseReport rep;
  rep.n_rx = est.n_rx;
  rep.n_tx = est.n_tx;
  double num_sum = 0.0, den_sum = 0.0;
  for (size_t i = 0; i < truth.size(); ++i) {
    const double den = truth[i].squaredNorm();
    if (den <= 0.0) throw std::invalid_argument("nmse_of: zero truth block");
    const double num = (est.blocks[i].to_dense() - truth[i]).squaredNorm();
    rep.per_block.push_back(num / den);
    num_sum += num;
    den_sum += den;
  }
  rep.aggregate = num_sum / den_sum;
  return rep;
}

NmseReport run_nmse(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const AfdmParams& p = cfg.params;
  std::mt19937_64 rng(trial_seed(cfg.master_seed, 0));
  const auto ch = sample_channel(cfg.profile, p, cfg.n_rx, cfg.n_tx, rng);

  const EpaLayout layout = make_epa_layout(p, cfg.n_tx, 1.0);
  const std::vector<cvec> no_data(cfg.n_tx, cvec::Zero(layout.data_slots()));
  const auto tx_frames = build_epa_frames(layout, no_data);

  DaftTransformer dt(p);
  std::vector<cvec> rx(cfg.n_rx);
  for (int r = 0; r < cfg.n_rx; ++r) {
    cvec y = cvec::Zero(p.N);
    for (int t = 0; t < cfg.n_tx; ++t)
      y += apply_time_domain(p, ch.profile, ch.gains_of(r, t),
                             dt.to_time(tx_frames[t]));
    rx[r] = dt.to_daft(y);
  }

  const auto table = build_factor_table(p);
  const auto est = estimate_mimo(p, rx, layout, 0.0, table);

  std::vector<cmat> truth;
  truth.reserve(static_cast<size_t>(cfg.n_rx) * cfg.n_tx);
  for (int r = 0; r < cfg.n_rx; ++r)
    for (int t = 0; t < cfg.n_tx; ++t)
      truth.push_back(effective_matrix(p, ch.profile, ch.gains_of(r, t)));

  NmseReport rep = nmse_of(est, truth, cfg.n_tx);

  // Reconstruction-error oracle, measured from ground truth alone. Per
  // band diagonal j seeded at (m_j, pilot_t): same-delay content propagates
  // exactly; foreign-delay content F_j and cross-pilot content IPI_j keep
  // their magnitude under the unit-modulus factors, so each of the N
  // reconstructed entries errs by at most 2 F_j + IPI_j against truth.
  // Out-of-band truth energy is missed entirely and adds directly.
  const int L = p.band_L();
  const int reach = p.band_reach();
  const int block_w = p.block_width();
  for (int r = 0; r < cfg.n_rx; ++r) {
    for (int t = 0; t < cfg.n_tx; ++t) {
      const cmat& h = truth[static_cast<size_t>(r) * cfg.n_tx + t];
      const double total_energy = h.squaredNorm();
      // Summed out-of-band directly (not by subtraction) so the bound is
      // never negative and is exactly zero when every entry is in-band.
      double bound_num = 0.0;
      for (int m = 0; m < p.N; ++m)
        for (int mp = 0; mp < p.N; ++mp)
          if (mod_n(static_cast<long long>(mp) - m + reach, p.N) > L)
            bound_num += std::norm(h(m, mp));
      const int pilot = layout.pilot_slots[t];
      for (int j = 0; j <= L; ++j) {
        const int m_j = mod_n(static_cast<long long>(pilot) + reach - j, p.N);
        const int slot_delay = j / block_w;
        double foreign = 0.0;
        for (int i = 0; i < ch.profile.size(); ++i) {
          if (ch.profile.paths[i].delay == slot_delay) continue;
          foreign += std::abs(ch.gains_of(r, t)[i] *
                              subchannel_entry(p, ch.profile.paths[i], m_j,
                                               pilot));
        }
        cplx cross(0.0, 0.0);
        for (int t2 = 0; t2 < cfg.n_tx; ++t2) {
          if (t2 == t) continue;
          const int pilot2 = layout.pilot_slots[t2];
          for (int i = 0; i < ch.profile.size(); ++i)
            cross += ch.gains_of(r, t2)[i] *
                     subchannel_entry(p, ch.profile.paths[i], m_j, pilot2);
        }
        const double per_entry = 2.0 * foreign + std::abs(cross);
        bound_num += p.N * per_entry * per_entry;
      }
      rep.leakage_bound.push_back(bound_num / total_energy);
    }
  }
  return rep;
}

cmat build_phi(const AfdmParams& p, const DelayDopplerProfile& profile,
               const cvec& x) {
  if (x.size() != p.N) throw std::invalid_argument("build_phi: frame length");
  if (profile.size() == 0)
    throw std::invalid_argument("build_phi: empty profile");
  for (const auto& path : profile.paths)
    if (doppler_frac(path.doppler) != 0.0)
      throw std::invalid_argument("build_phi: integer Doppler required");
  cmat phi(p.N, profile.size());
  for (int i = 0; i < profile.size(); ++i)
    phi.col(i) = subchannel_matrix(p, profile.paths[i]) * x;
  return phi;
}

double pep_chernoff(const AfdmParams& p, const DelayDopplerProfile& profile,
                    const cvec& delta, int n_rx, double noise_var) {
  if (n_rx < 1) throw std::invalid_argument("pep_chernoff: n_rx must be >= 1");
  if (noise_var <= 0.0)
    throw std::invalid_argument("pep_chernoff: noise_var must be > 0");
  const cmat phi = build_phi(p, profile, delta);
  const Eigen::JacobiSVD<cmat> svd(phi);
  const auto lambda = svd.singularValues();
  const double denom = 4.0 * profile.size() * noise_var;
  double bound = 1.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    bound *= std::pow(1.0 + lambda[i] * lambda[i] / denom,
                      -static_cast<double>(n_rx));
  return bound;
}

}  // namespace afdm

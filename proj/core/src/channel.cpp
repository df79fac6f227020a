// channel.cpp
#include "afdm/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace afdm {

namespace {

void validate_path(const AfdmParams& p, const Path& path, const char* who) {
  if (path.delay < 0 || path.delay > p.l_max)
    throw std::invalid_argument(std::string(who) + ": path delay " +
                                std::to_string(path.delay) +
                                " outside [0, l_max]");
  const int alpha = doppler_int(path.doppler);
  if (alpha < -p.alpha_max || alpha > p.alpha_max)
    throw std::invalid_argument(std::string(who) +
                                ": integer Doppler part " +
                                std::to_string(alpha) +
                                " outside [-alpha_max, alpha_max]");
}

void validate_profile(const AfdmParams& p, const DelayDopplerProfile& profile,
                      const std::vector<cplx>& gains, const char* who) {
  if (profile.paths.empty())
    throw std::invalid_argument(std::string(who) + ": empty profile");
  if (gains.size() != profile.paths.size())
    throw std::invalid_argument(std::string(who) +
                                ": gain count != path count");
  for (const Path& path : profile.paths) validate_path(p, path, who);
}

// Integer 2*N*c1 (the delay block width under the standard c1 choice).
int two_n_c1(const AfdmParams& p, const char* who) {
  const double q = 2.0 * p.N * p.c1;
  const double qr = std::round(q);
  if (std::abs(q - qr) > 1e-9)
    throw std::invalid_argument(std::string(who) +
                                ": requires integer 2*N*c1");
  return static_cast<int>(qr);
}

// (e^{-j 2 pi u} - 1) / (e^{-j 2 pi u / N} - 1) with u = m + ind - m' + beta,
// evaluated after exact reduction of the integer part of u modulo N. The
// ratio peaks at N when u = 0 mod N and vanishes at other integers, so
// integer Doppler yields exact zeros off the central diagonal.
cplx spreading_factor(int N, int m, int mp, int ind, double beta) {
  const int k0 = mod_n(static_cast<long long>(m) + ind - mp, N);
  if (beta == 0.0)
    return k0 == 0 ? cplx(static_cast<double>(N), 0.0) : cplx(0.0, 0.0);
  const cplx num = std::polar(1.0, -kTwoPi * beta) - 1.0;
  const cplx den = std::polar(1.0, -kTwoPi * (k0 + beta) / N) - 1.0;
  return num / den;
}

// e^{j (2 pi / N) (N c1 l^2 - m' l + N c2 (m'^2 - m^2))}
cplx phase_factor(const AfdmParams& p, int l, int m, int mp) {
  const double t1 = p.N * p.c1 * static_cast<double>(l) * l;
  const double t2 = -static_cast<double>(mp) * l;
  const double t3 = p.N * p.c2 *
                    (static_cast<double>(mp) * mp - static_cast<double>(m) * m);
  const double turns = std::fmod((t1 + t2 + t3) / p.N, 1.0);
  return std::polar(1.0, kTwoPi * turns);
}

}  // namespace

int doppler_int(double nu) {
  // alpha with nu - alpha in (-1/2, 1/2]
  return static_cast<int>(std::ceil(nu - 0.5));
}

double doppler_frac(double nu) { return nu - doppler_int(nu); }

int index_indicator(const AfdmParams& p, const Path& path) {
  validate_path(p, path, "index_indicator");
  const int q = two_n_c1(p, "index_indicator");
  const long long shift = doppler_int(path.doppler) +
                          static_cast<long long>(q) * path.delay;
  return mod_n(shift, p.N);
}

cvec apply_time_domain(const AfdmParams& p, const DelayDopplerProfile& profile,
                       const std::vector<cplx>& gains, const cvec& s) {
  validate_profile(p, profile, gains, "apply_time_domain");
  if (s.size() != p.N)
    throw std::invalid_argument("apply_time_domain: frame length != N");
  cvec d = cvec::Zero(p.N);
  for (size_t i = 0; i < profile.paths.size(); ++i) {
    const Path& path = profile.paths[i];
    const cplx g = gains[i];
    for (int n = 0; n < p.N; ++n) {
      const cplx rot = std::polar(1.0, -kTwoPi * path.doppler * n / p.N);
      d[n] += g * rot * s[mod_n(n - path.delay, p.N)];
    }
  }
  return d;
}

cmat time_subchannel_matrix(const AfdmParams& p, const Path& path) {
  validate_path(p, path, "time_subchannel_matrix");
  cmat H = cmat::Zero(p.N, p.N);
  for (int n = 0; n < p.N; ++n) {
    const cplx rot = std::polar(1.0, -kTwoPi * path.doppler * n / p.N);
    H(n, mod_n(n - path.delay, p.N)) = rot;
  }
  return H;
}

cplx subchannel_entry(const AfdmParams& p, const Path& path, int m, int mp) {
  validate_path(p, path, "subchannel_entry");
  const int ind = index_indicator(p, path);
  const double beta = doppler_frac(path.doppler);
  const cplx f = spreading_factor(p.N, m, mp, ind, beta);
  if (f == cplx(0.0, 0.0)) return f;
  return phase_factor(p, path.delay, m, mp) * f / static_cast<double>(p.N);
}

cmat subchannel_matrix(const AfdmParams& p, const Path& path) {
  validate_path(p, path, "subchannel_matrix");
  const int ind = index_indicator(p, path);
  const double beta = doppler_frac(path.doppler);
  cmat H(p.N, p.N);
  for (int m = 0; m < p.N; ++m) {
    for (int mp = 0; mp < p.N; ++mp) {
      const cplx f = spreading_factor(p.N, m, mp, ind, beta);
      H(m, mp) = f == cplx(0.0, 0.0)
                     ? f
                     : phase_factor(p, path.delay, m, mp) * f /
                           static_cast<double>(p.N);
    }
  }
  return H;
}

cmat effective_matrix(const AfdmParams& p, const DelayDopplerProfile& profile,
                      const std::vector<cplx>& gains) {
  validate_profile(p, profile, gains, "effective_matrix");
  cmat H = cmat::Zero(p.N, p.N);
  for (size_t i = 0; i < profile.paths.size(); ++i)
    H += gains[i] * subchannel_matrix(p, profile.paths[i]);
  return H;
}

BandedBlock effective_band(const AfdmParams& p,
                           const DelayDopplerProfile& profile,
                           const std::vector<cplx>& gains) {
  validate_profile(p, profile, gains, "effective_band");
  BandedBlock b(p.N, p.band_L(), p.band_reach());
  for (size_t i = 0; i < profile.paths.size(); ++i) {
    const Path& path = profile.paths[i];
    const cplx g = gains[i];
    if (doppler_frac(path.doppler) == 0.0) {
      // Single central diagonal per row.
      const int ind = index_indicator(p, path);
      for (int m = 0; m < p.N; ++m) {
        const int col = mod_n(static_cast<long long>(m) + ind, p.N);
        const int slot = b.slot_of(m, col);
        if (slot >= 0) b.at(m, slot) += g * subchannel_entry(p, path, m, col);
      }
    } else {
      for (int m = 0; m < p.N; ++m)
        for (int j = 0; j < b.width(); ++j) {
          const int col = b.col_of(m, j);
          b.at(m, j) += g * subchannel_entry(p, path, m, col);
        }
    }
  }
  return b;
}

cmat assemble_mimo(const AfdmParams& p, const MimoChannelRealization& ch) {
  cmat H = cmat::Zero(static_cast<Eigen::Index>(p.N) * ch.n_rx,
                      static_cast<Eigen::Index>(p.N) * ch.n_tx);
  for (int r = 0; r < ch.n_rx; ++r)
    for (int t = 0; t < ch.n_tx; ++t)
      H.block(static_cast<Eigen::Index>(r) * p.N,
              static_cast<Eigen::Index>(t) * p.N, p.N, p.N) =
          effective_matrix(p, ch.profile, ch.gains_of(r, t));
  return H;
}

MimoChannelRealization sample_channel(const ProfileSpec& spec,
                                      const AfdmParams& p, int n_rx, int n_tx,
                                      std::mt19937_64& rng) {
  if (n_rx < 1 || n_tx < 1)
    throw std::invalid_argument("sample_channel: need n_rx, n_tx >= 1");

  MimoChannelRealization ch;
  ch.n_rx = n_rx;
  ch.n_tx = n_tx;

  // Profile first, then gains r-major / t-major / path-major: fixed stream
  // consumption order keeps a given seed reproducible.
  if (spec.kind == ProfileSpec::Kind::fixed) {
    if (spec.fixed_paths.empty())
      throw std::invalid_argument("sample_channel: no fixed paths given");
    ch.profile.paths = spec.fixed_paths;
  } else {
    if (spec.jakes_delays.empty())
      throw std::invalid_argument("sample_channel: no delays given");
    std::uniform_real_distribution<double> theta(-kPi, kPi);
    for (int delay : spec.jakes_delays) {
      double nu = spec.nu_max * std::cos(theta(rng));
      if (spec.integer_doppler) nu = std::round(nu);
      ch.profile.paths.push_back({delay, nu});
    }
  }
  for (const Path& path : ch.profile.paths) validate_path(p, path, "sample_channel");

  const int P = ch.profile.size();
  const double sigma = std::sqrt(1.0 / (2.0 * P));
  std::normal_distribution<double> gauss(0.0, 1.0);
  ch.gains.resize(static_cast<size_t>(n_rx) * n_tx);
  for (auto& pair_gains : ch.gains) {
    pair_gains.resize(P);
    for (int i = 0; i < P; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      pair_gains[i] = cplx(sigma * re, sigma * im);
    }
  }
  return ch;
}

}  // namespace afdm

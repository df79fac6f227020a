// channel.hpp - doubly dispersive channel model in time and chirp domains
#pragma once

#include <random>
#include <vector>

#include "afdm/banded.hpp"
#include "afdm/params.hpp"
#include "afdm/types.hpp"

namespace afdm {

// One propagation path with delay in samples and Doppler in bins.
struct Path {
  int delay = 0;       // integer, in [0, l_max]
  double doppler = 0;  // alpha + beta with alpha integer, beta in (-1/2, 1/2]
};

// Integer part of a Doppler shift, fractional remainder in (-1/2, 1/2].
int doppler_int(double nu);
double doppler_frac(double nu);

// Delay/Doppler geometry shared by every antenna pair of a link.
struct DelayDopplerProfile {
  std::vector<Path> paths;
  int size() const { return static_cast<int>(paths.size()); }
};

// How to draw a profile: either fixed paths, or random Doppler per path
// drawn as nu_max * cos(theta) with theta uniform (classic isotropic
// scattering), optionally rounded to integer bins.
struct ProfileSpec {
  enum class Kind { fixed, jakes };
  Kind kind = Kind::fixed;
  std::vector<Path> fixed_paths;       // kind == fixed
  std::vector<int> jakes_delays;       // kind == jakes, one entry per path
  double nu_max = 0.0;                 // kind == jakes
  bool integer_doppler = false;        // kind == jakes: round each Doppler
};

// Channel draw for an n_rx x n_tx link: one shared profile, independent
// complex normal gains with variance 1/P per path and antenna pair.
struct MimoChannelRealization {
  DelayDopplerProfile profile;
  int n_rx = 0;
  int n_tx = 0;
  std::vector<std::vector<cplx>> gains;  // [r * n_tx + t][path]

  const std::vector<cplx>& gains_of(int r, int t) const {
    return gains[static_cast<size_t>(r) * n_tx + t];
  }
};

MimoChannelRealization sample_channel(const ProfileSpec& spec,
                                      const AfdmParams& p, int n_rx, int n_tx,
                                      std::mt19937_64& rng);

// Row index shift of the path's central diagonal: (alpha + 2 N c1 l) mod N.
int index_indicator(const AfdmParams& p, const Path& path);

// d[n] = sum_i g_i e^{-j 2 pi nu_i n / N} s[(n - l_i) mod N], one antenna pair.
cvec apply_time_domain(const AfdmParams& p, const DelayDopplerProfile& profile,
                       const std::vector<cplx>& gains, const cvec& s);

// Time-domain subchannel matrix Delta_nu * Pi^l (dense; oracle use).
cmat time_subchannel_matrix(const AfdmParams& p, const Path& path);

// Closed-form chirp-domain subchannel entry and full matrix; the matrix
// equals A * (Delta_nu Pi^l) * A^H.
cplx subchannel_entry(const AfdmParams& p, const Path& path, int m, int mp);
cmat subchannel_matrix(const AfdmParams& p, const Path& path);

// Effective chirp-domain channel of one antenna pair: sum_i g_i H_i.
cmat effective_matrix(const AfdmParams& p, const DelayDopplerProfile& profile,
                      const std::vector<cplx>& gains);

// Same, restricted to the L+1 diagonal band (cheap; fractional-Doppler
// energy outside the band is dropped).
BandedBlock effective_band(const AfdmParams& p,
                           const DelayDopplerProfile& profile,
                           const std::vector<cplx>& gains);

// Dense (N n_rx) x (N n_tx) block matrix of the whole link.
cmat assemble_mimo(const AfdmParams& p, const MimoChannelRealization& ch);

}  // namespace afdm

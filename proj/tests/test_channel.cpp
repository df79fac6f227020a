// test_channel.cpp - chirp-domain channel against the conjugation oracle
#include <doctest.h>

#include <afdm/channel.hpp>
#include <afdm/daft.hpp>
#include <afdm/params.hpp>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace afdm;

namespace {

// Independent oracle: conjugate the time-domain subchannel by the dense
// transform. Everything here is built entry-wise from definitions.
cmat conjugated(const AfdmParams& p, const Path& path) {
  const cmat a = daft_matrix(p);
  return a * time_subchannel_matrix(p, path) * a.adjoint();
}

cvec random_cvec(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  cvec v(n);
  for (int i = 0; i < n; ++i) {
    const double re = u(rng);
    const double im = u(rng);
    v[i] = cplx(re, im);
  }
  return v;
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("doppler split into integer and fractional parts") {
  CHECK(doppler_int(0.0) == 0);
  CHECK(doppler_frac(0.0) == 0.0);
  CHECK(doppler_int(2.0) == 2);
  CHECK(doppler_int(-1.7) == -2);
  CHECK(doppler_frac(-1.7) == doctest::Approx(0.3));
  // Half-integers resolve with beta = +1/2.
  CHECK(doppler_int(1.5) == 1);
  CHECK(doppler_frac(1.5) == doctest::Approx(0.5));
  CHECK(doppler_int(0.4) == 0);
  CHECK(doppler_frac(0.4) == doctest::Approx(0.4));
}

TEST_CASE("closed form equals the conjugated time-domain subchannel") {
  const AfdmParams p = make_params(32, 2, 2, 1);
  for (const Path path : {Path{0, 0.0}, Path{1, 2.0}, Path{2, -1.0},
                          Path{1, 0.5}, Path{2, -1.7}, Path{0, 1.3}}) {
    const cmat direct = subchannel_matrix(p, path);
    CHECK((direct - conjugated(p, path)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("integer Doppler rows hold a single unit-magnitude entry") {
  const AfdmParams p = make_params(32, 2, 2, 0);
  const Path path{2, -1.0};
  const cmat h = subchannel_matrix(p, path);
  const int ind = index_indicator(p, path);
  for (int m = 0; m < p.N; ++m) {
    int nonzero = 0;
    for (int mp = 0; mp < p.N; ++mp)
      if (std::abs(h(m, mp)) > 1e-12) ++nonzero;
    CHECK(nonzero == 1);
    CHECK(std::abs(std::abs(h(m, (m + ind) % p.N)) - 1.0) < 1e-10);
  }
}

TEST_CASE("index indicator places each path in its delay block") {
  // alpha_max=4, k_nu=0: block width 9; delay 1, Doppler 0 sits 9 rows off.
  const AfdmParams p = make_params(1024, 4, 4, 0);
  CHECK(index_indicator(p, Path{1, 0.0}) == 9);
  CHECK(index_indicator(p, Path{0, 3.0}) == 3);
  CHECK(index_indicator(p, Path{2, -4.0}) == 14);
  CHECK(index_indicator(p, Path{0, -1.0}) == 1023);
}

TEST_CASE("effective matrix is the gain-weighted subchannel sum") {
  const AfdmParams p = make_params(16, 1, 1, 1);
  const DelayDopplerProfile profile{{Path{0, 0.7}, Path{1, -1.2}}};
  const std::vector<cplx> gains{cplx(0.8, 0.1), cplx(-0.3, 0.5)};
  const cmat expect = gains[0] * subchannel_matrix(p, profile.paths[0]) +
                      gains[1] * subchannel_matrix(p, profile.paths[1]);
  CHECK((effective_matrix(p, profile, gains) - expect).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("banded effective channel equals the dense band") {
  const AfdmParams p = make_params(32, 2, 2, 1);
  const DelayDopplerProfile profile{{Path{0, 0.4}, Path{2, -1.6}}};
  const std::vector<cplx> gains{cplx(0.6, -0.2), cplx(0.1, 0.9)};
  const cmat dense = effective_matrix(p, profile, gains);
  const BandedBlock band = effective_band(p, profile, gains);
  const BandedBlock oracle =
      BandedBlock::from_dense(dense, p.band_L(), p.band_reach());
  CHECK((band.to_dense() - oracle.to_dense()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("time-domain application equals the dense subchannel product") {
  const AfdmParams p = make_params(24, 2, 2, 0);
  const DelayDopplerProfile profile{{Path{0, 1.0}, Path{2, -0.3}}};
  const std::vector<cplx> gains{cplx(0.5, 0.5), cplx(-0.7, 0.2)};
  const cvec s = random_cvec(p.N, 21);
  cvec expect = cvec::Zero(p.N);
  for (int i = 0; i < profile.size(); ++i)
    expect += gains[i] * (time_subchannel_matrix(p, profile.paths[i]) * s);
  CHECK((apply_time_domain(p, profile, gains, s) - expect)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("sampling is reproducible and respects the spread limits") {
  const AfdmParams p = make_params(64, 2, 2, 1);
  ProfileSpec spec;
  spec.kind = ProfileSpec::Kind::jakes;
  spec.jakes_delays = {0, 1, 2};
  spec.nu_max = 2.0;
  spec.integer_doppler = true;
  std::mt19937_64 a(5), b(5);
  const MimoChannelRealization ra = sample_channel(spec, p, 2, 2, a);
  const MimoChannelRealization rb = sample_channel(spec, p, 2, 2, b);
  REQUIRE(ra.profile.size() == 3);
  REQUIRE(ra.gains.size() == 4);
  for (int i = 0; i < 3; ++i) {
    CHECK(ra.profile.paths[i].delay == spec.jakes_delays[i]);
    CHECK(ra.profile.paths[i].doppler == rb.profile.paths[i].doppler);
    const double nu = ra.profile.paths[i].doppler;
    CHECK(nu == std::round(nu));  // integer rounding requested
    CHECK(std::abs(nu) <= p.alpha_max);
  }
  for (size_t k = 0; k < ra.gains.size(); ++k)
    for (int i = 0; i < 3; ++i) CHECK(ra.gains[k][i] == rb.gains[k][i]);
}

TEST_CASE("path gains have variance 1/P per pair") {
  const AfdmParams p = make_params(64, 2, 2, 1);
  ProfileSpec spec;
  spec.fixed_paths = {Path{0, 0.0}, Path{1, 1.0}, Path{2, -2.0}};
  std::mt19937_64 rng(17);
  double energy = 0.0;
  const int draws = 20000;
  for (int d = 0; d < draws; ++d) {
    const MimoChannelRealization r = sample_channel(spec, p, 1, 1, rng);
    for (int i = 0; i < 3; ++i) energy += std::norm(r.gains[0][i]);
  }
  // Sum over the P paths of E|g|^2 = P * (1/P) = 1.
  CHECK(energy / draws == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("paths outside the supported spread are rejected") {
  const AfdmParams p = make_params(64, 2, 2, 1);
  const std::vector<cplx> g{cplx(1, 0)};
  CHECK_THROWS_AS(subchannel_matrix(p, Path{3, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(subchannel_matrix(p, Path{0, 2.7}), std::invalid_argument);
  CHECK_THROWS_AS(subchannel_matrix(p, Path{-1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(
      effective_matrix(p, DelayDopplerProfile{{Path{0, -2.6}}}, g),
      std::invalid_argument);
}

}  // TEST_SUITE

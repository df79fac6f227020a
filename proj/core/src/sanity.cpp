// sanity.cpp
#include "afdm/sanity.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "afdm/chanest.hpp"
#include "afdm/channel.hpp"
#include "afdm/daft.hpp"
#include "afdm/params.hpp"

namespace afdm {

namespace {

std::string fmt(const char* pattern, double value) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

cvec random_frame(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  cvec v(n);
  for (int i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v[i] = cplx(re, im);
  }
  return v;
}

SanityCheck check_unitarity() {
  SanityCheck c{"transform-unitarity", false, ""};
  std::mt19937_64 rng(7);
  double worst = 0.0;
  // Dense Gram check at small sizes, transform round trips at N = 1024.
  for (int n : {8, 64}) {
    const AfdmParams p = make_params(n, 1, 1, 0);
    const cmat a = daft_matrix(p);
    const cmat gram = a * a.adjoint() - cmat::Identity(n, n);
    worst = std::max(worst, gram.cwiseAbs().maxCoeff());
  }
  for (int n : {64, 1024}) {
    const AfdmParams p = make_params(n, 2, 2, 1);
    DaftTransformer dt(p);
    for (int rep = 0; rep < 4; ++rep) {
      const cvec x = random_frame(n, rng);
      worst = std::max(worst,
                       (dt.to_daft(dt.to_time(x)) - x).cwiseAbs().maxCoeff());
      worst = std::max(worst,
                       (dt.to_time(dt.to_daft(x)) - x).cwiseAbs().maxCoeff());
    }
  }
  c.pass = worst < 1e-10;
  c.detail = fmt("max deviation %.3g (tolerance 1e-10)", worst);
  return c;
}

SanityCheck check_factor_table(bool corrupt) {
  SanityCheck c{"factor-table-oracle", false, ""};
  const AfdmParams p = make_params(64, 2, 2, 1);
  TransformFactorTable table = build_factor_table(p);
  if (corrupt) table.corrupt_for_test(1, cplx(0.5, 0.25));
  if (table.entry_count() != 4 * p.band_L() + 1) {
    c.detail = "entry count != 4L+1";
    return c;
  }
  for (int m = 0; m < p.N; ++m) {
    for (int j = 0; j <= p.band_L(); ++j) {
      const int mp = mod_n(static_cast<long long>(m) + j - p.band_reach(), p.N);
      const cplx direct =
          transform_factor(p, delay_block_of(p, m, mp), m, mp);
      if (table.lookup(m, mp) != direct) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "lookup(%d, %d) differs from the direct formula", m, mp);
        c.detail = buf;
        return c;
      }
    }
  }
  c.pass = true;
  c.detail = "all in-band lookups bit-identical to the direct formula";
  return c;
}

SanityCheck check_reconstruction() {
  SanityCheck c{"diagonal-reconstruction", false, ""};
  const AfdmParams p = make_params(1024, 2, 2, 1);
  const Path path{1, -1.7};  // fractional Doppler
  const cmat h = subchannel_matrix(p, path);
  const int col = 100;
  double worst = 0.0;
  for (int m = 0; m < p.N; ++m) {
    cplx value = h(m, col);
    int row = m, c2 = col;
    for (int step = 0; step < p.N - 1; ++step) {
      value *= transform_factor(p, path.delay, row, c2);
      row = row + 1 == p.N ? 0 : row + 1;
      c2 = c2 + 1 == p.N ? 0 : c2 + 1;
      worst = std::max(worst, std::abs(value - h(row, c2)));
    }
  }
  c.pass = worst < 1e-9;
  c.detail = fmt("max entry error %.3g over all diagonals (tolerance 1e-9)",
                 worst);
  return c;
}

SanityCheck check_pipeline_duality() {
  SanityCheck c{"pipeline-duality", false, ""};
  const AfdmParams p = make_params(64, 2, 2, 1);
  DelayDopplerProfile profile;
  profile.paths = {Path{0, 0.7}, Path{2, -1.2}};
  const std::vector<cplx> gains = {cplx(0.8, 0.1), cplx(-0.3, 0.5)};
  std::mt19937_64 rng(11);
  DaftTransformer dt(p);
  const cmat h = effective_matrix(p, profile, gains);
  double worst = 0.0;
  for (int rep = 0; rep < 3; ++rep) {
    const cvec x = random_frame(p.N, rng);
    const cvec via_time =
        dt.to_daft(apply_time_domain(p, profile, gains, dt.to_time(x)));
    worst = std::max(worst, (via_time - h * x).cwiseAbs().maxCoeff());
  }
  c.pass = worst < 1e-10;
  c.detail = fmt("max deviation %.3g against the closed form", worst);
  return c;
}

}  // namespace

SanityReport run_sanity(bool corrupt_factor_table) {
  SanityReport report;
  report.checks.push_back(check_unitarity());
  report.checks.push_back(check_factor_table(corrupt_factor_table));
  report.checks.push_back(check_reconstruction());
  report.checks.push_back(check_pipeline_duality());
  return report;
}

}  // namespace afdm

// params.cpp
#include "afdm/params.hpp"

#include <string>

#include "afdm/types.hpp"

namespace afdm {

AfdmParams make_params(int N, int l_max, int alpha_max, int k_nu,
                       double c2_override) {
  if (N < 2) throw std::invalid_argument("make_params: N must be >= 2");
  if (l_max < 0 || alpha_max < 0 || k_nu < 0)
    throw std::invalid_argument("make_params: l_max, alpha_max, k_nu must be >= 0");

  const long long ident = static_cast<long long>(l_max + 1) * (2LL * alpha_max + 1);
  if (N < ident)
    throw std::invalid_argument(
        "make_params: N = " + std::to_string(N) +
        " cannot separate the delay/Doppler grid; need N >= " +
        std::to_string(ident));

  AfdmParams p;
  p.N = N;
  p.l_max = l_max;
  p.alpha_max = alpha_max;
  p.k_nu = k_nu;
  p.c1 = static_cast<double>(p.block_width()) / (2.0 * N);

  if (static_cast<long long>(p.band_L()) + 1 > N)
    throw std::invalid_argument(
        "make_params: band of " + std::to_string(p.band_L() + 1) +
        " diagonals does not fit in a frame of N = " + std::to_string(N));

  if (c2_override > 0.0) {
    if (c2_override >= 1.0 / (2.0 * N))
      throw std::invalid_argument("make_params: c2 must be < 1/(2N)");
    p.c2 = c2_override;
  } else {
    p.c2 = 1.0 / (kPi * static_cast<double>(N) * N);
  }
  return p;
}

}  // namespace afdm

// params.hpp - chirp-basis waveform parameters and their feasibility rules
#pragma once

#include <stdexcept>

namespace afdm {

/**
 * Waveform configuration for one frame of N chirp subcarriers.
 *
 * c1 ties delay blocks to Doppler bins: with A = 2*(alpha_max + k_nu) + 1
 * and c1 = A / (2N), each delay l occupies its own width-A block of cyclic
 * diagonals, so delay and Doppler are jointly readable from a single frame.
 * c2 only has to avoid resonances; any positive value well below 1/(2N)
 * works and the default 1/(pi*N^2) is kept configurable.
 */
struct AfdmParams {
  int N = 0;          // subcarriers per frame
  double c1 = 0.0;    // quadratic phase slope before the DFT
  double c2 = 0.0;    // quadratic phase slope after the DFT
  int l_max = 0;      // largest supported integer delay
  int alpha_max = 0;  // largest supported integer Doppler magnitude
  int k_nu = 0;       // per-side guard bins for fractional Doppler spill

  // Width of one delay block of cyclic diagonals.
  int block_width() const { return 2 * (alpha_max + k_nu) + 1; }
  // Index of the last cyclic diagonal carrying significant channel energy;
  // the band spans L+1 diagonals.
  int band_L() const { return (l_max + 1) * block_width() - 1; }
  // Per-side reach of the band relative to the main diagonal.
  int band_reach() const { return alpha_max + k_nu; }
};

/**
 * Validated constructor. Throws std::invalid_argument when the grid cannot
 * carry the requested delay/Doppler spread:
 *   N >= (l_max + 1) * (2*alpha_max + 1)  (identifiability of the P paths)
 *   band width L + 1 <= N                 (the band must fit in the frame)
 *   0 < c2 < 1/(2N)                       (when c2 is given explicitly)
 *
 * c2_override <= 0 selects the default 1/(pi*N^2).
 */
AfdmParams make_params(int N, int l_max, int alpha_max, int k_nu,
                       double c2_override = 0.0);

}  // namespace afdm

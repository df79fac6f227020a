// framing.hpp - embedded pilot frame layout and pilot/guard overhead accounting
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "afdm/params.hpp"
#include "afdm/types.hpp"

namespace afdm {

/**
 * Embedded pilot arrangement for an n_tx-antenna transmitter. Antenna t
 * (0-based) places its pilot at slot (L+1)(t+1) - 1; slots [0, data_start)
 * are otherwise zero on every antenna, and data occupies [data_start, N).
 * The staggering gives each pilot its own clean window of received rows.
 */
struct EpaLayout {
  int N = 0;
  int n_tx = 0;
  int L = 0;      // band diagonals minus one
  int reach = 0;  // alpha_max + k_nu, start of the first received window
  double pilot_amplitude = 1.0;
  std::vector<int> pilot_slots;  // one per antenna
  int data_start = 0;            // (L+1) * n_tx + L

  int data_slots() const { return N - data_start; }
  int overhead_slots() const { return data_start; }
};

// Throws when pilots + guards do not fit (data_start > N).
EpaLayout make_epa_layout(const AfdmParams& p, int n_tx,
                          double pilot_amplitude = 1.0);

// Rows of the received frame carrying pilot t's band, inclusive:
// [reach + (L+1) t, reach + (L+1)(t+1) - 1]. Windows for successive
// antennas tile without gap or overlap.
std::pair<int, int> pilot_rx_range(const EpaLayout& layout, int t);

// Per-antenna chirp-domain frames: data[t] supplies the N - data_start data
// symbols of antenna t.
std::vector<cvec> build_epa_frames(const EpaLayout& layout,
                                   const std::vector<cvec>& data);

// Pilot plus guard slots consumed by an n_tx-antenna embedded-pilot frame:
// (n_tx + 1)(l_max + 1)(2(alpha_max + k_nu) + 1) - 1.
long long overhead_mimo_afdm(int n_tx, int l_max, int alpha_max, int k_nu);

// Reference cost of the same estimation pilots on a rectangular
// delay-Doppler grid (OTFS-style embedded pilot):
// ((n_tx + 1) l_max + n_tx)(4(alpha_max + k_nu) + 1).
long long overhead_mimo_otfs(int n_tx, int l_max, int alpha_max, int k_nu);

// Human-readable comparison table for a list of k_nu values.
std::string overhead_report(int n_tx, int l_max, int alpha_max,
                            const std::vector<int>& k_nu_values, int N);

}  // namespace afdm

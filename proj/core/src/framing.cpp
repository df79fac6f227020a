// framing.cpp
#include "afdm/framing.hpp"

#include <cstdio>
#include <stdexcept>

namespace afdm {

EpaLayout make_epa_layout(const AfdmParams& p, int n_tx,
                          double pilot_amplitude) {
  if (n_tx < 1) throw std::invalid_argument("make_epa_layout: n_tx must be >= 1");
  if (pilot_amplitude <= 0.0)
    throw std::invalid_argument("make_epa_layout: pilot amplitude must be > 0");

  EpaLayout lay;
  lay.N = p.N;
  lay.n_tx = n_tx;
  lay.L = p.band_L();
  lay.reach = p.band_reach();
  lay.pilot_amplitude = pilot_amplitude;
  lay.data_start = (lay.L + 1) * n_tx + lay.L;
  if (lay.data_start > p.N)
    throw std::invalid_argument(
        "make_epa_layout: frame too small for pilots and guards");
  for (int t = 0; t < n_tx; ++t)
    lay.pilot_slots.push_back((lay.L + 1) * (t + 1) - 1);
  return lay;
}

std::pair<int, int> pilot_rx_range(const EpaLayout& layout, int t) {
  if (t < 0 || t >= layout.n_tx)
    throw std::out_of_range("pilot_rx_range: antenna index out of range");
  const int first = layout.reach + (layout.L + 1) * t;
  return {first, first + layout.L};
}

std::vector<cvec> build_epa_frames(const EpaLayout& layout,
                                   const std::vector<cvec>& data) {
  if (static_cast<int>(data.size()) != layout.n_tx)
    throw std::invalid_argument("build_epa_frames: one data vector per antenna");
  std::vector<cvec> frames;
  frames.reserve(layout.n_tx);
  for (int t = 0; t < layout.n_tx; ++t) {
    if (data[t].size() != layout.data_slots())
      throw std::invalid_argument(
          "build_epa_frames: data length != N - data_start");
    cvec x = cvec::Zero(layout.N);
    x[layout.pilot_slots[t]] = cplx(layout.pilot_amplitude, 0.0);
    x.segment(layout.data_start, layout.data_slots()) = data[t];
    frames.push_back(std::move(x));
  }
  return frames;
}

long long overhead_mimo_afdm(int n_tx, int l_max, int alpha_max, int k_nu) {
  const long long width = 2LL * (alpha_max + k_nu) + 1;
  return static_cast<long long>(n_tx + 1) * (l_max + 1) * width - 1;
}

long long overhead_mimo_otfs(int n_tx, int l_max, int alpha_max, int k_nu) {
  const long long height = 4LL * (alpha_max + k_nu) + 1;
  return (static_cast<long long>(n_tx + 1) * l_max + n_tx) * height;
}

std::string overhead_report(int n_tx, int l_max, int alpha_max,
                            const std::vector<int>& k_nu_values, int N) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line),
                "pilot/guard overhead, n_tx=%d l_max=%d alpha_max=%d N=%d\n",
                n_tx, l_max, alpha_max, N);
  out += line;
  out += "k_nu  afdm_slots  afdm_pct  otfs_slots  otfs_pct\n";
  for (int k : k_nu_values) {
    const long long a = overhead_mimo_afdm(n_tx, l_max, alpha_max, k);
    const long long o = overhead_mimo_otfs(n_tx, l_max, alpha_max, k);
    std::snprintf(line, sizeof(line), "%-4d  %-10lld  %-8.2f  %-10lld  %-8.2f\n",
                  k, a, 100.0 * static_cast<double>(a) / N, o,
                  100.0 * static_cast<double>(o) / N);
    out += line;
  }
  return out;
}

}  // namespace afdm

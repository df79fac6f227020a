// chanest.cpp
#include "afdm/chanest.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace afdm {

namespace {

cplx unit_phase_turns(double turns) {
  return std::polar(1.0, kTwoPi * std::fmod(turns, 1.0));
}

// Interior case value as a function of the plain (unwrapped) difference
// d = m' - m. Shared by transform_factor and the table builder so lookups
// are bit-identical to direct evaluation.
cplx interior_factor(const AfdmParams& p, int l, long long d) {
  const double arg = -static_cast<double>(l) +
                     2.0 * p.N * p.c2 * static_cast<double>(d);
  return unit_phase_turns(arg / p.N);
}

cplx row_wrap_factor(const AfdmParams& p, int l, int m_prime) {
  const double nsq = static_cast<double>(p.N - 1) * (p.N - 1);
  const double arg = -static_cast<double>(l) +
                     p.N * p.c2 * (nsq + 2.0 * m_prime + 1.0);
  return unit_phase_turns(arg / p.N);
}

cplx col_wrap_factor(const AfdmParams& p, int l, int m) {
  const double nsq = static_cast<double>(p.N - 1) * (p.N - 1);
  const double arg = -static_cast<double>(l) -
                     p.N * p.c2 * (nsq + 2.0 * m + 1.0);
  return unit_phase_turns(arg / p.N);
}

cplx corner_factor(const AfdmParams& p, int l) {
  return unit_phase_turns(-static_cast<double>(l) / p.N);
}

int band_slot(const AfdmParams& p, int m, int m_prime, const char* who) {
  const int j =
      mod_n(static_cast<long long>(m_prime) - m + p.band_reach(), p.N);
  if (j > p.band_L())
    throw std::out_of_range(std::string(who) + ": coordinate outside band");
  return j;
}

}  // namespace

cplx transform_factor(const AfdmParams& p, int l, int m, int m_prime) {
  if (m < 0 || m >= p.N || m_prime < 0 || m_prime >= p.N)
    throw std::out_of_range("transform_factor: index outside frame");
  const bool m_wraps = m == p.N - 1;
  const bool mp_wraps = m_prime == p.N - 1;
  if (m_wraps && mp_wraps) return corner_factor(p, l);
  if (m_wraps) return row_wrap_factor(p, l, m_prime);
  if (mp_wraps) return col_wrap_factor(p, l, m);
  return interior_factor(p, l, static_cast<long long>(m_prime) - m);
}

int delay_block_of(const AfdmParams& p, int m, int m_prime) {
  // Slots [l*A, (l+1)*A) belong to the block of delay l, A = block_width().
  return band_slot(p, m, m_prime, "delay_block_of") / p.block_width();
}

TransformFactorTable::TransformFactorTable(const AfdmParams& p)
    : N_(p.N), L_(p.band_L()), reach_(p.band_reach()) {
  entries_.resize(L_ + 1);
  for (int j = 0; j <= L_; ++j) {
    OffsetEntry& e = entries_[j];
    // Offset residue of this slot: o = (m' - m) mod N.
    const int o = mod_n(static_cast<long long>(j) - reach_, N_);
    e.delay = j / p.block_width();
    if (o == 0) {
      e.interior_pos = interior_factor(p, e.delay, 0);
      e.interior_neg = e.interior_pos;
      e.row_wrap = e.interior_pos;  // the zero-offset diagonal only meets
      e.col_wrap = e.interior_pos;  // the corner, whose value coincides
      entry_count_ += 1;
    } else {
      e.interior_pos = interior_factor(p, e.delay, o);
      e.interior_neg = interior_factor(p, e.delay, static_cast<long long>(o) - N_);
      e.row_wrap = row_wrap_factor(p, e.delay, o - 1);
      e.col_wrap = col_wrap_factor(p, e.delay, N_ - 1 - o);
      entry_count_ += 4;
    }
  }
}

cplx TransformFactorTable::lookup(int m, int m_prime) const {
  const int j = mod_n(static_cast<long long>(m_prime) - m + reach_, N_);
  if (j > L_)
    throw std::out_of_range("TransformFactorTable: coordinate outside band");
  const OffsetEntry& e = entries_[j];
  const int o = mod_n(static_cast<long long>(m_prime) - m, N_);
  if (o == 0) return e.interior_pos;
  if (m == N_ - 1) return e.row_wrap;
  if (m_prime == N_ - 1) return e.col_wrap;
  return m_prime > m ? e.interior_pos : e.interior_neg;
}

void TransformFactorTable::corrupt_for_test(int slot, cplx value) {
  OffsetEntry& e = entries_.at(slot);
  e.interior_pos = e.interior_neg = e.row_wrap = e.col_wrap = value;
}

TransformFactorTable build_factor_table(const AfdmParams& p) {
  return TransformFactorTable(p);
}

cvec threshold_detect(const cvec& y_r, const EpaLayout& layout,
                      const AfdmParams& p, int t, double zeta) {
  if (zeta < 0.0)
    throw std::invalid_argument("threshold_detect: zeta must be >= 0");
  if (y_r.size() != p.N || layout.N != p.N)
    throw std::invalid_argument("threshold_detect: frame/layout length != N");
  const auto [first, last] = pilot_rx_range(layout, t);
  const cplx pilot(layout.pilot_amplitude, 0.0);
  cvec band = cvec::Zero(layout.L + 1);
  for (int m = first; m <= last; ++m) {
    const cplx v = y_r[mod_n(m, p.N)];
    if (std::abs(v) >= zeta) band[m - first] = v / pilot;
  }
  return band;
}

BandedBlock reconstruct_diagonal(const AfdmParams& p, const cvec& column_band,
                                 int pilot_index,
                                 const TransformFactorTable& table,
                                 long long* multiplications) {
  const int L = p.band_L();
  if (column_band.size() != L + 1)
    throw std::invalid_argument("reconstruct_diagonal: band length != L+1");
  BandedBlock block(p.N, L, p.band_reach());
  long long mults = 0;
  // Entry i of the band was received at row (pilot - L + reach + i) mod N.
  const int first_row = pilot_index - L + p.band_reach();
  for (int i = 0; i <= L; ++i) {
    const cplx seed = column_band[i];
    if (seed == cplx(0.0, 0.0)) continue;
    int row = mod_n(first_row + i, p.N);
    int col = mod_n(pilot_index, p.N);
    const int slot = block.slot_of(row, col);  // invariant along the diagonal
    cplx value = seed;
    block.at(row, slot) = value;
    for (int step = 0; step < p.N - 1; ++step) {
      value *= table.lookup(row, col);
      ++mults;
      row = row + 1 == p.N ? 0 : row + 1;
      col = col + 1 == p.N ? 0 : col + 1;
      block.at(row, slot) = value;
    }
  }
  if (multiplications) *multiplications = mults;
  return block;
}

BandedChannelEstimate estimate_mimo(const AfdmParams& p,
                                    const std::vector<cvec>& rx_frames,
                                    const EpaLayout& layout, double zeta,
                                    const TransformFactorTable& table) {
  if (rx_frames.empty())
    throw std::invalid_argument("estimate_mimo: no received frames");
  BandedChannelEstimate est;
  est.n_rx = static_cast<int>(rx_frames.size());
  est.n_tx = layout.n_tx;
  est.zeta = zeta;
  est.pilot_amplitude = layout.pilot_amplitude;
  for (int r = 0; r < est.n_rx; ++r) {
    for (int t = 0; t < est.n_tx; ++t) {
      const cvec band = threshold_detect(rx_frames[r], layout, p, t, zeta);
      long long mults = 0;
      est.blocks.push_back(reconstruct_diagonal(
          p, band, layout.pilot_slots[t], table, &mults));
      est.step3_multiplications += mults;
    }
  }
  return est;
}

void write_estimate(std::ostream& os, const BandedBlock& block) {
  char line[128];
  for (int m = 0; m < block.rows(); ++m) {
    for (int j = 0; j < block.width(); ++j) {
      const cplx v = block.at(m, j);
      std::snprintf(line, sizeof(line), "%d %d %.17g %.17g\n", m,
                    block.col_of(m, j), v.real(), v.imag());
      os << line;
    }
  }
}

}  // namespace afdm

// chanest.hpp - pilot-aided banded channel estimation by diagonal reconstruction
#pragma once

#include <iosfwd>
#include <vector>

#include "afdm/banded.hpp"
#include "afdm/framing.hpp"
#include "afdm/params.hpp"
#include "afdm/types.hpp"

namespace afdm {

/**
 * Ratio between diagonally adjacent subchannel entries,
 *   T(l, m, m') = H_l[(m+1) mod N, (m'+1) mod N] / H_l[m, m'],
 * which depends on the delay and position only, never on Doppler. Four
 * closed-form cases depending on whether m or m' wraps at N-1.
 */
cplx transform_factor(const AfdmParams& p, int l, int m, int m_prime);

// Delay block owning a band coordinate: offsets within reach of block
// center l * block_width map to l. Throws when (m, m') is outside the band.
int delay_block_of(const AfdmParams& p, int m, int m_prime);

/**
 * Precomputed transform factors for every band offset: one value for the
 * zero offset and four per nonzero offset (the two interior segment values
 * of a wrapped cyclic diagonal plus the two wrap steps), 4L+1 in total.
 * Depends only on (N, c1, c2); reusable across all channel realizations.
 */
class TransformFactorTable {
 public:
  explicit TransformFactorTable(const AfdmParams& p);

  int band_width() const { return L_ + 1; }
  // Stored factor count, 4L+1.
  int entry_count() const { return entry_count_; }

  // Factor for an in-band coordinate, bit-identical to transform_factor
  // with l = delay_block_of(m, m'). Throws outside the band.
  cplx lookup(int m, int m_prime) const;

  // Test hook: overwrite one stored value (sanity checks use this to prove
  // the oracle notices corruption).
  void corrupt_for_test(int slot, cplx value);

 private:
  struct OffsetEntry {
    int delay = 0;
    cplx interior_pos;  // segment with plain difference  o
    cplx interior_neg;  // segment with plain difference  o - N
    cplx row_wrap;      // step at m = N-1
    cplx col_wrap;      // step at m' = N-1
  };
  int N_ = 0;
  int L_ = 0;
  int reach_ = 0;
  int entry_count_ = 0;
  std::vector<OffsetEntry> entries_;  // indexed by band slot

  friend TransformFactorTable build_factor_table(const AfdmParams& p);
};

TransformFactorTable build_factor_table(const AfdmParams& p);

/**
 * Step 2: divide the received rows of pilot t's window by the pilot and
 * zero everything with magnitude below zeta. Entry i of the result sits at
 * row (pilot_slot - L + reach + i) mod N, column pilot_slot.
 */
cvec threshold_detect(const cvec& y_r, const EpaLayout& layout,
                      const AfdmParams& p, int t, double zeta);

/**
 * Step 3: propagate every surviving column-band entry along its cyclic
 * diagonal, multiplying by the transform factor of the coordinate's delay
 * block at each step. At most (L+1)(N-1) complex multiplications; the
 * counter reports the exact number used.
 */
BandedBlock reconstruct_diagonal(const AfdmParams& p, const cvec& column_band,
                                 int pilot_index,
                                 const TransformFactorTable& table,
                                 long long* multiplications = nullptr);

// All blocks of one link estimate plus the settings that produced them.
struct BandedChannelEstimate {
  int n_rx = 0;
  int n_tx = 0;
  double zeta = 0.0;
  double pilot_amplitude = 0.0;
  long long step3_multiplications = 0;  // summed over blocks
  std::vector<BandedBlock> blocks;      // receive-major order

  const BandedBlock& block(int r, int t) const {
    return blocks[static_cast<size_t>(r) * n_tx + t];
  }
};

// Algorithm: per (r, t): extract window, threshold, reconstruct.
BandedChannelEstimate estimate_mimo(const AfdmParams& p,
                                    const std::vector<cvec>& rx_frames,
                                    const EpaLayout& layout, double zeta,
                                    const TransformFactorTable& table);

// One "row col re im" line per stored band entry, %.17g fields.
void write_estimate(std::ostream& os, const BandedBlock& block);

}  // namespace afdm

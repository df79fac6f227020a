// banded.hpp - cyclic banded storage for one receive/transmit channel block
#pragma once

#include "afdm/types.hpp"

namespace afdm {

/**
 * N x N channel blocks concentrate their energy on L+1 cyclic diagonals:
 * for row m the populated columns are (m + o) mod N with the signed offset
 * o in [-reach, L - reach]. This type stores exactly those entries, indexed
 * by (row, slot) with slot = o + reach in [0, L].
 */
class BandedBlock {
 public:
  BandedBlock() = default;
  BandedBlock(int N, int L, int reach)
      : N_(N), L_(L), reach_(reach), data_(cmat::Zero(N, L + 1)) {}

  int rows() const { return N_; }
  int width() const { return L_ + 1; }
  int reach() const { return reach_; }

  cplx& at(int row, int slot) { return data_(row, slot); }
  const cplx& at(int row, int slot) const { return data_(row, slot); }

  // Column holding slot j of a row.
  int col_of(int row, int slot) const { return mod_n(row + slot - reach_, N_); }

  // Slot of a (row, col) pair, or -1 when the entry lies outside the band.
  int slot_of(int row, int col) const {
    const int o = mod_n(static_cast<long long>(col) - row + reach_, N_);
    return o <= L_ ? o : -1;
  }

  bool in_band(int row, int col) const { return slot_of(row, col) >= 0; }

  cmat to_dense() const {
    cmat full = cmat::Zero(N_, N_);
    for (int m = 0; m < N_; ++m)
      for (int j = 0; j <= L_; ++j) full(m, col_of(m, j)) = data_(m, j);
    return full;
  }

  static BandedBlock from_dense(const cmat& full, int L, int reach) {
    BandedBlock b(static_cast<int>(full.rows()), L, reach);
    for (int m = 0; m < b.N_; ++m)
      for (int j = 0; j <= L; ++j) b.data_(m, j) = full(m, b.col_of(m, j));
    return b;
  }

  double squared_norm() const { return data_.squaredNorm(); }

 private:
  int N_ = 0;
  int L_ = 0;
  int reach_ = 0;
  cmat data_;
};

}  // namespace afdm

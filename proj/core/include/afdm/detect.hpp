// detect.hpp - symbol detection: exhaustive ML, message passing, linear MMSE
#pragma once

#include <utility>
#include <vector>

#include "afdm/constellation.hpp"
#include "afdm/types.hpp"

namespace afdm {

// Measurement model y = H x + n stored column-wise: unknown k appears in
// observation row cols[k][i].first with coefficient cols[k][i].second.
// Exactly-zero coefficients are never stored.
struct SparseSystem {
  int rows = 0;
  std::vector<std::vector<std::pair<int, cplx>>> cols;

  int unknowns() const { return static_cast<int>(cols.size()); }
  cmat to_dense() const;
  static SparseSystem from_dense(const cmat& h);
  cvec apply(const cvec& x) const;
  // Largest number of unknowns any single observation row touches.
  int max_row_degree() const;
};

// Exhaustive maximum-likelihood search, exact by construction. Enumerates
// candidates in reflected mixed-radix Gray order so each step changes one
// coordinate and the residual updates in O(rows).
struct MlResult {
  cvec symbols;
  double metric = 0.0;      // ||y - H x_hat||^2
  long long visited = 0;    // candidates scored
};
// Throws when |alphabet|^unknowns exceeds 2^20.
MlResult detect_ml(const cmat& h, const cvec& y, const Constellation& cons);

struct MpConfig {
  int n_iter = 30;
  double damping = 0.6;       // weight of the fresh message, in (0, 1]
  double noise_var = 1.0;     // > 0
  double tol = 1e-4;          // stop when max posterior change drops below
};

struct MpResult {
  cvec symbols;
  bool converged = false;
  int iterations = 0;         // iterations actually run
  long long ops = 0;          // elementary message updates, all iterations
};
// Gaussian-approximation message passing on the bipartite graph induced by
// the sparse system: each observation treats the other symbols' interference
// plus noise as Gaussian, probability messages are damped, and the hard
// decision is the posterior argmax. Non-convergence is reported, not thrown.
MpResult detect_mp(const SparseSystem& sys, const cvec& y,
                   const Constellation& cons, const MpConfig& cfg);

// x_soft = H^H (H H^H + N0 I)^{-1} y, then nearest alphabet point.
cvec detect_lmmse(const cmat& h, const cvec& y, double noise_var,
                  const Constellation& cons);

}  // namespace afdm

// daft.hpp - discrete affine Fourier transform pair, fast path and dense path
#pragma once

#include <memory>

#include "afdm/params.hpp"
#include "afdm/types.hpp"

namespace afdm {

// Diagonal of the chirp e^{-j 2 pi c n^2}, n = 0..N-1. When 2*N*c is an
// integer the quadratic phase is reduced modulo 2N in exact integer
// arithmetic, so entries stay accurate for large N.
cvec chirp_diag(double c, int N);

// Dense analysis matrix A = Lambda_c2 * F * Lambda_c1 with F the unitary
// DFT. Built entry-wise from the defining formula; serves as the oracle for
// the FFT-based path and for closed-form channel checks.
cmat daft_matrix(int N, double c1, double c2);
cmat daft_matrix(const AfdmParams& p);

/**
 * FFT-backed transform pair for a fixed (N, c1, c2):
 *   to_daft(s) = A s        (time -> chirp domain)
 *   to_time(x) = A^H x      (chirp domain -> time)
 * Both are chirp multiply, (I)FFT, chirp multiply, O(N log N).
 *
 * Each instance owns its FFT plans and scratch buffers; use one instance per
 * thread. Construction is internally serialized (planner requirement).
 */
class DaftTransformer {
 public:
  DaftTransformer(int N, double c1, double c2);
  explicit DaftTransformer(const AfdmParams& p)
      : DaftTransformer(p.N, p.c1, p.c2) {}
  ~DaftTransformer();

  DaftTransformer(const DaftTransformer&) = delete;
  DaftTransformer& operator=(const DaftTransformer&) = delete;
  DaftTransformer(DaftTransformer&&) noexcept;
  DaftTransformer& operator=(DaftTransformer&&) noexcept;

  int size() const { return N_; }

  cvec to_daft(const cvec& time_signal);
  cvec to_time(const cvec& daft_symbols);

 private:
  struct Fft;
  int N_ = 0;
  cvec chirp1_;  // e^{-j 2 pi c1 n^2}
  cvec chirp2_;  // e^{-j 2 pi c2 m^2}
  std::unique_ptr<Fft> fft_;
};

// One-shot conveniences; construct a transformer internally.
cvec daft(const AfdmParams& p, const cvec& time_signal);
cvec idaft(const AfdmParams& p, const cvec& daft_symbols);

}  // namespace afdm

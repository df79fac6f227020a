// daft.cpp
#include "afdm/daft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace afdm {

namespace {

// FFTW planner calls are not thread safe; executions are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_length(const cvec& v, int N, const char* who) {
  if (v.size() != N)
    throw std::invalid_argument(std::string(who) + ": frame length != N");
}

}  // namespace

cvec chirp_diag(double c, int N) {
  if (N < 1) throw std::invalid_argument("chirp_diag: N must be >= 1");
  cvec d(N);
  const double q = 2.0 * N * c;
  const double q_round = std::round(q);
  const bool exact = std::abs(q - q_round) < 1e-12 &&
                     std::abs(q_round) < 9.0e15;
  if (exact) {
    // c = q/(2N): reduce q*n^2 mod 2N exactly before taking the angle.
    const long long twoN = 2LL * N;
    const long long qi = static_cast<long long>(q_round) % twoN;
    for (int n = 0; n < N; ++n) {
      const long long nn = (static_cast<long long>(n) * n) % twoN;
      const long long r = mod_n(qi * nn, static_cast<int>(twoN));
      d[n] = std::polar(1.0, -kTwoPi * static_cast<double>(r) / twoN);
    }
  } else {
    for (int n = 0; n < N; ++n) {
      const double phase = std::fmod(c * static_cast<double>(n) * n, 1.0);
      d[n] = std::polar(1.0, -kTwoPi * phase);
    }
  }
  return d;
}

cmat daft_matrix(int N, double c1, double c2) {
  const cvec g1 = chirp_diag(c1, N);
  const cvec g2 = chirp_diag(c2, N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  cmat A(N, N);
  for (int m = 0; m < N; ++m) {
    for (int n = 0; n < N; ++n) {
      const int mn = mod_n(static_cast<long long>(m) * n, N);
      const cplx f = std::polar(scale, -kTwoPi * mn / N);
      A(m, n) = g2[m] * f * g1[n];
    }
  }
  return A;
}

cmat daft_matrix(const AfdmParams& p) { return daft_matrix(p.N, p.c1, p.c2); }

struct DaftTransformer::Fft {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Fft(int N) {
    in = fftw_alloc_complex(N);
    out = fftw_alloc_complex(N);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_1d(N, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(N, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    fftw_free(in);
    fftw_free(out);
  }
};

DaftTransformer::DaftTransformer(int N, double c1, double c2)
    : N_(N),
      chirp1_(chirp_diag(c1, N)),
      chirp2_(chirp_diag(c2, N)),
      fft_(std::make_unique<Fft>(N)) {}

DaftTransformer::~DaftTransformer() = default;
DaftTransformer::DaftTransformer(DaftTransformer&&) noexcept = default;
DaftTransformer& DaftTransformer::operator=(DaftTransformer&&) noexcept =
    default;

cvec DaftTransformer::to_daft(const cvec& time_signal) {
  check_length(time_signal, N_, "to_daft");
  for (int n = 0; n < N_; ++n) {
    const cplx v = time_signal[n] * chirp1_[n];
    fft_->in[n][0] = v.real();
    fft_->in[n][1] = v.imag();
  }
  fftw_execute(fft_->fwd);
  cvec x(N_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N_));
  for (int m = 0; m < N_; ++m)
    x[m] = scale * chirp2_[m] * cplx(fft_->out[m][0], fft_->out[m][1]);
  return x;
}

cvec DaftTransformer::to_time(const cvec& daft_symbols) {
  check_length(daft_symbols, N_, "to_time");
  for (int m = 0; m < N_; ++m) {
    const cplx v = daft_symbols[m] * std::conj(chirp2_[m]);
    fft_->in[m][0] = v.real();
    fft_->in[m][1] = v.imag();
  }
  fftw_execute(fft_->bwd);
  cvec s(N_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N_));
  for (int n = 0; n < N_; ++n)
    s[n] = scale * std::conj(chirp1_[n]) * cplx(fft_->out[n][0], fft_->out[n][1]);
  return s;
}

cvec daft(const AfdmParams& p, const cvec& time_signal) {
  DaftTransformer t(p);
  return t.to_daft(time_signal);
}

cvec idaft(const AfdmParams& p, const cvec& daft_symbols) {
  DaftTransformer t(p);
  return t.to_time(daft_symbols);
}

}  // namespace afdm

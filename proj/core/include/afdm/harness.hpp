// harness.hpp - Monte-Carlo experiment engine with deterministic seeding
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "afdm/chanest.hpp"
#include "afdm/channel.hpp"
#include "afdm/constellation.hpp"
#include "afdm/detect.hpp"
#include "afdm/framing.hpp"
#include "afdm/params.hpp"

namespace afdm {

enum class CsiMode { perfect, estimated };
enum class DetectorKind { ml, mp, lmmse };

DetectorKind parse_detector(const std::string& name);
std::string detector_name(DetectorKind kind);
CsiMode parse_csi(const std::string& name);
std::string csi_name(CsiMode mode);

struct DetectorSpec {
  DetectorKind kind = DetectorKind::mp;
  int n_iter = 30;       // message-passing iterations
  double damping = 0.6;  // weight of the fresh message
};

// One bit-error-rate experiment. Data-symbol noise variance per SNR point
// is N0 = 10^(-snr_db/10) under unit average symbol energy; the pilot
// amplitude realizes pilot energy = N0 * 10^(snr_p_db/10).
struct ExperimentConfig {
  AfdmParams params = make_params(64, 2, 2, 1);
  int n_rx = 1;
  int n_tx = 1;
  ProfileSpec profile;
  Modulation modulation = Modulation::bpsk;
  DetectorSpec detector;
  CsiMode csi = CsiMode::perfect;
  std::vector<double> snr_d_db;
  double snr_p_db = 50.0;
  double zeta_multiplier = 6.0;  // detection threshold = multiplier * N0
  long long max_trials = 200000;    // per SNR point
  long long target_errors = 100;    // stop a point early past this count
  int batch_size = 64;              // stop checks on batch boundaries only
  std::uint64_t master_seed = 1;
  int threads = 1;
  std::string label = "experiment";
};

double noise_var_of(double snr_db);                       // 10^(-snr/10)
double pilot_amplitude_of(double noise_var, double snr_p_db);

// Stateless scrambler; trial seeds are splitmix64(master ^ trial) so any
// execution order reproduces the same per-trial streams.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial_index);

// Circularly symmetric complex Gaussian vector, variance noise_var per entry.
cvec draw_noise(int n, double noise_var, std::mt19937_64& rng);

struct BerPoint {
  double snr_db = 0.0;
  long long errors = 0;
  long long bits = 0;
  long long trials = 0;
  double ber = 0.0;
  double ci_halfwidth = 0.0;  // 95% normal-approximation half-width
  double seconds = 0.0;
  long long detector_nonconverged = 0;
  std::uint64_t seed = 0;  // master seed that reproduces this row
};

struct BerResult {
  std::vector<BerPoint> points;
};

// Per trial: draw a channel, build frames (all-data under perfect CSI,
// embedded-pilot under estimated CSI), run the time-domain pipeline, add
// noise, estimate when applicable, detect, count data-slot bit errors.
// Bit-identical for a fixed (config, master_seed) regardless of threads.
BerResult run_ber(const ExperimentConfig& cfg);

struct SlopeWindow {
  double ber_lo = 1e-5;
  double ber_hi = 1e-2;
  double snr_lo_db = -1e300;
  double snr_hi_db = 1e300;
};

struct DiversityReport {
  double slope = 0.0;  // least-squares slope of -log10(BER) vs snr_db/10
  int points_used = 0;
  std::vector<double> snr_db_used;
};

// Throws when fewer than two positive-BER points fall inside the window.
DiversityReport diversity_slope(const std::vector<BerPoint>& points,
                                const SlopeWindow& window = {});

struct NmseReport {
  int n_rx = 0;
  int n_tx = 0;
  std::vector<double> per_block;      // ||Hhat - H||_F^2 / ||H||_F^2, [r*n_tx+t]
  std::vector<double> leakage_bound;  // provable per-block bound, same index
  double aggregate = 0.0;             // summed numerators over denominators
  double block(int r, int t) const { return per_block[r * n_tx + t]; }
  double bound(int r, int t) const { return leakage_bound[r * n_tx + t]; }
};

// Error of the band-expanded estimate against dense truth, truth[r*n_tx+t].
NmseReport nmse_of(const BandedChannelEstimate& est,
                   const std::vector<cmat>& truth, int n_tx);

// Noiseless estimator-quality probe: pilots-only frames at unit pilot
// amplitude, zero threshold, channel drawn from cfg.profile with the master
// seed. Fills leakage_bound with the reconstruction-error oracle: truth
// energy outside the band plus, per band diagonal, the worst-case drift of
// foreign-delay and cross-pilot seed contamination (each band diagonal has
// constant magnitude, so contamination can at most double against truth).
NmseReport run_nmse(const ExperimentConfig& cfg);

// Column i = subchannel_matrix(path_i) * x. Integer Doppler only.
cmat build_phi(const AfdmParams& p, const DelayDopplerProfile& profile,
               const cvec& x);

// Pairwise error bound prod_l (1 + lambda_l^2/(4 P N0))^{-n_rx} from the
// singular values lambda of build_phi(delta). Integer Doppler only.
double pep_chernoff(const AfdmParams& p, const DelayDopplerProfile& profile,
                    const cvec& delta, int n_rx, double noise_var);

// Stacks per-antenna channel blocks into the detection system over the
// given per-antenna data columns; unknown u = t * data_cols.size() + c.
SparseSystem assemble_system(const std::vector<BandedBlock>& blocks, int n_rx,
                             int n_tx, const std::vector<int>& data_cols);
SparseSystem assemble_system(const std::vector<cmat>& blocks, int n_rx,
                             int n_tx, const std::vector<int>& data_cols);

}  // namespace afdm

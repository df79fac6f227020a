// config.hpp - experiment configuration files, manifests, and CSV output
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "afdm/afdma.hpp"
#include "afdm/harness.hpp"

namespace afdm {

enum class RunKind { ber, diversity, nmse, overhead, afdma_plan };

RunKind parse_run_kind(const std::string& name);
std::string run_kind_name(RunKind kind);

struct OverheadRequest {
  int n_tx = 2;
  int l_max = 2;
  int alpha_max = 2;
  std::vector<int> k_nu_values = {0};
  int N = 1024;
};

struct AfdmaRequest {
  AfdmaPlan::Direction direction = AfdmaPlan::Direction::downlink;
  int N = 64;
  int n_bs = 1;           // downlink only
  int L_max = 0;          // downlink pilot guard radius
  std::vector<AfdmaUser> users;
};

// One parsed configuration file.
struct RunRequest {
  RunKind kind = RunKind::ber;
  ExperimentConfig experiment;            // ber / diversity / nmse
  std::vector<double> zeta_multipliers;   // optional threshold sweep (ber)
  std::vector<int> k_nu_sweep;            // optional guard sweep (nmse)
  SlopeWindow slope_window;               // diversity
  OverheadRequest overhead;
  AfdmaRequest afdma;
};

// Throws std::invalid_argument with a field-level message on any problem;
// unknown top-level keys are rejected to catch typos.
RunRequest parse_run_request(const std::string& json_text);
RunRequest load_run_request(const std::string& path);

// Resolved settings as JSON: every defaulted field made explicit, plus the
// library version and the master seed, so the file alone reproduces a run.
std::string manifest_text(const RunRequest& req);

// Fixed column contract: snr_db, ber, errors, bits, ci_halfwidth, seed.
void write_ber_csv(std::ostream& os, const BerResult& result);
// Columns: rx, tx, nmse, leakage_bound; final row aggregates with rx=tx=-1.
void write_nmse_csv(std::ostream& os, const NmseReport& report);

}  // namespace afdm

// config.cpp
#include "afdm/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#ifndef AFDM_VERSION
#define AFDM_VERSION "unversioned"
#endif

namespace afdm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

const json& member(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing required key \"") + key + "\"");
  return *it;
}

double as_number(const json& j, const char* key) {
  if (!j.is_number()) fail(std::string("\"") + key + "\" must be a number");
  return j.get<double>();
}

int as_int(const json& j, const char* key) {
  if (!j.is_number_integer())
    fail(std::string("\"") + key + "\" must be an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const char* key) {
  if (!j.is_string()) fail(std::string("\"") + key + "\" must be a string");
  return j.get<std::string>();
}

std::vector<double> parse_grid(const json& j, const char* key) {
  std::vector<double> grid;
  if (j.is_array()) {
    for (const auto& v : j) grid.push_back(as_number(v, key));
  } else if (j.is_object()) {
    const double start = as_number(member(j, "start"), "start");
    const double stop = as_number(member(j, "stop"), "stop");
    const double step = as_number(member(j, "step"), "step");
    if (step <= 0.0) fail(std::string("\"") + key + "\": step must be > 0");
    for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
  } else {
    fail(std::string("\"") + key +
         "\" must be an array or a start/stop/step object");
  }
  if (grid.empty()) fail(std::string("\"") + key + "\" is empty");
  return grid;
}

AfdmParams parse_params(const json& j) {
  if (!j.is_object()) fail("\"params\" must be an object");
  const int n = as_int(member(j, "N"), "N");
  const int l_max = as_int(member(j, "l_max"), "l_max");
  const int alpha_max = as_int(member(j, "alpha_max"), "alpha_max");
  const int k_nu = as_int(member(j, "k_nu"), "k_nu");
  double c2 = 0.0;
  if (j.contains("c2")) c2 = as_number(j["c2"], "c2");
  try {
    return make_params(n, l_max, alpha_max, k_nu, c2);
  } catch (const std::exception& e) {
    fail(std::string("params: ") + e.what());
  }
}

ProfileSpec parse_profile(const json& j) {
  if (!j.is_object()) fail("\"profile\" must be an object");
  ProfileSpec spec;
  const std::string kind = as_string(member(j, "kind"), "kind");
  if (kind == "fixed") {
    spec.kind = ProfileSpec::Kind::fixed;
    const json& paths = member(j, "paths");
    if (!paths.is_array() || paths.empty())
      fail("profile.paths must be a non-empty array");
    for (const auto& pj : paths) {
      Path path;
      path.delay = as_int(member(pj, "delay"), "delay");
      path.doppler = as_number(member(pj, "doppler"), "doppler");
      spec.fixed_paths.push_back(path);
    }
  } else if (kind == "jakes") {
    spec.kind = ProfileSpec::Kind::jakes;
    const json& delays = member(j, "delays");
    if (!delays.is_array() || delays.empty())
      fail("profile.delays must be a non-empty array");
    for (const auto& d : delays)
      spec.jakes_delays.push_back(as_int(d, "delays"));
    spec.nu_max = as_number(member(j, "nu_max"), "nu_max");
    if (j.contains("integer_doppler")) {
      if (!j["integer_doppler"].is_boolean())
        fail("profile.integer_doppler must be a boolean");
      spec.integer_doppler = j["integer_doppler"].get<bool>();
    }
  } else {
    fail("profile.kind must be \"fixed\" or \"jakes\"");
  }
  return spec;
}

void parse_experiment(const json& j, RunRequest& req) {
  ExperimentConfig& e = req.experiment;
  e.params = parse_params(member(j, "params"));
  e.profile = parse_profile(member(j, "profile"));
  if (j.contains("mimo")) {
    const json& m = j["mimo"];
    e.n_rx = as_int(member(m, "n_rx"), "n_rx");
    e.n_tx = as_int(member(m, "n_tx"), "n_tx");
  }
  if (j.contains("modulation"))
    e.modulation = parse_modulation(as_string(j["modulation"], "modulation"));
  if (j.contains("detector")) {
    const json& d = j["detector"];
    e.detector.kind = parse_detector(as_string(member(d, "kind"), "kind"));
    if (d.contains("n_iter")) e.detector.n_iter = as_int(d["n_iter"], "n_iter");
    if (d.contains("damping"))
      e.detector.damping = as_number(d["damping"], "damping");
  }
  if (j.contains("csi")) e.csi = parse_csi(as_string(j["csi"], "csi"));
  if (j.contains("snr_d_db")) e.snr_d_db = parse_grid(j["snr_d_db"], "snr_d_db");
  if (e.snr_d_db.empty()) {
    if (req.kind != RunKind::nmse) fail("missing required key \"snr_d_db\"");
    e.snr_d_db = {0.0};  // unused by the noiseless probe
  }
  if (j.contains("snr_p_db")) e.snr_p_db = as_number(j["snr_p_db"], "snr_p_db");
  if (j.contains("zeta_multiplier"))
    e.zeta_multiplier = as_number(j["zeta_multiplier"], "zeta_multiplier");
  if (j.contains("max_trials"))
    e.max_trials = static_cast<long long>(as_number(j["max_trials"], "max_trials"));
  if (j.contains("target_errors"))
    e.target_errors =
        static_cast<long long>(as_number(j["target_errors"], "target_errors"));
  if (j.contains("batch_size")) e.batch_size = as_int(j["batch_size"], "batch_size");
  if (j.contains("master_seed")) {
    if (!j["master_seed"].is_number_unsigned() &&
        !j["master_seed"].is_number_integer())
      fail("\"master_seed\" must be a non-negative integer");
    e.master_seed = j["master_seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) e.threads = as_int(j["threads"], "threads");
  if (j.contains("label")) e.label = as_string(j["label"], "label");

  if (j.contains("zeta_multipliers")) {
    for (const auto& z : j["zeta_multipliers"])
      req.zeta_multipliers.push_back(as_number(z, "zeta_multipliers"));
  }
  if (j.contains("k_nu_sweep")) {
    for (const auto& k : j["k_nu_sweep"])
      req.k_nu_sweep.push_back(as_int(k, "k_nu_sweep"));
  }
  if (j.contains("slope_window")) {
    const json& w = j["slope_window"];
    if (w.contains("ber_lo"))
      req.slope_window.ber_lo = as_number(w["ber_lo"], "ber_lo");
    if (w.contains("ber_hi"))
      req.slope_window.ber_hi = as_number(w["ber_hi"], "ber_hi");
    if (w.contains("snr_lo_db"))
      req.slope_window.snr_lo_db = as_number(w["snr_lo_db"], "snr_lo_db");
    if (w.contains("snr_hi_db"))
      req.slope_window.snr_hi_db = as_number(w["snr_hi_db"], "snr_hi_db");
  }
}

void parse_overhead(const json& j, OverheadRequest& req) {
  if (!j.is_object()) fail("\"overhead\" must be an object");
  req.n_tx = as_int(member(j, "n_tx"), "n_tx");
  req.l_max = as_int(member(j, "l_max"), "l_max");
  req.alpha_max = as_int(member(j, "alpha_max"), "alpha_max");
  req.N = as_int(member(j, "N"), "N");
  req.k_nu_values.clear();
  for (const auto& k : member(j, "k_nu_values"))
    req.k_nu_values.push_back(as_int(k, "k_nu_values"));
  if (req.k_nu_values.empty()) fail("overhead.k_nu_values is empty");
}

void parse_afdma(const json& j, AfdmaRequest& req) {
  if (!j.is_object()) fail("\"afdma\" must be an object");
  const std::string dir = as_string(member(j, "direction"), "direction");
  if (dir == "downlink") {
    req.direction = AfdmaPlan::Direction::downlink;
  } else if (dir == "uplink") {
    req.direction = AfdmaPlan::Direction::uplink;
  } else {
    fail("afdma.direction must be \"downlink\" or \"uplink\"");
  }
  req.N = as_int(member(j, "N"), "N");
  if (j.contains("n_bs")) req.n_bs = as_int(j["n_bs"], "n_bs");
  if (j.contains("L_max")) req.L_max = as_int(j["L_max"], "L_max");
  req.users.clear();
  for (const auto& uj : member(j, "users")) {
    AfdmaUser u;
    u.L = as_int(member(uj, "L"), "L");
    u.demand = as_int(member(uj, "demand"), "demand");
    req.users.push_back(u);
  }
  if (req.users.empty()) fail("afdma.users is empty");
}

json profile_json(const ProfileSpec& spec) {
  json j;
  if (spec.kind == ProfileSpec::Kind::fixed) {
    j["kind"] = "fixed";
    json paths = json::array();
    for (const auto& p : spec.fixed_paths)
      paths.push_back({{"delay", p.delay}, {"doppler", p.doppler}});
    j["paths"] = paths;
  } else {
    j["kind"] = "jakes";
    j["delays"] = spec.jakes_delays;
    j["nu_max"] = spec.nu_max;
    j["integer_doppler"] = spec.integer_doppler;
  }
  return j;
}

}  // namespace

RunKind parse_run_kind(const std::string& name) {
  if (name == "ber") return RunKind::ber;
  if (name == "diversity") return RunKind::diversity;
  if (name == "nmse") return RunKind::nmse;
  if (name == "overhead") return RunKind::overhead;
  if (name == "afdma-plan") return RunKind::afdma_plan;
  fail("unknown experiment kind \"" + name + "\"");
}

std::string run_kind_name(RunKind kind) {
  switch (kind) {
    case RunKind::ber: return "ber";
    case RunKind::diversity: return "diversity";
    case RunKind::nmse: return "nmse";
    case RunKind::overhead: return "overhead";
    default: return "afdma-plan";
  }
}

RunRequest parse_run_request(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");

  // "version" is accepted so a manifest can be replayed as a config.
  static const char* known[] = {
      "experiment", "params",          "mimo",        "profile",
      "modulation", "detector",        "csi",         "snr_d_db",
      "snr_p_db",   "zeta_multiplier", "zeta_multipliers",
      "max_trials", "target_errors",   "batch_size",  "master_seed",
      "threads",    "label",           "k_nu_sweep",  "slope_window",
      "overhead",   "afdma",           "version"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail("unknown key \"" + it.key() + "\"");
  }

  RunRequest req;
  req.kind = parse_run_kind(as_string(member(j, "experiment"), "experiment"));
  switch (req.kind) {
    case RunKind::ber:
    case RunKind::diversity:
    case RunKind::nmse:
      parse_experiment(j, req);
      break;
    case RunKind::overhead:
      parse_overhead(member(j, "overhead"), req.overhead);
      break;
    case RunKind::afdma_plan:
      parse_afdma(member(j, "afdma"), req.afdma);
      break;
  }
  return req;
}

RunRequest load_run_request(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_request(buf.str());
}

std::string manifest_text(const RunRequest& req) {
  json j;
  j["version"] = AFDM_VERSION;
  j["experiment"] = run_kind_name(req.kind);
  switch (req.kind) {
    case RunKind::ber:
    case RunKind::diversity:
    case RunKind::nmse: {
      const ExperimentConfig& e = req.experiment;
      j["params"] = {{"N", e.params.N},
                     {"l_max", e.params.l_max},
                     {"alpha_max", e.params.alpha_max},
                     {"k_nu", e.params.k_nu},
                     {"c1", e.params.c1},
                     {"c2", e.params.c2}};
      j["mimo"] = {{"n_rx", e.n_rx}, {"n_tx", e.n_tx}};
      j["profile"] = profile_json(e.profile);
      j["modulation"] = modulation_name(e.modulation);
      j["detector"] = {{"kind", detector_name(e.detector.kind)},
                       {"n_iter", e.detector.n_iter},
                       {"damping", e.detector.damping}};
      j["csi"] = csi_name(e.csi);
      j["snr_d_db"] = e.snr_d_db;
      j["snr_p_db"] = e.snr_p_db;
      j["zeta_multiplier"] = e.zeta_multiplier;
      j["max_trials"] = e.max_trials;
      j["target_errors"] = e.target_errors;
      j["batch_size"] = e.batch_size;
      j["master_seed"] = e.master_seed;
      j["threads"] = e.threads;
      j["label"] = e.label;
      if (!req.zeta_multipliers.empty())
        j["zeta_multipliers"] = req.zeta_multipliers;
      if (!req.k_nu_sweep.empty()) j["k_nu_sweep"] = req.k_nu_sweep;
      if (req.kind == RunKind::diversity)
        j["slope_window"] = {{"ber_lo", req.slope_window.ber_lo},
                             {"ber_hi", req.slope_window.ber_hi},
                             {"snr_lo_db", req.slope_window.snr_lo_db},
                             {"snr_hi_db", req.slope_window.snr_hi_db}};
      break;
    }
    case RunKind::overhead:
      j["overhead"] = {{"n_tx", req.overhead.n_tx},
                       {"l_max", req.overhead.l_max},
                       {"alpha_max", req.overhead.alpha_max},
                       {"k_nu_values", req.overhead.k_nu_values},
                       {"N", req.overhead.N}};
      break;
    case RunKind::afdma_plan: {
      json users = json::array();
      for (const auto& u : req.afdma.users)
        users.push_back({{"L", u.L}, {"demand", u.demand}});
      j["afdma"] = {
          {"direction",
           req.afdma.direction == AfdmaPlan::Direction::downlink ? "downlink"
                                                                 : "uplink"},
          {"N", req.afdma.N},
          {"n_bs", req.afdma.n_bs},
          {"L_max", req.afdma.L_max},
          {"users", users}};
      break;
    }
  }
  return j.dump(2) + "\n";
}

void write_ber_csv(std::ostream& os, const BerResult& result) {
  os << "snr_db,ber,errors,bits,ci_halfwidth,seed\n";
  char line[192];
  for (const auto& pt : result.points) {
    std::snprintf(line, sizeof(line), "%.6g,%.10g,%lld,%lld,%.6g,%llu\n",
                  pt.snr_db, pt.ber, pt.errors, pt.bits, pt.ci_halfwidth,
                  static_cast<unsigned long long>(pt.seed));
    os << line;
  }
}

void write_nmse_csv(std::ostream& os, const NmseReport& report) {
  os << "rx,tx,nmse,leakage_bound\n";
  char line[128];
  for (int r = 0; r < report.n_rx; ++r) {
    for (int t = 0; t < report.n_tx; ++t) {
      const double bound = report.leakage_bound.empty()
                               ? std::nan("")
                               : report.bound(r, t);
      std::snprintf(line, sizeof(line), "%d,%d,%.10g,%.10g\n", r, t,
                    report.block(r, t), bound);
      os << line;
    }
  }
  std::snprintf(line, sizeof(line), "-1,-1,%.10g,\n", report.aggregate);
  os << line;
}

}  // namespace afdm

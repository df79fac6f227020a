// afdmsim.cpp - configuration-driven experiment runner and inspection commands
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "afdm/afdma.hpp"
#include "afdm/chanest.hpp"
#include "afdm/config.hpp"
#include "afdm/framing.hpp"
#include "afdm/harness.hpp"
#include "afdm/sanity.hpp"

namespace {

namespace fs = std::filesystem;
using namespace afdm;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path,
                              "path to a JSON experiment configuration");
  if (config_required) opt->required();
  cmd->add_option("--out", args.out_dir, "output directory for CSV/manifest");
  cmd->add_option("--seed", args.seed, "master seed override")
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd->add_option("--threads", args.threads, "worker thread override");
}

RunRequest load_for(const CommonArgs& args, RunKind expected) {
  RunRequest req = load_run_request(args.config_path);
  if (req.kind != expected)
    throw std::invalid_argument("config: experiment kind is \"" +
                                run_kind_name(req.kind) + "\" but the \"" +
                                run_kind_name(expected) +
                                "\" command was invoked");
  if (args.seed_given) req.experiment.master_seed = args.seed;
  if (args.threads > 0) req.experiment.threads = args.threads;
  return req;
}

fs::path ensure_out_dir(const CommonArgs& args) {
  const fs::path dir = args.out_dir.empty() ? fs::path(".")
                                            : fs::path(args.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void emit_manifest(const fs::path& dir, const RunRequest& req,
                   const std::string& stem) {
  write_file(dir / (stem + ".manifest.json"), manifest_text(req));
}

void print_points(const BerResult& result) {
  for (const auto& pt : result.points) {
    std::printf(
        "  snr %6.2f dB   ber %.3e   errors %lld / %lld bits   trials %lld "
        "(%.1f s)\n",
        pt.snr_db, pt.ber, pt.errors, pt.bits, pt.trials, pt.seconds);
  }
}

int cmd_ber(const CommonArgs& args) {
  const RunRequest req = load_for(args, RunKind::ber);
  const fs::path dir = ensure_out_dir(args);
  const std::string stem = req.experiment.label;
  emit_manifest(dir, req, stem);

  if (req.zeta_multipliers.empty()) {
    std::printf("ber: %s (csi %s, detector %s)\n", stem.c_str(),
                csi_name(req.experiment.csi).c_str(),
                detector_name(req.experiment.detector.kind).c_str());
    const BerResult result = run_ber(req.experiment);
    print_points(result);
    std::ofstream csv(dir / (stem + ".csv"));
    write_ber_csv(csv, result);
    std::printf("wrote %s\n", (dir / (stem + ".csv")).string().c_str());
    return 0;
  }
  for (double z : req.zeta_multipliers) {
    ExperimentConfig cfg = req.experiment;
    cfg.zeta_multiplier = z;
    std::printf("ber: %s, threshold multiplier %g\n", stem.c_str(), z);
    const BerResult result = run_ber(cfg);
    print_points(result);
    char suffix[48];
    std::snprintf(suffix, sizeof(suffix), "_zeta%g", z);
    std::ofstream csv(dir / (stem + suffix + ".csv"));
    write_ber_csv(csv, result);
  }
  std::printf("wrote %zu CSV files under %s\n", req.zeta_multipliers.size(),
              dir.string().c_str());
  return 0;
}

int cmd_diversity(const CommonArgs& args) {
  const RunRequest req = load_for(args, RunKind::diversity);
  const fs::path dir = ensure_out_dir(args);
  const std::string stem = req.experiment.label;
  emit_manifest(dir, req, stem);

  std::printf("diversity: %s\n", stem.c_str());
  const BerResult result = run_ber(req.experiment);
  print_points(result);
  std::ofstream csv(dir / (stem + ".csv"));
  write_ber_csv(csv, result);

  const DiversityReport report = diversity_slope(result.points,
                                                 req.slope_window);
  std::printf("slope %.3f from %d points\n", report.slope,
              report.points_used);
  return 0;
}

int cmd_nmse(const CommonArgs& args) {
  const RunRequest req = load_for(args, RunKind::nmse);
  const fs::path dir = ensure_out_dir(args);
  const std::string stem = req.experiment.label;
  emit_manifest(dir, req, stem);

  std::vector<int> k_values = req.k_nu_sweep;
  if (k_values.empty()) k_values.push_back(req.experiment.params.k_nu);
  for (int k : k_values) {
    ExperimentConfig cfg = req.experiment;
    cfg.params = make_params(cfg.params.N, cfg.params.l_max,
                             cfg.params.alpha_max, k, cfg.params.c2);
    const NmseReport report = run_nmse(cfg);
    std::printf("nmse: k_nu %d, aggregate %.3e\n", k, report.aggregate);
    for (int r = 0; r < report.n_rx; ++r)
      for (int t = 0; t < report.n_tx; ++t)
        std::printf("  block (%d,%d)  nmse %.3e  bound %.3e\n", r, t,
                    report.block(r, t), report.bound(r, t));
    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "_k%d", k);
    std::ofstream csv(dir / (stem + suffix + ".csv"));
    write_nmse_csv(csv, report);
  }
  return 0;
}

int cmd_overhead(const CommonArgs& args, const OverheadRequest& flags,
                 bool have_config) {
  OverheadRequest req = flags;
  if (have_config) {
    RunRequest parsed = load_run_request(args.config_path);
    if (parsed.kind != RunKind::overhead)
      throw std::invalid_argument(
          "config: expected an \"overhead\" experiment");
    req = parsed.overhead;
  }
  std::fputs(
      overhead_report(req.n_tx, req.l_max, req.alpha_max, req.k_nu_values,
                      req.N)
          .c_str(),
      stdout);
  return 0;
}

int cmd_afdma(const CommonArgs& args) {
  const RunRequest req = load_for(args, RunKind::afdma_plan);
  const AfdmaRequest& a = req.afdma;
  const AfdmaPlan plan =
      a.direction == AfdmaPlan::Direction::downlink
          ? plan_afdma_downlink(a.N, a.users, a.L_max, a.n_bs)
          : plan_afdma_uplink(a.N, a.users);
  std::fputs(plan.to_table().c_str(), stdout);
  std::printf("overhead: %lld of %d slots\n",
              static_cast<long long>(plan.overhead_slots()), plan.N);
  if (a.direction == AfdmaPlan::Direction::downlink)
    std::printf("closed-form minimum overhead: %lld\n",
                afdma_downlink_overhead(a.n_bs, a.L_max, a.users));
  const PlanCheck check = validate_plan(plan);
  if (!check.ok) {
    for (const auto& v : check.violations)
      std::fprintf(stderr, "violation: %s\n", v.c_str());
    return 1;
  }
  std::printf("plan valid: zero collisions, guard minima satisfied\n");
  if (!args.out_dir.empty()) {
    const fs::path dir = ensure_out_dir(args);
    emit_manifest(dir, req, "afdma_plan");
    write_file(dir / "afdma_plan.txt", plan.to_table());
  }
  return 0;
}

int cmd_factors(const CommonArgs& args) {
  RunRequest req = load_run_request(args.config_path);
  const AfdmParams& p = req.experiment.params;
  const TransformFactorTable table = build_factor_table(p);
  std::printf("# N %d, band width %d, stored factors %d (4L+1)\n", p.N,
              table.band_width(), table.entry_count());
  std::printf("# slot delay m m' re im\n");
  for (int j = 0; j < table.band_width(); ++j) {
    // One representative coordinate per slot: an interior row when one
    // exists, chosen away from the wrap positions.
    const int m = 0;
    const int mp = mod_n(static_cast<long long>(j) - p.band_reach(), p.N);
    const cplx v = table.lookup(m, mp);
    std::printf("%d %d %d %d %.17g %.17g\n", j, delay_block_of(p, m, mp), m,
                mp, v.real(), v.imag());
  }
  return 0;
}

int cmd_sanity(const CommonArgs& args) {
  if (!args.config_path.empty()) load_run_request(args.config_path);
  const SanityReport report = run_sanity();
  std::string text;
  for (const auto& c : report.checks) {
    text += std::string("[") + (c.pass ? "PASS" : "FAIL") + "] " + c.name +
            ": " + c.detail + "\n";
  }
  std::fputs(text.c_str(), stdout);
  if (!args.out_dir.empty()) {
    const fs::path dir = ensure_out_dir(args);
    std::ofstream(dir / "sanity.txt") << text;
  }
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chirp-domain baseband simulator"};
  app.require_subcommand(1);

  CommonArgs ber_args, div_args, nmse_args, over_args, afdma_args, fac_args,
      san_args;
  OverheadRequest over_flags;

  auto* ber = app.add_subcommand("ber", "bit-error-rate sweep");
  add_common(ber, ber_args, true);
  auto* div = app.add_subcommand("diversity", "BER sweep plus slope fit");
  add_common(div, div_args, true);
  auto* nmse = app.add_subcommand("nmse", "noiseless estimator quality probe");
  add_common(nmse, nmse_args, true);

  auto* over = app.add_subcommand("overhead",
                                  "pilot/guard overhead table");
  add_common(over, over_args, false);
  over->add_option("--n-tx", over_flags.n_tx, "transmit antennas");
  over->add_option("--l-max", over_flags.l_max, "maximum delay");
  over->add_option("--alpha-max", over_flags.alpha_max, "maximum Doppler");
  over->add_option("--k-nu", over_flags.k_nu_values, "guard widths to sweep");
  over->add_option("--frame", over_flags.N, "frame length for percentages");

  auto* afdma = app.add_subcommand("afdma-plan",
                                   "multi-user slot plan and validation");
  add_common(afdma, afdma_args, true);
  auto* fac = app.add_subcommand("factors", "dump the transform-factor table");
  add_common(fac, fac_args, true);
  auto* san = app.add_subcommand("sanity", "fast invariant self-checks");
  add_common(san, san_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ber->parsed()) return cmd_ber(ber_args);
    if (div->parsed()) return cmd_diversity(div_args);
    if (nmse->parsed()) return cmd_nmse(nmse_args);
    if (over->parsed())
      return cmd_overhead(over_args, over_flags,
                          !over_args.config_path.empty());
    if (afdma->parsed()) return cmd_afdma(afdma_args);
    if (fac->parsed()) return cmd_factors(fac_args);
    return cmd_sanity(san_args);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

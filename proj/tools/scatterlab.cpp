// scatterlab command-line interface.
//
//   scatterlab run --config <path> [--out <dir>]
//   scatterlab verify [--filter <name>]
//   scatterlab gen-frame --group <spec> --kind <ideal|random> [...]
//
// Exit codes: 0 success, 1 usage/config, 2 budget, 3 certification failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "scatterlab/experiment.hpp"
#include "scatterlab/invariants.hpp"
#include "scatterlab/scatterlab.hpp"

namespace {

using namespace scatterlab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitCertification = 3;

std::vector<long long> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad integer '" + item + "' in " + what);
    }
  }
  return out;
}

FrequencySet parse_frequencies(const GroupSpec& g, const std::string& text, const std::string& what) {
  std::vector<FrequencyToken> tokens;
  for (auto v : parse_int_list(text, what)) tokens.push_back(FrequencyToken{{v}});
  return resolve_set(g, tokens, what);
}

int run_command(const std::string& config_path, const std::string& out_dir) {
  try {
    auto config = load_config(config_path);
    const std::filesystem::path out = out_dir.empty() ? resolve_path(config, config.output) : std::filesystem::path(out_dir);
    const auto rec = run_experiment(config);
    write_outputs(rec, out);
    for (std::size_t k = 0; k < rec.signals.size(); ++k) {
      const auto& c = rec.signals[k].certification;
      if (c.passed) continue;
      if (c.first_failure) {
        std::cerr << "certification failed: signal " << k << ", " << c.first_failure->theorem << " at layer "
                  << c.first_failure->layer << " (margin " << format_double(c.first_failure->margin) << ")\n";
      } else {
        for (const auto& s : c.step_failures) std::cerr << "certification failed: signal " << k << ", " << s << '\n';
      }
    }
    std::cout << "wrote " << out.string() << " (" << rec.signals.size() << " signal(s), depth " << rec.depth << "): "
              << (rec.passed() ? "all certificates pass" : "CERTIFICATION FAILED") << '\n';
    return rec.passed() ? kExitOk : kExitCertification;
  } catch (const BudgetError& e) {
    std::cerr << "rejected before running: " << e.what() << '\n';
    return kExitBudget;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int verify_command(const std::string& filter, const std::vector<std::string>& faults) {
  const auto checks = verify::select_checks(filter);
  if (checks.empty()) {
    std::cerr << "usage error: no invariant matches --filter '" << filter << "'\n";
    return kExitUsage;
  }
  verify::SuiteOptions opts;
  opts.faults = faults;
  bool all = true;
  for (const auto& c : checks) {
    verify::CheckResult r;
    try {
      r = c.run(opts);
    } catch (const std::exception& e) {
      r = {c.name, false, std::string("exception: ") + e.what()};
    }
    std::printf("%-4s  %-18s  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    all = all && r.passed;
  }
  return all ? kExitOk : kExitCertification;
}

struct GenFrameArgs {
  std::string group;
  std::string kind;
  std::string low = "0";
  std::string bands;
  std::size_t band_width = 0;
  bool singletons = false;
  std::size_t m = 1;
  std::string gap = "0";
  long long gap_radius = -1;
  std::uint64_t seed = 0;
  double support_threshold = kDefaultSupportThreshold;
  std::string out;
};

int gen_frame_command(const GenFrameArgs& a) {
  try {
    const GroupSpec g = GroupSpec::parse(a.group);
    FilterBank bank;
    if (a.kind == "ideal") {
      if (a.singletons) {
        bank = build_singleton_bank(g);
      } else {
        const auto low = parse_frequencies(g, a.low, "--low");
        std::vector<FrequencySet> bands;
        if (!a.bands.empty()) {
          std::stringstream ss(a.bands);
          std::string band;
          while (std::getline(ss, band, ';')) bands.push_back(parse_frequencies(g, band, "--bands"));
        } else {
          bands = automatic_bands(low, a.band_width == 0 ? 1 : a.band_width);
        }
        bank = build_ideal_partition_bank(g, low, bands, a.support_threshold);
      }
    } else if (a.kind == "random") {
      const auto gap = a.gap_radius >= 0 ? FrequencySet::box(g, a.gap_radius) : parse_frequencies(g, a.gap, "--gap");
      bank = build_random_smooth_bank(g, a.m, gap, a.seed, a.support_threshold);
    } else {
      std::cerr << "usage error: --kind must be ideal or random\n";
      return kExitUsage;
    }
    const auto report = audit(bank);
    std::ostringstream file;
    io::write_bank(file, bank);
    if (a.out.empty()) {
      std::cout << file.str();
    } else {
      io::write_file_atomic(a.out, file.str());
    }
    std::cerr << "audit: lp_deficiency " << format_double(report.lp_deficiency) << ", S " << report.max_support
              << ", #Gamma_Psi " << report.gap.size() << ", filters " << bank.size() + 1 << '\n';
    for (const auto& v : report.violations()) std::cerr << "audit: " << v << '\n';
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scatterlab: energy propagation in scattering-type feature extractors"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "Run an experiment config and certify the decay bounds");
  run->add_option("--config", config_path, "Experiment config (YAML)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config)");

  std::string filter;
  std::vector<std::string> faults;
  auto* ver = app.add_subcommand("verify", "Run the built-in invariant suite");
  ver->add_option("--filter", filter, "Only run invariants whose name contains this string");
  ver->add_option("--inject-fault", faults, "Inject a named fault (lp) to exercise failure reporting");

  GenFrameArgs gf;
  auto* gen = app.add_subcommand("gen-frame", "Construct a Parseval filter bank and write it to a file");
  gen->add_option("--group", gf.group, "Group, e.g. 8 or 4x6")->required();
  gen->add_option("--kind", gf.kind, "ideal | random")->required();
  gen->add_option("--low", gf.low, "ideal: comma-separated low-pass frequencies");
  gen->add_option("--bands", gf.bands, "ideal: bands separated by ';', e.g. \"2,-2;3,-3\"");
  gen->add_option("--band-width", gf.band_width, "ideal: automatic bands of this size");
  gen->add_flag("--singletons", gf.singletons, "ideal: one band per nonzero frequency");
  gen->add_option("--m", gf.m, "random: number of high-pass filters");
  gen->add_option("--gap", gf.gap, "random: comma-separated gap frequencies");
  gen->add_option("--gap-radius", gf.gap_radius, "random: gap = centered box of this radius");
  gen->add_option("--seed", gf.seed, "random: seed");
  gen->add_option("--support-threshold", gf.support_threshold, "support threshold on |psi^|");
  gen->add_option("--out", gf.out, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*run) return run_command(config_path, out_dir);
  if (*ver) {
    if (ver->count("--filter") && filter.empty()) {
      std::cerr << "usage error: --filter needs a non-empty name\n";
      return kExitUsage;
    }
    return verify_command(filter, faults);
  }
  return gen_frame_command(gf);
}

#pragma once

// Experiment configuration and the run pipeline behind `scatterlab run`.
// Requires yaml-cpp.
//
// Config schema (YAML):
//
//   group: "8"                 # or "4x6", or a list [4, 6]
//   mode: scattering           # scattering (filter bank) | generic (matrix)
//   bank:                      # scattering mode
//     kind: ideal              # ideal | singletons | random | file
//     low: [0, 1, -1]          # ideal: low-pass set (or low_radius: r)
//     bands: [[2, -2], [3]]    # ideal: explicit bands (or band_width: w)
//     m: 3                     # random: number of high-pass filters
//     gap: [0]                 # random: gap set (or gap_radius: r)
//     seed: 7                  # random
//     path: bank.txt           # file
//     support_threshold: 1e-12
//   generic:                   # generic mode
//     operator: mean_projector # mean_projector | file
//     dim: 8
//     path: a.txt
//   signals:
//     kind: random             # delta | constant | character | random | file
//     count: 1
//     seed: 1
//     frequency: 1             # character
//     path: f.txt              # file
//   depth: 3
//   bounds: [thm3, thm4, cor1]
//   gamma: [0, 1, -1]          # optional, thm4
//   budget: 1000000
//   output: out
//
// Frequencies are integers (reduced mod n for cyclic groups, flat indices
// otherwise) or coordinate lists such as [1, -2].

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scatterlab/bounds.hpp"
#include "scatterlab/errors.hpp"
#include "scatterlab/extractor.hpp"
#include "scatterlab/frames.hpp"
#include "scatterlab/group.hpp"
#include "scatterlab/signal.hpp"
#include "scatterlab/text_io.hpp"

namespace scatterlab {

inline constexpr const char* kRunSchema = "scatterlab-run/1";

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, std::optional<std::size_t> line, const std::string& msg)
      : Error(format(field, line, msg)), field_(field), line_(line) {}

  const std::string& field() const { return field_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  static std::string format(const std::string& field, std::optional<std::size_t> line, const std::string& msg) {
    std::string out = "config";
    if (line) out += " line " + std::to_string(*line);
    if (!field.empty()) out += " field '" + field + "'";
    return out + ": " + msg;
  }

  std::string field_;
  std::optional<std::size_t> line_;
};

/// One frequency as written in the config: a flat value or coordinates.
struct FrequencyToken {
  std::vector<long long> coords;
};

struct BankConfig {
  std::string kind = "ideal";
  std::optional<std::vector<FrequencyToken>> low;
  std::optional<long long> low_radius;
  std::optional<std::vector<std::vector<FrequencyToken>>> bands;
  std::optional<std::size_t> band_width;
  std::size_t m = 0;
  std::optional<std::vector<FrequencyToken>> gap;
  std::optional<long long> gap_radius;
  std::uint64_t seed = 0;
  std::string path;
  double support_threshold = kDefaultSupportThreshold;
};

struct GenericConfig {
  std::string op = "mean_projector";
  std::size_t dim = 0;
  std::string path;
};

struct SignalConfig {
  std::string kind = "random";
  std::size_t count = 1;
  std::uint64_t seed = 0;
  FrequencyToken frequency{{1}};
  std::string path;
};

struct ExperimentConfig {
  GroupSpec group;
  std::string mode = "scattering";
  BankConfig bank;
  GenericConfig generic;
  SignalConfig signals;
  std::size_t depth = 1;
  std::vector<std::string> bounds{"thm3"};
  std::optional<std::vector<FrequencyToken>> gamma;
  std::size_t budget = 1'000'000;
  std::string output = "out";
  std::filesystem::path base_dir = ".";  // relative paths resolve against this
  std::uint64_t hash = 0;                // FNV-1a of the config text
};

inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace detail {

inline std::optional<std::size_t> line_of(const YAML::Node& n) {
  const auto mark = n.Mark();
  if (mark.line < 0) return std::nullopt;
  return static_cast<std::size_t>(mark.line) + 1;
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) throw ConfigError(field, line_of(n), "expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field, line_of(n), "cannot interpret '" + n.Scalar() + "'");
  }
}

inline std::size_t count_value(const YAML::Node& n, const std::string& field) {
  const auto v = scalar<long long>(n, field);
  if (v < 0) throw ConfigError(field, line_of(n), "must be >= 0");
  return static_cast<std::size_t>(v);
}

inline FrequencyToken frequency_token(const YAML::Node& n, const std::string& field) {
  FrequencyToken t;
  if (n.IsScalar()) {
    t.coords.push_back(scalar<long long>(n, field));
  } else if (n.IsSequence()) {
    for (const auto& c : n) t.coords.push_back(scalar<long long>(c, field));
    if (t.coords.empty()) throw ConfigError(field, line_of(n), "empty coordinate list");
  } else {
    throw ConfigError(field, line_of(n), "expected a frequency");
  }
  return t;
}

inline std::vector<FrequencyToken> frequency_list(const YAML::Node& n, const std::string& field) {
  if (!n.IsSequence()) throw ConfigError(field, line_of(n), "expected a list of frequencies");
  std::vector<FrequencyToken> out;
  for (const auto& item : n) out.push_back(frequency_token(item, field));
  return out;
}

inline void reject_unknown(const YAML::Node& map, const std::vector<std::string>& known, const std::string& prefix) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(prefix + key, line_of(kv.first), "unknown field");
    }
  }
}

inline GroupSpec group_value(const YAML::Node& n) {
  try {
    if (n.IsSequence()) {
      std::vector<std::size_t> factors;
      for (const auto& f : n) {
        const auto v = scalar<long long>(f, "group");
        if (v < 1) throw ConfigError("group", line_of(f), "factors must be >= 1");
        factors.push_back(static_cast<std::size_t>(v));
      }
      return GroupSpec(std::move(factors));
    }
    return GroupSpec::parse(scalar<std::string>(n, "group"));
  } catch (const ValidationError& e) {
    throw ConfigError("group", line_of(n), e.what());
  }
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".") {
  using detail::line_of;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", static_cast<std::size_t>(e.mark.line) + 1, e.msg);
  }
  if (!root.IsMap()) throw ConfigError("", std::nullopt, "top level must be a mapping");
  detail::reject_unknown(root,
                         {"group", "mode", "bank", "generic", "signals", "depth", "bounds", "gamma", "budget", "output"},
                         "");

  ExperimentConfig c;
  c.base_dir = base_dir;
  c.hash = fnv1a(text);
  if (root["mode"]) c.mode = detail::scalar<std::string>(root["mode"], "mode");
  if (c.mode != "scattering" && c.mode != "generic") {
    throw ConfigError("mode", line_of(root["mode"]), "expected 'scattering' or 'generic'");
  }

  if (root["group"]) {
    c.group = detail::group_value(root["group"]);
  } else if (c.mode == "scattering") {
    throw ConfigError("group", std::nullopt, "missing required field");
  }

  if (const auto b = root["bank"]) {
    if (!b.IsMap()) throw ConfigError("bank", line_of(b), "expected a mapping");
    detail::reject_unknown(b,
                           {"kind", "low", "low_radius", "bands", "band_width", "m", "gap", "gap_radius", "seed", "path",
                            "support_threshold"},
                           "bank.");
    auto& bk = c.bank;
    if (b["kind"]) bk.kind = detail::scalar<std::string>(b["kind"], "bank.kind");
    if (bk.kind != "ideal" && bk.kind != "singletons" && bk.kind != "random" && bk.kind != "file") {
      throw ConfigError("bank.kind", line_of(b["kind"]), "expected ideal | singletons | random | file");
    }
    if (b["low"]) bk.low = detail::frequency_list(b["low"], "bank.low");
    if (b["low_radius"]) bk.low_radius = detail::scalar<long long>(b["low_radius"], "bank.low_radius");
    if (b["bands"]) {
      const auto n = b["bands"];
      if (!n.IsSequence()) throw ConfigError("bank.bands", line_of(n), "expected a list of frequency lists");
      bk.bands.emplace();
      for (const auto& band : n) bk.bands->push_back(detail::frequency_list(band, "bank.bands"));
    }
    if (b["band_width"]) bk.band_width = detail::count_value(b["band_width"], "bank.band_width");
    if (b["m"]) bk.m = detail::count_value(b["m"], "bank.m");
    if (b["gap"]) bk.gap = detail::frequency_list(b["gap"], "bank.gap");
    if (b["gap_radius"]) bk.gap_radius = detail::scalar<long long>(b["gap_radius"], "bank.gap_radius");
    if (b["seed"]) bk.seed = detail::scalar<std::uint64_t>(b["seed"], "bank.seed");
    if (b["path"]) bk.path = detail::scalar<std::string>(b["path"], "bank.path");
    if (b["support_threshold"]) {
      bk.support_threshold = detail::scalar<double>(b["support_threshold"], "bank.support_threshold");
    }
  } else if (c.mode == "scattering") {
    throw ConfigError("bank", std::nullopt, "missing required field");
  }

  if (const auto g = root["generic"]) {
    if (!g.IsMap()) throw ConfigError("generic", line_of(g), "expected a mapping");
    detail::reject_unknown(g, {"operator", "dim", "path"}, "generic.");
    if (g["operator"]) c.generic.op = detail::scalar<std::string>(g["operator"], "generic.operator");
    if (c.generic.op != "mean_projector" && c.generic.op != "file") {
      throw ConfigError("generic.operator", line_of(g["operator"]), "expected mean_projector | file");
    }
    if (g["dim"]) c.generic.dim = detail::count_value(g["dim"], "generic.dim");
    if (g["path"]) c.generic.path = detail::scalar<std::string>(g["path"], "generic.path");
  } else if (c.mode == "generic") {
    throw ConfigError("generic", std::nullopt, "missing required field");
  }
  if (c.mode == "generic" && c.generic.op == "mean_projector") {
    if (c.generic.dim == 0) throw ConfigError("generic.dim", std::nullopt, "mean_projector needs dim >= 1");
    c.group = GroupSpec::cyclic(c.generic.dim);
  }

  if (const auto s = root["signals"]) {
    if (!s.IsMap()) throw ConfigError("signals", line_of(s), "expected a mapping");
    detail::reject_unknown(s, {"kind", "count", "seed", "frequency", "path"}, "signals.");
    auto& sg = c.signals;
    if (s["kind"]) sg.kind = detail::scalar<std::string>(s["kind"], "signals.kind");
    if (sg.kind != "delta" && sg.kind != "constant" && sg.kind != "character" && sg.kind != "random" &&
        sg.kind != "file") {
      throw ConfigError("signals.kind", line_of(s["kind"]), "expected delta | constant | character | random | file");
    }
    if (s["count"]) sg.count = detail::count_value(s["count"], "signals.count");
    if (sg.count < 1) throw ConfigError("signals.count", line_of(s["count"]), "must be >= 1");
    if (s["seed"]) sg.seed = detail::scalar<std::uint64_t>(s["seed"], "signals.seed");
    if (s["frequency"]) sg.frequency = detail::frequency_token(s["frequency"], "signals.frequency");
    if (s["path"]) sg.path = detail::scalar<std::string>(s["path"], "signals.path");
  }

  if (!root["depth"]) throw ConfigError("depth", std::nullopt, "missing required field");
  c.depth = detail::count_value(root["depth"], "depth");
  if (c.depth < 1) throw ConfigError("depth", line_of(root["depth"]), "must be >= 1");

  if (const auto b = root["bounds"]) {
    if (!b.IsSequence()) throw ConfigError("bounds", line_of(b), "expected a list");
    c.bounds.clear();
    for (const auto& item : b) {
      auto name = detail::scalar<std::string>(item, "bounds");
      if (name != "cor1" && name != "thm3" && name != "thm4") {
        throw ConfigError("bounds", line_of(item), "unknown bound '" + name + "' (cor1 | thm3 | thm4)");
      }
      if (c.mode == "generic" && name != "cor1") {
        throw ConfigError("bounds", line_of(item), "'" + name + "' needs a filter bank (scattering mode)");
      }
      c.bounds.push_back(name);
    }
  } else if (c.mode == "generic") {
    c.bounds = {"cor1"};
  }
  if (root["gamma"]) c.gamma = detail::frequency_list(root["gamma"], "gamma");
  if (root["budget"]) c.budget = detail::count_value(root["budget"], "budget");
  if (root["output"]) c.output = detail::scalar<std::string>(root["output"], "output");
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", std::nullopt, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto c = parse_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  return c;
}

// ---------------------------------------------------------------------------
// Building blocks from a config

inline Index resolve_frequency(const GroupSpec& g, const FrequencyToken& t, const std::string& field) {
  if (t.coords.size() == 1 && g.rank() == 1) return g.wrap(t.coords);
  if (t.coords.size() == 1) {
    if (t.coords[0] < 0 || static_cast<std::size_t>(t.coords[0]) >= g.order()) {
      throw ConfigError(field, std::nullopt, "flat frequency index " + std::to_string(t.coords[0]) + " out of range");
    }
    return static_cast<Index>(t.coords[0]);
  }
  if (t.coords.size() != g.rank()) {
    throw ConfigError(field, std::nullopt, "frequency has " + std::to_string(t.coords.size()) +
                                               " coordinates, group rank is " + std::to_string(g.rank()));
  }
  return g.wrap(t.coords);
}

inline FrequencySet resolve_set(const GroupSpec& g, const std::vector<FrequencyToken>& tokens, const std::string& field) {
  FrequencySet s(g);
  for (const auto& t : tokens) s.insert(resolve_frequency(g, t, field));
  return s;
}

inline std::filesystem::path resolve_path(const ExperimentConfig& c, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : c.base_dir / path;
}

/// Frequencies outside the low set, ordered by centered size, chunked into
/// bands of the given width.
inline std::vector<FrequencySet> automatic_bands(const FrequencySet& low, std::size_t width) {
  const auto& g = low.group();
  std::vector<Index> rest;
  for (Index i = 0; i < g.order(); ++i) {
    if (!low.contains(i)) rest.push_back(i);
  }
  std::stable_sort(rest.begin(), rest.end(),
                   [&](Index a, Index b) { return g.centered_norm2(a) < g.centered_norm2(b); });
  std::vector<FrequencySet> bands;
  for (std::size_t k = 0; k < rest.size(); k += width) {
    bands.emplace_back(g, std::vector<Index>(rest.begin() + static_cast<std::ptrdiff_t>(k),
                                             rest.begin() + static_cast<std::ptrdiff_t>(std::min(rest.size(), k + width))));
  }
  return bands;
}

inline FilterBank build_bank(const ExperimentConfig& c) {
  const auto& b = c.bank;
  const auto& g = c.group;
  try {
    if (b.kind == "file") {
      if (b.path.empty()) throw ConfigError("bank.path", std::nullopt, "file bank needs a path");
      auto bank = io::load_bank(resolve_path(c, b.path));
      require_same_group(g, bank.group());
      return bank;
    }
    if (b.kind == "singletons") return build_singleton_bank(g);
    if (b.kind == "random") {
      FrequencySet gap = b.gap ? resolve_set(g, *b.gap, "bank.gap")
                               : FrequencySet::box(g, b.gap_radius.value_or(0));
      return build_random_smooth_bank(g, b.m, gap, b.seed, b.support_threshold);
    }
    FrequencySet low = b.low ? resolve_set(g, *b.low, "bank.low") : FrequencySet::box(g, b.low_radius.value_or(0));
    std::vector<FrequencySet> bands;
    if (b.bands) {
      for (const auto& band : *b.bands) bands.push_back(resolve_set(g, band, "bank.bands"));
    } else {
      bands = automatic_bands(low, b.band_width.value_or(1));
    }
    return build_ideal_partition_bank(g, low, bands, b.support_threshold);
  } catch (const ValidationError& e) {
    throw ConfigError("bank", std::nullopt, e.what());
  } catch (const StructuralError& e) {
    throw ConfigError("bank", std::nullopt, e.what());
  }
}

/// Complex Gaussian entries, one stream per run.
inline std::vector<Signal> random_signals(const GroupSpec& g, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Signal> out;
  for (std::size_t k = 0; k < count; ++k) {
    Signal s(g);
    for (auto& v : s.values()) {
      const double re = normal(rng);
      const double im = normal(rng);
      v = {re, im};
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<Signal> build_signals(const ExperimentConfig& c) {
  const auto& s = c.signals;
  const auto& g = c.group;
  if (s.kind == "delta") return {Signal::delta(g)};
  if (s.kind == "constant") return {Signal::constant(g)};
  if (s.kind == "character") return {Signal::character(g, resolve_frequency(g, s.frequency, "signals.frequency"))};
  if (s.kind == "file") {
    if (s.path.empty()) throw ConfigError("signals.path", std::nullopt, "file signal needs a path");
    auto f = io::load_signal(resolve_path(c, s.path));
    if (f.group() != g) throw ConfigError("signals.path", std::nullopt, "signal group does not match config group");
    return {f};
  }
  return random_signals(g, s.count, s.seed);
}

// ---------------------------------------------------------------------------
// Run

struct SignalRun {
  EnergyLedger ledger;
  BoundReport report;
  CertificationResult certification;
};

struct RunRecord {
  std::string schema = kRunSchema;
  std::uint64_t config_hash = 0;
  std::size_t depth = 0;
  std::vector<SignalRun> signals;

  bool passed() const {
    return std::all_of(signals.begin(), signals.end(), [](const SignalRun& s) { return s.certification.passed; });
  }
};

struct Pipeline {
  std::vector<LayerSpec> layers;
  std::optional<FilterBank> bank;
};

inline Pipeline build_pipeline(const ExperimentConfig& c) {
  Pipeline p;
  if (c.mode == "generic") {
    Eigen::MatrixXcd a;
    if (c.generic.op == "file") {
      if (c.generic.path.empty()) throw ConfigError("generic.path", std::nullopt, "file operator needs a path");
      a = io::load_matrix(resolve_path(c, c.generic.path));
      if (a.rows() != a.cols()) throw ConfigError("generic.path", std::nullopt, "output operator must be square");
    } else {
      a = mean_projector(c.generic.dim);
    }
    try {
      p.layers.push_back(complete_to_parseval(LinearOperator::matrix(std::move(a))));
    } catch (const ValidationError& e) {
      throw ConfigError("generic", std::nullopt, e.what());
    }
    return p;
  }
  p.bank = build_bank(c);
  p.layers.push_back(scattering_layer(*p.bank));
  return p;
}

/// Computes every requested bound. A hypothesis that fails (e.g. no usable
/// eigen-witness) drops that entry and records a flag instead.
inline BoundReport compute_bounds(const ExperimentConfig& c, const Pipeline& p, const Signal& f) {
  BoundReport r;
  for (const auto& name : c.bounds) {
    try {
      if (name == "cor1") {
        r.entries.push_back(witness_bound(p.layers, f, c.depth, constant_witness(output_operator(p.layers, 1))));
      } else if (name == "thm3") {
        r.entries.push_back(support_bound(*p.bank, f, c.depth));
      } else if (name == "thm4") {
        std::optional<FrequencySet> gamma;
        if (c.gamma) gamma = resolve_set(c.group, *c.gamma, "gamma");
        r.entries.push_back(covering_bound(*p.bank, f, c.depth, gamma));
      }
    } catch (const HypothesisError& e) {
      r.flags.push_back(name + ": no bound emitted (" + std::string(e.what()) + ")");
    }
  }
  return r;
}

inline RunRecord run_experiment(const ExperimentConfig& c) {
  const Pipeline p = build_pipeline(c);
  check_budget(p.layers, c.depth, c.budget);  // pre-run rejection
  const auto signals = build_signals(c);
  if (c.mode == "generic" && signals.front().size() != p.layers.front().output.input_dimension()) {
    throw ConfigError("signals", std::nullopt, "signal dimension does not match the operator");
  }

  RunRecord rec;
  rec.config_hash = c.hash;
  rec.depth = c.depth;
  PropagationOptions opts;
  opts.budget = c.budget;
  for (const auto& f : signals) {
    SignalRun run;
    run.ledger = propagate(p.layers, f, c.depth, opts).ledger;
    run.report = compute_bounds(c, p, f);
    run.certification = certify(run.ledger, run.report);
    rec.signals.push_back(std::move(run));
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Output artifacts

inline std::string energies_csv(const EnergyLedger& ledger) {
  std::ostringstream os;
  os << "layer,num_paths,W_N,output_energy,cumulative_output\n";
  for (std::size_t n = 0; n <= ledger.depth(); ++n) {
    os << n << ',' << ledger.num_paths[n] << ',' << format_double(ledger.propagated[n]) << ','
       << format_double(ledger.output[n]) << ',' << format_double(ledger.cumulative_output(n)) << '\n';
  }
  return os.str();
}

inline std::string bounds_csv(const EnergyLedger& ledger, const BoundReport& report) {
  std::ostringstream os;
  os << "layer,theorem,base,prefactor,bound_value,measured_W,margin\n";
  for (const auto& e : report.entries) {
    for (std::size_t n = 1; n <= e.depth && n <= ledger.depth(); ++n) {
      const double bound = e.curve(n);
      const double measured = ledger.propagated[n];
      os << n << ',' << e.theorem << ',' << format_double(e.base) << ',' << format_double(e.prefactor) << ','
         << format_double(bound) << ',' << format_double(measured) << ',' << format_double(bound - measured) << '\n';
    }
  }
  return os.str();
}

inline std::string run_certificate(const RunRecord& rec) {
  std::ostringstream os;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(rec.config_hash));
  os << "schema: " << rec.schema << '\n';
  os << "config_hash: " << hash << '\n';
  os << "depth: " << rec.depth << '\n';
  os << "signals: " << rec.signals.size() << '\n';
  for (std::size_t k = 0; k < rec.signals.size(); ++k) {
    const auto& s = rec.signals[k];
    os << "\n[signal " << k << "] ||f||^2 = " << format_double(s.ledger.input_energy) << '\n';
    for (std::size_t n = 0; n < s.ledger.contraction.size(); ++n) {
      os << "  iota_hat[" << n << "] = "
         << (s.ledger.contraction[n] ? format_double(*s.ledger.contraction[n]) : std::string("n/a")) << '\n';
    }
    os << certificate_text(s.report, s.certification);
  }
  os << '\n' << (rec.passed() ? "RESULT: PASS" : "RESULT: FAIL") << '\n';
  return os.str();
}

/// energies.csv and bounds.csv go to the output directory for a single
/// signal, and to signal_<k>/ subdirectories otherwise; certificate.txt
/// always sits at the top.
inline void write_outputs(const RunRecord& rec, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < rec.signals.size(); ++k) {
    auto sub = dir;
    if (rec.signals.size() > 1) {
      char name[32];
      std::snprintf(name, sizeof name, "signal_%03zu", k);
      sub /= name;
      std::filesystem::create_directories(sub);
    }
    io::write_file_atomic(sub / "energies.csv", energies_csv(rec.signals[k].ledger));
    io::write_file_atomic(sub / "bounds.csv", bounds_csv(rec.signals[k].ledger, rec.signals[k].report));
  }
  io::write_file_atomic(dir / "certificate.txt", run_certificate(rec));
}

}  // namespace scatterlab

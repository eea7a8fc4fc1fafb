#pragma once

// Built-in invariant suite run by `scatterlab verify`. Every check uses fixed
// seeds and reports one named pass/fail line.

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scatterlab/bounds.hpp"
#include "scatterlab/experiment.hpp"
#include "scatterlab/extractor.hpp"
#include "scatterlab/frames.hpp"
#include "scatterlab/group.hpp"
#include "scatterlab/signal.hpp"

namespace scatterlab::verify {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct SuiteOptions {
  /// Names of faults to inject: "lp" perturbs the Parseval fixture bank.
  std::vector<std::string> faults;

  bool has_fault(const std::string& f) const { return std::find(faults.begin(), faults.end(), f) != faults.end(); }
};

namespace detail {

inline Signal direct_convolution(const Signal& f, const Signal& g) {
  const auto& grp = f.group();
  Signal out(grp);
  for (Index x = 0; x < grp.order(); ++x) {
    Complex acc = 0.0;
    for (Index y = 0; y < grp.order(); ++y) acc += f[y] * g[grp.subtract(x, y)];
    out[x] = acc;
  }
  return out;
}

inline double relative_difference(const Signal& a, const Signal& b) {
  const double scale = std::max(a.norm_squared(), b.norm_squared());
  if (scale == 0.0) return 0.0;
  return std::sqrt((a - b).norm_squared() / scale);
}

struct Fixture {
  std::string name;
  FilterBank bank;
};

inline std::vector<Fixture> parseval_fixtures() {
  std::vector<Fixture> out;
  {
    const GroupSpec g = GroupSpec::cyclic(8);
    FrequencySet low(g, {0});
    FrequencySet band = low.complement();
    out.push_back({"ideal Z8", build_ideal_partition_bank(g, low, {band})});
  }
  {
    const GroupSpec g = GroupSpec::cyclic(12);
    FrequencySet low(g, {0, 1, 11});
    out.push_back({"ideal Z12", build_ideal_partition_bank(g, low, {FrequencySet(g, {2, 10, 3, 9, 4, 8}),
                                                                     FrequencySet(g, {5, 7, 6})})});
  }
  out.push_back({"random Z16",
                 build_random_smooth_bank(GroupSpec::cyclic(16), 3, FrequencySet::identity_only(GroupSpec::cyclic(16)), 7)});
  {
    const GroupSpec g{4, 6};
    out.push_back({"random Z4xZ6", build_random_smooth_bank(g, 2, FrequencySet::box(g, 1), 11)});
  }
  return out;
}

inline FilterBank perturbed(const FilterBank& bank) {
  auto chi = bank.chi_hat();
  chi[GroupSpec::identity()] *= 1.01;
  return FilterBank(std::move(chi), bank.psi_hats(), bank.support_threshold());
}

}  // namespace detail

inline CheckResult check_plancherel() {
  CheckResult r{"plancherel", true, ""};
  double worst = 0.0;
  for (const auto& g : {GroupSpec{8}, GroupSpec{12}, GroupSpec{3, 5}, GroupSpec{4, 6}, GroupSpec{2, 2, 4}}) {
    for (const auto& f : random_signals(g, 100, 101)) {
      const double a = f.norm_squared();
      const double b = fourier(f).norm_squared();
      worst = std::max(worst, std::abs(a - b) / a);
      worst = std::max(worst, detail::relative_difference(inverse_fourier(fourier(f)), f));
    }
  }
  r.passed = worst <= 1e-10;
  r.detail = "max relative error " + format_double(worst);
  return r;
}

inline CheckResult check_convolution() {
  CheckResult r{"convolution", true, ""};
  double worst = 0.0;
  for (const auto& g : {GroupSpec{6}, GroupSpec{16}, GroupSpec{3, 5}, GroupSpec{4, 4, 4}, GroupSpec{64}}) {
    const auto fs = random_signals(g, 4, 202);
    for (std::size_t k = 0; k + 1 < fs.size(); k += 2) {
      worst = std::max(worst,
                       detail::relative_difference(convolve(fs[k], fs[k + 1]), detail::direct_convolution(fs[k], fs[k + 1])));
    }
  }
  r.passed = worst <= 1e-10;
  r.detail = "max relative error " + format_double(worst);
  return r;
}

inline CheckResult check_parseval(const SuiteOptions& opt) {
  CheckResult r{"parseval", true, ""};
  double worst = 0.0;
  for (auto fx : detail::parseval_fixtures()) {
    if (opt.has_fault("lp")) fx.bank = detail::perturbed(fx.bank);
    const auto a = audit(fx.bank);
    if (!a.parseval) {
      r.passed = false;
      r.detail = fx.name + ": Littlewood-Paley deficiency " + format_double(a.lp_deficiency);
      return r;
    }
    const std::vector<LayerSpec> layers{scattering_layer(fx.bank)};
    for (const auto& f : random_signals(fx.bank.group(), 20, 303)) {
      const auto ledger = propagate(layers, f, 4).ledger;
      const double e = std::abs(ledger.cumulative_output(4) + ledger.propagated[4] - ledger.input_energy);
      worst = std::max(worst, e / ledger.input_energy);
    }
  }
  r.passed = worst <= 1e-9;
  r.detail = "max |sum O_n + W_4 - ||f||^2| / ||f||^2 = " + format_double(worst);
  return r;
}

inline CheckResult check_energy_identities() {
  CheckResult r{"energy-eq1-eq2", true, ""};
  double worst_eq1 = 0.0;
  bool sub_ok = true;
  for (const auto& fx : detail::parseval_fixtures()) {
    const std::vector<LayerSpec> layers{scattering_layer(fx.bank)};
    // a strictly sub-Parseval copy: everything scaled by 0.9
    auto chi = fx.bank.chi_hat();
    for (auto& v : chi.coeffs()) v *= 0.9;
    auto psis = fx.bank.psi_hats();
    for (auto& p : psis)
      for (auto& v : p.coeffs()) v *= 0.9;
    const std::vector<LayerSpec> sub{scattering_layer(FilterBank(chi, psis))};
    for (const auto& f : random_signals(fx.bank.group(), 10, 404)) {
      const auto l = propagate(layers, f, 3).ledger;
      const auto s = propagate(sub, f, 3).ledger;
      for (std::size_t n = 0; n < 3; ++n) {
        worst_eq1 = std::max(worst_eq1, std::abs(l.output[n] + l.propagated[n + 1] - l.propagated[n]) / l.input_energy);
        sub_ok = sub_ok && s.output[n] + s.propagated[n + 1] <= s.propagated[n] * (1 + 1e-9);
        sub_ok = sub_ok && s.propagated[n + 1] <= s.propagated[n] * (1 + 1e-9);
      }
      sub_ok = sub_ok && s.cumulative_output(3) + s.propagated[3] <= s.input_energy * (1 + 1e-9);
    }
  }
  r.passed = worst_eq1 <= 1e-9 && sub_ok;
  r.detail = "Parseval |O_N + W_{N+1} - W_N| / ||f||^2 <= " + format_double(worst_eq1) +
             (sub_ok ? "; sub-Parseval inequalities hold" : "; sub-Parseval inequality violated");
  return r;
}

inline CheckResult check_nonexpansive() {
  CheckResult r{"nonexpansive", true, ""};
  const GroupSpec g = GroupSpec::cyclic(16);
  const auto bank = build_random_smooth_bank(g, 3, FrequencySet::identity_only(g), 7);
  const std::vector<LayerSpec> layers{scattering_layer(bank)};
  const auto fs = random_signals(g, 40, 505);
  double worst = -1.0;
  for (std::size_t k = 0; k + 1 < fs.size(); k += 2) {
    const auto p = nonexpansiveness_probe(layers, fs[k], fs[k + 1], 3);
    worst = std::max(worst, p.lhs / p.rhs);
  }
  r.passed = worst <= 1.0 + 1e-12;
  r.detail = "max ||Sf - Sg||^2 / ||f - g||^2 = " + format_double(worst);
  return r;
}

inline CheckResult check_annihilation() {
  CheckResult r{"annihilation", true, ""};
  const GroupSpec g = GroupSpec::cyclic(8);
  const std::vector<LayerSpec> layers{scattering_layer(build_singleton_bank(g))};
  double worst = 0.0;
  for (const auto& f : random_signals(g, 20, 606)) {
    const auto l = propagate(layers, f, 2).ledger;
    worst = std::max(worst, l.propagated[2] / l.input_energy);
  }
  r.passed = worst <= 1e-12;
  r.detail = "max W_2 / ||f||^2 = " + format_double(worst);
  return r;
}

inline CheckResult check_covering_sandwich() {
  CheckResult r{"covering-sandwich", true, ""};
  std::ostringstream os;
  std::size_t instances = 0;
  for (std::size_t n : {12u, 16u}) {
    const GroupSpec g = GroupSpec::cyclic(n);
    const FrequencySet gamma(g, {0, 1, n - 1});
    const FrequencySet k = power_set(gamma, 2);
    std::mt19937_64 rng(707 + n);
    for (int trial = 0; trial < 10; ++trial) {
      FrequencySet supp(g);
      for (Index i = 1; i < n; ++i) {
        if (rng() % 2) supp.insert(i);
      }
      const auto c = covering_counts(supp, k, gamma);
      ++instances;
      if (!c.n_exact || *c.n_exact > c.n_greedy || *c.n_exact > c.n_ruzsa) {
        r.passed = false;
        os << "violation on " << supp.to_string() << "; ";
      }
    }
  }
  os << instances << " instances";
  r.detail = os.str();
  return r;
}

inline CheckResult check_bound_validity() {
  CheckResult r{"bound-validity", true, ""};
  std::size_t certified = 0;
  for (const auto& fx : detail::parseval_fixtures()) {
    const std::vector<LayerSpec> layers{scattering_layer(fx.bank)};
    for (const auto& f : random_signals(fx.bank.group(), 5, 808)) {
      const auto ledger = propagate(layers, f, 4).ledger;
      BoundReport rep;
      rep.entries.push_back(support_bound(fx.bank, f, 4));
      rep.entries.push_back(covering_bound(fx.bank, f, 4));
      rep.entries.push_back(witness_bound(layers, f, 4, constant_witness(layers.front().output)));
      const auto cert = certify(ledger, rep);
      if (!cert.passed) {
        r.passed = false;
        r.detail = fx.name + ": " +
                   (cert.first_failure ? cert.first_failure->theorem + " at N=" + std::to_string(cert.first_failure->layer)
                                       : std::string("per-step inequality"));
        return r;
      }
      ++certified;
    }
  }
  r.detail = std::to_string(certified) + " runs certified against cor1/thm3/thm4";
  return r;
}

struct NamedCheck {
  std::string name;
  std::function<CheckResult(const SuiteOptions&)> run;
};

inline std::vector<NamedCheck> all_checks() {
  return {
      {"plancherel", [](const SuiteOptions&) { return check_plancherel(); }},
      {"convolution", [](const SuiteOptions&) { return check_convolution(); }},
      {"parseval", [](const SuiteOptions& o) { return check_parseval(o); }},
      {"energy-eq1-eq2", [](const SuiteOptions&) { return check_energy_identities(); }},
      {"nonexpansive", [](const SuiteOptions&) { return check_nonexpansive(); }},
      {"annihilation", [](const SuiteOptions&) { return check_annihilation(); }},
      {"covering-sandwich", [](const SuiteOptions&) { return check_covering_sandwich(); }},
      {"bound-validity", [](const SuiteOptions&) { return check_bound_validity(); }},
  };
}

/// Checks whose name contains the filter substring (all when empty).
inline std::vector<NamedCheck> select_checks(const std::string& filter) {
  std::vector<NamedCheck> out;
  for (auto& c : all_checks()) {
    if (filter.empty() || c.name.find(filter) != std::string::npos) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace scatterlab::verify

#pragma once

// Semi-discrete Parseval frames {chi} u Psi of convolution filters on a
// finite abelian group, stored by their spectra.

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scatterlab/errors.hpp"
#include "scatterlab/group.hpp"
#include "scatterlab/signal.hpp"

namespace scatterlab {

inline constexpr double kDefaultSupportThreshold = 1e-12;
inline constexpr double kParsevalTolerance = 1e-9;
inline constexpr double kSubParsevalTolerance = 1e-12;

class FilterBank {
 public:
  FilterBank() = default;

  FilterBank(SpectralSignal chi_hat, std::vector<SpectralSignal> psi_hats,
             double support_threshold = kDefaultSupportThreshold)
      : group_(chi_hat.group()),
        chi_hat_(std::move(chi_hat)),
        psi_hats_(std::move(psi_hats)),
        support_threshold_(support_threshold) {
    if (!(support_threshold_ >= 0.0) || !std::isfinite(support_threshold_)) {
      throw ValidationError("support threshold must be a nonnegative finite number");
    }
    for (const auto& psi : psi_hats_) require_same_group(group_, psi.group());
  }

  const GroupSpec& group() const { return group_; }
  const SpectralSignal& chi_hat() const { return chi_hat_; }
  const std::vector<SpectralSignal>& psi_hats() const { return psi_hats_; }
  std::size_t size() const { return psi_hats_.size(); }
  double support_threshold() const { return support_threshold_; }

  /// |chi^(xi)|^2 + sum_psi |psi^(xi)|^2.
  double littlewood_paley_sum(Index xi) const {
    double s = std::norm(chi_hat_[xi]);
    for (const auto& psi : psi_hats_) s += std::norm(psi[xi]);
    return s;
  }

  FrequencySet support(std::size_t filter) const { return psi_hats_.at(filter).support(support_threshold_); }

  /// Dual minus the union of the high-pass supports.
  FrequencySet frequency_gap() const {
    FrequencySet covered(group_);
    for (std::size_t j = 0; j < psi_hats_.size(); ++j) covered = covered.united(support(j));
    return covered.complement();
  }

  /// Time-domain filters, derived on demand.
  Signal chi() const { return inverse_fourier(chi_hat_); }
  Signal psi(std::size_t filter) const { return inverse_fourier(psi_hats_.at(filter)); }

 private:
  GroupSpec group_;
  SpectralSignal chi_hat_;
  std::vector<SpectralSignal> psi_hats_;
  double support_threshold_ = kDefaultSupportThreshold;
};

struct FrameAudit {
  double lp_deficiency = 0.0;  // max_xi |LP(xi) - 1|
  double lp_max = 0.0;         // max_xi LP(xi)
  FrequencySet gap;
  std::size_t max_support = 0;
  std::vector<FrequencySet> per_filter_supports;
  bool parseval = false;       // lp_deficiency <= 1e-9
  bool sub_parseval = false;   // lp_max <= 1 + 1e-12
  std::vector<std::size_t> high_pass_violations;
  double chi_gap_deviation = 0.0;  // max over the gap of ||chi^| - 1|
  bool effective_psi_empty = false;

  bool chi_unit_on_gap() const { return chi_gap_deviation <= kParsevalTolerance; }

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (!sub_parseval) {
      out.push_back("Littlewood-Paley sum exceeds 1 (max " + format_double(lp_max) + ")");
    }
    for (auto j : high_pass_violations) {
      out.push_back("high-pass violation: psi[" + std::to_string(j) + "] does not vanish at the trivial character");
    }
    if (parseval && !chi_unit_on_gap()) {
      out.push_back("|chi^| deviates from 1 on the frequency gap by " + format_double(chi_gap_deviation));
    }
    return out;
  }

  bool ok() const { return violations().empty(); }
};

/// Audits the Littlewood-Paley condition, supports and the frequency gap.
/// With strict = true any violation raises a ValidationError.
inline FrameAudit audit(const FilterBank& bank, bool strict = false) {
  FrameAudit a;
  const auto& g = bank.group();
  for (Index xi = 0; xi < g.order(); ++xi) {
    const double lp = bank.littlewood_paley_sum(xi);
    a.lp_deficiency = std::max(a.lp_deficiency, std::abs(lp - 1.0));
    a.lp_max = std::max(a.lp_max, lp);
  }
  a.parseval = a.lp_deficiency <= kParsevalTolerance;
  a.sub_parseval = a.lp_max <= 1.0 + kSubParsevalTolerance;

  FrequencySet covered(g);
  for (std::size_t j = 0; j < bank.size(); ++j) {
    auto supp = bank.support(j);
    a.max_support = std::max(a.max_support, supp.size());
    covered = covered.united(supp);
    if (std::abs(bank.psi_hats()[j][GroupSpec::identity()]) > bank.support_threshold()) {
      a.high_pass_violations.push_back(j);
    }
    a.per_filter_supports.push_back(std::move(supp));
  }
  a.gap = covered.complement();
  a.effective_psi_empty = a.max_support == 0;
  for (auto xi : a.gap.members()) {
    a.chi_gap_deviation = std::max(a.chi_gap_deviation, std::abs(std::abs(bank.chi_hat()[xi]) - 1.0));
  }
  if (strict && !a.ok()) {
    std::string msg = "frame audit failed:";
    for (const auto& v : a.violations()) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  return a;
}

/// chi^ = indicator(low_set), psi_j^ = indicator(bands[j]).
/// The low set and the bands must partition the dual, and the low set must
/// contain the trivial character.
inline FilterBank build_ideal_partition_bank(const GroupSpec& group, const FrequencySet& low_set,
                                             const std::vector<FrequencySet>& bands,
                                             double support_threshold = kDefaultSupportThreshold) {
  require_same_group(group, low_set.group());
  std::vector<int> hits(group.order(), 0);
  for (auto m : low_set.members()) ++hits[m];
  std::vector<std::string> problems;
  if (!low_set.contains(GroupSpec::identity())) problems.push_back("low set does not contain the trivial character");
  for (std::size_t j = 0; j < bands.size(); ++j) {
    require_same_group(group, bands[j].group());
    if (bands[j].empty()) problems.push_back("band " + std::to_string(j) + " is empty");
    for (auto m : bands[j].members()) ++hits[m];
  }
  std::vector<Index> overlapping, missing;
  for (Index i = 0; i < group.order(); ++i) {
    if (hits[i] > 1) overlapping.push_back(i);
    if (hits[i] == 0) missing.push_back(i);
  }
  if (!overlapping.empty()) {
    problems.push_back("overlapping frequencies " + FrequencySet(group, overlapping).to_string());
  }
  if (!missing.empty()) problems.push_back("missing frequencies " + FrequencySet(group, missing).to_string());
  if (!problems.empty()) {
    std::string msg = "not a partition of the dual:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
  std::vector<SpectralSignal> psis;
  psis.reserve(bands.size());
  for (const auto& b : bands) psis.push_back(SpectralSignal::indicator(b));
  return FilterBank(SpectralSignal::indicator(low_set), std::move(psis), support_threshold);
}

/// Every nonzero frequency in its own band; S = 1.
inline FilterBank build_singleton_bank(const GroupSpec& group) {
  std::vector<FrequencySet> bands;
  for (Index i = 1; i < group.order(); ++i) bands.emplace_back(group, std::vector<Index>{i});
  return build_ideal_partition_bank(group, FrequencySet::identity_only(group), bands);
}

/// Random nonnegative profiles for chi and m high-pass filters, smoothed over
/// the radius-1 box around each frequency and normalized pointwise so the
/// Littlewood-Paley sum is exactly 1. chi^ = 1 and psi^ = 0 on the gap.
inline FilterBank build_random_smooth_bank(const GroupSpec& group, std::size_t m, const FrequencySet& gap,
                                           std::uint64_t seed,
                                           double support_threshold = kDefaultSupportThreshold) {
  require_same_group(group, gap.group());
  if (!gap.contains(GroupSpec::identity())) throw ValidationError("gap must contain the trivial character");
  if (gap.size() == group.order()) {
    throw ValidationError("gap is the entire dual: every high-pass filter would vanish (empty effective Psi)");
  }
  if (m == 0) throw ValidationError("m = 0 cannot satisfy Littlewood-Paley off the gap");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t order = group.order();
  std::vector<std::vector<double>> raw(m + 1, std::vector<double>(order));
  for (auto& profile : raw) {
    for (auto& v : profile) v = unif(rng);
  }

  const auto neighbourhood = FrequencySet::box(group, 1).members();
  std::vector<std::vector<double>> smooth(m + 1, std::vector<double>(order));
  for (std::size_t f = 0; f <= m; ++f) {
    for (Index xi = 0; xi < order; ++xi) {
      double s = 0.0;
      for (auto d : neighbourhood) s += raw[f][group.add(xi, d)];
      smooth[f][xi] = 0.05 + s / static_cast<double>(neighbourhood.size());
    }
  }

  SpectralSignal chi(group);
  std::vector<SpectralSignal> psis(m, SpectralSignal(group));
  for (Index xi = 0; xi < order; ++xi) {
    if (gap.contains(xi)) {
      chi[xi] = 1.0;
      continue;
    }
    double total = 0.0;
    for (std::size_t f = 0; f <= m; ++f) total += smooth[f][xi] * smooth[f][xi];
    const double scale = 1.0 / std::sqrt(total);
    chi[xi] = smooth[0][xi] * scale;
    for (std::size_t j = 0; j < m; ++j) psis[j][xi] = smooth[j + 1][xi] * scale;
  }
  return FilterBank(std::move(chi), std::move(psis), support_threshold);
}

}  // namespace scatterlab

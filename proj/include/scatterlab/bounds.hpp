#pragma once

// Energy decay bounds W_N(f) <= base^(N-1) * (||f||^2 - ||A0 f||^2) and their
// certification against measured ledgers.
//
//   cor1  generic route: base = 1 - C_M * C_A from an
//         eigen-witness (lambda, eta) of A^*A with sqrt(lambda) eta >= sqrt(C_A).
//   thm3  finite abelian groups: base = 1 - 1/S, S = max #supp(psi^).
//   thm4  symmetric neighbourhood Gamma with Gamma^8 inside the frequency gap:
//         base = 1 - mu(Gamma^2)^2 / (n * mu(Gamma^4)^2), n a covering count of
//         the supports by translates of Gamma^2.

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scatterlab/errors.hpp"
#include "scatterlab/extractor.hpp"
#include "scatterlab/frames.hpp"
#include "scatterlab/group.hpp"
#include "scatterlab/numeric.hpp"
#include "scatterlab/signal.hpp"

namespace scatterlab {

inline constexpr double kCertificationSlack = 1e-9;  // relative to ||f||^2

// ---------------------------------------------------------------------------
// Report types

enum class WitnessSource { constant_function, explicit_input };

struct EigenWitness {
  double lambda = 0.0;
  Signal eta;
  WitnessSource source = WitnessSource::explicit_input;
};

/// Per-filter check of ||(|f*psi|) * chi||^2 >= coefficient * ||f*psi||^2.
struct StepCheck {
  std::size_t filter = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = true;
};

struct BoundConstants {
  std::optional<std::size_t> support_max;       // S
  std::optional<std::size_t> support_alt;       // #G - #Gamma_Psi
  std::optional<std::size_t> group_order;
  std::optional<std::size_t> gap_size;
  std::optional<FrequencySet> gamma;
  std::optional<std::size_t> gamma2_size;
  std::optional<std::size_t> gamma4_size;
  std::optional<std::size_t> n_exact;
  std::optional<std::size_t> n_greedy;
  std::optional<std::size_t> n_ruzsa;
  std::optional<double> alpha_exact;
  std::optional<double> alpha_greedy;
  std::optional<double> alpha_ruzsa;
  std::optional<double> c_m;
  std::optional<double> c_a;
  std::optional<double> lambda;
};

struct BoundEntry {
  std::string theorem;
  double base = 1.0;
  double prefactor = 0.0;     // ||f||^2 - ||A0 f||^2
  double input_energy = 0.0;  // ||f||^2, for metadata checks
  std::size_t depth = 0;
  BoundConstants constants;
  std::vector<StepCheck> step_checks;
  std::vector<std::string> notes;

  /// base^(N-1) * prefactor, N >= 1.
  double curve(std::size_t n) const {
    if (n == 0) return input_energy;
    return std::pow(base, static_cast<double>(n - 1)) * prefactor;
  }
};

struct BoundReport {
  std::vector<BoundEntry> entries;
  std::vector<std::string> flags;

  const BoundEntry* find(const std::string& theorem) const {
    for (const auto& e : entries) {
      if (e.theorem == theorem) return &e;
    }
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Witnesses and eigen-witness route

inline constexpr double kWitnessResidualTolerance = 1e-9;
inline constexpr double kWitnessNormTolerance = 1e-12;

/// eta = constant 1/sqrt(d) on the input space of A, lambda = <A^*A eta, eta>.
inline EigenWitness constant_witness(const LinearOperator& a) {
  const std::size_t d = a.input_dimension();
  const GroupSpec g = a.is_convolution() ? a.filter().group() : GroupSpec::cyclic(d);
  Signal eta = Signal::constant(g, 1.0 / std::sqrt(static_cast<double>(d)));
  const Signal gram_eta = a.apply_adjoint(a.apply(eta));
  Complex inner = 0.0;
  for (std::size_t i = 0; i < d; ++i) inner += gram_eta[i] * std::conj(eta[i]);
  return EigenWitness{inner.real(), std::move(eta), WitnessSource::constant_function};
}

/// Throws HypothesisError unless (lambda, eta) is a normalized eigenpair of
/// A^*A with lambda in [0, 1].
inline void validate_witness(const LinearOperator& a, const EigenWitness& w) {
  if (w.eta.size() != a.input_dimension()) throw StructuralError("witness dimension does not match operator");
  const double norm = std::sqrt(w.eta.norm_squared());
  if (std::abs(norm - 1.0) > kWitnessNormTolerance) {
    throw HypothesisError("witness is not unit norm (||eta|| = " + format_double(norm) + ")");
  }
  if (!(w.lambda >= 0.0 && w.lambda <= 1.0 + kWitnessNormTolerance)) {
    throw HypothesisError("witness eigenvalue " + format_double(w.lambda) + " outside [0,1]");
  }
  Signal eta = w.eta;
  if (a.is_convolution()) eta = Signal(a.filter().group(), w.eta.values());
  Signal residual = a.apply_adjoint(a.apply(eta));
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= w.lambda * eta[i];
  const double res = std::sqrt(residual.norm_squared());
  if (res > kWitnessResidualTolerance) {
    throw HypothesisError("witness is not an eigenvector of A^*A (residual " + format_double(res) + ")");
  }
}

/// C_A = (min_x sqrt(lambda) eta(x))^2; eta must be real with a positive minimum.
inline double witness_floor(const EigenWitness& w) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& v : w.eta.values()) {
    if (std::abs(v.imag()) > kWitnessNormTolerance) {
      throw HypothesisError("witness is not real-valued; sqrt(lambda) eta >= sqrt(C_A) cannot hold");
    }
    lo = std::min(lo, std::sqrt(std::max(0.0, w.lambda)) * v.real());
  }
  if (!(lo > 0.0)) {
    throw HypothesisError("min sqrt(lambda) eta = " + format_double(lo) + " <= 0; no bound");
  }
  return lo * lo;
}

/// Generic-mode bound. c_m is the smallest positive point mass (1 for
/// counting measure).
inline BoundEntry witness_bound(const std::vector<LayerSpec>& layers, const Signal& f, std::size_t depth,
                                   const EigenWitness& witness, double c_m = 1.0) {
  if (!(c_m > 0.0)) throw HypothesisError("C_M must be positive");
  const std::size_t last = depth > 2 ? depth - 1 : 1;
  for (std::size_t l = 1; l <= last; ++l) {
    if (layer_at(layers, l - 1).sigma != Nonlinearity::modulus) {
      throw HypothesisError("layer " + std::to_string(l) + " nonlinearity is " +
                            to_string(layer_at(layers, l - 1).sigma) + "; the bound needs sigma f >= 0 (modulus)");
    }
    validate_witness(output_operator(layers, l), witness);
  }
  const double c_a = witness_floor(witness);

  BoundEntry e;
  e.theorem = "cor1";
  e.depth = depth;
  e.input_energy = f.norm_squared();
  e.prefactor = std::max(0.0, e.input_energy - output_operator(layers, 0).apply(f).norm_squared());
  e.base = std::clamp(1.0 - c_m * c_a, 0.0, 1.0);
  e.constants.c_m = c_m;
  e.constants.c_a = c_a;
  e.constants.lambda = witness.lambda;
  e.constants.group_order = witness.eta.size();
  e.notes.push_back(witness.source == WitnessSource::constant_function ? "witness: constant function"
                                                                        : "witness: explicit");
  return e;
}

// ---------------------------------------------------------------------------
// Finite-group route (support size)

/// ||(|f*psi|) * chi||^2 against coefficient(j) * ||f*psi||^2 for every filter.
inline std::vector<StepCheck> step_checks(const FilterBank& bank, const Signal& f,
                                          const std::function<double(std::size_t)>& coefficient) {
  const SpectralSignal f_hat = fourier(f);
  const double slack = kCertificationSlack * f.norm_squared();
  std::vector<StepCheck> out;
  for (std::size_t j = 0; j < bank.size(); ++j) {
    const Signal g = filter_spectrum(f_hat, bank.psi_hats()[j]);
    const Signal modulus = apply_nonlinearity(Nonlinearity::modulus, g);
    StepCheck c;
    c.filter = j;
    c.lhs = convolve_spectral(modulus, bank.chi_hat()).norm_squared();
    c.rhs = coefficient(j) * g.norm_squared();
    c.ok = c.lhs >= c.rhs - slack;
    out.push_back(c);
  }
  return out;
}

inline FrameAudit require_parseval(const FilterBank& bank) {
  auto a = audit(bank);
  if (!a.parseval) {
    throw HypothesisError("filter bank is not a Parseval frame (LP deficiency " + format_double(a.lp_deficiency) + ")");
  }
  return a;
}

inline BoundEntry support_bound(const FilterBank& bank, const Signal& f, std::size_t depth) {
  require_same_group(bank.group(), f.group());
  const FrameAudit a = require_parseval(bank);
  const std::size_t s = a.max_support;

  BoundEntry e;
  e.theorem = "thm3";
  e.depth = depth;
  e.input_energy = f.norm_squared();
  e.prefactor = std::max(0.0, e.input_energy - convolve_spectral(f, bank.chi_hat()).norm_squared());
  e.base = s == 0 ? 0.0 : 1.0 - 1.0 / static_cast<double>(s);
  e.constants.support_max = s;
  e.constants.support_alt = bank.group().order() - a.gap.size();
  e.constants.group_order = bank.group().order();
  e.constants.gap_size = a.gap.size();
  if (s == 0) e.notes.push_back("empty effective Psi: W_N = 0 for N >= 1");
  e.step_checks = step_checks(bank, f, [&](std::size_t j) {
    const auto n = a.per_filter_supports[j].size();
    return n == 0 ? 0.0 : 1.0 / static_cast<double>(n);
  });
  return e;
}

// ---------------------------------------------------------------------------
// Symmetric neighbourhoods Gamma

/// Gamma contains the identity, Gamma = -Gamma, and Gamma^8 lies in the gap.
inline bool is_valid_gamma(const FrequencySet& gamma, const FrequencySet& gap) {
  return gamma.contains(GroupSpec::identity()) && is_symmetric(gamma) && power_set(gamma, 8).is_subset_of(gap);
}

/// Nonzero frequencies of the gap grouped as {xi, -xi}, ordered by centered
/// Euclidean size and then by the smaller flat index.
inline std::vector<std::vector<Index>> symmetric_pairs(const FrequencySet& gap) {
  const auto& g = gap.group();
  std::vector<std::vector<Index>> pairs;
  for (auto xi : gap.members()) {
    if (xi == GroupSpec::identity()) continue;
    const Index neg = g.negate(xi);
    if (neg < xi) continue;
    if (!gap.contains(neg)) continue;
    pairs.push_back(neg == xi ? std::vector<Index>{xi} : std::vector<Index>{xi, neg});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    const auto na = g.centered_norm2(a.front());
    const auto nb = g.centered_norm2(b.front());
    if (na != nb) return na < nb;
    return a.front() < b.front();
  });
  return pairs;
}

inline constexpr std::size_t kExhaustiveGammaLimit = 16;

/// Starts at {identity} and adds symmetric pairs in canonical order while
/// Gamma^8 stays inside the gap.
inline FrequencySet greedy_gamma(const FrequencySet& gap) {
  FrequencySet gamma = FrequencySet::identity_only(gap.group());
  for (const auto& pair : symmetric_pairs(gap)) {
    FrequencySet trial = gamma;
    for (auto xi : pair) trial.insert(xi);
    if (is_valid_gamma(trial, gap)) gamma = std::move(trial);
  }
  return gamma;
}

/// Every valid Gamma when #gap <= 16 (all unions of symmetric pairs), else the
/// greedy result. {identity} is always included.
inline std::vector<FrequencySet> gamma_candidates(const FrequencySet& gap) {
  if (!gap.contains(GroupSpec::identity())) {
    throw ValidationError("the trivial character is not in the gap; no symmetric neighbourhood exists");
  }
  std::vector<FrequencySet> out;
  const FrequencySet identity = FrequencySet::identity_only(gap.group());
  if (gap.size() <= kExhaustiveGammaLimit) {
    const auto pairs = symmetric_pairs(gap);
    const std::size_t combos = std::size_t{1} << pairs.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      FrequencySet gamma = identity;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (mask & (std::size_t{1} << k)) {
          for (auto xi : pairs[k]) gamma.insert(xi);
        }
      }
      if (is_valid_gamma(gamma, gap)) out.push_back(std::move(gamma));
    }
  } else {
    out.push_back(identity);
    auto greedy = greedy_gamma(gap);
    if (greedy != identity) out.push_back(std::move(greedy));
  }
  return out;
}

/// The largest valid Gamma found (exhaustively for small gaps).
inline FrequencySet find_gamma(const FrequencySet& gap) {
  auto candidates = gamma_candidates(gap);
  const FrequencySet* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.size() > best->size()) best = &c;
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Covering numbers

struct CoverCounts {
  std::optional<std::size_t> n_exact;  // absent when the exact search was skipped
  std::size_t n_greedy = 0;
  std::size_t n_ruzsa = 0;
  bool exact_budget_exhausted = false;
};

struct CoverOptions {
  std::size_t exact_support_limit = 20;
  std::size_t node_budget = 2'000'000;
};

namespace detail {

// Translates xi + K restricted to the support, for every xi meeting it.
inline std::vector<std::vector<Index>> cover_candidates(const FrequencySet& support, const FrequencySet& k) {
  const auto& g = support.group();
  FrequencySet centers(g);
  for (auto s : support.members()) {
    for (auto d : k.members()) centers.insert(g.subtract(s, d));
  }
  std::vector<std::vector<Index>> out;
  for (auto xi : centers.members()) {
    std::vector<Index> hit;
    for (auto d : k.members()) {
      const Index x = g.add(xi, d);
      if (support.contains(x)) hit.push_back(x);
    }
    std::sort(hit.begin(), hit.end());
    out.push_back(std::move(hit));
  }
  return out;
}

}  // namespace detail

/// Repeatedly takes the translate covering the most uncovered frequencies
/// (lowest translate on ties).
inline std::size_t greedy_cover(const FrequencySet& support, const FrequencySet& k) {
  require_same_group(support.group(), k.group());
  if (support.empty()) return 0;
  if (k.empty()) throw ValidationError("covering set K is empty");
  const auto candidates = detail::cover_candidates(support, k);
  std::vector<std::uint8_t> covered(support.group().order(), 0);
  std::size_t remaining = support.size();
  std::size_t used = 0;
  while (remaining > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      std::size_t gain = 0;
      for (auto x : candidates[c]) gain += covered[x] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    for (auto x : candidates[best]) {
      if (!covered[x]) {
        covered[x] = 1;
        --remaining;
      }
    }
    ++used;
  }
  return used;
}

/// Minimum number of translates of K covering the support, by branch and
/// bound on the lowest uncovered frequency. Returns nullopt when the node
/// budget runs out.
inline std::optional<std::size_t> exact_cover(const FrequencySet& support, const FrequencySet& k,
                                              std::size_t node_budget = CoverOptions{}.node_budget) {
  require_same_group(support.group(), k.group());
  if (support.empty()) return 0;
  if (k.empty()) throw ValidationError("covering set K is empty");

  const auto members = support.members();
  const std::size_t m = members.size();
  if (m > 63) return std::nullopt;
  std::vector<std::size_t> position(support.group().order(), 0);
  for (std::size_t i = 0; i < m; ++i) position[members[i]] = i;

  std::vector<std::uint64_t> sets;
  for (const auto& c : detail::cover_candidates(support, k)) {
    std::uint64_t bits = 0;
    for (auto x : c) bits |= std::uint64_t{1} << position[x];
    sets.push_back(bits);
  }
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::size_t max_cover = 0;
  for (auto s : sets) max_cover = std::max<std::size_t>(max_cover, static_cast<std::size_t>(std::popcount(s)));

  const std::uint64_t full = (m == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1);
  std::size_t best = greedy_cover(support, k);
  std::size_t nodes = 0;
  bool exhausted = false;

  std::function<void(std::uint64_t, std::size_t)> search = [&](std::uint64_t covered, std::size_t used) {
    if (exhausted) return;
    if (++nodes > node_budget) {
      exhausted = true;
      return;
    }
    if (covered == full) {
      best = std::min(best, used);
      return;
    }
    const auto uncovered = static_cast<std::size_t>(std::popcount(full & ~covered));
    const std::size_t lower = used + (uncovered + max_cover - 1) / max_cover;
    if (lower >= best) return;
    const int first = std::countr_zero(full & ~covered);
    const std::uint64_t bit = std::uint64_t{1} << first;
    for (auto s : sets) {
      if (s & bit) search(covered | s, used + 1);
    }
  };
  search(0, 0);
  if (exhausted) return std::nullopt;
  return best;
}

/// floor(#(Gamma + supp) / #Gamma).
inline std::size_t ruzsa_bound(const FrequencySet& support, const FrequencySet& gamma) {
  if (support.empty()) return 0;
  if (gamma.empty()) throw ValidationError("Gamma is empty");
  return sumset(gamma, support).size() / gamma.size();
}

/// Counts for a single support. The Ruzsa count needs Gamma - Gamma inside K.
inline CoverCounts covering_counts(const FrequencySet& support, const FrequencySet& k, const FrequencySet& gamma,
                                   const CoverOptions& options = {}) {
  if (k.empty()) throw ValidationError("covering set K is empty");
  if (!sumset(gamma, negate(gamma)).is_subset_of(k)) {
    throw ValidationError("Gamma - Gamma is not contained in K; the Ruzsa estimate does not apply");
  }
  CoverCounts c;
  c.n_greedy = greedy_cover(support, k);
  c.n_ruzsa = ruzsa_bound(support, gamma);
  if (support.size() <= options.exact_support_limit) {
    c.n_exact = exact_cover(support, k, options.node_budget);
    c.exact_budget_exhausted = !c.n_exact.has_value();
  }
  return c;
}

/// Maximum over the filters of each count, with K = Gamma^2.
inline CoverCounts covering_number(const FilterBank& bank, const FrequencySet& gamma, const CoverOptions& options = {}) {
  const FrequencySet k = power_set(gamma, 2);
  CoverCounts total;
  total.n_exact = 0;
  std::vector<CoverCounts> per(bank.size());
  parallel_for(bank.size(), [&](std::size_t j) { per[j] = covering_counts(bank.support(j), k, gamma, options); });
  for (const auto& c : per) {
    total.n_greedy = std::max(total.n_greedy, c.n_greedy);
    total.n_ruzsa = std::max(total.n_ruzsa, c.n_ruzsa);
    total.exact_budget_exhausted = total.exact_budget_exhausted || c.exact_budget_exhausted;
    if (total.n_exact && c.n_exact) {
      total.n_exact = std::max(*total.n_exact, *c.n_exact);
    } else {
      total.n_exact.reset();
    }
  }
  return total;
}

/// 1 - (#Gamma^2 / #Gamma^4)^2 / n; 0 when n = 0 (no nonzero filter).
inline double alpha_from(std::size_t n, std::size_t gamma2_size, std::size_t gamma4_size) {
  if (n == 0) return 0.0;
  const double ratio = static_cast<double>(gamma2_size) / static_cast<double>(gamma4_size);
  return std::clamp(1.0 - ratio * ratio / static_cast<double>(n), 0.0, 1.0);
}

inline std::size_t best_count(const CoverCounts& c) {
  std::size_t n = std::min(c.n_greedy, c.n_ruzsa);
  if (c.n_exact) n = std::min(n, *c.n_exact);
  return n;
}

namespace detail {

inline BoundConstants gamma_constants(const FilterBank& bank, const FrequencySet& gamma, const CoverOptions& options) {
  BoundConstants k;
  const auto g2 = power_set(gamma, 2).size();
  const auto g4 = power_set(gamma, 4).size();
  const auto counts = covering_number(bank, gamma, options);
  k.gamma = gamma;
  k.gamma2_size = g2;
  k.gamma4_size = g4;
  k.n_exact = counts.n_exact;
  k.n_greedy = counts.n_greedy;
  k.n_ruzsa = counts.n_ruzsa;
  if (counts.n_exact) k.alpha_exact = alpha_from(*counts.n_exact, g2, g4);
  k.alpha_greedy = alpha_from(counts.n_greedy, g2, g4);
  k.alpha_ruzsa = alpha_from(counts.n_ruzsa, g2, g4);
  return k;
}

inline double best_alpha(const BoundConstants& k) {
  double a = std::min(*k.alpha_greedy, *k.alpha_ruzsa);
  if (k.alpha_exact) a = std::min(a, *k.alpha_exact);
  return a;
}

}  // namespace detail

/// Uses the supplied Gamma, or picks the candidate with the smallest alpha
/// (ties: smaller Gamma).
inline BoundEntry covering_bound(const FilterBank& bank, const Signal& f, std::size_t depth,
                             const std::optional<FrequencySet>& gamma = std::nullopt,
                             const CoverOptions& options = {}) {
  require_same_group(bank.group(), f.group());
  const FrameAudit a = require_parseval(bank);

  BoundConstants chosen;
  if (gamma) {
    require_same_group(bank.group(), gamma->group());
    if (!is_valid_gamma(*gamma, a.gap)) {
      throw ValidationError("Gamma " + gamma->to_string() + " is not a symmetric neighbourhood with Gamma^8 in the gap");
    }
    chosen = detail::gamma_constants(bank, *gamma, options);
  } else {
    bool have = false;
    for (const auto& candidate : gamma_candidates(a.gap)) {
      auto k = detail::gamma_constants(bank, candidate, options);
      if (!have) {
        chosen = std::move(k);
        have = true;
        continue;
      }
      const double ak = detail::best_alpha(k), ac = detail::best_alpha(chosen);
      if (ak < ac || (ak == ac && k.gamma->size() < chosen.gamma->size())) chosen = std::move(k);
    }
  }

  BoundEntry e;
  e.theorem = "thm4";
  e.depth = depth;
  e.input_energy = f.norm_squared();
  e.prefactor = std::max(0.0, e.input_energy - convolve_spectral(f, bank.chi_hat()).norm_squared());
  e.base = detail::best_alpha(chosen);
  chosen.support_max = a.max_support;
  chosen.group_order = bank.group().order();
  chosen.gap_size = a.gap.size();
  e.constants = std::move(chosen);
  if (!e.constants.n_exact) {
    e.notes.push_back(a.max_support > options.exact_support_limit
                          ? "exact cover skipped (support above " + std::to_string(options.exact_support_limit) +
                                "); greedy/Ruzsa count used"
                          : "exact cover search budget exhausted; greedy/Ruzsa count used");
  }
  const double coefficient = 1.0 - e.base;
  e.step_checks = step_checks(bank, f, [&](std::size_t) { return coefficient; });
  return e;
}

// ---------------------------------------------------------------------------
// Certification

struct Margin {
  std::string theorem;
  std::size_t layer = 0;
  double bound = 0.0;
  double measured = 0.0;
  double margin = 0.0;  // bound - measured
  bool ok = true;
};

struct CertificationResult {
  bool passed = true;
  std::vector<Margin> margins;
  std::optional<Margin> first_failure;
  std::vector<std::string> step_failures;
};

/// W_N <= curve(N) + 1e-9 ||f||^2 for every entry and every 1 <= N <= depth.
inline CertificationResult certify(const EnergyLedger& ledger, const BoundReport& report) {
  CertificationResult r;
  const double slack = kCertificationSlack * ledger.input_energy;
  for (const auto& e : report.entries) {
    const double scale = std::max(1.0, ledger.input_energy);
    if (std::abs(e.input_energy - ledger.input_energy) > 1e-12 * scale) {
      throw StructuralError("bound entry '" + e.theorem + "' was computed for a different signal (||f||^2 " +
                            format_double(e.input_energy) + " vs ledger " + format_double(ledger.input_energy) + ")");
    }
    if (e.depth > ledger.depth()) {
      throw StructuralError("bound entry '" + e.theorem + "' has depth " + std::to_string(e.depth) +
                            " but the ledger stops at " + std::to_string(ledger.depth()));
    }
    for (std::size_t n = 1; n <= e.depth; ++n) {
      Margin m;
      m.theorem = e.theorem;
      m.layer = n;
      m.bound = e.curve(n);
      m.measured = ledger.propagated[n];
      m.margin = m.bound - m.measured;
      m.ok = m.measured <= m.bound + slack;
      if (!m.ok && !r.first_failure) r.first_failure = m;
      r.passed = r.passed && m.ok;
      r.margins.push_back(m);
    }
    for (const auto& s : e.step_checks) {
      if (!s.ok) {
        r.passed = false;
        r.step_failures.push_back(e.theorem + ": per-step inequality fails for psi[" + std::to_string(s.filter) +
                                  "] (" + format_double(s.lhs) + " < " + format_double(s.rhs) + ")");
      }
    }
  }
  return r;
}

/// Human-readable certificate block.
inline std::string certificate_text(const BoundReport& report, const CertificationResult& result) {
  std::ostringstream os;
  for (const auto& e : report.entries) {
    const auto& k = e.constants;
    os << "bound " << e.theorem << ": base " << format_base(e.base) << ", prefactor " << format_double(e.prefactor)
       << '\n';
    if (k.support_max) os << "  S = " << *k.support_max;
    if (k.support_alt) os << ", #G - #Gamma_Psi = " << *k.support_alt;
    if (k.support_max) os << '\n';
    if (k.gamma) {
      os << "  Gamma = " << k.gamma->to_string() << ", #Gamma^2 = " << *k.gamma2_size << ", #Gamma^4 = " << *k.gamma4_size
         << '\n';
      os << "  covering: exact " << (k.n_exact ? std::to_string(*k.n_exact) : std::string("n/a")) << ", greedy "
         << *k.n_greedy << ", ruzsa " << *k.n_ruzsa << '\n';
      os << "  alpha: exact " << (k.alpha_exact ? format_base(*k.alpha_exact) : std::string("n/a")) << ", greedy "
         << format_base(*k.alpha_greedy) << ", ruzsa " << format_base(*k.alpha_ruzsa) << '\n';
    }
    if (k.c_a) os << "  C_M = " << format_base(*k.c_m) << ", C_A = " << format_base(*k.c_a) << '\n';
    for (const auto& n : e.notes) os << "  note: " << n << '\n';
  }
  for (const auto& f : report.flags) os << "flag: " << f << '\n';
  for (const auto& m : result.margins) {
    os << "  " << (m.ok ? "ok  " : "FAIL") << ' ' << m.theorem << " N=" << m.layer << " W_N=" << format_double(m.measured)
       << " bound=" << format_double(m.bound) << " margin=" << format_double(m.margin) << '\n';
  }
  for (const auto& s : result.step_failures) os << "  FAIL " << s << '\n';
  if (result.first_failure) {
    os << "certification FAILED: " << result.first_failure->theorem << " at N=" << result.first_failure->layer << '\n';
  } else if (!result.passed) {
    os << "certification FAILED: per-step inequality\n";
  } else {
    os << "certification passed\n";
  }
  return os.str();
}

}  // namespace scatterlab

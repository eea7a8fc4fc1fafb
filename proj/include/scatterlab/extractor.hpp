#pragma once

// Generic deep feature extractor: layers of bounded linear operators followed
// by a pointwise nonexpansive map, with an output operator at every depth.
//
//   U[p] f = sigma_l L_l ... sigma_1 L_1 f,   S[p] f = A_l U[p] f
//
// A LayerSpec bundles one step of the cascade: the output operator applied to
// its input (A at the previous depth), the family of operators forwarding to
// the next depth, and that depth's nonlinearity. A list of LayerSpecs shorter
// than the requested depth repeats its last entry, which models the usual
// "identical architecture in every layer" scattering network.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "scatterlab/errors.hpp"
#include "scatterlab/frames.hpp"
#include "scatterlab/group.hpp"
#include "scatterlab/numeric.hpp"
#include "scatterlab/signal.hpp"

namespace scatterlab {

enum class Nonlinearity { modulus, real_relu, identity };

inline std::string to_string(Nonlinearity s) {
  switch (s) {
    case Nonlinearity::modulus: return "modulus";
    case Nonlinearity::real_relu: return "real-relu";
    case Nonlinearity::identity: return "identity";
  }
  return "?";
}

/// Pointwise; every choice is 1-Lipschitz and fixes 0. real-relu clips the
/// real and imaginary parts independently.
inline Complex apply_nonlinearity(Nonlinearity sigma, Complex z) {
  switch (sigma) {
    case Nonlinearity::modulus: return std::abs(z);
    case Nonlinearity::real_relu: return {std::max(z.real(), 0.0), std::max(z.imag(), 0.0)};
    case Nonlinearity::identity: return z;
  }
  return z;
}

inline Signal apply_nonlinearity(Nonlinearity sigma, Signal s) {
  if (sigma == Nonlinearity::identity) return s;
  for (auto& v : s.values()) v = apply_nonlinearity(sigma, v);
  return s;
}

/// Convolution by a filter given spectrally, or an explicit matrix acting on
/// C^cols (signals on Z_cols, output on Z_rows).
class LinearOperator {
 public:
  LinearOperator() : LinearOperator(Eigen::MatrixXcd::Zero(1, 1)) {}
  explicit LinearOperator(SpectralSignal filter) : rep_(std::move(filter)) {}
  explicit LinearOperator(Eigen::MatrixXcd matrix) : rep_(std::move(matrix)) {}

  static LinearOperator convolution(SpectralSignal filter) { return LinearOperator(std::move(filter)); }
  static LinearOperator matrix(Eigen::MatrixXcd m) { return LinearOperator(std::move(m)); }

  bool is_convolution() const { return std::holds_alternative<SpectralSignal>(rep_); }
  const SpectralSignal& filter() const { return std::get<SpectralSignal>(rep_); }
  const Eigen::MatrixXcd& dense_matrix() const { return std::get<Eigen::MatrixXcd>(rep_); }

  std::size_t input_dimension() const {
    return is_convolution() ? filter().group().order() : static_cast<std::size_t>(dense_matrix().cols());
  }
  std::size_t output_dimension() const {
    return is_convolution() ? filter().group().order() : static_cast<std::size_t>(dense_matrix().rows());
  }

  Signal apply(const Signal& h) const {
    if (is_convolution()) return convolve_spectral(h, filter());
    return apply_matrix(dense_matrix(), h);
  }

  /// Uses a precomputed spectrum of h for convolution operators.
  Signal apply(const Signal& h, const SpectralSignal& h_hat) const {
    if (is_convolution()) return filter_spectrum(h_hat, filter());
    return apply_matrix(dense_matrix(), h);
  }

  Signal apply_adjoint(const Signal& h) const {
    if (is_convolution()) {
      SpectralSignal conj_filter(filter().group());
      for (std::size_t i = 0; i < conj_filter.size(); ++i) conj_filter[i] = std::conj(filter()[i]);
      return convolve_spectral(h, conj_filter);
    }
    return apply_matrix(dense_matrix().adjoint(), h);
  }

  /// Dense matrix representation; column j is the response to the j-th unit
  /// vector.
  Eigen::MatrixXcd to_dense() const {
    if (!is_convolution()) return dense_matrix();
    const auto& g = filter().group();
    const auto n = static_cast<Eigen::Index>(g.order());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto col = apply(Signal::delta(g, static_cast<Index>(j)));
      for (Eigen::Index i = 0; i < n; ++i) m(i, j) = col[static_cast<Index>(i)];
    }
    return m;
  }

 private:
  static Signal apply_matrix(const Eigen::MatrixXcd& m, const Signal& h) {
    if (static_cast<std::size_t>(m.cols()) != h.size()) {
      throw StructuralError("matrix with " + std::to_string(m.cols()) + " columns applied to a signal of length " +
                            std::to_string(h.size()));
    }
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(h.values().data(), m.cols());
    Eigen::VectorXcd out = m * v;
    return Signal(GroupSpec::cyclic(static_cast<std::size_t>(m.rows())),
                  std::vector<Complex>(out.data(), out.data() + out.size()));
  }

  std::variant<SpectralSignal, Eigen::MatrixXcd> rep_;
};

struct LayerSpec {
  LinearOperator output;                  // A applied to this layer's input
  std::vector<LinearOperator> operators;  // forwarding family L
  Nonlinearity sigma = Nonlinearity::modulus;
};

/// The scattering layer induced by a filter bank: A = C_chi, L = {C_psi}, modulus.
inline LayerSpec scattering_layer(const FilterBank& bank, Nonlinearity sigma = Nonlinearity::modulus) {
  LayerSpec layer{LinearOperator::convolution(bank.chi_hat()), {}, sigma};
  for (const auto& psi : bank.psi_hats()) layer.operators.push_back(LinearOperator::convolution(psi));
  return layer;
}

inline const LayerSpec& layer_at(const std::vector<LayerSpec>& layers, std::size_t k) {
  if (layers.empty()) throw StructuralError("empty layer list");
  return layers[std::min(k, layers.size() - 1)];
}

/// Output operator at depth l.
inline const LinearOperator& output_operator(const std::vector<LayerSpec>& layers, std::size_t depth) {
  return layer_at(layers, depth).output;
}

// ---------------------------------------------------------------------------
// Frame condition

struct FrameConditionCheck {
  double max_singular_value = 0.0;
  bool pass = false;
};

inline constexpr double kFrameConditionTolerance = 1e-9;

/// Operator norm of the stacked map [A; L_1; ...; L_m]. For an all-convolution
/// layer this is sqrt(max_xi LP(xi)); otherwise it is computed from the Gram
/// matrix sum_i M_i^* M_i.
inline FrameConditionCheck check_frame_condition(const LayerSpec& layer) {
  const std::size_t dim = layer.output.input_dimension();
  bool all_conv = layer.output.is_convolution();
  for (const auto& op : layer.operators) {
    if (op.input_dimension() != dim) {
      throw StructuralError("operators in a layer disagree on the input dimension (" + std::to_string(dim) + " vs " +
                            std::to_string(op.input_dimension()) + ")");
    }
    all_conv = all_conv && op.is_convolution();
  }
  FrameConditionCheck out;
  if (all_conv) {
    const auto& g = layer.output.filter().group();
    double lp_max = 0.0;
    for (Index xi = 0; xi < g.order(); ++xi) {
      double s = std::norm(layer.output.filter()[xi]);
      for (const auto& op : layer.operators) {
        require_same_group(g, op.filter().group());
        s += std::norm(op.filter()[xi]);
      }
      lp_max = std::max(lp_max, s);
    }
    out.max_singular_value = std::sqrt(lp_max);
  } else {
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
    auto accumulate = [&](const LinearOperator& op) {
      const Eigen::MatrixXcd m = op.to_dense();
      gram += m.adjoint() * m;
    };
    accumulate(layer.output);
    for (const auto& op : layer.operators) accumulate(op);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    out.max_singular_value = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  }
  out.pass = out.max_singular_value <= 1.0 + kFrameConditionTolerance;
  return out;
}

/// Spectral norm of a single operator.
inline double operator_norm(const LinearOperator& op) {
  return check_frame_condition(LayerSpec{op, {}, Nonlinearity::identity}).max_singular_value;
}

/// Adds L = (I - A^*A)^{1/2} so that ||Ah||^2 + ||Lh||^2 = ||h||^2.
/// Rejects ||A|| > 1.
inline LayerSpec complete_to_parseval(const LinearOperator& a, Nonlinearity sigma = Nonlinearity::modulus) {
  const Eigen::MatrixXcd m = a.to_dense();
  const Eigen::MatrixXcd gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  const double norm = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  if (norm > 1.0 + 1e-12) {
    throw ValidationError("operator norm " + format_double(norm) + " exceeds 1; cannot complete to a Parseval layer");
  }
  if (a.is_convolution()) {
    // keep the completion on the group so signals keep their group structure
    // through the cascade; L commutes with translations because A does.
    const auto& g = a.filter().group();
    SpectralSignal spectrum(g);
    for (Index xi = 0; xi < g.order(); ++xi) {
      spectrum[xi] = std::sqrt(std::max(0.0, 1.0 - std::norm(a.filter()[xi])));
    }
    return LayerSpec{a, {LinearOperator::convolution(std::move(spectrum))}, sigma};
  }
  const Eigen::VectorXd root = (1.0 - eig.eigenvalues().array()).max(0.0).sqrt();
  Eigen::MatrixXcd l = eig.eigenvectors() * root.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  return LayerSpec{a, {LinearOperator::matrix(std::move(l))}, sigma};
}

/// (1/d) 1 1^T on C^d.
inline Eigen::MatrixXcd mean_projector(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return Eigen::MatrixXcd::Constant(n, n, Complex(1.0 / static_cast<double>(d), 0.0));
}

// ---------------------------------------------------------------------------
// Propagation

/// Operator indices (L_1, ..., L_l); the empty path has length 0.
using Path = std::vector<std::size_t>;

struct PathRecord {
  Path path;
  double propagated_energy = 0.0;  // ||U[p] f||^2
  double output_energy = 0.0;      // ||S[p] f||^2
  std::optional<Signal> output;    // S[p] f when requested
};

struct EnergyLedger {
  double input_energy = 0.0;
  std::vector<std::size_t> num_paths;               // #P^(N)
  std::vector<double> propagated;                   // W_N
  std::vector<double> output;                       // O_N
  std::vector<std::optional<double>> contraction;   // realized min ||A U||^2 / ||U||^2

  std::size_t depth() const { return propagated.empty() ? 0 : propagated.size() - 1; }

  /// sum_{n < N} O_n
  double cumulative_output(std::size_t n) const {
    return pairwise_sum(std::span<const double>(output.data(), std::min(n, output.size())));
  }
};

struct ScatteringOutput {
  std::vector<PathRecord> paths;  // ordered by length, then lexicographically
  EnergyLedger ledger;
};

struct PropagationOptions {
  std::size_t budget = 1'000'000;  // path-signal evaluations
  bool store_outputs = false;
  std::size_t threads = configured_threads();
};

/// Number of paths at each depth 0..depth (saturating).
inline std::vector<std::size_t> path_counts(const std::vector<LayerSpec>& layers, std::size_t depth) {
  std::vector<std::size_t> counts(depth + 1, 1);
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  for (std::size_t l = 1; l <= depth; ++l) {
    const std::size_t m = layer_at(layers, l - 1).operators.size();
    const std::size_t prev = counts[l - 1];
    counts[l] = (m != 0 && prev > kMax / m) ? kMax : prev * m;
  }
  return counts;
}

/// Throws BudgetError naming the first depth at which the cumulative
/// path-signal evaluation count exceeds the budget.
inline void check_budget(const std::vector<LayerSpec>& layers, std::size_t depth, std::size_t budget) {
  std::size_t total = 0;
  const auto counts = path_counts(layers, depth);
  for (std::size_t l = 0; l <= depth; ++l) {
    total = (counts[l] > std::numeric_limits<std::size_t>::max() - total) ? std::numeric_limits<std::size_t>::max()
                                                                         : total + counts[l];
    if (total > budget) throw BudgetError(l, total, budget);
  }
}

inline ScatteringOutput propagate(const std::vector<LayerSpec>& layers, const Signal& f, std::size_t depth,
                                  const PropagationOptions& options = {}) {
  check_budget(layers, depth, options.budget);

  struct Node {
    Path path;
    Signal u;
  };

  ScatteringOutput result;
  auto& ledger = result.ledger;
  ledger.input_energy = f.norm_squared();

  std::vector<Node> level;
  level.push_back(Node{{}, f});

  for (std::size_t l = 0; l <= depth; ++l) {
    const auto& a = output_operator(layers, l);
    const bool descend = l < depth;
    const LayerSpec& next = layer_at(layers, l);
    const std::size_t fan = descend ? next.operators.size() : 0;

    std::vector<PathRecord> records(level.size());
    std::vector<std::optional<double>> ratios(level.size());
    std::vector<Node> children(level.size() * fan);

    parallel_for(
        level.size(),
        [&](std::size_t i) {
          const Node& node = level[i];
          bool need_spectrum = a.is_convolution();
          for (std::size_t k = 0; k < fan && !need_spectrum; ++k) need_spectrum = next.operators[k].is_convolution();
          std::optional<SpectralSignal> u_hat;
          if (need_spectrum) u_hat = fourier(node.u);

          const Signal s = need_spectrum ? a.apply(node.u, *u_hat) : a.apply(node.u);
          PathRecord& rec = records[i];
          rec.path = node.path;
          rec.propagated_energy = node.u.norm_squared();
          rec.output_energy = s.norm_squared();
          if (rec.propagated_energy > 0.0) ratios[i] = rec.output_energy / rec.propagated_energy;
          if (options.store_outputs) rec.output = s;

          for (std::size_t k = 0; k < fan; ++k) {
            const auto& op = next.operators[k];
            Signal child = need_spectrum ? op.apply(node.u, *u_hat) : op.apply(node.u);
            Node& c = children[i * fan + k];
            c.path = node.path;
            c.path.push_back(k);
            c.u = apply_nonlinearity(next.sigma, std::move(child));
          }
        },
        options.threads);

    std::vector<double> w(records.size()), o(records.size());
    std::optional<double> iota;
    for (std::size_t i = 0; i < records.size(); ++i) {
      w[i] = records[i].propagated_energy;
      o[i] = records[i].output_energy;
      if (ratios[i]) iota = iota ? std::min(*iota, *ratios[i]) : *ratios[i];
    }
    ledger.num_paths.push_back(records.size());
    ledger.propagated.push_back(pairwise_sum(w));
    ledger.output.push_back(pairwise_sum(o));
    ledger.contraction.push_back(iota);

    for (auto& r : records) result.paths.push_back(std::move(r));
    level = std::move(children);
  }
  return result;
}

struct NonexpansivenessProbe {
  double lhs = 0.0;  // sum over l <= depth and p of ||S[p]f - S[p]g||^2
  double rhs = 0.0;  // ||f - g||^2
};

inline NonexpansivenessProbe nonexpansiveness_probe(const std::vector<LayerSpec>& layers, const Signal& f,
                                                    const Signal& g, std::size_t depth,
                                                    PropagationOptions options = {}) {
  require_same_group(f.group(), g.group());
  options.store_outputs = true;
  const auto sf = propagate(layers, f, depth, options);
  const auto sg = propagate(layers, g, depth, options);
  std::vector<double> diffs(sf.paths.size());
  for (std::size_t i = 0; i < sf.paths.size(); ++i) {
    diffs[i] = (*sf.paths[i].output - *sg.paths[i].output).norm_squared();
  }
  return {pairwise_sum(diffs), (f - g).norm_squared()};
}

}  // namespace scatterlab

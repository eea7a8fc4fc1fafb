#pragma once

// Signals on a finite abelian group and their spectra, with the unitary
// Fourier transform and convolution.
//
// Measure conventions: counting measure on G, and point mass 1/#G on the
// dual, so that ||f||^2 = sum |f(x)|^2 equals ||F f||^2 = (1/#G) sum |f^(xi)|^2
// and (f * g)^ = f^ . g^ with (f * g)(x) = sum_y f(y) g(x - y).

#include <cmath>
#include <numbers>
#include <vector>

#include "scatterlab/errors.hpp"
#include "scatterlab/group.hpp"
#include "scatterlab/numeric.hpp"

namespace scatterlab {

namespace detail {

inline void require_finite(const std::vector<Complex>& values) {
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ValidationError("signal contains a non-finite value");
    }
  }
}

}  // namespace detail

class Signal {
 public:
  Signal() = default;

  explicit Signal(GroupSpec group) : group_(std::move(group)), values_(group_.order()) {}

  Signal(GroupSpec group, std::vector<Complex> values) : group_(std::move(group)), values_(std::move(values)) {
    if (values_.size() != group_.order()) {
      throw StructuralError("signal length " + std::to_string(values_.size()) + " does not match group order " +
                            std::to_string(group_.order()));
    }
    detail::require_finite(values_);
  }

  /// Unit impulse at the group identity.
  static Signal delta(const GroupSpec& group, Index at = GroupSpec::identity()) {
    Signal s(group);
    s.values_.at(at) = 1.0;
    return s;
  }

  static Signal constant(const GroupSpec& group, Complex value = 1.0) {
    return Signal(group, std::vector<Complex>(group.order(), value));
  }

  /// The character x -> exp(2 pi i sum_j x_j k_j / n_j) for the dual element k.
  static Signal character(const GroupSpec& group, Index frequency) {
    Signal s(group);
    const auto k = group.to_tuple(frequency);
    for (Index x = 0; x < group.order(); ++x) {
      const auto t = group.to_tuple(x);
      double phase = 0.0;
      for (std::size_t j = 0; j < group.rank(); ++j) {
        const auto n = group.factors()[j];
        phase += static_cast<double>((t[j] * k[j]) % n) / static_cast<double>(n);
      }
      s.values_[x] = std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
    return s;
  }

  const GroupSpec& group() const { return group_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }
  Complex operator[](Index i) const { return values_[i]; }
  Complex& operator[](Index i) { return values_[i]; }

  /// ||f||^2 under counting measure.
  double norm_squared() const { return squared_norm(values_); }

  Signal& operator-=(const Signal& other) {
    require_same_group(group_, other.group_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
  }

  Signal& operator+=(const Signal& other) {
    require_same_group(group_, other.group_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
  }

  Signal& operator*=(Complex a) {
    for (auto& v : values_) v *= a;
    return *this;
  }

  friend Signal operator-(Signal a, const Signal& b) { return a -= b; }
  friend Signal operator+(Signal a, const Signal& b) { return a += b; }
  friend Signal operator*(Complex a, Signal s) { return s *= a; }

 private:
  GroupSpec group_;
  std::vector<Complex> values_;
};

class SpectralSignal {
 public:
  SpectralSignal() = default;

  explicit SpectralSignal(GroupSpec group) : group_(std::move(group)), coeffs_(group_.order()) {}

  SpectralSignal(GroupSpec group, std::vector<Complex> coeffs) : group_(std::move(group)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != group_.order()) {
      throw StructuralError("spectrum length " + std::to_string(coeffs_.size()) + " does not match group order " +
                            std::to_string(group_.order()));
    }
    detail::require_finite(coeffs_);
  }

  /// Indicator of a frequency set.
  static SpectralSignal indicator(const FrequencySet& set) {
    SpectralSignal s(set.group());
    for (auto m : set.members()) s.coeffs_[m] = 1.0;
    return s;
  }

  const GroupSpec& group() const { return group_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  std::vector<Complex>& coeffs() { return coeffs_; }
  Complex operator[](Index i) const { return coeffs_[i]; }
  Complex& operator[](Index i) { return coeffs_[i]; }

  /// ||F||^2 under the dual Haar measure (point mass 1/#G).
  double norm_squared() const {
    return squared_norm(coeffs_) / static_cast<double>(group_.order());
  }

  /// Frequencies with |coefficient| > threshold.
  FrequencySet support(double threshold) const {
    FrequencySet s(group_);
    for (Index i = 0; i < coeffs_.size(); ++i) {
      if (std::abs(coeffs_[i]) > threshold) s.insert(i);
    }
    return s;
  }

 private:
  GroupSpec group_;
  std::vector<Complex> coeffs_;
};

namespace detail {

// In-place transform along every axis: out[k] = sum_x in[x] exp(sign 2 pi i x k / n).
inline void transform_axes(const GroupSpec& group, std::vector<Complex>& data, double sign) {
  std::vector<Complex> line;
  std::vector<Complex> out;
  for (std::size_t axis = 0; axis < group.rank(); ++axis) {
    const std::size_t n = group.factors()[axis];
    if (n == 1) continue;
    const std::size_t stride = group.stride(axis);
    std::vector<Complex> twiddle(n);
    for (std::size_t t = 0; t < n; ++t) {
      twiddle[t] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n));
    }
    line.resize(n);
    out.resize(n);
    const std::size_t block = stride * n;
    for (std::size_t outer = 0; outer < group.order(); outer += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t base = outer + inner;
        for (std::size_t x = 0; x < n; ++x) line[x] = data[base + x * stride];
        for (std::size_t k = 0; k < n; ++k) {
          Complex acc = 0.0;
          std::size_t phase = 0;
          for (std::size_t x = 0; x < n; ++x) {
            acc += line[x] * twiddle[phase];
            phase += k;
            if (phase >= n) phase -= n;
          }
          out[k] = acc;
        }
        for (std::size_t k = 0; k < n; ++k) data[base + k * stride] = out[k];
      }
    }
  }
}

}  // namespace detail

/// f^(xi) = sum_x f(x) conj(xi(x)).
inline SpectralSignal fourier(const Signal& f) {
  std::vector<Complex> data = f.values();
  detail::transform_axes(f.group(), data, -1.0);
  return SpectralSignal(f.group(), std::move(data));
}

/// f(x) = (1/#G) sum_xi F(xi) xi(x).
inline Signal inverse_fourier(const SpectralSignal& spectrum) {
  std::vector<Complex> data = spectrum.coeffs();
  detail::transform_axes(spectrum.group(), data, +1.0);
  const double scale = 1.0 / static_cast<double>(spectrum.group().order());
  for (auto& v : data) v *= scale;
  return Signal(spectrum.group(), std::move(data));
}

/// Multiplies a spectrum by a filter's spectrum and returns to the group.
inline Signal filter_spectrum(const SpectralSignal& input, const SpectralSignal& filter) {
  require_same_group(input.group(), filter.group());
  SpectralSignal product(input.group());
  for (std::size_t i = 0; i < input.size(); ++i) product[i] = input[i] * filter[i];
  return inverse_fourier(product);
}

/// (f * g)(x) = sum_y f(y) g(x - y), computed through the convolution theorem.
inline Signal convolve(const Signal& f, const Signal& g) {
  require_same_group(f.group(), g.group());
  return filter_spectrum(fourier(f), fourier(g));
}

/// f * h where h is given by its spectrum.
inline Signal convolve_spectral(const Signal& f, const SpectralSignal& filter) {
  require_same_group(f.group(), filter.group());
  return filter_spectrum(fourier(f), filter);
}

}  // namespace scatterlab

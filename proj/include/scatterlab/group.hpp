#pragma once

// Finite abelian groups Z_{n1} x ... x Z_{nk}, their elements, and sets of
// dual frequencies with sumset arithmetic.
//
// Elements are addressed by a flat index in mixed-radix row-major order
// (the last factor varies fastest). The dual group is identified with the
// group itself through the canonical isomorphism: the tuple (k_1,...,k_k)
// names the character x -> exp(2 pi i sum_j x_j k_j / n_j). Group elements
// and dual elements therefore share the index type and the arithmetic below.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "scatterlab/errors.hpp"

namespace scatterlab {

using Index = std::size_t;

class GroupSpec {
 public:
  GroupSpec() : GroupSpec(std::vector<std::size_t>{1}) {}

  explicit GroupSpec(std::vector<std::size_t> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw ValidationError("group needs at least one cyclic factor");
    order_ = 1;
    for (auto n : factors_) {
      if (n < 1) throw ValidationError("cyclic factor orders must be >= 1");
      order_ *= n;
    }
    strides_.assign(factors_.size(), 1);
    for (std::size_t j = factors_.size() - 1; j > 0; --j) {
      strides_[j - 1] = strides_[j] * factors_[j];
    }
  }

  GroupSpec(std::initializer_list<std::size_t> factors)
      : GroupSpec(std::vector<std::size_t>(factors)) {}

  /// Cyclic group Z_n.
  static GroupSpec cyclic(std::size_t n) { return GroupSpec(std::vector<std::size_t>{n}); }

  const std::vector<std::size_t>& factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  std::size_t order() const { return order_; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  std::vector<std::size_t> to_tuple(Index index) const {
    if (index >= order_) throw StructuralError("element index out of range");
    std::vector<std::size_t> tuple(rank());
    for (std::size_t j = 0; j < rank(); ++j) {
      tuple[j] = (index / strides_[j]) % factors_[j];
    }
    return tuple;
  }

  Index to_index(const std::vector<std::size_t>& tuple) const {
    if (tuple.size() != rank()) throw StructuralError("tuple rank does not match group rank");
    Index index = 0;
    for (std::size_t j = 0; j < rank(); ++j) {
      if (tuple[j] >= factors_[j]) throw StructuralError("tuple residue out of range");
      index += tuple[j] * strides_[j];
    }
    return index;
  }

  /// Reduces arbitrary (possibly negative) coordinates modulo the factors.
  Index wrap(const std::vector<long long>& coords) const {
    if (coords.size() != rank()) throw StructuralError("tuple rank does not match group rank");
    Index index = 0;
    for (std::size_t j = 0; j < rank(); ++j) {
      const auto n = static_cast<long long>(factors_[j]);
      const auto r = ((coords[j] % n) + n) % n;
      index += static_cast<Index>(r) * strides_[j];
    }
    return index;
  }

  static constexpr Index identity() { return 0; }

  Index add(Index a, Index b) const {
    Index out = 0;
    for (std::size_t j = 0; j < rank(); ++j) {
      const auto n = factors_[j];
      const auto s = strides_[j];
      out += (((a / s) % n + (b / s) % n) % n) * s;
    }
    return out;
  }

  Index negate(Index a) const {
    Index out = 0;
    for (std::size_t j = 0; j < rank(); ++j) {
      const auto n = factors_[j];
      const auto s = strides_[j];
      out += ((n - (a / s) % n) % n) * s;
    }
    return out;
  }

  Index subtract(Index a, Index b) const { return add(a, negate(b)); }

  /// Coordinates shifted into (-n/2, n/2]; used to order frequencies by size.
  std::vector<long long> centered(Index index) const {
    auto tuple = to_tuple(index);
    std::vector<long long> out(rank());
    for (std::size_t j = 0; j < rank(); ++j) {
      auto v = static_cast<long long>(tuple[j]);
      const auto n = static_cast<long long>(factors_[j]);
      if (2 * v > n) v -= n;
      out[j] = v;
    }
    return out;
  }

  long long centered_norm2(Index index) const {
    long long s = 0;
    for (auto v : centered(index)) s += v * v;
    return s;
  }

  /// "n1 x n2 x ... x nk"
  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t j = 0; j < rank(); ++j) {
      if (j) os << " x ";
      os << factors_[j];
    }
    return os.str();
  }

  /// Parses "8", "4x6" or "4 x 6".
  static GroupSpec parse(const std::string& text) {
    std::vector<std::size_t> factors;
    std::string token;
    auto flush = [&] {
      if (token.empty()) return;
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(token, &used);
      } catch (const std::exception&) {
        throw ValidationError("bad group factor '" + token + "'");
      }
      if (used != token.size() || v < 1) throw ValidationError("bad group factor '" + token + "'");
      factors.push_back(static_cast<std::size_t>(v));
      token.clear();
    };
    // factors separated by x; blanks are allowed around the separator only
    bool want_factor = true;
    for (char c : text) {
      if (c == 'x' || c == 'X' || c == '*') {
        flush();
        if (want_factor) throw ValidationError("bad group spec '" + text + "'");
        want_factor = true;
      } else if (c == ' ' || c == '\t') {
        if (!token.empty()) want_factor = false;
        flush();
      } else {
        if (!want_factor && token.empty()) throw ValidationError("bad group spec '" + text + "'");
        token.push_back(c);
        want_factor = false;
      }
    }
    flush();
    if (want_factor || factors.empty()) throw ValidationError("bad group spec '" + text + "'");
    return GroupSpec(std::move(factors));
  }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.factors_ == b.factors_; }
  friend bool operator!=(const GroupSpec& a, const GroupSpec& b) { return !(a == b); }

 private:
  std::vector<std::size_t> factors_;
  std::vector<std::size_t> strides_;
  std::size_t order_ = 1;
};

inline void require_same_group(const GroupSpec& a, const GroupSpec& b) {
  if (a != b) {
    throw StructuralError("group mismatch: " + a.to_string() + " vs " + b.to_string());
  }
}

/// A subset of the dual group. Haar measure of a set is #A / #G.
class FrequencySet {
 public:
  FrequencySet() = default;
  explicit FrequencySet(GroupSpec group) : group_(std::move(group)), mask_(group_.order(), 0) {}

  FrequencySet(GroupSpec group, const std::vector<Index>& members) : FrequencySet(std::move(group)) {
    for (auto m : members) insert(m);
  }

  static FrequencySet whole(const GroupSpec& group) {
    FrequencySet s(group);
    std::fill(s.mask_.begin(), s.mask_.end(), 1);
    s.count_ = group.order();
    return s;
  }

  static FrequencySet identity_only(const GroupSpec& group) {
    return FrequencySet(group, {GroupSpec::identity()});
  }

  /// Frequencies whose centered coordinates all satisfy |k_j| <= radius.
  static FrequencySet box(const GroupSpec& group, long long radius) {
    FrequencySet s(group);
    for (Index i = 0; i < group.order(); ++i) {
      auto c = group.centered(i);
      if (std::all_of(c.begin(), c.end(), [&](long long v) { return v >= -radius && v <= radius; })) {
        s.insert(i);
      }
    }
    return s;
  }

  const GroupSpec& group() const { return group_; }

  void insert(Index i) {
    check(i);
    if (!mask_[i]) {
      mask_[i] = 1;
      ++count_;
    }
  }

  void erase(Index i) {
    check(i);
    if (mask_[i]) {
      mask_[i] = 0;
      --count_;
    }
  }

  bool contains(Index i) const { return i < mask_.size() && mask_[i] != 0; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  /// Normalized Haar measure on the dual.
  double measure() const {
    return group_.order() == 0 ? 0.0 : static_cast<double>(count_) / static_cast<double>(group_.order());
  }

  std::vector<Index> members() const {
    std::vector<Index> out;
    out.reserve(count_);
    for (Index i = 0; i < mask_.size(); ++i) {
      if (mask_[i]) out.push_back(i);
    }
    return out;
  }

  bool is_subset_of(const FrequencySet& other) const {
    require_same_group(group_, other.group_);
    for (Index i = 0; i < mask_.size(); ++i) {
      if (mask_[i] && !other.mask_[i]) return false;
    }
    return true;
  }

  FrequencySet complement() const {
    FrequencySet out(group_);
    for (Index i = 0; i < mask_.size(); ++i) {
      if (!mask_[i]) out.insert(i);
    }
    return out;
  }

  FrequencySet united(const FrequencySet& other) const {
    require_same_group(group_, other.group_);
    FrequencySet out = *this;
    for (Index i = 0; i < mask_.size(); ++i) {
      if (other.mask_[i]) out.insert(i);
    }
    return out;
  }

  FrequencySet intersected(const FrequencySet& other) const {
    require_same_group(group_, other.group_);
    FrequencySet out(group_);
    for (Index i = 0; i < mask_.size(); ++i) {
      if (mask_[i] && other.mask_[i]) out.insert(i);
    }
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (auto m : members()) {
      if (!first) os << ',';
      first = false;
      if (group_.rank() == 1) {
        os << group_.centered(m)[0];
      } else {
        auto c = group_.centered(m);
        os << '(';
        for (std::size_t j = 0; j < c.size(); ++j) os << (j ? "," : "") << c[j];
        os << ')';
      }
    }
    os << '}';
    return os.str();
  }

  friend bool operator==(const FrequencySet& a, const FrequencySet& b) {
    return a.group_ == b.group_ && a.mask_ == b.mask_;
  }
  friend bool operator!=(const FrequencySet& a, const FrequencySet& b) { return !(a == b); }

 private:
  void check(Index i) const {
    if (i >= mask_.size()) throw StructuralError("frequency index out of range");
  }

  GroupSpec group_;
  std::vector<std::uint8_t> mask_;
  std::size_t count_ = 0;
};

/// A + B = {a + b}.
inline FrequencySet sumset(const FrequencySet& a, const FrequencySet& b) {
  require_same_group(a.group(), b.group());
  const auto& g = a.group();
  FrequencySet out(g);
  const auto bs = b.members();
  for (auto x : a.members()) {
    for (auto y : bs) out.insert(g.add(x, y));
  }
  return out;
}

/// k-fold sumset A + ... + A; k = 0 gives {identity}.
inline FrequencySet power_set(const FrequencySet& a, long long k) {
  if (k < 0) throw ValidationError("sumset power must be >= 0");
  FrequencySet result = FrequencySet::identity_only(a.group());
  FrequencySet base = a;
  auto e = static_cast<unsigned long long>(k);
  while (e) {
    if (e & 1ULL) result = sumset(result, base);
    e >>= 1;
    if (e) base = sumset(base, base);
  }
  return result;
}

/// -A.
inline FrequencySet negate(const FrequencySet& a) {
  FrequencySet out(a.group());
  for (auto x : a.members()) out.insert(a.group().negate(x));
  return out;
}

inline bool is_symmetric(const FrequencySet& a) { return negate(a) == a; }

/// xi + A.
inline FrequencySet translate(const FrequencySet& a, Index xi) {
  FrequencySet out(a.group());
  for (auto x : a.members()) out.insert(a.group().add(x, xi));
  return out;
}

}  // namespace scatterlab

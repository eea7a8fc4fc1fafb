#pragma once

// Plain-text formats.
//
// Signal / spectrum:
//   group: 4 x 6
//   <re> <im>          one line per element, mixed-radix row-major order
//
// Filter bank:
//   group: 8
//   support_threshold: 1e-12
//   filters: 8         (chi plus the high-pass filters)
//   filter chi
//   <re> <im> ...      spectral coefficients, one line per dual element
//   filter psi1
//   ...
//
// Matrix:
//   matrix <rows> <cols>
//   <re> <im>          row-major
//
// Floats are written with 17 significant digits, so values round-trip exactly.

#include <Eigen/Dense>

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "scatterlab/errors.hpp"
#include "scatterlab/frames.hpp"
#include "scatterlab/group.hpp"
#include "scatterlab/numeric.hpp"
#include "scatterlab/signal.hpp"

namespace scatterlab::io {

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-blank line; throws at end of input.
  std::string next(const std::string& what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return line;
    }
    throw StructuralError("unexpected end of input while reading " + what + " (after line " +
                          std::to_string(line_no_) + ")");
  }

  std::size_t line() const { return line_no_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw StructuralError("line " + std::to_string(line_no_) + ": " + msg);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

inline std::string value_after(LineReader& r, const std::string& line, const std::string& key) {
  const auto prefix = key + ":";
  if (line.rfind(prefix, 0) != 0) r.fail("expected '" + prefix + "'");
  return line.substr(prefix.size());
}

inline Complex parse_pair(LineReader& r, const std::string& line) {
  std::istringstream is(line);
  double re = 0, im = 0;
  std::string rest;
  if (!(is >> re >> im) || (is >> rest)) r.fail("expected '<re> <im>'");
  return {re, im};
}

inline std::vector<Complex> read_values(LineReader& r, std::size_t count) {
  std::vector<Complex> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = parse_pair(r, r.next("values"));
  return v;
}

inline void write_values(std::ostream& os, const std::vector<Complex>& values) {
  for (const auto& v : values) os << format_double(v.real()) << ' ' << format_double(v.imag()) << '\n';
}

inline GroupSpec read_group(LineReader& r) {
  const auto line = r.next("group header");
  try {
    return GroupSpec::parse(value_after(r, line, "group"));
  } catch (const ValidationError& e) {
    r.fail(e.what());
  }
}

}  // namespace detail

inline void write_signal(std::ostream& os, const Signal& f) {
  os << "group: " << f.group().to_string() << '\n';
  detail::write_values(os, f.values());
}

inline Signal read_signal(std::istream& in) {
  detail::LineReader r(in);
  auto g = detail::read_group(r);
  auto values = detail::read_values(r, g.order());
  return Signal(std::move(g), std::move(values));
}

inline void write_spectrum(std::ostream& os, const SpectralSignal& f) {
  os << "group: " << f.group().to_string() << '\n';
  detail::write_values(os, f.coeffs());
}

inline SpectralSignal read_spectrum(std::istream& in) {
  detail::LineReader r(in);
  auto g = detail::read_group(r);
  auto values = detail::read_values(r, g.order());
  return SpectralSignal(std::move(g), std::move(values));
}

inline void write_bank(std::ostream& os, const FilterBank& bank) {
  os << "group: " << bank.group().to_string() << '\n';
  os << "support_threshold: " << format_double(bank.support_threshold()) << '\n';
  os << "filters: " << bank.size() + 1 << '\n';
  os << "filter chi\n";
  detail::write_values(os, bank.chi_hat().coeffs());
  for (std::size_t j = 0; j < bank.size(); ++j) {
    os << "filter psi" << j + 1 << '\n';
    detail::write_values(os, bank.psi_hats()[j].coeffs());
  }
}

inline FilterBank read_bank(std::istream& in) {
  detail::LineReader r(in);
  const auto g = detail::read_group(r);
  double threshold = 0.0;
  {
    const auto line = r.next("support_threshold");
    std::istringstream is(detail::value_after(r, line, "support_threshold"));
    if (!(is >> threshold)) r.fail("bad support_threshold");
  }
  std::size_t count = 0;
  {
    const auto line = r.next("filters");
    std::istringstream is(detail::value_after(r, line, "filters"));
    if (!(is >> count) || count < 1) r.fail("bad filter count");
  }
  std::vector<SpectralSignal> filters;
  for (std::size_t k = 0; k < count; ++k) {
    const auto header = r.next("filter block");
    if (header.rfind("filter", 0) != 0) r.fail("expected 'filter <name>'");
    filters.emplace_back(g, detail::read_values(r, g.order()));
  }
  SpectralSignal chi = std::move(filters.front());
  filters.erase(filters.begin());
  return FilterBank(std::move(chi), std::move(filters), threshold);
}

inline void write_matrix(std::ostream& os, const Eigen::MatrixXcd& m) {
  os << "matrix " << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      os << format_double(m(i, j).real()) << ' ' << format_double(m(i, j).imag()) << '\n';
    }
  }
}

inline Eigen::MatrixXcd read_matrix(std::istream& in) {
  detail::LineReader r(in);
  const auto header = r.next("matrix header");
  std::istringstream is(header);
  std::string tag;
  long long rows = 0, cols = 0;
  if (!(is >> tag >> rows >> cols) || tag != "matrix" || rows < 1 || cols < 1) {
    r.fail("expected 'matrix <rows> <cols>'");
  }
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = detail::parse_pair(r, r.next("matrix entries"));
  }
  return m;
}

// File helpers ---------------------------------------------------------------

/// Writes to a sibling temporary file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw StructuralError("cannot write " + tmp.string());
    os << contents;
    if (!os) throw StructuralError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

template <typename Reader>
auto read_file(const std::filesystem::path& path, Reader reader) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open " + path.string());
  try {
    return reader(in);
  } catch (const StructuralError& e) {
    throw StructuralError(path.string() + ": " + e.what());
  }
}

inline Signal load_signal(const std::filesystem::path& p) { return read_file(p, [](std::istream& in) { return read_signal(in); }); }
inline FilterBank load_bank(const std::filesystem::path& p) { return read_file(p, [](std::istream& in) { return read_bank(in); }); }
inline Eigen::MatrixXcd load_matrix(const std::filesystem::path& p) {
  return read_file(p, [](std::istream& in) { return read_matrix(in); });
}

}  // namespace scatterlab::io

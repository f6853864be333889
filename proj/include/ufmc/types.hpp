// Shared numeric types for the ufmc library: complex vectors, a small dense
// complex matrix, and helpers used across modules.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ufmc {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

/// Thrown when a requested solve cannot proceed because a channel response is
/// exactly zero on a subcarrier that a zero-forcing equalizer must invert.
class SingularChannelError : public std::runtime_error {
 public:
  explicit SingularChannelError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a search op has no feasible candidate.
class NotFoundError : public std::runtime_error {
 public:
  explicit NotFoundError(const std::string& what) : std::runtime_error(what) {}
};

/// Dense row-major complex matrix. Small and deliberately simple: it backs the
/// brute-force oracles and the matrix forms of the transmit chain, not a
/// general linear-algebra surface.
class CMat {
 public:
  CMat() : rows_(0), cols_(0) {}
  CMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  CMat hermitian() const {
    CMat out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  CMat mul(const CMat& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("CMat::mul: dimension mismatch");
    CMat out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const Complex a = (*this)(r, k);
        if (a == Complex(0.0, 0.0)) continue;
        for (std::size_t c = 0; c < other.cols_; ++c) out(r, c) += a * other(k, c);
      }
    }
    return out;
  }

  CVec mul(const CVec& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("CMat::mul: vector length mismatch");
    CVec out(rows_, Complex(0.0, 0.0));
    for (std::size_t r = 0; r < rows_; ++r) {
      Complex acc(0.0, 0.0);
      for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
      out[r] = acc;
    }
    return out;
  }

  /// max_ij |A_ij - I_ij|, used by unitarity checks.
  double max_deviation_from_identity() const {
    double dev = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) {
        const Complex want = (r == c) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        dev = std::max(dev, std::abs((*this)(r, c) - want));
      }
    return dev;
  }

 private:
  std::size_t rows_, cols_;
  CVec data_;
};

inline double max_abs_diff(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: length mismatch");
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
  return dev;
}

/// Pairwise summation in a fixed order; the result does not depend on how work
/// was split across threads as long as the input order is fixed.
double pairwise_sum(const std::vector<double>& xs);

}  // namespace ufmc

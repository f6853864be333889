#include "ufmc/sigcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace ufmc {

double pairwise_sum(const std::vector<double>& xs) {
  // Recursive halving keeps error growth O(log n) and is order deterministic.
  std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t lo, std::size_t hi) -> double {
    if (hi - lo <= 8) {
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += xs[i];
      return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return rec(lo, mid) + rec(mid, hi);
  };
  if (xs.empty()) return 0.0;
  return rec(0, xs.size());
}

}  // namespace ufmc

namespace ufmc::sig {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, unnormalized, sign = +1 for the synthesis
// kernel exp(+j 2 pi i k / n).
void fft_pow2(CVec& x, int sign) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * kTwoPi / static_cast<double>(len);
    const Complex wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = x[i + k];
        const Complex v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein's algorithm: expresses a length-n DFT as a convolution, which is
// evaluated with radix-2 transforms of a padded size.
CVec fft_bluestein(const CVec& x, int sign) {
  const std::size_t n = x.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  CVec a(m, Complex(0, 0)), b(m, Complex(0, 0));
  CVec chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // exp(sign * j * pi * k^2 / n); reduce k^2 mod 2n to keep the angle small.
    const std::size_t k2 = (static_cast<std::size_t>(k) * k) % (2 * n);
    const double ang = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = Complex(std::cos(ang), std::sin(ang));
  }
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = Complex(1.0, 0.0);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
  fft_pow2(a, +1);
  fft_pow2(b, +1);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  fft_pow2(a, -1);
  const double inv_m = 1.0 / static_cast<double>(m);
  CVec out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * inv_m * chirp[k];
  return out;
}

CVec fft_any(const CVec& x, int sign) {
  if (x.size() <= 1) return x;
  if (is_pow2(x.size())) {
    CVec y = x;
    fft_pow2(y, sign);
    return y;
  }
  return fft_bluestein(x, sign);
}

}  // namespace

CMat dft_matrix(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dft_matrix: n must be positive");
  CMat d(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double ang = kTwoPi * static_cast<double>((i * k) % n) / static_cast<double>(n);
      d(i, k) = Complex(std::cos(ang) * scale, std::sin(ang) * scale);
    }
  }
  return d;
}

CVec unitary_dft(const CVec& x, bool inverse) {
  if (x.empty()) throw std::invalid_argument("unitary_dft: empty input");
  CVec y = fft_any(x, inverse ? +1 : -1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
  for (auto& v : y) v *= scale;
  return y;
}

CMat toeplitz_conv_matrix(const CVec& taps, std::size_t input_len, std::size_t out_len) {
  if (input_len == 0) throw std::invalid_argument("toeplitz_conv_matrix: input_len must be positive");
  if (out_len < input_len)
    throw std::invalid_argument("toeplitz_conv_matrix: out_len must be >= input_len");
  if (taps.size() > out_len - input_len + 1)
    throw std::invalid_argument("toeplitz_conv_matrix: taps longer than out_len - input_len + 1");
  CMat a(out_len, input_len);
  for (std::size_t c = 0; c < input_len; ++c)
    for (std::size_t t = 0; t < taps.size(); ++t) a(c + t, c) = taps[t];
  return a;
}

CVec linear_convolve(const CVec& a, const CVec& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("linear_convolve: empty input");
  CVec out(a.size() + b.size() - 1, Complex(0, 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Complex ai = a[i];
    if (ai == Complex(0, 0)) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
  }
  return out;
}

double circulant_diagonalization_check(const CVec& first_col, std::size_t n) {
  if (n == 0) throw std::invalid_argument("circulant_diagonalization_check: n must be positive");
  if (first_col.size() > n)
    throw std::invalid_argument("circulant_diagonalization_check: first column longer than n");
  CVec c(n, Complex(0, 0));
  std::copy(first_col.begin(), first_col.end(), c.begin());
  CMat b(n, n);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t row = 0; row < n; ++row) b((row + col) % n, col) = c[row];
  const CMat d = dft_matrix(n);
  const CMat lhs = d.hermitian().mul(b).mul(d);
  const CVec spec = d.hermitian().mul(c);  // forward transform of the first column
  const double root_n = std::sqrt(static_cast<double>(n));
  double dev = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t col = 0; col < n; ++col) {
      const Complex want = (r == col) ? root_n * spec[r] : Complex(0, 0);
      dev = std::max(dev, std::abs(lhs(r, col) - want));
    }
  return dev;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int n_threads) {
  if (n == 0) return;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t workers = n_threads <= 0 ? hw : static_cast<std::size_t>(n_threads);
  workers = std::min<std::size_t>(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ufmc::sig

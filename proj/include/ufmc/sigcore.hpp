// Deterministic signal kernels: the normalized DFT pair, Toeplitz filtering
// matrices, exact linear convolution, and the circulant diagonalization
// identity. The matrix forms double as brute-force oracles for the streaming
// implementations elsewhere in the library.
//
// One transform convention is used everywhere: the synthesis (inverse) matrix
// D has entries d(i, k) = exp(+j 2 pi i k / n) / sqrt(n), so the forward
// transform is its conjugate transpose and both are unitary.
#pragma once

#include <cstddef>
#include <functional>

#include "ufmc/types.hpp"

namespace ufmc::sig {

/// Synthesis DFT matrix, d(i, k) = exp(+j 2 pi i k / n) / sqrt(n).
/// Throws std::invalid_argument for n == 0.
CMat dft_matrix(std::size_t n);

/// Unitary transform of x (length n kept, no padding). inverse == false applies
/// the forward kernel exp(-j 2 pi i k / n) / sqrt(n); inverse == true applies
/// the synthesis kernel. Fast paths (radix-2, Bluestein) are used internally
/// and agree with dft_matrix application to within accumulation error.
CVec unitary_dft(const CVec& x, bool inverse);

/// Tall Toeplitz filtering matrix A of shape (out_len x input_len) with
/// A(r, c) = taps[r - c]: multiplying by a length input_len vector performs
/// linear convolution with the taps, zero padded to out_len rows.
/// Requires out_len >= input_len and taps.size() <= out_len - input_len + 1.
CMat toeplitz_conv_matrix(const CVec& taps, std::size_t input_len, std::size_t out_len);

/// Exact discrete linear convolution, output length a.size() + b.size() - 1.
CVec linear_convolve(const CVec& a, const CVec& b);

/// Builds the n x n circulant matrix B with given first column and returns
/// max_ij | (D^H B D)_ij - sqrt(n) diag(D^H c)_ij |, i.e. the deviation from
/// the identity that the forward transform diagonalizes a circulant with the
/// spectrum of its first column. first_col is zero padded to length n.
/// Requires first_col.size() <= n.
double circulant_diagonalization_check(const CVec& first_col, std::size_t n);

/// Runs fn(i) for i in [0, n) across up to n_threads workers. Work is split in
/// fixed blocks so any reduction done per index slot is independent of the
/// thread count. n_threads <= 1 runs inline.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int n_threads);

}  // namespace ufmc::sig

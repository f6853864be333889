// Receive processing: oversampled-DFT demodulation with bin decimation,
// one-tap ZF/MMSE equalization with per-subcarrier effective noise, and hard
// QAM decisions.
#pragma once

#include <cstdint>
#include <vector>

#include "ufmc/types.hpp"
#include "ufmc/waveform.hpp"

namespace ufmc::rx {

/// Smallest eta >= 0 with 2^eta * n_grid >= window_len, the oversampling
/// exponent that makes the decimated DFT interference-free when the guard
/// interval covers the channel spread.
int min_oversampling_exponent(int window_len, int n_grid);

/// Zero-pads y to n_os = 2^eta * n_grid, applies the normalized n_os-point
/// forward DFT, and keeps every 2^eta-th bin. With a sufficient guard and no
/// synchronization errors the output is h(n) f(n) a(n) / (rho_m sqrt(2^eta))
/// plus processed noise of variance (len(y)/n_os) * sigma^2.
CVec dft_downsample(const CVec& y, int n_grid, int eta);

/// One-tap equalizer bank over the full grid (zero off the active set).
struct EqualizerTaps {
  CVec w;
  std::vector<double> sigma_eff;
};

/// w(n) = conj(beta(n)) / (|beta(n)|^2 + nu * sigma_eff(n) / sym_power) on
/// active subcarriers. nu = 0 is zero-forcing (throws SingularChannelError
/// when beta vanishes on an active subcarrier), nu = 1 is MMSE.
EqualizerTaps equalizer_from_beta(const CVec& beta, const std::vector<double>& sigma_eff,
                                  double sym_power, int nu, const wave::SubcarrierPlan& plan);

/// Equalizer for the error-free model: beta(n) = h_freq(n) f_m(n) /
/// (rho_m sqrt(2^eta)) with f_m the subband's own filter response.
EqualizerTaps build_equalizer(const CVec& h_freq, const wave::FrameConfig& cfg, int eta,
                              const std::vector<double>& sigma_eff, double sym_power, int nu);

struct DetectionResult {
  CVec equalized;
  std::vector<std::uint8_t> bits;
};

/// Applies the equalizer to the decimated DFT output and makes hard
/// minimum-distance Gray decisions on the active subcarriers.
DetectionResult detect(const CVec& z, const EqualizerTaps& taps, const wave::SubcarrierPlan& plan,
                       int m_mod, double sym_power = 1.0);

}  // namespace ufmc::rx

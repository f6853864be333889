#include "ufmc/receiver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ufmc/sigcore.hpp"

namespace ufmc::rx {

int min_oversampling_exponent(int window_len, int n_grid) {
  if (window_len < 1 || n_grid < 1)
    throw std::invalid_argument("oversampling: lengths must be positive");
  int eta = 0;
  while ((static_cast<long long>(n_grid) << eta) < window_len) ++eta;
  return eta;
}

CVec dft_downsample(const CVec& y, int n_grid, int eta) {
  if (n_grid < 1) throw std::invalid_argument("downsample: grid size must be positive");
  if (eta < 0) throw std::invalid_argument("downsample: oversampling exponent must be >= 0");
  const std::size_t n_os = static_cast<std::size_t>(n_grid) << eta;
  if (y.size() > n_os)
    throw std::invalid_argument("downsample: window of " + std::to_string(y.size()) +
                                " samples exceeds the " + std::to_string(n_os) +
                                "-point transform");
  CVec padded(n_os, Complex(0.0, 0.0));
  std::copy(y.begin(), y.end(), padded.begin());
  CVec spectrum = sig::unitary_dft(padded, /*inverse=*/false);
  CVec z(static_cast<std::size_t>(n_grid));
  const std::size_t step = std::size_t{1} << eta;
  for (int n = 0; n < n_grid; ++n) z[n] = spectrum[static_cast<std::size_t>(n) * step];
  return z;
}

EqualizerTaps equalizer_from_beta(const CVec& beta, const std::vector<double>& sigma_eff,
                                  double sym_power, int nu, const wave::SubcarrierPlan& plan) {
  if (static_cast<int>(beta.size()) != plan.n_grid)
    throw std::invalid_argument("equalizer: beta must cover the full grid");
  if (sigma_eff.size() != beta.size())
    throw std::invalid_argument("equalizer: need one effective noise power per subcarrier");
  if (sym_power <= 0.0) throw std::invalid_argument("equalizer: symbol power must be positive");
  if (nu != 0 && nu != 1) throw std::invalid_argument("equalizer: kind must be 0 (ZF) or 1 (MMSE)");

  EqualizerTaps taps;
  taps.w.assign(beta.size(), Complex(0.0, 0.0));
  taps.sigma_eff = sigma_eff;
  for (int n : plan.active_carriers()) {
    if (sigma_eff[n] < 0.0)
      throw std::invalid_argument("equalizer: effective noise power must be >= 0");
    const double denom = std::norm(beta[n]) + nu * sigma_eff[n] / sym_power;
    if (denom == 0.0)
      throw SingularChannelError("zero-forcing equalizer hit a zero response on subcarrier " +
                                 std::to_string(n));
    taps.w[n] = std::conj(beta[n]) / denom;
  }
  return taps;
}

EqualizerTaps build_equalizer(const CVec& h_freq, const wave::FrameConfig& cfg, int eta,
                              const std::vector<double>& sigma_eff, double sym_power, int nu) {
  const wave::SubcarrierPlan& plan = cfg.plan;
  if (static_cast<int>(h_freq.size()) != plan.n_grid)
    throw std::invalid_argument("equalizer: channel response must cover the full grid");
  if (eta < 0) throw std::invalid_argument("equalizer: oversampling exponent must be >= 0");

  const double gain = 1.0 / std::sqrt(static_cast<double>(std::size_t{1} << eta));
  CVec beta(h_freq.size(), Complex(0.0, 0.0));
  for (int m = 0; m < plan.subband_count(); ++m) {
    const CVec f = wave::filter_freq_response(cfg.filters[m].taps, plan.n_grid);
    const int start = plan.subband_start(m);
    for (int n = start; n < start + plan.subband_sizes[m]; ++n)
      beta[n] = h_freq[n] * f[n] * gain / cfg.filters[m].rho;
  }
  return equalizer_from_beta(beta, sigma_eff, sym_power, nu, plan);
}

DetectionResult detect(const CVec& z, const EqualizerTaps& taps, const wave::SubcarrierPlan& plan,
                       int m_mod, double sym_power) {
  if (static_cast<int>(z.size()) != plan.n_grid)
    throw std::invalid_argument("detect: input must cover the full grid");
  if (taps.w.size() != z.size())
    throw std::invalid_argument("detect: equalizer does not match the grid");

  DetectionResult out;
  out.equalized.assign(z.size(), Complex(0.0, 0.0));
  for (int n : plan.active_carriers()) out.equalized[n] = taps.w[n] * z[n];
  out.bits = wave::qam_demap(out.equalized, m_mod, plan, sym_power);
  return out;
}

}  // namespace ufmc::rx

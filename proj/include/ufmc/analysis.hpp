// Closed-form performance engine. Everything here measures the transmit
// chain through a length-L2 receive window and the normalized N-point
// transform of that window, so the clean-case coupling on subcarrier n is
// h(n) f_m(n) / rho_m and the windowed noise power is (L2/N) sigma^2. The
// receiver's decimated oversampled transform returns the same quantities
// scaled by 1/sqrt(2^eta); every ratio (SINR, capacity, BER) is identical in
// both conventions.
//
// Coupling coefficients: beta(n, t, e) is the complex gain from source
// subcarrier t of the symbol at offset e into observed subcarrier n of the
// symbol at offset 0, for one channel realization; expected_beta_power is its
// ensemble second moment over block-fading taps with uncorrelated tap gains.
#pragma once

#include <vector>

#include "ufmc/channel.hpp"
#include "ufmc/types.hpp"
#include "ufmc/waveform.hpp"

namespace ufmc::ana {

/// Per-subcarrier decomposition of received power into desired, inter-carrier
/// and inter-symbol parts (symbol-power units, full grid, zero off the active
/// set) plus the windowed noise power (L2/N) sigma^2.
struct PowerBreakdown {
  std::vector<double> p_d;
  std::vector<double> p_ici;
  std::vector<double> p_isi;
  double noise = 0.0;
};

/// Exponential pair approximating square-QAM bit error rate.
struct BerModel {
  int m_mod = 4;
  double phi1 = 0.0, phi2 = 0.0;
  double weight1 = 0.0, weight2 = 0.0;
};

/// phi1 = 3/(2(M-1)), phi2 = 2/(M-1), weights (1 - 1/sqrt(M))/6 and /3.
BerModel make_ber_model(int m_mod);

/// weight1 * exp(-phi1 * snr) + weight2 * exp(-phi2 * snr).
double ber_approx(double snr, const BerModel& model);

/// Interference-free per-subcarrier SNR through the windowed receiver:
/// (N/L2) * (sym_power/noise_var) * ch_gain * |f(n)|^2 / rho^2. The flat
/// guard-interval reference (single trivial filter) is the same expression
/// with f = 1, rho = 1.
double ideal_snr(int n, const CVec& taps, double rho, double sym_power, double noise_var,
                 double ch_gain, int window_len, int n_grid);

/// Arithmetic means over subband m of the interference-free SNR, of
/// log2(1 + SNR), and of the BER approximation at that SNR.
double subband_avg_snr(const wave::FrameConfig& cfg, int m, double sym_power, double noise_var,
                       double ch_gain, int window_len);
double subband_avg_capacity(const wave::FrameConfig& cfg, int m, double sym_power,
                            double noise_var, double ch_gain, int window_len);
double subband_avg_ber(const wave::FrameConfig& cfg, int m, double sym_power, double noise_var,
                       double ch_gain, int window_len, const BerModel& model);

/// Peak-to-bottom gain ratio in dB: the shaping filter's power gain at the
/// middle of its subband over the gain at the subband boundary (half a
/// subband width, n_m/2 grid bins, off center). Evaluated on the prototype
/// magnitude |taps|, so it applies to filters built as modulated symmetric
/// windows. n_m >= 2.
double pbgr(const CVec& taps, int n_grid, int n_m);

/// Smallest filter length in [1, l_max] whose PBGR reaches target_db for the
/// equiripple design at atten_db. Throws NotFoundError when no length in
/// bounds reaches the target.
int filter_length_for_pbgr(double target_db, int n_grid, int n_m, double atten_db,
                           int l_max = 512);

/// Symbol offsets beyond this cannot overlap the observation window.
int max_symbol_offset(int l_ch, int l3);

/// Deterministic coupling coefficient for one channel realization: the
/// normalized N-point transform over the length-l2 window starting at
/// to samples past the symbol-0 slot, of the contribution of source
/// subcarrier t transmitted at symbol offset e. Direct summation; serves as
/// the oracle for the accelerated ensemble and batch paths.
Complex beta(int n, int t, int e, const wave::FrameConfig& cfg, const CVec& h_taps, int to,
             const std::vector<double>& cfo);

/// Ensemble second moment E|beta(n,t,e)|^2 over block-fading taps with
/// expected per-sample powers tap_powers, evaluated in closed form.
double expected_beta_power(int n, int t, int e, const wave::FrameConfig& cfg,
                           const std::vector<double>& tap_powers, int to,
                           const std::vector<double>& cfo);

/// Full per-subcarrier decomposition: observed subcarrier n is measured
/// through the window of the user owning its subband (timing offset
/// imp.to[m(n)]); sources run over all active subcarriers and symbol offsets
/// |e| <= max_symbol_offset. p_d(n) = sym_power * E|beta(n,n,0)|^2, p_ici
/// sums sources t != n at e = 0, p_isi sums all sources at e != 0.
PowerBreakdown power_breakdown(const wave::FrameConfig& cfg, const std::vector<double>& tap_powers,
                               const chan::ImpairmentSet& imp, double sym_power,
                               int n_threads = 1);

/// SINR(n) = p_d / (p_ici + p_isi + noise); capacity = (N/L3) * sum over
/// active n of log2(1 + SINR(n)) in bits/s/Hz.
double sinr(const PowerBreakdown& pb, int n);
double capacity(const PowerBreakdown& pb, const wave::FrameConfig& cfg);

/// Per-realization couplings for every observed subcarrier n of subband m
/// through that user's window: the diagonal coefficient beta(n,n,0) and the
/// summed interference power sum_{(t,e) != (n,0)} |beta(n,t,e)|^2 over all
/// active sources and |e| <= max_symbol_offset (unit symbol power; scale by
/// the symbol power for interference in power units). Matches the beta
/// oracle; runs in O(active * (l1 + l_ch * offsets)) per observed carrier.
struct RealizedCouplings {
  std::vector<int> carriers;
  CVec beta_diag;
  std::vector<double> interference;
};
RealizedCouplings realized_couplings(const wave::FrameConfig& cfg, const CVec& h_taps, int to,
                                     const std::vector<double>& cfo, int m);

}  // namespace ufmc::ana

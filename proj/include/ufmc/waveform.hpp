// Transmit-side model: the subcarrier grid is split into contiguous subbands,
// each subband gets a unit-power FIR shaping filter, and one multicarrier
// symbol is the sum over subbands of (filtered inverse transform of that
// subband's QAM values), scaled per subband so every active subcarrier leaves
// the transmitter with the same average power. The framed symbol either
// appends L_zp >= 0 zeros or, for L_zp < 0, cuts |L_zp| samples off the two
// ends (floor(|L_zp|/2) from the front, the rest from the back).
#pragma once

#include <cstdint>
#include <vector>

#include "ufmc/types.hpp"

namespace ufmc::wave {

/// Contiguous non-overlapping subbands on an n_grid-point frequency grid.
struct SubcarrierPlan {
  int n_grid = 0;
  std::vector<int> subband_sizes;
  int first_active = 0;

  int subband_count() const { return static_cast<int>(subband_sizes.size()); }
  int subband_start(int m) const;
  int active_count() const;
  std::vector<int> active_carriers() const;
  /// Subband owning grid index n, or -1 if n is outside the active set.
  int subband_of(int n) const;
};

/// Validates geometry: every subband fits inside the grid and sizes are
/// positive. Throws std::invalid_argument otherwise.
SubcarrierPlan make_plan(int n_grid, const std::vector<int>& subband_sizes, int first_active);

/// Unit-power FIR shaping filter for one subband, with the cached per-subband
/// power normalizer rho (rho^2 = trace(D_m^H A_m^H A_m D_m) / N_m for the
/// plan it was designed against; rho = 1 exactly for a single unit tap).
struct SubbandFilter {
  CVec taps;
  double rho = 1.0;
};

/// rho for a candidate filter within a plan, from the trace definition above.
double subband_power_normalizer(const CVec& taps, const SubcarrierPlan& plan, int m);

/// Equiripple (Dolph-Chebyshev) window, peak-normalized: every sidelobe sits
/// atten_db below the main lobe. length >= 1, atten_db > 0.
std::vector<double> equiripple_window(int length, double atten_db);

/// Dolph-Chebyshev prototype of given length and sidelobe attenuation (dB),
/// modulated to the center of subband m ((first + last active index)/2 in grid
/// units) and normalized to unit power. length >= 1, atten_db > 0.
SubbandFilter design_chebyshev_filter(int length, double atten_db,
                                      const SubcarrierPlan& plan, int m);

/// Frequency response F(n) = sum_l taps[l] exp(-j 2 pi n l / n_grid) on the
/// full grid.
CVec filter_freq_response(const CVec& taps, int n_grid);

/// Plan plus per-subband filters plus the framing length parameter.
struct FrameConfig {
  SubcarrierPlan plan;
  std::vector<SubbandFilter> filters;
  int l_zp = 0;

  int l_filter_max() const;
  /// Unframed symbol length: n_grid + l_filter_max - 1.
  int l1() const { return plan.n_grid + l_filter_max() - 1; }
  /// Framed symbol length: l1 + l_zp (l_zp < 0 shortens).
  int l3() const { return l1() + l_zp; }
  /// Receive window length for a channel with l_ch taps.
  int l2(int l_ch) const { return l1() + l_ch - 1; }
  int tail_cut_front() const { return l_zp < 0 ? (-l_zp) / 2 : 0; }
  int tail_cut_back() const { return l_zp < 0 ? (-l_zp) - (-l_zp) / 2 : 0; }
  /// Per-symbol overhead relative to one grid span: l_filter_max - 1 + l_zp.
  int overhead() const { return l_filter_max() - 1 + l_zp; }
};

/// Validates that filters match the plan, every filter is unit power, and the
/// tail cut keeps l3 >= n_grid (|l_zp| <= l_filter_max - 1 when negative).
FrameConfig make_frame_config(const SubcarrierPlan& plan, std::vector<SubbandFilter> filters,
                              int l_zp);

/// One multicarrier symbol's frequency-domain payload: length n_grid, zero off
/// the active set, E|a(n)|^2 = sym_power on active subcarriers.
struct SymbolBlock {
  CVec symbols;
  double sym_power = 1.0;
};

/// Unframed transmit symbol of length l1. cfo holds one normalized carrier
/// frequency offset per subband (empty means zero): subband m is synthesized
/// on the shifted tones exp(j 2 pi i (n + cfo[m]) / N). Each subband is scaled
/// by 1 / rho_m; with zero cfo the result equals the matrix chain
/// sum_m A_m D_m a_m / rho_m built from toeplitz_conv_matrix and dft_matrix.
CVec synthesize(const SymbolBlock& block, const FrameConfig& cfg, const std::vector<double>& cfo);

/// Frames q (length l1) to length l3: appends zeros for l_zp >= 0, otherwise
/// drops tail_cut_front samples at the start and tail_cut_back at the end.
CVec apply_zp_or_tc(const CVec& q, const FrameConfig& cfg);

/// Gray-coded square QAM over the active subcarriers, unit average symbol
/// power times sym_power. bits.size() must equal active_count * log2(m_mod);
/// m_mod must be a square power of two (4, 16, 64, 256).
SymbolBlock qam_map(const std::vector<std::uint8_t>& bits, int m_mod,
                    const SubcarrierPlan& plan, double sym_power = 1.0);

/// Minimum-distance hard decisions back to bits (inverse of qam_map given the
/// active set); input is a full-grid vector of equalized values.
std::vector<std::uint8_t> qam_demap(const CVec& equalized, int m_mod, const SubcarrierPlan& plan,
                                    double sym_power = 1.0);

}  // namespace ufmc::wave

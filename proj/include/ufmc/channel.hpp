// Tapped-delay-line fading channels: named power-delay profiles, Rayleigh
// block-fading realizations on the sample grid, and propagation of a stream
// of framed symbols through (channel, timing offset, additive noise) into
// per-symbol receive windows.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ufmc/types.hpp"

namespace ufmc::chan {

/// Power-delay profile: tap delays in nanoseconds with relative powers in dB.
/// Linear tap powers are normalized so they sum to total_gain.
struct ChannelProfile {
  std::string name;
  std::vector<double> delays_ns;
  std::vector<double> powers_db;
  double total_gain = 1.0;
};

/// Validates: non-empty, equal lengths, strictly increasing delays starting at
/// >= 0, positive total gain. Throws std::invalid_argument otherwise.
ChannelProfile make_profile(const std::string& name, const std::vector<double>& delays_ns,
                            const std::vector<double>& powers_db, double total_gain = 1.0);

/// Embedded standard profiles: "epa", "eva", "etu" (3GPP TS 36.101 tapped
/// delay lines) and "ht" (hilly-terrain). Throws NotFoundError for unknown
/// names.
ChannelProfile builtin_profile(const std::string& name);
std::vector<std::string> builtin_profile_names();

/// Reads a profile from a JSON file with fields name, delays_ns, powers_db
/// and optional total_gain. Throws std::invalid_argument on malformed input.
ChannelProfile load_profile(const std::string& path);

/// Expected per-sample tap powers p_l on a sample grid: each profile tap is
/// rounded to the nearest sample index (powers merging when they collide).
/// The vector length is the channel order L_ch; entries sum to total_gain.
std::vector<double> sampled_power_profile(const ChannelProfile& profile, double sample_rate_hz);

/// One block-fading draw: taps[l] circular-symmetric complex Gaussian with
/// E|taps[l]|^2 = tap_powers[l], zero where the profile has no energy.
struct ChannelRealization {
  CVec taps;
  std::vector<double> tap_powers;
};

/// Synchronization errors and noise: one normalized carrier frequency offset
/// per subband, one sample-unit timing offset per user (user m observes
/// subband m), and the additive noise variance.
struct ImpairmentSet {
  std::vector<double> cfo;
  std::vector<int> to;
  double noise_var = 0.0;
};

/// Validates |cfo| < 0.5, to >= 0, noise_var >= 0 and the expected list
/// lengths. Throws std::invalid_argument otherwise.
void validate_impairments(const ImpairmentSet& imp, int subband_count);

/// Deterministic in (profile, sample_rate_hz, seed).
ChannelRealization realize_channel(const ChannelProfile& profile, double sample_rate_hz,
                                   std::uint64_t seed);

/// Convolves the concatenation of equal-length framed symbols with taps h,
/// then returns one window per symbol: window s covers received samples
/// [s*block_len + to, s*block_len + to + window_len). Windows overlap the
/// neighboring symbols' spill whenever the framing leaves fewer than
/// len(h)-1 guard samples, which is exactly how inter-symbol interference
/// enters. White complex Gaussian noise of variance noise_var is added once
/// per received sample, so overlapping windows see identical noise.
/// Deterministic in (inputs, seed).
std::vector<CVec> propagate_stream(const std::vector<CVec>& blocks, const CVec& h, int to,
                                   double noise_var, int window_len, std::uint64_t seed);

}  // namespace ufmc::chan

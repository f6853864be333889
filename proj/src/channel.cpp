#include "ufmc/channel.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "ufmc/rng.hpp"

namespace ufmc::chan {

ChannelProfile make_profile(const std::string& name, const std::vector<double>& delays_ns,
                            const std::vector<double>& powers_db, double total_gain) {
  if (delays_ns.empty()) throw std::invalid_argument("profile: need at least one tap");
  if (delays_ns.size() != powers_db.size())
    throw std::invalid_argument("profile: delays and powers must have equal length");
  if (delays_ns.front() < 0.0) throw std::invalid_argument("profile: delays must be >= 0");
  for (std::size_t i = 1; i < delays_ns.size(); ++i) {
    if (delays_ns[i] <= delays_ns[i - 1])
      throw std::invalid_argument("profile: delays must be strictly increasing");
  }
  if (total_gain <= 0.0) throw std::invalid_argument("profile: total gain must be positive");
  return ChannelProfile{name, delays_ns, powers_db, total_gain};
}

// 3GPP TS 36.101 Annex B.2 tapped delay lines (EPA/EVA/ETU) and the COST 207
// six-tap hilly terrain profile (dense early cluster plus a strong echo
// cluster arriving around 15 us).
ChannelProfile builtin_profile(const std::string& name) {
  if (name == "epa") {
    return make_profile("epa", {0, 30, 70, 90, 110, 190, 410},
                        {0.0, -1.0, -2.0, -3.0, -8.0, -17.2, -20.8});
  }
  if (name == "eva") {
    return make_profile("eva", {0, 30, 150, 310, 370, 710, 1090, 1730, 2510},
                        {0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9});
  }
  if (name == "etu") {
    return make_profile("etu", {0, 50, 120, 200, 230, 500, 1600, 2300, 5000},
                        {-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, -3.0, -5.0, -7.0});
  }
  if (name == "ht") {
    return make_profile("ht", {0, 100, 300, 500, 15000, 17200},
                        {0.0, -1.5, -4.5, -7.5, -8.0, -17.7});
  }
  throw NotFoundError("unknown channel profile: " + name);
}

std::vector<std::string> builtin_profile_names() { return {"epa", "eva", "etu", "ht"}; }

ChannelProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("profile file not readable: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("profile file " + path + ": " + e.what());
  }
  try {
    return make_profile(doc.at("name").get<std::string>(),
                        doc.at("delays_ns").get<std::vector<double>>(),
                        doc.at("powers_db").get<std::vector<double>>(),
                        doc.value("total_gain", 1.0));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("profile file " + path + ": " + e.what());
  }
}

std::vector<double> sampled_power_profile(const ChannelProfile& profile, double sample_rate_hz) {
  if (sample_rate_hz <= 0.0) throw std::invalid_argument("profile: sample rate must be positive");
  if (profile.delays_ns.empty()) throw std::invalid_argument("profile: need at least one tap");

  std::vector<double> linear(profile.powers_db.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < linear.size(); ++i) {
    linear[i] = std::pow(10.0, profile.powers_db[i] / 10.0);
    sum += linear[i];
  }
  const double scale = profile.total_gain / sum;

  const double to_samples = 1e-9 * sample_rate_hz;
  const int order = static_cast<int>(std::lround(profile.delays_ns.back() * to_samples)) + 1;
  std::vector<double> p(static_cast<std::size_t>(order), 0.0);
  for (std::size_t i = 0; i < linear.size(); ++i) {
    const int idx = static_cast<int>(std::lround(profile.delays_ns[i] * to_samples));
    p[idx] += linear[i] * scale;
  }
  return p;
}

ChannelRealization realize_channel(const ChannelProfile& profile, double sample_rate_hz,
                                   std::uint64_t seed) {
  ChannelRealization out;
  out.tap_powers = sampled_power_profile(profile, sample_rate_hz);
  out.taps.assign(out.tap_powers.size(), Complex(0.0, 0.0));
  Rng rng(seed);
  for (std::size_t l = 0; l < out.taps.size(); ++l) {
    if (out.tap_powers[l] > 0.0) out.taps[l] = rng.cgauss(out.tap_powers[l]);
  }
  return out;
}

void validate_impairments(const ImpairmentSet& imp, int subband_count) {
  if (static_cast<int>(imp.cfo.size()) != subband_count)
    throw std::invalid_argument("impairments: need one frequency offset per subband");
  if (static_cast<int>(imp.to.size()) != subband_count)
    throw std::invalid_argument("impairments: need one timing offset per user");
  for (double eps : imp.cfo) {
    if (!(std::abs(eps) < 0.5))
      throw std::invalid_argument("impairments: frequency offsets must satisfy |cfo| < 0.5");
  }
  for (int tau : imp.to) {
    if (tau < 0) throw std::invalid_argument("impairments: timing offsets must be >= 0");
  }
  if (imp.noise_var < 0.0)
    throw std::invalid_argument("impairments: noise variance must be >= 0");
}

std::vector<CVec> propagate_stream(const std::vector<CVec>& blocks, const CVec& h, int to,
                                   double noise_var, int window_len, std::uint64_t seed) {
  if (h.empty()) throw std::invalid_argument("propagate: channel must have at least one tap");
  if (to < 0) throw std::invalid_argument("propagate: timing offset must be >= 0");
  if (noise_var < 0.0) throw std::invalid_argument("propagate: noise variance must be >= 0");
  if (window_len < 1) throw std::invalid_argument("propagate: window length must be >= 1");
  if (blocks.empty()) return {};
  const std::size_t block_len = blocks.front().size();
  if (block_len == 0) throw std::invalid_argument("propagate: empty symbol blocks");
  for (const CVec& b : blocks) {
    if (b.size() != block_len)
      throw std::invalid_argument("propagate: symbol blocks must share one length");
  }

  const std::size_t n_blocks = blocks.size();
  const std::size_t span =
      (n_blocks - 1) * block_len + static_cast<std::size_t>(to) + static_cast<std::size_t>(window_len);
  CVec received(span, Complex(0.0, 0.0));

  // stream convolution, accumulated block by block into the shared timeline
  for (std::size_t s = 0; s < n_blocks; ++s) {
    const std::size_t base = s * block_len;
    for (std::size_t l = 0; l < h.size(); ++l) {
      if (h[l] == Complex(0.0, 0.0)) continue;
      const std::size_t lo = base + l;
      if (lo >= span) break;
      const std::size_t count = std::min(block_len, span - lo);
      const Complex g = h[l];
      for (std::size_t i = 0; i < count; ++i) received[lo + i] += g * blocks[s][i];
    }
  }

  if (noise_var > 0.0) {
    Rng rng(seed);
    for (Complex& v : received) v += rng.cgauss(noise_var);
  }

  std::vector<CVec> windows(n_blocks);
  for (std::size_t s = 0; s < n_blocks; ++s) {
    const std::size_t start = s * block_len + static_cast<std::size_t>(to);
    windows[s].assign(received.begin() + start, received.begin() + start + window_len);
  }
  return windows;
}

}  // namespace ufmc::chan

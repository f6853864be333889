#include "ufmc/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ufmc/sigcore.hpp"

namespace ufmc::wave {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double tap_power(const CVec& taps) {
  double acc = 0.0;
  for (const Complex& t : taps) acc += std::norm(t);
  return acc;
}

// Chebyshev polynomial T_order evaluated at x, extended off [-1, 1] via the
// cosh form so large arguments stay finite and monotone.
double cheb_eval(int order, double x) {
  if (x > 1.0) return std::cosh(order * std::acosh(x));
  if (x < -1.0) {
    double v = std::cosh(order * std::acosh(-x));
    return (order % 2 == 1) ? -v : v;
  }
  return std::cos(order * std::acos(x));
}

}  // namespace

// Sampled in frequency and brought back with a length-L transform, then
// mirrored so the window is symmetric about its midpoint.
std::vector<double> equiripple_window(int length, double atten_db) {
  if (length < 1) throw std::invalid_argument("window length must be >= 1");
  if (!(atten_db > 0.0)) throw std::invalid_argument("attenuation must be > 0 dB");
  if (length == 1) return {1.0};
  const int order = length - 1;
  const double ripple = std::pow(10.0, atten_db / 20.0);
  const double beta = std::cosh(std::acosh(ripple) / order);

  CVec p(static_cast<std::size_t>(length));
  for (int k = 0; k < length; ++k) {
    double x = beta * std::cos(M_PI * k / length);
    p[k] = cheb_eval(order, x);
  }
  if (length % 2 == 0) {
    for (int k = 0; k < length; ++k)
      p[k] *= std::polar(1.0, M_PI * k / length);
  }
  CVec spectrum = sig::unitary_dft(p, /*inverse=*/false);

  std::vector<double> w(static_cast<std::size_t>(length));
  if (length % 2 == 1) {
    int half = (length + 1) / 2;
    for (int i = 0; i < half; ++i) w[half - 1 + i] = spectrum[i].real();
    for (int i = 1; i < half; ++i) w[half - 1 - i] = spectrum[i].real();
  } else {
    int half = length / 2;
    for (int i = 0; i < half; ++i) w[half + i] = spectrum[i + 1].real();
    for (int i = 0; i < half; ++i) w[i] = w[length - 1 - i];
  }
  double peak = *std::max_element(w.begin(), w.end());
  for (double& v : w) v /= peak;
  return w;
}

int SubcarrierPlan::subband_start(int m) const {
  int start = first_active;
  for (int i = 0; i < m; ++i) start += subband_sizes[i];
  return start;
}

int SubcarrierPlan::active_count() const {
  return std::accumulate(subband_sizes.begin(), subband_sizes.end(), 0);
}

std::vector<int> SubcarrierPlan::active_carriers() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(active_count()));
  for (int m = 0; m < subband_count(); ++m) {
    int start = subband_start(m);
    for (int n = start; n < start + subband_sizes[m]; ++n) out.push_back(n);
  }
  return out;
}

int SubcarrierPlan::subband_of(int n) const {
  for (int m = 0; m < subband_count(); ++m) {
    int start = subband_start(m);
    if (n >= start && n < start + subband_sizes[m]) return m;
  }
  return -1;
}

SubcarrierPlan make_plan(int n_grid, const std::vector<int>& subband_sizes, int first_active) {
  if (n_grid <= 0) throw std::invalid_argument("plan: n_grid must be positive");
  if (subband_sizes.empty()) throw std::invalid_argument("plan: need at least one subband");
  if (first_active < 0) throw std::invalid_argument("plan: first_active must be >= 0");
  int total = 0;
  for (int s : subband_sizes) {
    if (s <= 0) throw std::invalid_argument("plan: subband sizes must be positive");
    total += s;
  }
  if (first_active + total > n_grid)
    throw std::invalid_argument("plan: active span " + std::to_string(first_active + total) +
                                " exceeds grid size " + std::to_string(n_grid));
  SubcarrierPlan plan;
  plan.n_grid = n_grid;
  plan.subband_sizes = subband_sizes;
  plan.first_active = first_active;
  return plan;
}

double subband_power_normalizer(const CVec& taps, const SubcarrierPlan& plan, int m) {
  if (m < 0 || m >= plan.subband_count()) throw std::invalid_argument("normalizer: bad subband");
  const int n = plan.n_grid;
  const int start = plan.subband_start(m);
  CVec tone(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (int c = start; c < start + plan.subband_sizes[m]; ++c) {
    for (int i = 0; i < n; ++i) tone[i] = std::polar(1.0, kTwoPi * i * c / n);
    CVec shaped = sig::linear_convolve(taps, tone);
    for (const Complex& v : shaped) acc += std::norm(v);
  }
  return std::sqrt(acc / (static_cast<double>(plan.subband_sizes[m]) * n));
}

SubbandFilter design_chebyshev_filter(int length, double atten_db,
                                      const SubcarrierPlan& plan, int m) {
  if (length < 1) throw std::invalid_argument("filter: length must be >= 1");
  if (atten_db <= 0.0) throw std::invalid_argument("filter: attenuation must be positive");
  if (m < 0 || m >= plan.subband_count()) throw std::invalid_argument("filter: bad subband");

  std::vector<double> window = equiripple_window(length, atten_db);
  const double center = plan.subband_start(m) + (plan.subband_sizes[m] - 1) / 2.0;
  CVec taps(window.size());
  for (std::size_t l = 0; l < window.size(); ++l)
    taps[l] = window[l] * std::polar(1.0, kTwoPi * static_cast<double>(l) * center / plan.n_grid);
  double scale = 1.0 / std::sqrt(tap_power(taps));
  for (Complex& t : taps) t *= scale;

  SubbandFilter filter;
  filter.taps = std::move(taps);
  filter.rho = (length == 1) ? 1.0 : subband_power_normalizer(filter.taps, plan, m);
  return filter;
}

CVec filter_freq_response(const CVec& taps, int n_grid) {
  if (n_grid <= 0) throw std::invalid_argument("freq response: n_grid must be positive");
  CVec response(static_cast<std::size_t>(n_grid));
  for (int n = 0; n < n_grid; ++n) {
    Complex acc = 0.0;
    for (std::size_t l = 0; l < taps.size(); ++l)
      acc += taps[l] * std::polar(1.0, -kTwoPi * n * static_cast<double>(l) / n_grid);
    response[n] = acc;
  }
  return response;
}

int FrameConfig::l_filter_max() const {
  std::size_t longest = 1;
  for (const SubbandFilter& f : filters) longest = std::max(longest, f.taps.size());
  return static_cast<int>(longest);
}

FrameConfig make_frame_config(const SubcarrierPlan& plan, std::vector<SubbandFilter> filters,
                              int l_zp) {
  if (static_cast<int>(filters.size()) != plan.subband_count())
    throw std::invalid_argument("frame: need exactly one filter per subband");
  for (const SubbandFilter& f : filters) {
    if (f.taps.empty()) throw std::invalid_argument("frame: empty filter");
    if (std::abs(tap_power(f.taps) - 1.0) > 1e-9)
      throw std::invalid_argument("frame: filters must have unit power");
    if (f.rho <= 0.0) throw std::invalid_argument("frame: rho must be positive");
  }
  FrameConfig cfg;
  cfg.plan = plan;
  cfg.filters = std::move(filters);
  cfg.l_zp = l_zp;
  if (l_zp < 0 && -l_zp > cfg.l_filter_max() - 1)
    throw std::invalid_argument("frame: tail cut of " + std::to_string(-l_zp) +
                                " exceeds filter transient " +
                                std::to_string(cfg.l_filter_max() - 1));
  return cfg;
}

CVec synthesize(const SymbolBlock& block, const FrameConfig& cfg, const std::vector<double>& cfo) {
  const SubcarrierPlan& plan = cfg.plan;
  const int n = plan.n_grid;
  if (static_cast<int>(block.symbols.size()) != n)
    throw std::invalid_argument("synthesize: symbol vector must cover the full grid");
  if (!cfo.empty() && static_cast<int>(cfo.size()) != plan.subband_count())
    throw std::invalid_argument("synthesize: need one frequency offset per subband");
  for (int i = 0; i < n; ++i) {
    if (block.symbols[i] != Complex(0.0, 0.0) && plan.subband_of(i) < 0)
      throw std::invalid_argument("synthesize: nonzero symbol off the active set at index " +
                                  std::to_string(i));
  }

  CVec out(static_cast<std::size_t>(cfg.l1()), Complex(0.0, 0.0));
  CVec spectrum(static_cast<std::size_t>(n));
  for (int m = 0; m < plan.subband_count(); ++m) {
    const int start = plan.subband_start(m);
    const int size = plan.subband_sizes[m];
    bool occupied = false;
    for (int c = start; c < start + size && !occupied; ++c)
      occupied = block.symbols[c] != Complex(0.0, 0.0);
    if (!occupied) continue;

    std::fill(spectrum.begin(), spectrum.end(), Complex(0.0, 0.0));
    for (int c = start; c < start + size; ++c) spectrum[c] = block.symbols[c];
    CVec s = sig::unitary_dft(spectrum, /*inverse=*/true);
    const double eps = cfo.empty() ? 0.0 : cfo[m];
    if (eps != 0.0) {
      for (int i = 0; i < n; ++i) s[i] *= std::polar(1.0, kTwoPi * i * eps / n);
    }

    const CVec& taps = cfg.filters[m].taps;
    const double gain = 1.0 / cfg.filters[m].rho;
    for (std::size_t l = 0; l < taps.size(); ++l) {
      if (taps[l] == Complex(0.0, 0.0)) continue;
      const Complex w = taps[l] * gain;
      for (int i = 0; i < n; ++i) out[l + i] += w * s[i];
    }
  }
  return out;
}

CVec apply_zp_or_tc(const CVec& q, const FrameConfig& cfg) {
  if (static_cast<int>(q.size()) != cfg.l1())
    throw std::invalid_argument("framing: input must have the unframed symbol length");
  CVec out(static_cast<std::size_t>(cfg.l3()), Complex(0.0, 0.0));
  if (cfg.l_zp >= 0) {
    std::copy(q.begin(), q.end(), out.begin());
  } else {
    const int front = cfg.tail_cut_front();
    std::copy(q.begin() + front, q.begin() + front + cfg.l3(), out.begin());
  }
  return out;
}

namespace {

int bits_per_axis(int m_mod) {
  int axis = 0;
  switch (m_mod) {
    case 4: axis = 1; break;
    case 16: axis = 2; break;
    case 64: axis = 3; break;
    case 256: axis = 4; break;
    default:
      throw std::invalid_argument("qam: order must be 4, 16, 64, or 256");
  }
  return axis;
}

int gray_decode(int g) {
  int b = 0;
  for (; g != 0; g >>= 1) b ^= g;
  return b;
}

}  // namespace

SymbolBlock qam_map(const std::vector<std::uint8_t>& bits, int m_mod,
                    const SubcarrierPlan& plan, double sym_power) {
  const int axis = bits_per_axis(m_mod);
  const int per_symbol = 2 * axis;
  const int side = 1 << axis;
  const std::vector<int> carriers = plan.active_carriers();
  if (bits.size() != carriers.size() * static_cast<std::size_t>(per_symbol))
    throw std::invalid_argument("qam: bit count must be active_count * log2(order)");
  if (sym_power <= 0.0) throw std::invalid_argument("qam: symbol power must be positive");

  // Unit average power for equiprobable odd-integer levels, then sym_power.
  const double scale = std::sqrt(sym_power * 3.0 / (2.0 * (m_mod - 1)));
  SymbolBlock block;
  block.symbols.assign(static_cast<std::size_t>(plan.n_grid), Complex(0.0, 0.0));
  block.sym_power = sym_power;
  std::size_t pos = 0;
  for (int c : carriers) {
    int gi = 0, gq = 0;
    for (int b = 0; b < axis; ++b) gi = (gi << 1) | bits[pos++];
    for (int b = 0; b < axis; ++b) gq = (gq << 1) | bits[pos++];
    const int li = 2 * gray_decode(gi) - (side - 1);
    const int lq = 2 * gray_decode(gq) - (side - 1);
    block.symbols[c] = Complex(li * scale, lq * scale);
  }
  return block;
}

std::vector<std::uint8_t> qam_demap(const CVec& equalized, int m_mod, const SubcarrierPlan& plan,
                                    double sym_power) {
  const int axis = bits_per_axis(m_mod);
  const int side = 1 << axis;
  if (static_cast<int>(equalized.size()) != plan.n_grid)
    throw std::invalid_argument("qam: equalized vector must cover the full grid");
  if (sym_power <= 0.0) throw std::invalid_argument("qam: symbol power must be positive");

  const double scale = std::sqrt(sym_power * 3.0 / (2.0 * (m_mod - 1)));
  std::vector<std::uint8_t> bits;
  bits.reserve(plan.active_count() * static_cast<std::size_t>(2 * axis));
  auto decide = [&](double value) {
    int k = static_cast<int>(std::lround((value / scale + (side - 1)) / 2.0));
    k = std::clamp(k, 0, side - 1);
    return k ^ (k >> 1);  // binary index back to its Gray label
  };
  for (int c : plan.active_carriers()) {
    const int gi = decide(equalized[c].real());
    const int gq = decide(equalized[c].imag());
    for (int b = axis - 1; b >= 0; --b) bits.push_back((gi >> b) & 1);
    for (int b = axis - 1; b >= 0; --b) bits.push_back((gq >> b) & 1);
  }
  return bits;
}

}  // namespace ufmc::wave

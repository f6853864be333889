#include "ufmc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "ufmc/sigcore.hpp"

namespace ufmc::ana {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// e^{j 2 pi num / den} with the integer phase reduced modulo den, so huge
// index products keep full precision.
Complex unit_tone(long long num, int den) {
  long long r = num % den;
  if (r < 0) r += den;
  return std::polar(1.0, kTwoPi * static_cast<double>(r) / den);
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Transmit-side envelope of one source subcarrier: the subband filter driven
// by the complex tone at t plus its subband's frequency offset, zero-padded
// to the frame's l1. Excludes the 1/rho scaling.
CVec source_envelope(const wave::FrameConfig& cfg, int t, double eps) {
  const int n = cfg.plan.n_grid;
  const int m = cfg.plan.subband_of(t);
  CVec tone(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    tone[i] = unit_tone(static_cast<long long>(i) * t, n) *
              std::polar(1.0, kTwoPi * i * eps / n);
  CVec env = sig::linear_convolve(cfg.filters[static_cast<std::size_t>(m)].taps, tone);
  env.resize(static_cast<std::size_t>(cfg.l1()), Complex(0.0, 0.0));
  return env;
}

void require_active(const wave::SubcarrierPlan& plan, int n, const char* what) {
  if (plan.subband_of(n) < 0)
    throw std::invalid_argument(std::string(what) + " subcarrier " + std::to_string(n) +
                                " is not active");
}

std::vector<double> resolve_cfo(const std::vector<double>& cfo, int subbands) {
  if (cfo.empty()) return std::vector<double>(static_cast<std::size_t>(subbands), 0.0);
  if (static_cast<int>(cfo.size()) != subbands)
    throw std::invalid_argument("cfo vector must have one entry per subband");
  return cfo;
}

// Observation-window symbol offsets that can reach the window for a user
// whose window starts to samples past its nominal slot: e*l3 must land the
// (shifted, channel-spread) symbol inside [0, l2-1]. Returns an inclusive
// range that also covers the declared truncation bound.
std::pair<int, int> offset_range(int l_ch, int l2, int l3, int to) {
  int bound = max_symbol_offset(l_ch, l3);
  int hi = static_cast<int>(floor_div(l2 - 1 + to, l3));
  int lo = -static_cast<int>(floor_div(l3 + l_ch - 2 - to, l3));
  return {std::min(lo, -bound), std::max(hi, bound)};
}

}  // namespace

BerModel make_ber_model(int m_mod) {
  if (m_mod < 4) throw std::invalid_argument("modulation order must be >= 4");
  int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m_mod))));
  if (side * side != m_mod) throw std::invalid_argument("modulation order must be a square");
  BerModel model;
  model.m_mod = m_mod;
  model.phi1 = 3.0 / (2.0 * (m_mod - 1));
  model.phi2 = 2.0 / (m_mod - 1);
  double base = 1.0 - 1.0 / side;
  model.weight1 = base / 6.0;
  model.weight2 = base / 3.0;
  return model;
}

double ber_approx(double snr, const BerModel& model) {
  if (snr < 0.0) throw std::invalid_argument("snr must be >= 0");
  return model.weight1 * std::exp(-model.phi1 * snr) +
         model.weight2 * std::exp(-model.phi2 * snr);
}

double ideal_snr(int n, const CVec& taps, double rho, double sym_power, double noise_var,
                 double ch_gain, int window_len, int n_grid) {
  if (rho <= 0.0 || sym_power <= 0.0 || noise_var <= 0.0 || ch_gain < 0.0)
    throw std::invalid_argument("ideal_snr: powers must be positive");
  if (window_len < n_grid) throw std::invalid_argument("ideal_snr: window shorter than grid");
  Complex f(0.0, 0.0);
  for (std::size_t l = 0; l < taps.size(); ++l)
    f += taps[l] * unit_tone(-static_cast<long long>(l) * n, n_grid);
  return (static_cast<double>(n_grid) / window_len) * (sym_power / noise_var) * ch_gain *
         std::norm(f) / (rho * rho);
}

namespace {

template <typename Fn>
double subband_average(const wave::FrameConfig& cfg, int m, double sym_power, double noise_var,
                       double ch_gain, int window_len, Fn&& fn) {
  if (m < 0 || m >= cfg.plan.subband_count())
    throw std::invalid_argument("subband index out of range");
  const wave::SubbandFilter& f = cfg.filters[static_cast<std::size_t>(m)];
  int start = cfg.plan.subband_start(m);
  double acc = 0.0;
  for (int n = start; n < start + cfg.plan.subband_sizes[m]; ++n)
    acc += fn(ideal_snr(n, f.taps, f.rho, sym_power, noise_var, ch_gain, window_len,
                        cfg.plan.n_grid));
  return acc / cfg.plan.subband_sizes[m];
}

}  // namespace

double subband_avg_snr(const wave::FrameConfig& cfg, int m, double sym_power, double noise_var,
                       double ch_gain, int window_len) {
  return subband_average(cfg, m, sym_power, noise_var, ch_gain, window_len,
                         [](double s) { return s; });
}

double subband_avg_capacity(const wave::FrameConfig& cfg, int m, double sym_power,
                            double noise_var, double ch_gain, int window_len) {
  return subband_average(cfg, m, sym_power, noise_var, ch_gain, window_len,
                         [](double s) { return std::log2(1.0 + s); });
}

double subband_avg_ber(const wave::FrameConfig& cfg, int m, double sym_power, double noise_var,
                       double ch_gain, int window_len, const BerModel& model) {
  return subband_average(cfg, m, sym_power, noise_var, ch_gain, window_len,
                         [&model](double s) { return ber_approx(s, model); });
}

double pbgr(const CVec& taps, int n_grid, int n_m) {
  if (taps.empty()) throw std::invalid_argument("pbgr: empty taps");
  if (n_grid <= 0 || n_m < 2 || n_m > n_grid)
    throw std::invalid_argument("pbgr: need 2 <= n_m <= n_grid");
  double peak = 0.0;
  Complex edge(0.0, 0.0);
  for (std::size_t l = 0; l < taps.size(); ++l) {
    double mag = std::abs(taps[l]);
    peak += mag;
    edge += mag * std::polar(1.0, -kTwoPi * (n_m / 2.0) * static_cast<double>(l) / n_grid);
  }
  if (peak <= 0.0) throw std::invalid_argument("pbgr: all-zero taps");
  return 20.0 * std::log10(peak / std::abs(edge));
}

int filter_length_for_pbgr(double target_db, int n_grid, int n_m, double atten_db, int l_max) {
  if (l_max < 1) throw std::invalid_argument("filter length bound must be >= 1");
  for (int length = 1; length <= l_max; ++length) {
    std::vector<double> w = wave::equiripple_window(length, atten_db);
    CVec taps(w.begin(), w.end());
    if (pbgr(taps, n_grid, n_m) >= target_db) return length;
  }
  throw NotFoundError("no filter length in [1, " + std::to_string(l_max) +
                      "] reaches the requested gain ratio");
}

int max_symbol_offset(int l_ch, int l3) {
  if (l_ch < 1 || l3 < 1) throw std::invalid_argument("lengths must be >= 1");
  return static_cast<int>((l_ch + l3 - 1) / l3) + 1;
}

Complex beta(int n, int t, int e, const wave::FrameConfig& cfg, const CVec& h_taps, int to,
             const std::vector<double>& cfo) {
  require_active(cfg.plan, n, "observed");
  require_active(cfg.plan, t, "source");
  if (h_taps.empty()) throw std::invalid_argument("beta: empty channel");
  if (to < 0) throw std::invalid_argument("beta: timing offset must be >= 0");
  std::vector<double> eps = resolve_cfo(cfo, cfg.plan.subband_count());

  const int n_grid = cfg.plan.n_grid;
  const int m_t = cfg.plan.subband_of(t);
  const int l1 = cfg.l1();
  const int l3 = cfg.l3();
  const int l2 = cfg.l2(static_cast<int>(h_taps.size()));
  const int cut = cfg.tail_cut_front();
  CVec env = source_envelope(cfg, t, eps[static_cast<std::size_t>(m_t)]);

  Complex acc(0.0, 0.0);
  for (std::size_t l = 0; l < h_taps.size(); ++l) {
    if (h_taps[l] == Complex(0.0, 0.0)) continue;
    const int o = to - e * l3 - static_cast<int>(l);
    const int r_lo = std::max(0, -o);
    const int r_hi = std::min(l2 - 1, l3 - 1 - o);
    Complex inner(0.0, 0.0);
    for (int r = r_lo; r <= r_hi; ++r) {
      const int x = r + o + cut;
      if (x < 0 || x >= l1) continue;
      inner += unit_tone(-static_cast<long long>(r) * n, n_grid) *
               env[static_cast<std::size_t>(x)];
    }
    acc += h_taps[l] * inner;
  }
  return acc / (cfg.filters[static_cast<std::size_t>(m_t)].rho * static_cast<double>(n_grid));
}

namespace {

// Exclusive running sums of env(j+lag+cut) * conj(env(j+cut)) over the framed
// support j in [0, l3-1], for one lag >= 0. prefix[j+1] - prefix[j0] then
// yields any interval sum in O(1). The tail beyond the envelope support stays
// constant.
void lag_prefix(const CVec& env, int lag, int cut, int l3, CVec& prefix) {
  const int l1 = static_cast<int>(env.size());
  const int j_hi = std::min(l3 - 1, l1 - 1 - cut - lag);
  prefix[0] = Complex(0.0, 0.0);
  int j = 0;
  for (; j <= j_hi; ++j)
    prefix[static_cast<std::size_t>(j) + 1] =
        prefix[static_cast<std::size_t>(j)] +
        env[static_cast<std::size_t>(j + lag + cut)] *
            std::conj(env[static_cast<std::size_t>(j + cut)]);
  for (; j < l3; ++j)
    prefix[static_cast<std::size_t>(j) + 1] = prefix[static_cast<std::size_t>(j)];
}

// Interval sum of the lag products reachable from window offset o, clamped to
// the framed support. Empty intersections return zero.
Complex lag_window_sum(const CVec& prefix, int lag, int o, int l2, int l3) {
  const int a = std::max(0, o);
  const int b = std::min(l3 - 1, o + l2 - 1) - lag;
  if (b < a) return Complex(0.0, 0.0);
  return prefix[static_cast<std::size_t>(b) + 1] - prefix[static_cast<std::size_t>(a)];
}

}  // namespace

double expected_beta_power(int n, int t, int e, const wave::FrameConfig& cfg,
                           const std::vector<double>& tap_powers, int to,
                           const std::vector<double>& cfo) {
  require_active(cfg.plan, n, "observed");
  require_active(cfg.plan, t, "source");
  if (tap_powers.empty()) throw std::invalid_argument("expected_beta_power: empty profile");
  if (to < 0) throw std::invalid_argument("expected_beta_power: timing offset must be >= 0");
  std::vector<double> eps = resolve_cfo(cfo, cfg.plan.subband_count());

  const int n_grid = cfg.plan.n_grid;
  const int m_t = cfg.plan.subband_of(t);
  const int l_ch = static_cast<int>(tap_powers.size());
  const int l1 = cfg.l1();
  const int l3 = cfg.l3();
  const int l2 = cfg.l2(l_ch);
  const int cut = cfg.tail_cut_front();
  CVec env = source_envelope(cfg, t, eps[static_cast<std::size_t>(m_t)]);

  CVec prefix(static_cast<std::size_t>(l3) + 1);
  double acc = 0.0;
  for (int lag = 0; lag < l1; ++lag) {
    lag_prefix(env, lag, cut, l3, prefix);
    Complex s(0.0, 0.0);
    for (int l = 0; l < l_ch; ++l) {
      if (tap_powers[static_cast<std::size_t>(l)] == 0.0) continue;
      s += tap_powers[static_cast<std::size_t>(l)] *
           lag_window_sum(prefix, lag, to - e * l3 - l, l2, l3);
    }
    Complex term = unit_tone(-static_cast<long long>(n) * lag, n_grid) * s;
    acc += (lag == 0) ? term.real() : 2.0 * term.real();
  }
  const double rho = cfg.filters[static_cast<std::size_t>(m_t)].rho;
  return std::max(0.0, acc / (rho * rho * static_cast<double>(n_grid) * n_grid));
}

PowerBreakdown power_breakdown(const wave::FrameConfig& cfg, const std::vector<double>& tap_powers,
                               const chan::ImpairmentSet& imp, double sym_power, int n_threads) {
  chan::validate_impairments(imp, cfg.plan.subband_count());
  if (tap_powers.empty()) throw std::invalid_argument("power_breakdown: empty profile");
  if (sym_power <= 0.0) throw std::invalid_argument("power_breakdown: symbol power must be > 0");

  const wave::SubcarrierPlan& plan = cfg.plan;
  const int n_grid = plan.n_grid;
  const int n_sub = plan.subband_count();
  const int l_ch = static_cast<int>(tap_powers.size());
  const int l1 = cfg.l1();
  const int l3 = cfg.l3();
  const int l2 = cfg.l2(l_ch);
  const int cut = cfg.tail_cut_front();
  const std::vector<int> actives = plan.active_carriers();
  const int n_act = static_cast<int>(actives.size());

  // Users sharing a timing offset see identical ensemble couplings, so
  // accumulate per distinct offset and fan back out at the end.
  std::vector<int> uniq_to;
  std::vector<int> to_slot(static_cast<std::size_t>(n_sub));
  for (int k = 0; k < n_sub; ++k) {
    int to = imp.to[static_cast<std::size_t>(k)];
    auto it = std::find(uniq_to.begin(), uniq_to.end(), to);
    if (it == uniq_to.end()) {
      to_slot[static_cast<std::size_t>(k)] = static_cast<int>(uniq_to.size());
      uniq_to.push_back(to);
    } else {
      to_slot[static_cast<std::size_t>(k)] = static_cast<int>(it - uniq_to.begin());
    }
  }
  const int n_slot = static_cast<int>(uniq_to.size());

  std::vector<CVec> env_all(static_cast<std::size_t>(n_act));
  std::vector<double> inv_norm(static_cast<std::size_t>(n_act));
  sig::parallel_for(
      n_act,
      [&](int idx) {
        int t = actives[static_cast<std::size_t>(idx)];
        int m_t = plan.subband_of(t);
        env_all[static_cast<std::size_t>(idx)] =
            source_envelope(cfg, t, imp.cfo[static_cast<std::size_t>(m_t)]);
        double rho = cfg.filters[static_cast<std::size_t>(m_t)].rho;
        inv_norm[static_cast<std::size_t>(idx)] =
            1.0 / (rho * rho * static_cast<double>(n_grid) * n_grid);
      },
      n_threads);

  // Lag-indexed accumulators: same-symbol and cross-symbol totals per timing
  // slot, plus the per-source diagonal. Each parallel task owns one lag, so
  // results are independent of the thread count.
  std::vector<CVec> acc_same(static_cast<std::size_t>(n_slot),
                             CVec(static_cast<std::size_t>(l1)));
  std::vector<CVec> acc_cross(static_cast<std::size_t>(n_slot),
                              CVec(static_cast<std::size_t>(l1)));
  std::vector<CVec> acc_diag(static_cast<std::size_t>(n_act),
                             CVec(static_cast<std::size_t>(l1)));

  sig::parallel_for(
      l1,
      [&](int lag) {
        CVec prefix(static_cast<std::size_t>(l3) + 1);
        for (int idx = 0; idx < n_act; ++idx) {
          const CVec& env = env_all[static_cast<std::size_t>(idx)];
          const double inv = inv_norm[static_cast<std::size_t>(idx)];
          const int m_t = plan.subband_of(actives[static_cast<std::size_t>(idx)]);
          lag_prefix(env, lag, cut, l3, prefix);
          for (int slot = 0; slot < n_slot; ++slot) {
            const int to = uniq_to[static_cast<std::size_t>(slot)];
            auto [e_lo, e_hi] = offset_range(l_ch, l2, l3, to);
            Complex same(0.0, 0.0), cross(0.0, 0.0);
            for (int e = e_lo; e <= e_hi; ++e) {
              Complex s(0.0, 0.0);
              for (int l = 0; l < l_ch; ++l) {
                if (tap_powers[static_cast<std::size_t>(l)] == 0.0) continue;
                s += tap_powers[static_cast<std::size_t>(l)] *
                     lag_window_sum(prefix, lag, to - e * l3 - l, l2, l3);
              }
              if (e == 0)
                same += s;
              else
                cross += s;
            }
            acc_same[static_cast<std::size_t>(slot)][static_cast<std::size_t>(lag)] +=
                inv * same;
            acc_cross[static_cast<std::size_t>(slot)][static_cast<std::size_t>(lag)] +=
                inv * cross;
            if (slot == to_slot[static_cast<std::size_t>(m_t)])
              acc_diag[static_cast<std::size_t>(idx)][static_cast<std::size_t>(lag)] =
                  inv * same;
          }
        }
      },
      n_threads);

  PowerBreakdown pb;
  pb.p_d.assign(static_cast<std::size_t>(n_grid), 0.0);
  pb.p_ici.assign(static_cast<std::size_t>(n_grid), 0.0);
  pb.p_isi.assign(static_cast<std::size_t>(n_grid), 0.0);
  pb.noise = (static_cast<double>(l2) / n_grid) * imp.noise_var;

  for (int idx = 0; idx < n_act; ++idx) {
    const int n = actives[static_cast<std::size_t>(idx)];
    const int slot = to_slot[static_cast<std::size_t>(plan.subband_of(n))];
    double total_same = 0.0, total_cross = 0.0, diag = 0.0;
    for (int lag = 0; lag < l1; ++lag) {
      Complex phase = unit_tone(-static_cast<long long>(n) * lag, n_grid);
      double w = (lag == 0) ? 1.0 : 2.0;
      total_same +=
          w * (phase * acc_same[static_cast<std::size_t>(slot)][static_cast<std::size_t>(lag)])
                  .real();
      total_cross +=
          w * (phase * acc_cross[static_cast<std::size_t>(slot)][static_cast<std::size_t>(lag)])
                  .real();
      diag +=
          w * (phase * acc_diag[static_cast<std::size_t>(idx)][static_cast<std::size_t>(lag)])
                  .real();
    }
    pb.p_d[static_cast<std::size_t>(n)] = sym_power * std::max(0.0, diag);
    pb.p_ici[static_cast<std::size_t>(n)] = sym_power * std::max(0.0, total_same - diag);
    pb.p_isi[static_cast<std::size_t>(n)] = sym_power * std::max(0.0, total_cross);
  }
  return pb;
}

double sinr(const PowerBreakdown& pb, int n) {
  if (n < 0 || n >= static_cast<int>(pb.p_d.size()))
    throw std::invalid_argument("sinr: subcarrier out of range");
  double denom = pb.p_ici[static_cast<std::size_t>(n)] + pb.p_isi[static_cast<std::size_t>(n)] +
                 pb.noise;
  if (denom <= 0.0) throw std::invalid_argument("sinr: nonpositive denominator");
  return pb.p_d[static_cast<std::size_t>(n)] / denom;
}

double capacity(const PowerBreakdown& pb, const wave::FrameConfig& cfg) {
  double acc = 0.0;
  for (int n : cfg.plan.active_carriers()) acc += std::log2(1.0 + sinr(pb, n));
  return (static_cast<double>(cfg.plan.n_grid) / cfg.l3()) * acc;
}

RealizedCouplings realized_couplings(const wave::FrameConfig& cfg, const CVec& h_taps, int to,
                                     const std::vector<double>& cfo, int m) {
  if (m < 0 || m >= cfg.plan.subband_count())
    throw std::invalid_argument("realized_couplings: bad subband");
  if (h_taps.empty()) throw std::invalid_argument("realized_couplings: empty channel");
  if (to < 0) throw std::invalid_argument("realized_couplings: timing offset must be >= 0");
  std::vector<double> eps = resolve_cfo(cfo, cfg.plan.subband_count());

  const wave::SubcarrierPlan& plan = cfg.plan;
  const int n_grid = plan.n_grid;
  const int l_ch = static_cast<int>(h_taps.size());
  const int l1 = cfg.l1();
  const int l3 = cfg.l3();
  const int l2 = cfg.l2(l_ch);
  const int cut = cfg.tail_cut_front();
  const std::vector<int> actives = plan.active_carriers();
  auto [e_lo, e_hi] = offset_range(l_ch, l2, l3, to);

  std::vector<CVec> env_all(actives.size());
  std::vector<double> rho_inv(actives.size());
  for (std::size_t idx = 0; idx < actives.size(); ++idx) {
    int m_t = plan.subband_of(actives[idx]);
    env_all[idx] = source_envelope(cfg, actives[idx], eps[static_cast<std::size_t>(m_t)]);
    rho_inv[idx] = 1.0 / (cfg.filters[static_cast<std::size_t>(m_t)].rho * n_grid);
  }

  RealizedCouplings out;
  int start = plan.subband_start(m);
  for (int n = start; n < start + plan.subband_sizes[m]; ++n) out.carriers.push_back(n);
  out.beta_diag.assign(out.carriers.size(), Complex(0.0, 0.0));
  out.interference.assign(out.carriers.size(), 0.0);

  CVec prefix(static_cast<std::size_t>(l1) + 1);
  for (std::size_t ni = 0; ni < out.carriers.size(); ++ni) {
    const int n = out.carriers[ni];
    for (std::size_t idx = 0; idx < actives.size(); ++idx) {
      const int t = actives[idx];
      const CVec& env = env_all[idx];
      // Running sums of env(x) e^{-j 2 pi x n / N} make every window segment
      // of the modulated envelope an O(1) lookup.
      prefix[0] = Complex(0.0, 0.0);
      for (int x = 0; x < l1; ++x)
        prefix[static_cast<std::size_t>(x) + 1] =
            prefix[static_cast<std::size_t>(x)] +
            env[static_cast<std::size_t>(x)] * unit_tone(-static_cast<long long>(x) * n, n_grid);
      for (int e = e_lo; e <= e_hi; ++e) {
        Complex b(0.0, 0.0);
        for (int l = 0; l < l_ch; ++l) {
          if (h_taps[static_cast<std::size_t>(l)] == Complex(0.0, 0.0)) continue;
          const int o = to - e * l3 - l;
          const int x_lo = std::max(cut, o + cut);
          const int x_hi = std::min({l3 - 1 + cut, o + cut + l2 - 1, l1 - 1});
          if (x_hi < x_lo) continue;
          Complex seg = prefix[static_cast<std::size_t>(x_hi) + 1] -
                        prefix[static_cast<std::size_t>(x_lo)];
          b += h_taps[static_cast<std::size_t>(l)] *
               unit_tone(static_cast<long long>(o + cut) * n, n_grid) * seg;
        }
        b *= rho_inv[idx];
        if (t == n && e == 0)
          out.beta_diag[ni] = b;
        else
          out.interference[ni] += std::norm(b);
      }
    }
  }
  return out;
}

}  // namespace ufmc::ana

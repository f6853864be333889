#include "ufmc/waveform.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "ufmc/rng.hpp"
#include "ufmc/sigcore.hpp"

using namespace ufmc;
using namespace ufmc::wave;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> prototype_window(int length, double atten_db) {
  return equiripple_window(length, atten_db);
}

// A filter designed for a subband starting at grid index 0 with one carrier is
// the bare prototype window (center frequency zero), so dividing the taps by
// their peak recovers the peak-normalized window.
std::vector<double> designed_window(int length, double atten_db) {
  SubcarrierPlan plan = make_plan(64, {1}, 0);
  SubbandFilter f = design_chebyshev_filter(length, atten_db, plan, 0);
  double peak = 0.0;
  for (const Complex& t : f.taps) peak = std::max(peak, t.real());
  std::vector<double> w(f.taps.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = f.taps[i].real() / peak;
  return w;
}

void check_window(const std::vector<double>& got, const std::vector<double>& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-9));
}

CVec random_symbols(Rng& rng, const SubcarrierPlan& plan) {
  CVec a(static_cast<std::size_t>(plan.n_grid), Complex(0.0, 0.0));
  for (int c : plan.active_carriers()) a[c] = Complex(rng.gauss(0.5), rng.gauss(0.5));
  return a;
}

CMat subband_columns(const CMat& d, int start, int size) {
  CMat out(d.rows(), static_cast<std::size_t>(size));
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (int c = 0; c < size; ++c) out(r, c) = d(r, start + c);
  return out;
}

}  // namespace

TEST_CASE("plan geometry and validation") {
  SubcarrierPlan plan = make_plan(64, {4, 3, 5}, 10);
  CHECK(plan.subband_count() == 3);
  CHECK(plan.subband_start(0) == 10);
  CHECK(plan.subband_start(1) == 14);
  CHECK(plan.subband_start(2) == 17);
  CHECK(plan.active_count() == 12);
  CHECK(plan.active_carriers().front() == 10);
  CHECK(plan.active_carriers().back() == 21);
  CHECK(plan.subband_of(9) == -1);
  CHECK(plan.subband_of(10) == 0);
  CHECK(plan.subband_of(16) == 1);
  CHECK(plan.subband_of(21) == 2);
  CHECK(plan.subband_of(22) == -1);

  CHECK_THROWS_AS(make_plan(16, {8, 8}, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_plan(16, {0, 4}, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_plan(16, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_plan(0, {1}, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_plan(16, {4}, -1), std::invalid_argument);
}

TEST_CASE("equiripple window matches frozen reference values") {
  check_window(prototype_window(13, 40.0),
               {0.113324166149916, 0.234102307640340, 0.415453378768119, 0.621255185693775,
                0.813394575211803, 0.950335970951567, 1.000000000000000, 0.950335970951567,
                0.813394575211803, 0.621255185693775, 0.415453378768119, 0.234102307640340,
                0.113324166149916});
  check_window(prototype_window(8, 40.0),
               {0.146097133695762, 0.417904219657006, 0.759445948758210, 1.000000000000000,
                1.000000000000000, 0.759445948758210, 0.417904219657006, 0.146097133695762});
  check_window(prototype_window(12, 20.0),
               {0.712675398217741, 0.552970491367016, 0.708990196111020, 0.845264031044889,
                0.946254574763490, 1.000000000000000, 1.000000000000000, 0.946254574763490,
                0.845264031044889, 0.708990196111020, 0.552970491367016, 0.712675398217741});
  check_window(prototype_window(2, 30.0), {1.0, 1.0});
  check_window(prototype_window(5, 60.0),
               {0.187615097436523, 0.686241241097988, 1.000000000000000, 0.686241241097988,
                0.187615097436523});
  check_window(designed_window(13, 40.0), prototype_window(13, 40.0));
  CHECK_THROWS_AS(equiripple_window(0, 40.0), std::invalid_argument);
  CHECK_THROWS_AS(equiripple_window(8, 0.0), std::invalid_argument);
}

TEST_CASE("designed filter has unit power and sits on the subband center") {
  SubcarrierPlan plan = make_plan(128, {12, 12}, 40);
  for (int m : {0, 1}) {
    SubbandFilter f = design_chebyshev_filter(33, 40.0, plan, m);
    double power = 0.0;
    for (const Complex& t : f.taps) power += std::norm(t);
    CHECK(power == doctest::Approx(1.0).epsilon(1e-12));

    CVec response = filter_freq_response(f.taps, plan.n_grid);
    const double center = plan.subband_start(m) + (plan.subband_sizes[m] - 1) / 2.0;
    Complex at_center(0.0, 0.0);
    for (std::size_t l = 0; l < f.taps.size(); ++l)
      at_center += f.taps[l] * std::polar(1.0, -kTwoPi * center * static_cast<double>(l) / plan.n_grid);
    // the response peaks at the center frequency and is real positive there
    CHECK(at_center.imag() == doctest::Approx(0.0).epsilon(1e-9));
    for (int n = 0; n < plan.n_grid; ++n) CHECK(std::abs(response[n]) <= at_center.real() + 1e-9);
  }
}

TEST_CASE("sidelobes sit at the design attenuation") {
  SubcarrierPlan plan = make_plan(512, {12}, 238);
  const double atten_db = 46.0;
  const int length = 64;
  SubbandFilter f = design_chebyshev_filter(length, atten_db, plan, 0);
  const double center = plan.subband_start(0) + (plan.subband_sizes[0] - 1) / 2.0;
  // the equiripple region starts where the design polynomial's argument
  // enters [-1, 1]: |nu| >= acos(1/x0)/pi cycles per sample
  const double ripple = std::pow(10.0, atten_db / 20.0);
  const double x0 = std::cosh(std::acosh(ripple) / (length - 1));
  const double edge_bins = 512.0 * std::acos(1.0 / x0) / M_PI;
  double peak = 0.0, sidelobe = 0.0;
  for (int step = 0; step < 8192; ++step) {
    double nu = 512.0 * step / 8192.0;
    Complex acc(0.0, 0.0);
    for (std::size_t l = 0; l < f.taps.size(); ++l)
      acc += f.taps[l] * std::polar(1.0, -kTwoPi * nu * static_cast<double>(l) / 512.0);
    double mag = std::abs(acc);
    peak = std::max(peak, mag);
    double dist = std::abs(nu - center);
    dist = std::min(dist, 512.0 - dist);
    if (dist > edge_bins * 1.02) sidelobe = std::max(sidelobe, mag);
  }
  const double measured_db = 20.0 * std::log10(peak / sidelobe);
  CHECK(measured_db == doctest::Approx(atten_db).epsilon(0.005));
}

TEST_CASE("power normalizer matches the matrix trace definition") {
  Rng rng(401);
  SubcarrierPlan plan = make_plan(8, {3, 2}, 1);
  for (int trial = 0; trial < 5; ++trial) {
    for (int m : {0, 1}) {
      const int l_f = 3;
      CVec taps(l_f);
      double power = 0.0;
      for (auto& t : taps) {
        t = Complex(rng.gauss(1.0), rng.gauss(1.0));
        power += std::norm(t);
      }
      for (auto& t : taps) t /= std::sqrt(power);

      const int l1 = plan.n_grid + l_f - 1;
      const CMat a = sig::toeplitz_conv_matrix(taps, plan.n_grid, l1);
      const CMat d_m =
          subband_columns(sig::dft_matrix(plan.n_grid), plan.subband_start(m), plan.subband_sizes[m]);
      const CMat gram = d_m.hermitian().mul(a.hermitian().mul(a.mul(d_m)));
      double trace = 0.0;
      for (std::size_t i = 0; i < gram.rows(); ++i) trace += gram(i, i).real();
      const double want = std::sqrt(trace / plan.subband_sizes[m]);

      CHECK(subband_power_normalizer(taps, plan, m) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("power normalizer is exactly one for trivial and full-band filters") {
  SubcarrierPlan single = make_plan(32, {8}, 12);
  SubbandFilter trivial = design_chebyshev_filter(1, 40.0, single, 0);
  CHECK(trivial.taps.size() == 1);
  CHECK(trivial.taps[0].real() == doctest::Approx(1.0));
  CHECK(trivial.rho == 1.0);

  // one subband spanning the whole grid: the transform is unitary, so the
  // shaping filter's energy passes through unchanged and rho = 1 for any taps
  SubcarrierPlan full = make_plan(32, {32}, 0);
  SubbandFilter f = design_chebyshev_filter(9, 35.0, full, 0);
  CHECK(f.rho == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shaped subbands carry excess power: rho squared at least one") {
  SubcarrierPlan plan = make_plan(512, {12, 12, 12}, 238);
  SubbandFilter f = design_chebyshev_filter(128, 40.0, plan, 1);
  CHECK(f.rho * f.rho >= 1.0);
}

TEST_CASE("synthesis equals the matrix chain for zero frequency offset") {
  Rng rng(402);
  SubcarrierPlan plan = make_plan(16, {4, 3}, 2);
  std::vector<SubbandFilter> filters = {design_chebyshev_filter(5, 30.0, plan, 0),
                                        design_chebyshev_filter(3, 30.0, plan, 1)};
  FrameConfig cfg = make_frame_config(plan, filters, 0);
  const int l1 = cfg.l1();
  REQUIRE(l1 == 16 + 5 - 1);

  const CMat d = sig::dft_matrix(16);
  for (int trial = 0; trial < 10; ++trial) {
    SymbolBlock block{random_symbols(rng, plan), 1.0};
    CVec want(static_cast<std::size_t>(l1), Complex(0.0, 0.0));
    for (int m = 0; m < plan.subband_count(); ++m) {
      const CMat a = sig::toeplitz_conv_matrix(cfg.filters[m].taps, 16, l1);
      const CMat d_m = subband_columns(d, plan.subband_start(m), plan.subband_sizes[m]);
      CVec sub(static_cast<std::size_t>(plan.subband_sizes[m]));
      for (int i = 0; i < plan.subband_sizes[m]; ++i)
        sub[i] = block.symbols[plan.subband_start(m) + i];
      CVec part = a.mul(d_m.mul(sub));
      for (int i = 0; i < l1; ++i) want[i] += part[i] / cfg.filters[m].rho;
    }
    CHECK(max_abs_diff(synthesize(block, cfg, {}), want) < 1e-10);
  }
}

TEST_CASE("synthesis with frequency offset matches direct tone summation") {
  Rng rng(403);
  SubcarrierPlan plan = make_plan(12, {4}, 3);
  std::vector<SubbandFilter> filters = {design_chebyshev_filter(4, 25.0, plan, 0)};
  FrameConfig cfg = make_frame_config(plan, filters, 0);
  const double eps = 0.37;
  const int n = 12, l1 = cfg.l1();

  SymbolBlock block{random_symbols(rng, plan), 1.0};
  CVec want(static_cast<std::size_t>(l1), Complex(0.0, 0.0));
  for (int l = 0; l < l1; ++l) {
    Complex acc(0.0, 0.0);
    for (int c : plan.active_carriers()) {
      for (int i = 0; i < n; ++i) {
        int tap = l - i;
        if (tap < 0 || tap >= static_cast<int>(cfg.filters[0].taps.size())) continue;
        acc += block.symbols[c] * std::polar(1.0, kTwoPi * i * (c + eps) / n) *
               cfg.filters[0].taps[tap];
      }
    }
    want[l] = acc / (cfg.filters[0].rho * std::sqrt(static_cast<double>(n)));
  }
  CHECK(max_abs_diff(synthesize(block, cfg, {eps}), want) < 1e-10);
}

TEST_CASE("trivial filters reduce synthesis to the plain inverse transform") {
  Rng rng(404);
  SubcarrierPlan plan = make_plan(64, {64}, 0);
  std::vector<SubbandFilter> filters = {design_chebyshev_filter(1, 40.0, plan, 0)};
  FrameConfig cfg = make_frame_config(plan, filters, 0);
  REQUIRE(cfg.l1() == 64);

  SymbolBlock block{random_symbols(rng, plan), 1.0};
  CHECK(max_abs_diff(synthesize(block, cfg, {}), sig::unitary_dft(block.symbols, true)) < 1e-12);
}

TEST_CASE("per-subband normalization conserves transmit energy over the active set") {
  SubcarrierPlan plan = make_plan(64, {8, 8}, 24);
  std::vector<SubbandFilter> filters = {design_chebyshev_filter(9, 40.0, plan, 0),
                                        design_chebyshev_filter(7, 40.0, plan, 1)};
  FrameConfig cfg = make_frame_config(plan, filters, 0);

  double total = 0.0;
  for (int c : plan.active_carriers()) {
    SymbolBlock unit;
    unit.symbols.assign(64, Complex(0.0, 0.0));
    unit.symbols[c] = 1.0;
    for (const Complex& v : synthesize(unit, cfg, {})) total += std::norm(v);
  }
  CHECK(total == doctest::Approx(static_cast<double>(plan.active_count())).epsilon(1e-9));
}

TEST_CASE("framing pads zeros or cuts the transient tails") {
  Rng rng(405);
  SubcarrierPlan plan = make_plan(8, {4}, 2);
  std::vector<SubbandFilter> filters = {design_chebyshev_filter(5, 30.0, plan, 0)};

  FrameConfig zp = make_frame_config(plan, filters, 3);
  REQUIRE(zp.l1() == 12);
  CVec q(12);
  for (auto& v : q) v = Complex(rng.gauss(1.0), rng.gauss(1.0));

  CVec framed = apply_zp_or_tc(q, zp);
  REQUIRE(static_cast<int>(framed.size()) == 15);
  for (int i = 0; i < 12; ++i) CHECK(framed[i] == q[i]);
  for (int i = 12; i < 15; ++i) CHECK(framed[i] == Complex(0.0, 0.0));

  FrameConfig tc = make_frame_config(plan, filters, -3);
  CHECK(tc.tail_cut_front() == 1);
  CHECK(tc.tail_cut_back() == 2);
  CVec cut = apply_zp_or_tc(q, tc);
  REQUIRE(static_cast<int>(cut.size()) == 9);
  for (int i = 0; i < 9; ++i) CHECK(cut[i] == q[i + 1]);

  FrameConfig same = make_frame_config(plan, filters, 0);
  CHECK(max_abs_diff(apply_zp_or_tc(q, same), q) == 0.0);

  CHECK_THROWS_AS(apply_zp_or_tc(CVec(11), zp), std::invalid_argument);
}

TEST_CASE("framing validation") {
  SubcarrierPlan plan = make_plan(8, {4}, 2);
  std::vector<SubbandFilter> filters = {design_chebyshev_filter(5, 30.0, plan, 0)};
  CHECK_THROWS_AS(make_frame_config(plan, filters, -5), std::invalid_argument);
  CHECK_THROWS_AS(make_frame_config(plan, {}, 0), std::invalid_argument);

  std::vector<SubbandFilter> bad = filters;
  for (Complex& t : bad[0].taps) t *= 2.0;
  CHECK_THROWS_AS(make_frame_config(plan, bad, 0), std::invalid_argument);
}

TEST_CASE("synthesis input validation") {
  SubcarrierPlan plan = make_plan(8, {4}, 2);
  std::vector<SubbandFilter> filters = {design_chebyshev_filter(3, 30.0, plan, 0)};
  FrameConfig cfg = make_frame_config(plan, filters, 0);

  SymbolBlock short_block{CVec(7, Complex(0.0, 0.0)), 1.0};
  CHECK_THROWS_AS(synthesize(short_block, cfg, {}), std::invalid_argument);

  SymbolBlock off_active{CVec(8, Complex(0.0, 0.0)), 1.0};
  off_active.symbols[0] = 1.0;
  CHECK_THROWS_AS(synthesize(off_active, cfg, {}), std::invalid_argument);

  SymbolBlock ok{CVec(8, Complex(0.0, 0.0)), 1.0};
  ok.symbols[2] = 1.0;
  CHECK_THROWS_AS(synthesize(ok, cfg, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("qam map and demap round-trip on random bits") {
  Rng rng(406);
  SubcarrierPlan plan = make_plan(32, {6, 6}, 10);
  for (int order : {4, 16, 64, 256}) {
    int bits_per = 0;
    for (int v = order; v > 1; v >>= 2) bits_per += 2;
    std::vector<std::uint8_t> bits(plan.active_count() * static_cast<std::size_t>(bits_per));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
    SymbolBlock block = qam_map(bits, order, plan, 2.5);
    CHECK(qam_demap(block.symbols, order, plan, 2.5) == bits);
  }
}

TEST_CASE("qam constellation has exactly unit average power") {
  SubcarrierPlan one = make_plan(1, {1}, 0);
  for (int order : {4, 16, 64, 256}) {
    int bits_per = 0;
    for (int v = order; v > 1; v >>= 2) bits_per += 2;
    double acc = 0.0;
    for (int word = 0; word < order; ++word) {
      std::vector<std::uint8_t> bits(static_cast<std::size_t>(bits_per));
      for (int b = 0; b < bits_per; ++b) bits[b] = (word >> (bits_per - 1 - b)) & 1;
      acc += std::norm(qam_map(bits, order, one, 1.0).symbols[0]);
    }
    CHECK(acc / order == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("qam decisions survive sub-half-distance noise") {
  Rng rng(407);
  SubcarrierPlan plan = make_plan(16, {8}, 4);
  const int order = 16;
  std::vector<std::uint8_t> bits(plan.active_count() * 4u);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
  SymbolBlock block = qam_map(bits, order, plan, 1.0);

  // half minimum distance for unit-power square QAM is sqrt(3/(2(M-1)))
  const double guard = 0.9 * std::sqrt(3.0 / (2.0 * (order - 1)));
  for (int c : plan.active_carriers()) {
    const double phase = rng.uniform() * kTwoPi;
    block.symbols[c] += std::polar(guard, phase);
  }
  CHECK(qam_demap(block.symbols, order, plan, 1.0) == bits);
}

TEST_CASE("adjacent qam decision regions differ by one bit per axis") {
  SubcarrierPlan one = make_plan(1, {1}, 0);
  const int order = 16;
  const double scale = std::sqrt(3.0 / (2.0 * (order - 1)));
  std::vector<std::vector<std::uint8_t>> per_level;
  for (int k = 0; k < 4; ++k) {
    CVec point = {Complex((2 * k - 3) * scale, -3 * scale)};
    per_level.push_back(qam_demap(point, order, one, 1.0));
  }
  for (int k = 0; k + 1 < 4; ++k) {
    int flips = 0;
    for (std::size_t b = 0; b < per_level[k].size(); ++b)
      flips += per_level[k][b] != per_level[k + 1][b];
    CHECK(flips == 1);
  }
}

TEST_CASE("qam validation") {
  SubcarrierPlan plan = make_plan(8, {2}, 3);
  std::vector<std::uint8_t> bits(8, 0);
  CHECK_THROWS_AS(qam_map(bits, 8, plan, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(qam_map(bits, 16, plan, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(qam_map(std::vector<std::uint8_t>(7, 0), 16, plan, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(qam_demap(CVec(7, Complex(0.0, 0.0)), 16, plan, 1.0), std::invalid_argument);
}

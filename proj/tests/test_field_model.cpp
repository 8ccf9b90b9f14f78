#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "qfs/errors.hpp"
#include "qfs/field_model.hpp"
#include "qfs/trace_sim.hpp"

using namespace qfs;

namespace {

PulseSpec test_pulse(double amplitude = 1.0, double cep = 0.0) {
  PulseSpec p;
  p.field_amplitude = amplitude;
  p.cep_rad = cep;
  return p;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

TEST_CASE("trace is linear in the test field") {
  const std::vector<double> delays = make_delay_grid(-50.0, 50.0, 0.5);
  const DetectionSpec det;
  const PulseSpec sampling = test_pulse(1.3);

  const auto zero = heterodyne_trace(test_pulse(0.0), sampling, det, delays);
  for (double v : zero) CHECK(v == 0.0);

  const auto base = heterodyne_trace(test_pulse(1.0), sampling, det, delays);
  const auto twice = heterodyne_trace(test_pulse(2.0), sampling, det, delays);
  for (std::size_t i = 0; i < delays.size(); ++i) CHECK(twice[i] == 2.0 * base[i]);
}

TEST_CASE("balanced channel cancels common CEP offsets") {
  const std::vector<double> delays = make_delay_grid(-40.0, 40.0, 0.25);
  DetectionSpec det;
  det.lo_order = 2;
  det.mix_order = 2;

  SUBCASE("identical CEPs are exactly invariant") {
    for (double phi : {0.0, 0.4, 1.3, -2.7}) {
      const auto a = heterodyne_trace(test_pulse(1.0, phi), test_pulse(0.8, phi), det, delays);
      const auto b = heterodyne_trace(test_pulse(1.0, 0.0), test_pulse(0.8, 0.0), det, delays);
      for (std::size_t i = 0; i < delays.size(); ++i) CHECK(a[i] == b[i]);
    }
  }

  SUBCASE("common offsets cancel to rounding for distinct CEPs") {
    Rng rng(11);
    const auto base = heterodyne_trace(test_pulse(1.0, 0.3), test_pulse(0.8, 1.1), det, delays);
    const double scale = max_abs(base);
    for (int k = 0; k < 20; ++k) {
      const double delta = std::numbers::pi * (1.0 - 2.0 * rng.uniform());
      const auto shifted =
          heterodyne_trace(test_pulse(1.0, 0.3 + delta), test_pulse(0.8, 1.1 + delta), det, delays);
      for (std::size_t i = 0; i < delays.size(); ++i)
        CHECK(std::fabs(shifted[i] - base[i]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("test-pulse CEP shifts the carrier phase") {
  const std::vector<double> delays = make_delay_grid(-30.0, 30.0, 0.5);
  const DetectionSpec det;
  const double delta = 0.9;
  const auto shifted = heterodyne_trace(test_pulse(1.0, delta), test_pulse(1.0, 0.0), det, delays);
  const double omega = 2.0 * std::numbers::pi * det.detection_freq_phz;
  PulseSpec probe = test_pulse(1.0);
  for (std::size_t i = 0; i < delays.size(); ++i) {
    const double expected = field_envelope(probe, delays[i]) * std::cos(omega * delays[i] + delta);
    CHECK(shifted[i] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("phase residual") {
  CHECK(cep_phase_residual(2, 2, 1.3, 1.3) == 0.0);
  CHECK(cep_phase_residual(3, 2, 0.7, 0.7) == doctest::Approx(-0.7).epsilon(1e-14));
  CHECK(cep_phase_residual(1, 2, 0.3, 0.9) == 0.9);  // m - n + 1 = 0
  CHECK(cep_phase_residual(2, 2, 0.0, 3.0 * std::numbers::pi) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(cep_phase_residual(2, 2, 0.0, -std::numbers::pi) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(cep_phase_residual(2, 2, 0.0, 2.0 * std::numbers::pi) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("CEP averaging" * doctest::timeout(300)) {
  const std::vector<double> delays = make_delay_grid(-300.0, 300.0, 0.5);
  DetectionSpec det;

  SUBCASE("balanced channel equals the stabilized trace bit-exactly") {
    det.lo_order = 2;
    det.mix_order = 2;
    const PulseSpec t = test_pulse(1.0, 0.4);
    const PulseSpec s = test_pulse(1.0, 0.4);
    const auto stable = heterodyne_trace(t, s, det, delays);
    Rng rng(99);
    const auto averaged = cep_averaged_trace(t, s, det, delays, 1000, rng);
    for (std::size_t i = 0; i < delays.size(); ++i) CHECK(averaged[i] == stable[i]);
  }

  SUBCASE("a single zero offset reproduces the plain trace") {
    const PulseSpec t = test_pulse(1.0, 0.2);
    const PulseSpec s = test_pulse(1.0, 0.5);
    const std::vector<double> zero_offset{0.0};
    const auto averaged = cep_averaged_trace(t, s, det, delays, zero_offset);
    const auto plain = heterodyne_trace(t, s, det, delays);
    for (std::size_t i = 0; i < delays.size(); ++i) CHECK(averaged[i] == plain[i]);
  }

  SUBCASE("unbalanced channel averages out") {
    det.lo_order = 3;
    det.mix_order = 2;
    const PulseSpec t = test_pulse(1.0, 0.0);
    const PulseSpec s = test_pulse(1.0, 0.0);
    const auto stable = heterodyne_trace(t, s, det, delays);
    Rng rng(123);
    const auto averaged = cep_averaged_trace(t, s, det, delays, 10000, rng);
    CHECK(max_abs(averaged) < 0.02 * max_abs(stable));
  }

  SUBCASE("empty offset list is rejected") {
    CHECK_THROWS_AS(
        cep_averaged_trace(test_pulse(), test_pulse(), det, delays, std::vector<double>{}),
        ConfigError);
  }
}

TEST_CASE("power-law exponents") {
  const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  CHECK(fit_power_law(x, x) == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> delays = make_delay_grid(-20.0, 20.0, 0.25);
  const std::vector<double> amps{0.1, 0.2, 0.4, 0.7, 1.0};

  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 3}, {1, 2}}) {
    DetectionSpec det;
    det.lo_order = m;
    det.mix_order = n;

    std::vector<double> test_peaks, sampling_peaks;
    for (double a : amps) {
      const auto t1 = heterodyne_trace(test_pulse(a), test_pulse(1.0), det, delays);
      double peak = 0.0;
      for (double v : t1) peak = std::max(peak, std::fabs(v));
      test_peaks.push_back(peak);

      const auto t2 = heterodyne_trace(test_pulse(1.0), test_pulse(a), det, delays);
      peak = 0.0;
      for (double v : t2) peak = std::max(peak, std::fabs(v));
      sampling_peaks.push_back(peak);
    }
    INFO("m=", m, " n=", n);
    CHECK(fit_power_law(amps, test_peaks) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit_power_law(amps, sampling_peaks) ==
          doctest::Approx(static_cast<double>(m + n - 1)).epsilon(1e-6));
  }

  CHECK_THROWS_AS(fit_power_law(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}),
                  ConfigError);
  CHECK_THROWS_AS(fit_power_law(x, std::vector<double>{1.0, -2.0, 3.0, 4.0}), NumericError);
}

TEST_CASE("noiseless trace peaks at the detection frequency") {
  const std::vector<double> delays = make_delay_grid(-300.0, 300.0, 0.5);
  DetectionSpec det;
  det.detection_freq_phz = 0.35;
  const auto trace = heterodyne_trace(test_pulse(), test_pulse(), det, delays);
  ScanResult scan;
  scan.delays_fs = delays;
  scan.mean_signal = trace;
  scan.std_signal.assign(delays.size(), 0.0);
  const Spectrum spec = spectrum(scan, TraceSelect::Mean);
  const double df = spec.freqs_phz[1] - spec.freqs_phz[0];
  CHECK(std::fabs(spectral_peak_freq(spec) - det.detection_freq_phz) <= df);
}

TEST_CASE("delay grid construction and validation") {
  const auto grid = make_delay_grid(-1.0, 1.0, 0.5);
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == -1.0);
  CHECK(grid.back() == 1.0);
  CHECK_THROWS_AS(make_delay_grid(0.0, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(make_delay_grid(1.0, 0.0, 0.5), ConfigError);

  const DetectionSpec det;
  const std::vector<double> unsorted{0.0, -1.0, 1.0};
  CHECK_THROWS_AS(heterodyne_trace(test_pulse(), test_pulse(), det, unsorted), ConfigError);
}

TEST_CASE("spec validation") {
  PulseSpec p;
  p.fwhm_fs = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = PulseSpec{};
  p.carrier_freq_phz = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);

  DetectionSpec d;
  d.lo_order = 0;
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d = DetectionSpec{};
  d.classical_noise = -0.1;
  CHECK_THROWS_AS(d.validate(), ConfigError);
}

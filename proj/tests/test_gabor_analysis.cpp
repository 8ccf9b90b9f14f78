#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "qfs/errors.hpp"
#include "qfs/gabor_analysis.hpp"

using namespace qfs;

namespace {

// Synthetic noiseless scan with an even-symmetric envelope trace.
ScanResult synthetic_scan(double fwhm = 150.0) {
  ScanResult scan;
  scan.delays_fs = make_delay_grid(-300.0, 300.0, 0.5);
  scan.mean_signal.resize(scan.delays_fs.size());
  scan.std_signal.resize(scan.delays_fs.size());
  PulseSpec pulse;
  pulse.fwhm_fs = fwhm;
  const double omega = 2.0 * std::numbers::pi * 0.2910606388349514;
  for (std::size_t i = 0; i < scan.delays_fs.size(); ++i) {
    const double tau = scan.delays_fs[i];
    scan.mean_signal[i] = field_envelope(pulse, tau) * std::cos(omega * tau);
    scan.std_signal[i] = field_envelope(pulse, tau) * std::fabs(std::cos(omega * tau));
  }
  scan.config_digest = "synthetic";
  return scan;
}

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

TEST_CASE("window weight shape") {
  const GaborWindow w{10.0, 40.0, "w"};
  CHECK(window_weight(w, 10.0) == 1.0);
  CHECK(window_weight(w, 10.0 + 20.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(window_weight(w, 10.0 - 20.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS((GaborWindow{0.0, 0.0, "bad"}.validate()), ConfigError);
}

TEST_CASE("default windows cover front, center and tail") {
  const auto windows = default_windows(150.0);
  REQUIRE(windows.size() == 3);
  CHECK(windows[0].center_fs == -150.0);
  CHECK(windows[1].center_fs == 0.0);
  CHECK(windows[2].center_fs == 150.0);
  for (const auto& w : windows) CHECK(w.fwhm_fs == 75.0);
  CHECK(windows[0].label == "front");
  CHECK(windows[2].label == "tail");
}

TEST_CASE("windowed traces") {
  const ScanResult scan = synthetic_scan();

  SUBCASE("an effectively infinite window is the identity") {
    const GaborWindow wide{0.0, 1e6, "wide"};
    const auto [mean, stdev] = windowed_traces(scan, wide);
    for (std::size_t i = 0; i < scan.delays_fs.size(); ++i) {
      CHECK(mean[i] == doctest::Approx(scan.mean_signal[i]).epsilon(1e-6));
      CHECK(stdev[i] == doctest::Approx(scan.std_signal[i]).epsilon(1e-6));
    }
  }

  SUBCASE("a window far outside the scan is rejected") {
    CHECK_THROWS_AS(windowed_traces(scan, GaborWindow{1e5, 30.0, "far"}), ConfigError);
  }

  SUBCASE("all-zero scans stay zero") {
    ScanResult zero = scan;
    std::fill(zero.mean_signal.begin(), zero.mean_signal.end(), 0.0);
    std::fill(zero.std_signal.begin(), zero.std_signal.end(), 0.0);
    const auto [mean, stdev] = windowed_traces(zero, GaborWindow{0.0, 75.0, "c"});
    for (double v : mean) CHECK(v == 0.0);
    for (double v : stdev) CHECK(v == 0.0);
  }

  SUBCASE("windowing is homogeneous") {
    const GaborWindow w{0.0, 75.0, "c"};
    const auto [mean1, std1] = windowed_traces(scan, w);
    ScanResult scaled = scan;
    for (double& v : scaled.mean_signal) v *= 2.0;
    for (double& v : scaled.std_signal) v *= 2.0;
    const auto [mean2, std2] = windowed_traces(scaled, w);
    for (std::size_t i = 0; i < mean1.size(); ++i) {
      CHECK(mean2[i] == 2.0 * mean1[i]);
      CHECK(std2[i] == 2.0 * std1[i]);
    }
  }

  SUBCASE("mirror windows see the same mass of a symmetric scan") {
    const auto [mean_l, std_l] = windowed_traces(scan, GaborWindow{-120.0, 60.0, "l"});
    const auto [mean_r, std_r] = windowed_traces(scan, GaborWindow{120.0, 60.0, "r"});
    CHECK(rms(mean_l) == doctest::Approx(rms(mean_r)).epsilon(1e-12));
    CHECK(rms(std_l) == doctest::Approx(rms(std_r)).epsilon(1e-12));
  }
}

TEST_CASE("coherence profile") {
  CoherenceProfile constant{CoherenceMode::Constant, 0.7, 0.0};
  CHECK(constant.fraction_at(0.0) == 0.7);
  CHECK(constant.fraction_at(1.0) == 0.7);

  CoherenceProfile linked{CoherenceMode::IntensityLinked, 1.0, 0.5};
  CHECK(linked.fraction_at(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(linked.fraction_at(0.0) == 1.0);

  CoherenceProfile clamped{CoherenceMode::IntensityLinked, 0.3, 2.0};
  CHECK(clamped.fraction_at(1.0) == 0.0);

  CoherenceProfile bad{CoherenceMode::Constant, 1.5, 0.0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(coherence_mode_from_string("constant") == CoherenceMode::Constant);
  CHECK(coherence_mode_from_string("intensity-linked") == CoherenceMode::IntensityLinked);
  CHECK_THROWS_AS(coherence_mode_from_string("x"), ConfigError);
}

TEST_CASE("mixture-fraction recovery from oracle curves" * doctest::timeout(300)) {
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const ScalingCurve curve = model_curve_oracle(DistKind::Mixture, a, kStandardSweepMeans);
    const double a_hat = estimate_mixture_fraction(curve);
    INFO("A=", a);
    CHECK(std::fabs(a_hat - a) <= 0.01);
  }
}

TEST_CASE("mixture-fraction recovery from a Monte Carlo curve" * doctest::timeout(600)) {
  McConfig cfg;
  cfg.test_dist = mixture(1.0, 0.7);
  cfg.shots = 30000;
  cfg.seed = 606;
  const ScalingCurve curve = scaling_sweep(cfg, kStandardSweepMeans);
  CHECK(std::fabs(estimate_mixture_fraction(curve) - 0.7) <= 0.05);
}

TEST_CASE("mixture estimation preconditions") {
  ScalingCurve degenerate;
  for (double m : {0.1, 0.5, 1.5, 5.0, 20.0})
    degenerate.points.push_back({m, 1.0, 0.0, 1.0, 0.0});
  degenerate.normalization_anchor = 20.0;
  CHECK_THROWS_AS(estimate_mixture_fraction(degenerate), NumericError);

  ScalingCurve too_small;
  for (double m : {0.1, 1.5, 5.0}) too_small.points.push_back({m, 1.0, 1.0, 1.0, 1.0});
  CHECK_THROWS_AS(estimate_mixture_fraction(too_small), ConfigError);

  ScalingCurve off_grid;
  for (double m : {2.0, 3.0, 4.0, 5.0, 6.0}) off_grid.points.push_back({m, 1.0, 1.0, 1.0, 1.0});
  CHECK_THROWS_AS(estimate_mixture_fraction(off_grid), ConfigError);
}

TEST_CASE("intrapulse sweep separates coherent and thermal limits" * doctest::timeout(600)) {
  IntrapulseConfig cfg;
  cfg.delays_fs = make_delay_grid(-300.0, 300.0, 2.0);
  cfg.peak_mean_grid = {0.5, 1.5, 5.0, 15.0, 50.0};
  cfg.windows = default_windows(150.0);
  cfg.det.shots_per_point = 1500;
  cfg.det.classical_noise = 0.0;
  cfg.det.seed = 11;
  cfg.estimate_fraction = false;  // grids here are tuned for shape, not fits

  SUBCASE("purely coherent pulses peak before the anchor") {
    cfg.profile = {CoherenceMode::Constant, 1.0, 0.0};
    const auto curves = intrapulse_sweep(cfg);
    REQUIRE(curves.size() == 3);
    for (const WindowCurve& wc : curves) {
      double peak = 0.0;
      for (const ScalingPoint& p : wc.curve.points) peak = std::max(peak, p.norm_std);
      INFO(wc.window.label);
      CHECK(peak > 1.05);  // interior maximum above the anchor value
    }
  }

  SUBCASE("purely thermal pulses grow monotonically") {
    cfg.profile = {CoherenceMode::Constant, 0.0, 0.0};
    const auto curves = intrapulse_sweep(cfg);
    for (const WindowCurve& wc : curves) {
      INFO(wc.window.label);
      for (std::size_t i = 1; i < wc.curve.points.size(); ++i)
        CHECK(wc.curve.points[i].norm_std > wc.curve.points[i - 1].norm_std);
    }
  }
}

TEST_CASE("intensity-linked decoherence flattens the intense window" * doctest::timeout(600)) {
  IntrapulseConfig cfg;
  cfg.delays_fs = make_delay_grid(-300.0, 300.0, 1.0);
  cfg.peak_mean_grid = {0.316, 0.75, 1.78, 4.22, 10.0, 23.7, 56.2, 133.0, 316.0};
  cfg.windows = default_windows(150.0);
  cfg.det.shots_per_point = 2000;
  cfg.det.classical_noise = 0.0;
  cfg.det.seed = 29;
  cfg.profile = {CoherenceMode::IntensityLinked, 1.0, 0.5};
  const auto curves = intrapulse_sweep(cfg);
  REQUIRE(curves.size() == 3);
  const WindowCurve& center = curves[1];
  const WindowCurve& tail = curves[2];

  double center_peak = 0.0, tail_peak = 0.0;
  for (const ScalingPoint& p : center.curve.points) center_peak = std::max(center_peak, p.norm_std);
  for (const ScalingPoint& p : tail.curve.points) tail_peak = std::max(tail_peak, p.norm_std);
  CHECK(center_peak < tail_peak);
  CHECK(center.a_hat < tail.a_hat);
}

TEST_CASE("intrapulse sweep validation") {
  IntrapulseConfig cfg;
  cfg.delays_fs = make_delay_grid(-10.0, 10.0, 1.0);
  cfg.windows = default_windows(150.0);
  CHECK_THROWS_AS(intrapulse_sweep(cfg), ConfigError);  // empty energy grid
  cfg.peak_mean_grid = {1.0, -2.0};
  CHECK_THROWS_AS(intrapulse_sweep(cfg), ConfigError);
  cfg.peak_mean_grid = {1.0};
  cfg.windows.clear();
  CHECK_THROWS_AS(intrapulse_sweep(cfg), ConfigError);
}

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qfs/rng.hpp"

namespace qfs {

inline constexpr double kFourLn2 = 2.772588722239781;  // 4 ln 2

/// One pulse: carrier frequency, Gaussian envelope (intensity FWHM), field
/// strength in arbitrary units, and carrier-envelope phase.
struct PulseSpec {
  double carrier_freq_phz = 0.29106063883495146;  // c / 1030 nm
  double fwhm_fs = 150.0;
  double field_amplitude = 1.0;
  double cep_rad = 0.0;
  bool cep_stable = true;

  void validate() const;
};

/// Detection configuration: local-oscillator order m, mixing order n,
/// detection frequency, multiplicative classical-noise coefficient, shots per
/// delay point, and the base seed.
struct DetectionSpec {
  int lo_order = 2;
  int mix_order = 2;
  double detection_freq_phz = 0.29106063883495146;
  double classical_noise = 0.05;
  std::uint64_t shots_per_point = 10000;
  std::uint64_t seed = 42;

  void validate() const;
};

/// Gaussian field envelope, peak 1 at zero delay. The squared (intensity)
/// envelope has FWHM = fwhm_fs, so the field envelope FWHM is sqrt(2) larger.
double field_envelope(const PulseSpec& pulse, double delay_fs);
double intensity_envelope(const PulseSpec& pulse, double delay_fs);

/// Heterodyne phase left after interference: phi_t - (m - n + 1) * phi_s,
/// reduced to (-pi, pi]. Zero for a balanced channel (m = n) with common CEP.
double cep_phase_residual(int m, int n, double phi_s, double phi_t);

/// Noiseless heterodyne delay trace:
///   I(tau) = Es^(m+n-1) * Et * env(tau) * cos(2 pi f_d tau + residual),
/// with env the test-pulse field envelope. Delays must be sorted ascending.
std::vector<double> heterodyne_trace(const PulseSpec& test, const PulseSpec& sampling,
                                     const DetectionSpec& det, std::span<const double> delays);

/// Mean of heterodyne_trace over common CEP offsets applied to both pulses
/// (locked fluctuations). The running-mean accumulation returns the delta = 0
/// trace bit-exactly whenever every offset yields the same trace, which is the
/// balanced-channel case.
std::vector<double> cep_averaged_trace(const PulseSpec& test, const PulseSpec& sampling,
                                       const DetectionSpec& det, std::span<const double> delays,
                                       std::span<const double> cep_offsets);

/// Same, drawing cep_draws offsets uniformly from (-pi, pi].
std::vector<double> cep_averaged_trace(const PulseSpec& test, const PulseSpec& sampling,
                                       const DetectionSpec& det, std::span<const double> delays,
                                       std::uint64_t cep_draws, Rng& rng);

/// Least-squares slope of log y against log x. Needs >= 3 points; all values
/// must be positive.
double fit_power_law(std::span<const double> x, std::span<const double> y);

/// Uniform delay grid [min_fs, max_fs] with the given step.
std::vector<double> make_delay_grid(double min_fs, double max_fs, double step_fs);

}  // namespace qfs

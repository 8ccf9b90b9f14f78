#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qfs/trace_sim.hpp"

namespace qfs {

/// Gaussian analysis window, peak 1 at its center.
struct GaborWindow {
  double center_fs = 0.0;
  double fwhm_fs = 1.0;
  std::string label;

  void validate() const;
};

double window_weight(const GaborWindow& window, double delay_fs);

/// Three windows at -FWHM, 0, +FWHM of the pulse, each FWHM/2 wide.
std::vector<GaborWindow> default_windows(double pulse_fwhm_fs);

enum class CoherenceMode { Constant, IntensityLinked };

/// Coherent fraction across the pulse. Constant mode returns a0 everywhere;
/// intensity-linked mode returns clamp(a0 - c * env2, 0, 1) with env2 the
/// normalized instantaneous intensity (1 at the envelope peak).
struct CoherenceProfile {
  CoherenceMode mode = CoherenceMode::Constant;
  double a0 = 1.0;
  double c = 0.0;

  double fraction_at(double env_sq_normalized) const;
  void validate() const;
};

CoherenceMode coherence_mode_from_string(std::string_view name);
std::string_view to_string(CoherenceMode mode);

/// Both traces multiplied elementwise by the window. The window must overlap
/// the scan: rejected only when its mass inside the delay range is < 0.99 and
/// its peak region lies outside the range (so an arbitrarily wide window
/// centered on the scan remains valid).
std::pair<std::vector<double>, std::vector<double>> windowed_traces(const ScanResult& scan,
                                                                    const GaborWindow& window);

/// Per-window result of an intrapulse sweep. The curve abscissa is the
/// window-weighted average of the effective per-delay <n>; the mean metric is
/// the RMS of the windowed mean trace and the sigma metric the window-weighted
/// average of the sigma trace, normalized as in a scaling sweep.
struct WindowCurve {
  GaborWindow window;
  ScalingCurve curve;
  double a_hat = 0.0;
};

struct IntrapulseConfig {
  PulseSpec test_pulse{};
  PulseSpec sampling_pulse{};
  PhotonDistribution sampling_dist = poisson(1e6);
  CoherenceProfile profile{};
  DetectionSpec det{};
  double noise_floor = 0.0;
  std::vector<double> delays_fs;
  std::vector<double> peak_mean_grid;  // peak <n> per energy point
  std::vector<GaborWindow> windows;
  double tail_epsilon = 1e-12;
  bool estimate_fraction = true;
};

/// Scans every energy point with the per-delay mixture statistics defined by
/// the coherence profile, reduces each scan per window, and assembles one
/// scaling curve (plus recovered coherent fraction) per window. Energy point
/// e uses the derived seed derive_seed(det.seed, e, SeedTag::EnergyPoint).
std::vector<WindowCurve> intrapulse_sweep(const IntrapulseConfig& config);

/// Grid search A in {0, 0.01, ..., 1} minimizing the summed squared error
/// between the observed and model norm_std curves (ties break toward larger
/// A). The observed curve must have >= 5 points spanning <n> = 1.
double estimate_mixture_fraction(const ScalingCurve& observed,
                                 const PhotonDistribution& sampling = poisson(1e6),
                                 double tail_epsilon = 1e-12);

}  // namespace qfs

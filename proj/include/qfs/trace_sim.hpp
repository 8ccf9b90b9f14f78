#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qfs/field_model.hpp"
#include "qfs/ghost_mc.hpp"
#include "qfs/photon_stats.hpp"

namespace qfs {

/// One delay scan: per-delay sample mean and sample standard deviation of the
/// shot signal, plus an opaque digest of the full configuration and seed.
struct ScanResult {
  std::vector<double> delays_fs;
  std::vector<double> mean_signal;
  std::vector<double> std_signal;
  std::string config_digest;
};

struct Spectrum {
  std::vector<double> freqs_phz;  // ascending, 0 to Nyquist
  std::vector<double> magnitude;  // |DFT| / point count
};

/// Full stochastic-scan configuration. The test pulse supplies the carrier,
/// envelope and CEP; its photon statistics at delay tau use the effective mean
/// peak_mean_photons * intensity_envelope(tau). The sampling pulse supplies
/// the CEP of the local-oscillator arm (its field amplitude is unused here:
/// the amplitude scale comes from the photon numbers).
struct ScanSpec {
  PulseSpec test_pulse{};
  PulseSpec sampling_pulse{};
  DistKind test_kind = DistKind::Poisson;
  double coherent_fraction = 1.0;
  double peak_mean_photons = 1.0;
  PhotonDistribution sampling_dist = poisson(1e6);
  DetectionSpec det{};
  double noise_floor = 0.0;  // additive Gaussian sigma, flat across delays

  void validate() const;
};

/// Per-delay Monte Carlo scan. Each shot draws an amplitude
/// A = 2 sqrt(n_shg) sqrt(n_sfg), multiplies the carrier
/// cos(2 pi f_d tau + residual), applies multiplicative classical noise
/// (1 + kappa g) and the additive floor. If either pulse is CEP-unstable a
/// common CEP offset is redrawn per shot (locked fluctuations); a balanced
/// channel is immune to it. Delay i uses the derived seed
/// derive_seed(det.seed, i, SeedTag::ScanDelay); delays may run concurrently.
ScanResult simulate_scan(const ScanSpec& spec, std::span<const double> delays);

/// Same, with a per-delay coherent fraction (test kind forced to Mixture
/// semantics through the fraction vector); used by the intrapulse analysis.
ScanResult simulate_scan(const ScanSpec& spec, std::span<const double> delays,
                         std::span<const double> coherent_fraction_per_delay);

enum class TraceSelect { Mean, Std };

/// One-sided DFT magnitude of the selected trace, frequencies in PHz.
/// Requires a uniform delay grid. smooth_points > 1 applies a centered moving
/// average of that width to the magnitude.
Spectrum spectrum(const ScanResult& scan, TraceSelect which, std::size_t smooth_points = 0);

/// Frequency of the largest magnitude bin at or above min_freq_phz.
double spectral_peak_freq(const Spectrum& spec, double min_freq_phz = 0.0);

/// Field detection (scaling_sweep) next to direct photon counting (signal
/// proportional to n) over the same grid. The intensity curve normalizes the
/// mean by <n> instead of sqrt(<n>); sigma is anchored at the largest <n>.
struct DetectionComparison {
  ScalingCurve field;
  ScalingCurve intensity;
};

DetectionComparison detection_comparison(DistKind kind, double coherent_fraction,
                                         std::span<const double> mean_grid, std::uint64_t shots,
                                         std::uint64_t seed,
                                         const PhotonDistribution& sampling = poisson(1e6));

}  // namespace qfs

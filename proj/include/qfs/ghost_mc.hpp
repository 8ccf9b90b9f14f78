#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qfs/photon_stats.hpp"
#include "qfs/rng.hpp"

namespace qfs {

/// One Monte Carlo measurement configuration: photon statistics of the
/// sampling and test pulses, shot count, and the base seed.
struct McConfig {
  PhotonDistribution sampling_dist = poisson(1e6);
  PhotonDistribution test_dist = poisson(1.0);
  std::uint64_t shots = 10000;
  std::uint64_t seed = 42;

  void validate() const;
};

struct ShotStatistics {
  double mean_signal = 0.0;
  double std_signal = 0.0;
  std::uint64_t shots = 0;
};

struct ScalingPoint {
  double mean_photons = 0.0;
  double raw_mean = 0.0;
  double raw_std = 0.0;
  double norm_mean = 0.0;
  double norm_std = 0.0;
};

/// Per-<n> signal statistics, raw and normalized. norm_mean divides the raw
/// mean by sqrt(<n>) and rescales so the anchor point (largest <n>) is 1;
/// norm_std is the raw standard deviation rescaled to 1 at the anchor.
struct ScalingCurve {
  std::vector<ScalingPoint> points;  // sorted ascending by mean_photons
  double normalization_anchor = 0.0;
};

/// Photon counts of one shot, in draw order.
struct ShotDraws {
  std::uint64_t sampling_a = 0;
  std::uint64_t sampling_b = 0;
  std::uint64_t sampling_c = 0;
  std::uint64_t test = 0;
};

/// Up-conversion is limited by the scarcer pulse: n_shg = min(a, b) from the
/// sampling pulse alone, n_sfg = min(c, test) across sampling and test. The
/// interference amplitude is 2 * sqrt(n_shg) * sqrt(n_sfg).
double shot_signal(const ShotDraws& draws);

/// Draws one shot (order: sampling a, b, c, then test) and evaluates it.
double simulate_shot(const McConfig& config, Rng& rng);

/// Sample mean and sample standard deviation (shots - 1 denominator) over
/// config.shots independent shots. Bit-identical for a fixed config.
ShotStatistics run_ensemble(const McConfig& config);

/// Runs run_ensemble at every <n> in mean_grid (test kind and coherent
/// fraction preserved). Point i of the ascending-sorted grid uses the derived
/// seed derive_seed(base.seed, i, SeedTag::SweepPoint); points may execute
/// concurrently.
ScalingCurve scaling_sweep(const McConfig& base, std::span<const double> mean_grid);

/// Raw moments E[S^k], k = 1..4, of the shot signal from the truncated-series
/// moments: S = 2 sqrt(min-pair of sampling) * sqrt(test), with the two
/// factors independent. Assumes test mean well below sampling mean, where
/// min(sampling, test) = test up to negligible mass.
struct ShotMomentOracle {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  double mean() const { return m1; }
  double variance() const;
  double std_dev() const;
  double central4() const;  // fourth central moment
  double mean_standard_error(std::uint64_t shots) const;
  double std_standard_error(std::uint64_t shots) const;
};

ShotMomentOracle shot_moments_oracle(const PhotonDistribution& sampling,
                                     const PhotonDistribution& test,
                                     double tail_epsilon = 1e-12);

/// Closed-form counterpart of scaling_sweep built on the moment oracle.
/// Grid means of 0 are permitted here and give all-zero raw values.
ScalingCurve model_curve_oracle(DistKind kind, double coherent_fraction,
                                std::span<const double> mean_grid,
                                const PhotonDistribution& sampling = poisson(1e6),
                                double tail_epsilon = 1e-12);

/// Fills norm_mean / norm_std of points sorted ascending by mean_photons.
/// mean_exponent is 0.5 for field detection (divide by sqrt(<n>)) and 1.0 for
/// intensity detection (divide by <n>).
void apply_normalization(std::vector<ScalingPoint>& points, double mean_exponent);

}  // namespace qfs

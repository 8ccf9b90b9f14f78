#include "qfs/ghost_mc.hpp"

#include <algorithm>
#include <cmath>

#include "qfs/errors.hpp"
#include "qfs/parallel.hpp"
#include "qfs/stats.hpp"

namespace qfs {

void McConfig::validate() const {
  sampling_dist.validate();
  test_dist.validate();
  if (shots < 1) throw ConfigError("shots must be >= 1");
  if (!(sampling_dist.mean > 0.0)) throw ConfigError("sampling distribution mean must be > 0");
}

double shot_signal(const ShotDraws& draws) {
  const std::uint64_t n_shg = std::min(draws.sampling_a, draws.sampling_b);
  const std::uint64_t n_sfg = std::min(draws.sampling_c, draws.test);
  return 2.0 * std::sqrt(static_cast<double>(n_shg)) * std::sqrt(static_cast<double>(n_sfg));
}

double simulate_shot(const McConfig& config, Rng& rng) {
  ShotDraws d;
  d.sampling_a = sample(config.sampling_dist, rng);
  d.sampling_b = sample(config.sampling_dist, rng);
  d.sampling_c = sample(config.sampling_dist, rng);
  d.test = sample(config.test_dist, rng);
  return shot_signal(d);
}

ShotStatistics run_ensemble(const McConfig& config) {
  config.validate();
  if (config.shots < 2)
    throw ConfigError("run_ensemble needs shots >= 2 for a sample standard deviation");
  Rng rng(derive_seed(config.seed, 0, SeedTag::Ensemble));
  RunningStats stats;
  for (std::uint64_t s = 0; s < config.shots; ++s) stats.add(simulate_shot(config, rng));
  return {stats.mean, stats.sample_std(), config.shots};
}

void apply_normalization(std::vector<ScalingPoint>& points, double mean_exponent) {
  if (points.empty()) throw ConfigError("scaling curve has no points");
  const ScalingPoint& anchor = points.back();
  const double anchor_ratio = anchor.raw_mean / std::pow(anchor.mean_photons, mean_exponent);
  if (!(anchor_ratio > 0.0))
    throw NumericError("zero mean signal at the normalization anchor");
  if (!(anchor.raw_std > 0.0))
    throw NumericError("zero standard deviation at the normalization anchor");
  for (ScalingPoint& p : points) {
    p.norm_mean = p.mean_photons > 0.0
                      ? (p.raw_mean / std::pow(p.mean_photons, mean_exponent)) / anchor_ratio
                      : 0.0;
    p.norm_std = p.raw_std / anchor.raw_std;
  }
}

ScalingCurve scaling_sweep(const McConfig& base, std::span<const double> mean_grid) {
  base.validate();
  if (mean_grid.empty()) throw ConfigError("scaling sweep: mean grid is empty");
  for (double m : mean_grid)
    if (!(m > 0.0)) throw ConfigError("scaling sweep: all grid means must be > 0");

  std::vector<double> grid(mean_grid.begin(), mean_grid.end());
  std::sort(grid.begin(), grid.end());

  std::vector<ScalingPoint> points(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    McConfig cfg = base;
    cfg.test_dist.mean = grid[i];
    cfg.seed = derive_seed(base.seed, i, SeedTag::SweepPoint);
    const ShotStatistics st = run_ensemble(cfg);
    points[i] = {grid[i], st.mean_signal, st.std_signal, 0.0, 0.0};
  });
  apply_normalization(points, 0.5);
  return {std::move(points), grid.back()};
}

double ShotMomentOracle::variance() const { return std::max(0.0, m2 - m1 * m1); }

double ShotMomentOracle::std_dev() const { return std::sqrt(variance()); }

double ShotMomentOracle::central4() const {
  return m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 - 3.0 * m1 * m1 * m1 * m1;
}

double ShotMomentOracle::mean_standard_error(std::uint64_t shots) const {
  return std_dev() / std::sqrt(static_cast<double>(shots));
}

double ShotMomentOracle::std_standard_error(std::uint64_t shots) const {
  // Var(sample std) ~ (mu4 - sigma^4) / (4 sigma^2 N) for large N.
  const double var = variance();
  if (var <= 0.0) return 0.0;
  const double num = std::max(0.0, central4() - var * var);
  return std::sqrt(num / static_cast<double>(shots)) / (2.0 * std::sqrt(var));
}

ShotMomentOracle shot_moments_oracle(const PhotonDistribution& sampling,
                                     const PhotonDistribution& test, double tail_epsilon) {
  const SqrtMoments sm = min_pair_sqrt_moments(sampling, tail_epsilon);
  const SqrtMoments tm = sqrt_moments(test, tail_epsilon);
  ShotMomentOracle o;
  o.m1 = 2.0 * sm[1] * tm[1];
  o.m2 = 4.0 * sm[2] * tm[2];
  o.m3 = 8.0 * sm[3] * tm[3];
  o.m4 = 16.0 * sm[4] * tm[4];
  return o;
}

ScalingCurve model_curve_oracle(DistKind kind, double coherent_fraction,
                                std::span<const double> mean_grid,
                                const PhotonDistribution& sampling, double tail_epsilon) {
  if (mean_grid.empty()) throw ConfigError("model curve: mean grid is empty");
  for (double m : mean_grid)
    if (!(m >= 0.0)) throw ConfigError("model curve: grid means must be >= 0");

  std::vector<double> grid(mean_grid.begin(), mean_grid.end());
  std::sort(grid.begin(), grid.end());
  if (!(grid.back() > 0.0)) throw ConfigError("model curve: anchor mean must be > 0");

  const SqrtMoments sm = min_pair_sqrt_moments(sampling, tail_epsilon);
  std::vector<ScalingPoint> points(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    PhotonDistribution test{kind, grid[i], coherent_fraction};
    const SqrtMoments tm = sqrt_moments(test, tail_epsilon);
    const double m1 = 2.0 * sm[1] * tm[1];
    const double m2 = 4.0 * sm[2] * tm[2];
    points[i] = {grid[i], m1, std::sqrt(std::max(0.0, m2 - m1 * m1)), 0.0, 0.0};
  }
  apply_normalization(points, 0.5);
  return {std::move(points), grid.back()};
}

}  // namespace qfs

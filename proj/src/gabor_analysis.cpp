#include "qfs/gabor_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qfs/errors.hpp"

namespace qfs {
namespace {

double window_mass_fraction(const GaborWindow& w, double lo, double hi) {
  const double a = std::sqrt(kFourLn2) / w.fwhm_fs;
  return 0.5 * (std::erf(a * (hi - w.center_fs)) - std::erf(a * (lo - w.center_fs)));
}

void require_overlap(const GaborWindow& w, double lo, double hi) {
  w.validate();
  const double mass = window_mass_fraction(w, lo, hi);
  const double peak_in_range = window_weight(w, std::clamp(w.center_fs, lo, hi));
  if (mass < 0.99 && peak_in_range < 0.99)
    throw ConfigError("gabor window '" + w.label + "' does not overlap the scan range");
}

}  // namespace

void GaborWindow::validate() const {
  if (!(fwhm_fs > 0.0)) throw ConfigError("gabor window FWHM must be > 0");
}

double window_weight(const GaborWindow& window, double delay_fs) {
  const double u = (delay_fs - window.center_fs) / window.fwhm_fs;
  return std::exp(-kFourLn2 * u * u);
}

std::vector<GaborWindow> default_windows(double pulse_fwhm_fs) {
  if (!(pulse_fwhm_fs > 0.0)) throw ConfigError("pulse FWHM must be > 0");
  const double w = pulse_fwhm_fs / 2.0;
  return {{-pulse_fwhm_fs, w, "front"}, {0.0, w, "center"}, {pulse_fwhm_fs, w, "tail"}};
}

double CoherenceProfile::fraction_at(double env_sq_normalized) const {
  const double a = mode == CoherenceMode::Constant ? a0 : a0 - c * env_sq_normalized;
  return std::clamp(a, 0.0, 1.0);
}

void CoherenceProfile::validate() const {
  if (!(a0 >= 0.0 && a0 <= 1.0)) throw ConfigError("coherence profile a0 must lie in [0, 1]");
  if (!(c >= 0.0)) throw ConfigError("coherence profile coefficient c must be >= 0");
}

CoherenceMode coherence_mode_from_string(std::string_view name) {
  if (name == "constant") return CoherenceMode::Constant;
  if (name == "intensity-linked") return CoherenceMode::IntensityLinked;
  throw ConfigError("unknown coherence profile mode: " + std::string(name));
}

std::string_view to_string(CoherenceMode mode) {
  return mode == CoherenceMode::Constant ? "constant" : "intensity-linked";
}

std::pair<std::vector<double>, std::vector<double>> windowed_traces(const ScanResult& scan,
                                                                    const GaborWindow& window) {
  if (scan.delays_fs.empty()) throw ConfigError("windowed traces: scan is empty");
  require_overlap(window, scan.delays_fs.front(), scan.delays_fs.back());
  std::vector<double> mean(scan.delays_fs.size()), stdev(scan.delays_fs.size());
  for (std::size_t i = 0; i < scan.delays_fs.size(); ++i) {
    const double w = window_weight(window, scan.delays_fs[i]);
    mean[i] = scan.mean_signal[i] * w;
    stdev[i] = scan.std_signal[i] * w;
  }
  return {std::move(mean), std::move(stdev)};
}

std::vector<WindowCurve> intrapulse_sweep(const IntrapulseConfig& config) {
  config.profile.validate();
  if (config.peak_mean_grid.empty()) throw ConfigError("intrapulse sweep: energy grid is empty");
  for (double m : config.peak_mean_grid)
    if (!(m > 0.0)) throw ConfigError("intrapulse sweep: peak means must be > 0");
  if (config.windows.empty()) throw ConfigError("intrapulse sweep: no analysis windows");
  if (config.delays_fs.size() < 2) throw ConfigError("intrapulse sweep: need >= 2 delays");
  for (const GaborWindow& w : config.windows)
    require_overlap(w, config.delays_fs.front(), config.delays_fs.back());

  std::vector<double> grid = config.peak_mean_grid;
  std::sort(grid.begin(), grid.end());

  const std::size_t n_delays = config.delays_fs.size();
  std::vector<double> env_sq(n_delays), fractions(n_delays);
  for (std::size_t i = 0; i < n_delays; ++i) {
    env_sq[i] = intensity_envelope(config.test_pulse, config.delays_fs[i]);
    fractions[i] = config.profile.fraction_at(env_sq[i]);
  }

  std::vector<std::vector<ScalingPoint>> per_window(config.windows.size());
  for (auto& v : per_window) v.reserve(grid.size());

  for (std::size_t e = 0; e < grid.size(); ++e) {
    ScanSpec spec;
    spec.test_pulse = config.test_pulse;
    spec.sampling_pulse = config.sampling_pulse;
    spec.test_kind = DistKind::Mixture;
    spec.coherent_fraction = config.profile.a0;
    spec.peak_mean_photons = grid[e];
    spec.sampling_dist = config.sampling_dist;
    spec.det = config.det;
    spec.det.seed = derive_seed(config.det.seed, e, SeedTag::EnergyPoint);
    spec.noise_floor = config.noise_floor;
    const ScanResult scan = simulate_scan(spec, config.delays_fs, fractions);

    for (std::size_t w = 0; w < config.windows.size(); ++w) {
      double sum_w = 0.0, sum_w_std = 0.0, sum_w_n = 0.0, sum_sq = 0.0;
      for (std::size_t i = 0; i < n_delays; ++i) {
        const double weight = window_weight(config.windows[w], config.delays_fs[i]);
        const double wm = scan.mean_signal[i] * weight;
        sum_sq += wm * wm;
        sum_w += weight;
        sum_w_std += weight * scan.std_signal[i];
        sum_w_n += weight * grid[e] * env_sq[i];
      }
      ScalingPoint pt;
      pt.mean_photons = sum_w_n / sum_w;
      pt.raw_mean = std::sqrt(sum_sq / static_cast<double>(n_delays));
      pt.raw_std = sum_w_std / sum_w;
      per_window[w].push_back(pt);
    }
  }

  std::vector<WindowCurve> out;
  out.reserve(config.windows.size());
  for (std::size_t w = 0; w < config.windows.size(); ++w) {
    std::sort(per_window[w].begin(), per_window[w].end(),
              [](const ScalingPoint& a, const ScalingPoint& b) {
                return a.mean_photons < b.mean_photons;
              });
    apply_normalization(per_window[w], 0.5);
    WindowCurve wc;
    wc.window = config.windows[w];
    wc.curve = {per_window[w], per_window[w].back().mean_photons};
    wc.a_hat = config.estimate_fraction
                   ? estimate_mixture_fraction(wc.curve, config.sampling_dist, config.tail_epsilon)
                   : std::numeric_limits<double>::quiet_NaN();
    out.push_back(std::move(wc));
  }
  return out;
}

double estimate_mixture_fraction(const ScalingCurve& observed, const PhotonDistribution& sampling,
                                 double tail_epsilon) {
  const auto& pts = observed.points;
  if (pts.size() < 5) throw ConfigError("mixture estimation needs >= 5 grid points");
  if (!(pts.front().mean_photons < 1.0 && pts.back().mean_photons > 1.0))
    throw ConfigError("mixture estimation needs a grid spanning <n> = 1");
  bool any_std = false;
  for (const ScalingPoint& p : pts) any_std = any_std || p.norm_std > 0.0;
  if (!any_std)
    throw NumericError("mixture estimation: observed curve has no deviation signal");

  const SqrtMoments sm = min_pair_sqrt_moments(sampling, tail_epsilon);
  const std::size_t n = pts.size();
  std::vector<double> p1(n), p2(n), b1(n), b2(n);  // component sqrt-moments per point
  for (std::size_t i = 0; i < n; ++i) {
    const SqrtMoments mp = sqrt_moments(poisson(pts[i].mean_photons), tail_epsilon);
    const SqrtMoments mb = sqrt_moments(bose_einstein(pts[i].mean_photons), tail_epsilon);
    p1[i] = mp[1];
    p2[i] = mp[2];
    b1[i] = mb[1];
    b2[i] = mb[2];
  }

  double best_a = 0.0;
  double best_sse = std::numeric_limits<double>::infinity();
  std::vector<double> sigma(n);
  for (int ai = 0; ai <= 100; ++ai) {
    const double a = static_cast<double>(ai) / 100.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t1 = a * p1[i] + (1.0 - a) * b1[i];
      const double t2 = a * p2[i] + (1.0 - a) * b2[i];
      const double m1 = 2.0 * sm[1] * t1;
      const double m2 = 4.0 * sm[2] * t2;
      sigma[i] = std::sqrt(std::max(0.0, m2 - m1 * m1));
    }
    const double anchor = sigma.back();
    if (!(anchor > 0.0)) continue;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = pts[i].norm_std - sigma[i] / anchor;
      sse += diff * diff;
    }
    if (sse <= best_sse) {  // ties resolve toward larger A
      best_sse = sse;
      best_a = a;
    }
  }
  return best_a;
}

}  // namespace qfs

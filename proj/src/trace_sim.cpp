#include "qfs/trace_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "qfs/errors.hpp"
#include "qfs/parallel.hpp"
#include "qfs/stats.hpp"

namespace qfs {
namespace {

struct Fnv1a {
  std::uint64_t state = 0xcbf29ce484222325ULL;
  void feed_bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state ^= p[i];
      state *= 0x100000001b3ULL;
    }
  }
  void feed(double v) { feed_bytes(&v, sizeof v); }
  void feed(std::uint64_t v) { feed_bytes(&v, sizeof v); }
  void feed(int v) { feed_bytes(&v, sizeof v); }
  void feed(bool v) { feed(static_cast<int>(v)); }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state));
    return buf;
  }
};

std::string make_digest(const ScanSpec& spec, std::span<const double> delays,
                        std::span<const double> fractions) {
  Fnv1a h;
  h.feed(spec.test_pulse.carrier_freq_phz);
  h.feed(spec.test_pulse.fwhm_fs);
  h.feed(spec.test_pulse.field_amplitude);
  h.feed(spec.test_pulse.cep_rad);
  h.feed(spec.test_pulse.cep_stable);
  h.feed(spec.sampling_pulse.carrier_freq_phz);
  h.feed(spec.sampling_pulse.fwhm_fs);
  h.feed(spec.sampling_pulse.field_amplitude);
  h.feed(spec.sampling_pulse.cep_rad);
  h.feed(spec.sampling_pulse.cep_stable);
  h.feed(static_cast<int>(spec.test_kind));
  h.feed(spec.coherent_fraction);
  h.feed(spec.peak_mean_photons);
  h.feed(static_cast<int>(spec.sampling_dist.kind));
  h.feed(spec.sampling_dist.mean);
  h.feed(spec.sampling_dist.coherent_fraction);
  h.feed(spec.det.lo_order);
  h.feed(spec.det.mix_order);
  h.feed(spec.det.detection_freq_phz);
  h.feed(spec.det.classical_noise);
  h.feed(spec.det.shots_per_point);
  h.feed(spec.det.seed);
  h.feed(spec.noise_floor);
  h.feed(static_cast<std::uint64_t>(delays.size()));
  for (double d : delays) h.feed(d);
  h.feed(static_cast<std::uint64_t>(fractions.size()));
  for (double f : fractions) h.feed(f);
  return h.hex();
}

void require_sorted(std::span<const double> delays) {
  for (std::size_t i = 1; i < delays.size(); ++i)
    if (delays[i] < delays[i - 1]) throw ConfigError("delays must be sorted ascending");
}

void moving_average(std::vector<double>& values, std::size_t width) {
  if (width <= 1 || values.empty()) return;
  const std::size_t n = values.size();
  const std::size_t left = (width - 1) / 2;
  const std::size_t right = width / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > left ? i - left : 0;
    const std::size_t hi = std::min(n - 1, i + right);
    double acc = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) acc += values[k];
    out[i] = acc / static_cast<double>(hi - lo + 1);
  }
  values = std::move(out);
}

}  // namespace

void ScanSpec::validate() const {
  test_pulse.validate();
  sampling_pulse.validate();
  det.validate();
  sampling_dist.validate();
  if (!(sampling_dist.mean > 0.0)) throw ConfigError("sampling distribution mean must be > 0");
  if (!(peak_mean_photons >= 0.0)) throw ConfigError("peak mean photon number must be >= 0");
  if (!(coherent_fraction >= 0.0 && coherent_fraction <= 1.0))
    throw ConfigError("coherent_fraction must lie in [0, 1]");
  if (!(noise_floor >= 0.0)) throw ConfigError("noise floor must be >= 0");
}

ScanResult simulate_scan(const ScanSpec& spec, std::span<const double> delays) {
  return simulate_scan(spec, delays, {});
}

ScanResult simulate_scan(const ScanSpec& spec, std::span<const double> delays,
                         std::span<const double> coherent_fraction_per_delay) {
  spec.validate();
  if (delays.empty()) throw ConfigError("delay grid is empty");
  require_sorted(delays);
  if (!coherent_fraction_per_delay.empty() &&
      coherent_fraction_per_delay.size() != delays.size())
    throw ConfigError("per-delay coherent fractions must match the delay grid");
  if (spec.det.shots_per_point < 2) throw ConfigError("scan needs shots_per_point >= 2");

  const double omega = 2.0 * std::numbers::pi * spec.det.detection_freq_phz;
  const double residual = cep_phase_residual(spec.det.lo_order, spec.det.mix_order,
                                             spec.sampling_pulse.cep_rad, spec.test_pulse.cep_rad);
  const bool locked_cep = spec.test_pulse.cep_stable && spec.sampling_pulse.cep_stable;

  ScanResult out;
  out.delays_fs.assign(delays.begin(), delays.end());
  out.mean_signal.resize(delays.size());
  out.std_signal.resize(delays.size());

  parallel_for(delays.size(), [&](std::size_t i) {
    const double tau = delays[i];
    Rng rng(derive_seed(spec.det.seed, i, SeedTag::ScanDelay));
    PhotonDistribution test_dist{
        spec.test_kind, spec.peak_mean_photons * intensity_envelope(spec.test_pulse, tau),
        coherent_fraction_per_delay.empty() ? spec.coherent_fraction
                                            : coherent_fraction_per_delay[i]};
    test_dist.validate();
    const double carrier = std::cos(omega * tau + residual);

    RunningStats stats;
    for (std::uint64_t shot = 0; shot < spec.det.shots_per_point; ++shot) {
      ShotDraws d;
      d.sampling_a = sample(spec.sampling_dist, rng);
      d.sampling_b = sample(spec.sampling_dist, rng);
      d.sampling_c = sample(spec.sampling_dist, rng);
      d.test = sample(test_dist, rng);
      const double amp = shot_signal(d);
      double phase_factor = carrier;
      if (!locked_cep) {
        const double delta = std::numbers::pi * (1.0 - 2.0 * rng.uniform());
        phase_factor = std::cos(
            omega * tau + cep_phase_residual(spec.det.lo_order, spec.det.mix_order,
                                             spec.sampling_pulse.cep_rad + delta,
                                             spec.test_pulse.cep_rad + delta));
      }
      double s = amp * phase_factor;
      if (spec.det.classical_noise > 0.0) s *= 1.0 + spec.det.classical_noise * rng.normal();
      if (spec.noise_floor > 0.0) s += spec.noise_floor * rng.normal();
      stats.add(s);
    }
    out.mean_signal[i] = stats.mean;
    out.std_signal[i] = stats.sample_std();
  });

  out.config_digest = make_digest(spec, delays, coherent_fraction_per_delay);
  return out;
}

Spectrum spectrum(const ScanResult& scan, TraceSelect which, std::size_t smooth_points) {
  const std::vector<double>& x =
      which == TraceSelect::Mean ? scan.mean_signal : scan.std_signal;
  const std::size_t n = scan.delays_fs.size();
  if (n < 2 || x.size() != n) throw ConfigError("spectrum needs a scan with >= 2 samples");
  const double dt = scan.delays_fs[1] - scan.delays_fs[0];
  if (!(dt > 0.0)) throw ConfigError("spectrum needs a strictly increasing delay grid");
  for (std::size_t i = 1; i < n; ++i)
    if (std::fabs(scan.delays_fs[i] - scan.delays_fs[i - 1] - dt) > 1e-9 * std::max(1.0, dt))
      throw ConfigError("spectrum needs a uniform delay grid");

  // Twiddle tables; angle reduced exactly via the integer index (k*t) mod n.
  std::vector<double> cos_tab(n), sin_tab(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    cos_tab[r] = std::cos(ang);
    sin_tab[r] = std::sin(ang);
  }

  const std::size_t half = n / 2;
  Spectrum spec;
  spec.freqs_phz.resize(half + 1);
  spec.magnitude.resize(half + 1);
  const double df = 1.0 / (dt * static_cast<double>(n));
  parallel_for(half + 1, [&](std::size_t k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t r = (k * t) % n;
      re += x[t] * cos_tab[r];
      im += x[t] * sin_tab[r];
    }
    spec.freqs_phz[k] = static_cast<double>(k) * df;
    spec.magnitude[k] = std::sqrt(re * re + im * im) / static_cast<double>(n);
  });
  moving_average(spec.magnitude, smooth_points);
  return spec;
}

double spectral_peak_freq(const Spectrum& spec, double min_freq_phz) {
  double best_mag = -1.0;
  double best_freq = 0.0;
  for (std::size_t k = 0; k < spec.freqs_phz.size(); ++k) {
    if (spec.freqs_phz[k] < min_freq_phz) continue;
    if (spec.magnitude[k] > best_mag) {
      best_mag = spec.magnitude[k];
      best_freq = spec.freqs_phz[k];
    }
  }
  if (best_mag < 0.0) throw NumericError("no spectrum bins at or above the frequency cutoff");
  return best_freq;
}

DetectionComparison detection_comparison(DistKind kind, double coherent_fraction,
                                         std::span<const double> mean_grid, std::uint64_t shots,
                                         std::uint64_t seed, const PhotonDistribution& sampling) {
  if (mean_grid.empty()) throw ConfigError("detection comparison: mean grid is empty");
  for (double m : mean_grid)
    if (!(m > 0.0)) throw ConfigError("detection comparison: all grid means must be > 0");
  if (shots < 2) throw ConfigError("detection comparison needs shots >= 2");

  McConfig base;
  base.sampling_dist = sampling;
  base.test_dist = PhotonDistribution{kind, mean_grid.front(), coherent_fraction};
  base.shots = shots;
  base.seed = seed;

  DetectionComparison cmp;
  cmp.field = scaling_sweep(base, mean_grid);

  std::vector<double> grid(mean_grid.begin(), mean_grid.end());
  std::sort(grid.begin(), grid.end());
  std::vector<ScalingPoint> points(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    Rng rng(derive_seed(seed, i, SeedTag::IntensityPoint));
    PhotonDistribution dist{kind, grid[i], coherent_fraction};
    RunningStats stats;
    for (std::uint64_t s = 0; s < shots; ++s)
      stats.add(static_cast<double>(sample(dist, rng)));
    points[i] = {grid[i], stats.mean, stats.sample_std(), 0.0, 0.0};
  });
  apply_normalization(points, 1.0);
  cmp.intensity = {std::move(points), grid.back()};
  return cmp;
}

}  // namespace qfs

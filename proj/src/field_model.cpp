#include "qfs/field_model.hpp"

#include <cmath>
#include <numbers>

#include "qfs/errors.hpp"

namespace qfs {
namespace {

void require_sorted(std::span<const double> delays) {
  for (std::size_t i = 1; i < delays.size(); ++i)
    if (delays[i] < delays[i - 1]) throw ConfigError("delays must be sorted ascending");
}

}  // namespace

void PulseSpec::validate() const {
  if (!(carrier_freq_phz > 0.0)) throw ConfigError("carrier frequency must be > 0");
  if (!(fwhm_fs > 0.0)) throw ConfigError("pulse FWHM must be > 0");
  if (!(field_amplitude >= 0.0)) throw ConfigError("field amplitude must be >= 0");
}

void DetectionSpec::validate() const {
  if (lo_order < 1 || mix_order < 1) throw ConfigError("interaction orders m, n must be >= 1");
  if (!(detection_freq_phz > 0.0)) throw ConfigError("detection frequency must be > 0");
  if (!(classical_noise >= 0.0)) throw ConfigError("classical-noise coefficient must be >= 0");
  if (shots_per_point < 1) throw ConfigError("shots per point must be >= 1");
}

double field_envelope(const PulseSpec& pulse, double delay_fs) {
  const double u = delay_fs / pulse.fwhm_fs;
  return std::exp(-0.5 * kFourLn2 * u * u);
}

double intensity_envelope(const PulseSpec& pulse, double delay_fs) {
  const double u = delay_fs / pulse.fwhm_fs;
  return std::exp(-kFourLn2 * u * u);
}

double cep_phase_residual(int m, int n, double phi_s, double phi_t) {
  const double raw = phi_t - static_cast<double>(m - n + 1) * phi_s;
  double r = std::remainder(raw, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

std::vector<double> heterodyne_trace(const PulseSpec& test, const PulseSpec& sampling,
                                     const DetectionSpec& det, std::span<const double> delays) {
  test.validate();
  sampling.validate();
  det.validate();
  require_sorted(delays);

  const double amp =
      std::pow(sampling.field_amplitude, det.lo_order + det.mix_order - 1) * test.field_amplitude;
  const double residual =
      cep_phase_residual(det.lo_order, det.mix_order, sampling.cep_rad, test.cep_rad);
  const double omega = 2.0 * std::numbers::pi * det.detection_freq_phz;

  std::vector<double> trace(delays.size());
  for (std::size_t i = 0; i < delays.size(); ++i)
    trace[i] = amp * field_envelope(test, delays[i]) * std::cos(omega * delays[i] + residual);
  return trace;
}

std::vector<double> cep_averaged_trace(const PulseSpec& test, const PulseSpec& sampling,
                                       const DetectionSpec& det, std::span<const double> delays,
                                       std::span<const double> cep_offsets) {
  if (cep_offsets.empty()) throw ConfigError("CEP averaging needs at least one offset");
  std::vector<double> avg(delays.size(), 0.0);
  double count = 0.0;
  for (const double delta : cep_offsets) {
    PulseSpec t = test;
    PulseSpec s = sampling;
    t.cep_rad = test.cep_rad + delta;  // locked fluctuation: common offset on both pulses
    s.cep_rad = sampling.cep_rad + delta;
    const std::vector<double> trace = heterodyne_trace(t, s, det, delays);
    count += 1.0;
    for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += (trace[i] - avg[i]) / count;
  }
  return avg;
}

std::vector<double> cep_averaged_trace(const PulseSpec& test, const PulseSpec& sampling,
                                       const DetectionSpec& det, std::span<const double> delays,
                                       std::uint64_t cep_draws, Rng& rng) {
  if (cep_draws < 1) throw ConfigError("CEP averaging needs at least one draw");
  std::vector<double> offsets(cep_draws);
  for (double& d : offsets) d = std::numbers::pi * (1.0 - 2.0 * rng.uniform());
  return cep_averaged_trace(test, sampling, det, delays, offsets);
}

double fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3)
    throw ConfigError("power-law fit needs >= 3 matching points");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw NumericError("power-law fit requires strictly positive values");

  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(sxx > 0.0)) throw NumericError("power-law fit: degenerate abscissa");
  return sxy / sxx;
}

std::vector<double> make_delay_grid(double min_fs, double max_fs, double step_fs) {
  if (!(step_fs > 0.0)) throw ConfigError("delay step must be > 0");
  if (!(max_fs >= min_fs)) throw ConfigError("delay range must satisfy max >= min");
  const std::size_t n = static_cast<std::size_t>((max_fs - min_fs) / step_fs + 1.0 + 1e-9);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = min_fs + static_cast<double>(i) * step_fs;
  return grid;
}

}  // namespace qfs

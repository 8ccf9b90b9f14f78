#include "qfs/photon_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qfs/errors.hpp"

namespace qfs {
namespace {

// log(k!) without touching glibc's signgam: table for small k, Stirling
// series (relative error < 1e-16 for k >= 256) beyond it.
double log_factorial(std::uint64_t k) {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::lgamma(static_cast<double>(i) + 1.0);
    return t;
  }();
  if (k < table.size()) return table[k];
  const double x = static_cast<double>(k);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return x * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi * x) +
         inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0;
}

double log_poisson_pmf(double mean, std::uint64_t n) {
  return static_cast<double>(n) * std::log(mean) - mean - log_factorial(n);
}

// Neumaier-compensated accumulator.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct SeriesWindow {
  std::uint64_t lo = 0;
  std::uint64_t hi = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t cap = 200;
};

// Poisson mass outside mean +- 14 sigma is < 1e-40, far below any permitted
// tail_epsilon, so the window start can treat the left tail as zero.
SeriesWindow poisson_window(double mean) {
  SeriesWindow w;
  const double sigma = std::sqrt(mean);
  w.lo = static_cast<std::uint64_t>(std::max(0.0, std::floor(mean - 14.0 * sigma - 30.0)));
  w.hi = static_cast<std::uint64_t>(std::ceil(mean + 14.0 * sigma + 30.0));
  w.cap = static_cast<std::uint64_t>(std::min(1e18, std::max(10.0 * mean + 50.0, 200.0)));
  return w;
}

// The Bose-Einstein tail decays like exp(-n/mean); reaching a tail mass of
// tail_epsilon needs about (mean+1)*log(1/eps) terms, so the cap scales the
// same way (plus slack for the moment-decay stop rule).
std::uint64_t bose_einstein_cap(double mean, double eps) {
  const double cap = std::max((mean + 1.0) * (std::log(1.0 / eps) + 100.0), 200.0);
  return static_cast<std::uint64_t>(std::min(1e18, cap));
}

struct MomentAccumulator {
  std::array<Kahan, 9> plain{};
  std::array<Kahan, 9> min_pair{};
  Kahan mass{};

  void add(std::uint64_t n, double p) {
    // pmf of min(n1, n2) = S(n)^2 - S(n+1)^2 = p * (S(n) + S(n+1)),
    // with S(n) = 1 - F(n-1) the survival function.
    const double surv = std::max(0.0, 1.0 - mass.value());
    const double surv_next = std::max(0.0, surv - p);
    const double p_min = p * (surv + surv_next);
    const double root = std::sqrt(static_cast<double>(n));
    double power = 1.0;
    for (std::size_t k = 0; k < 9; ++k) {
      plain[k].add(p * power);
      min_pair[k].add(p_min * power);
      power *= root;
    }
    mass.add(p);
  }
};

struct MomentsResult {
  SqrtMoments plain;
  SqrtMoments min_pair;
};

MomentsResult moments_core(const PhotonDistribution& dist, double eps, std::uint64_t max_terms) {
  dist.validate();
  if (!(eps > 0.0) || eps > 1e-6) throw ConfigError("tail_epsilon must lie in (0, 1e-6]");

  MomentsResult out;
  if (dist.mean == 0.0) {
    out.plain.raw[0] = 1.0;
    out.plain.terms = 1;
    out.min_pair.raw[0] = 1.0;
    out.min_pair.terms = 1;
    return out;
  }

  const double mean = dist.mean;
  SeriesWindow window;      // iteration bounds for the law itself
  SeriesWindow pois_part;   // Poisson component window inside a mixture
  double be_term = 0.0;
  double be_q = 0.0;
  switch (dist.kind) {
    case DistKind::Poisson:
      window = poisson_window(mean);
      break;
    case DistKind::BoseEinstein:
      window.cap = bose_einstein_cap(mean, eps);
      be_q = mean / (mean + 1.0);
      be_term = 1.0 / (mean + 1.0);
      break;
    case DistKind::Mixture:
      pois_part = poisson_window(mean);
      window.cap = std::max(pois_part.cap, bose_einstein_cap(mean, eps));
      be_q = mean / (mean + 1.0);
      be_term = 1.0 / (mean + 1.0);
      break;
  }
  const std::uint64_t cap = max_terms > 0 ? max_terms : window.cap;
  const std::uint64_t start = dist.kind == DistKind::Poisson ? window.lo : 0;

  MomentAccumulator acc;
  std::uint64_t terms = 0;
  for (std::uint64_t n = start;; ++n) {
    double p = 0.0;
    switch (dist.kind) {
      case DistKind::Poisson:
        p = std::exp(log_poisson_pmf(mean, n));
        break;
      case DistKind::BoseEinstein:
        p = be_term;
        be_term *= be_q;
        break;
      case DistKind::Mixture: {
        double pp = 0.0;
        if (n >= pois_part.lo && n <= pois_part.hi) pp = std::exp(log_poisson_pmf(mean, n));
        p = dist.coherent_fraction * pp + (1.0 - dist.coherent_fraction) * be_term;
        be_term *= be_q;
        break;
      }
    }
    acc.add(n, p);
    ++terms;

    const double tail = 1.0 - acc.mass.value();
    const double nd = static_cast<double>(n) + 1.0;
    const bool decayed = p * nd * nd * nd * nd <= 1e-17 * (acc.plain[8].value() + 1.0);
    if (static_cast<double>(n) >= mean && tail < eps && decayed) break;
    if (dist.kind == DistKind::Poisson && n >= window.hi) break;
    if (terms >= cap)
      throw NumericError("photon-statistics moment series did not converge within " +
                         std::to_string(cap) + " terms");
  }

  const double tail = std::max(0.0, 1.0 - acc.mass.value());
  for (std::size_t k = 0; k < 9; ++k) {
    out.plain.raw[k] = acc.plain[k].value();
    out.min_pair.raw[k] = acc.min_pair[k].value();
  }
  out.plain.tail_mass = tail;
  out.plain.terms = terms;
  out.min_pair.tail_mass = std::max(0.0, 1.0 - out.min_pair.raw[0]);
  out.min_pair.terms = terms;
  return out;
}

}  // namespace

void PhotonDistribution::validate() const {
  if (!std::isfinite(mean) || mean < 0.0)
    throw ConfigError("photon distribution mean must be finite and >= 0");
  if (!std::isfinite(coherent_fraction) || coherent_fraction < 0.0 || coherent_fraction > 1.0)
    throw ConfigError("coherent_fraction must lie in [0, 1]");
}

std::string_view to_string(DistKind kind) {
  switch (kind) {
    case DistKind::Poisson: return "poisson";
    case DistKind::BoseEinstein: return "bose-einstein";
    case DistKind::Mixture: return "mixture";
  }
  return "unknown";
}

DistKind dist_kind_from_string(std::string_view name) {
  if (name == "poisson") return DistKind::Poisson;
  if (name == "bose-einstein") return DistKind::BoseEinstein;
  if (name == "mixture") return DistKind::Mixture;
  throw ConfigError("unknown distribution kind: " + std::string(name));
}

double pmf(const PhotonDistribution& dist, std::uint64_t count) {
  dist.validate();
  switch (dist.kind) {
    case DistKind::Poisson:
      if (dist.mean == 0.0) return count == 0 ? 1.0 : 0.0;
      return std::exp(log_poisson_pmf(dist.mean, count));
    case DistKind::BoseEinstein: {
      if (dist.mean == 0.0) return count == 0 ? 1.0 : 0.0;
      const double log_q = -std::log1p(1.0 / dist.mean);
      return std::exp(static_cast<double>(count) * log_q - std::log1p(dist.mean));
    }
    case DistKind::Mixture:
      return dist.coherent_fraction * pmf(poisson(dist.mean), count) +
             (1.0 - dist.coherent_fraction) * pmf(bose_einstein(dist.mean), count);
  }
  throw ConfigError("invalid distribution kind");
}

std::uint64_t sample_poisson(double mean, Rng& rng) {
  if (mean <= 0.0) return 0;
  if (mean < 10.0) {
    // Knuth's multiplication of uniforms.
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = rng.uniform_open();
    while (prod > limit) {
      ++k;
      prod *= rng.uniform_open();
    }
    return k;
  }
  // Hoermann's PTRD transformed rejection with squeeze; exact for mean >= 10.
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        k * loglam - mean - log_factorial(static_cast<std::uint64_t>(k)))
      return static_cast<std::uint64_t>(k);
  }
}

std::uint64_t sample_bose_einstein(double mean, Rng& rng) {
  if (mean <= 0.0) return 0;
  // Geometric inversion with success probability 1/(mean+1).
  const double denom = std::log1p(1.0 / mean);
  const double u = rng.uniform();
  return static_cast<std::uint64_t>(std::floor(-std::log1p(-u) / denom));
}

std::uint64_t sample(const PhotonDistribution& dist, Rng& rng) {
  dist.validate();
  switch (dist.kind) {
    case DistKind::Poisson:
      return sample_poisson(dist.mean, rng);
    case DistKind::BoseEinstein:
      return sample_bose_einstein(dist.mean, rng);
    case DistKind::Mixture:
      return rng.uniform() < dist.coherent_fraction ? sample_poisson(dist.mean, rng)
                                                    : sample_bose_einstein(dist.mean, rng);
  }
  throw ConfigError("invalid distribution kind");
}

SqrtMoments sqrt_moments(const PhotonDistribution& dist, double tail_epsilon,
                         std::uint64_t max_terms) {
  return moments_core(dist, tail_epsilon, max_terms).plain;
}

SqrtMoments min_pair_sqrt_moments(const PhotonDistribution& dist, double tail_epsilon,
                                  std::uint64_t max_terms) {
  return moments_core(dist, tail_epsilon, max_terms).min_pair;
}

MomentSummary exact_moments(const PhotonDistribution& dist, double tail_epsilon) {
  const SqrtMoments m = sqrt_moments(dist, tail_epsilon);
  MomentSummary s;
  s.mean_sqrt_n = m[1];
  s.var_sqrt_n = std::max(0.0, m[2] - m[1] * m[1]);
  s.mean_n = m[2];
  s.var_n = std::max(0.0, m[4] - m[2] * m[2]);
  return s;
}

double energy_to_mean_photons(double pulse_energy_j, double wavelength_m) {
  if (!(wavelength_m > 0.0)) throw ConfigError("wavelength must be > 0");
  if (!(pulse_energy_j >= 0.0)) throw ConfigError("pulse energy must be >= 0");
  const double photon_energy = constants::kPlanck * constants::kLightSpeed / wavelength_m;
  return pulse_energy_j / photon_energy;
}

double wavelength_nm_to_phz(double wavelength_nm) {
  if (!(wavelength_nm > 0.0)) throw ConfigError("wavelength must be > 0");
  return constants::kLightSpeed / (wavelength_nm * 1e-9) * 1e-15;
}

}  // namespace qfs

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "qfs/rng.hpp"

namespace qfs {

namespace constants {
inline constexpr double kPlanck = 6.62607015e-34;   // J s (CODATA)
inline constexpr double kLightSpeed = 299792458.0;  // m/s (exact)
}  // namespace constants

enum class DistKind { Poisson, BoseEinstein, Mixture };

std::string_view to_string(DistKind kind);
DistKind dist_kind_from_string(std::string_view name);

/// Photon-number law with mean <n>: Poisson (coherent light), Bose-Einstein
/// (thermal light), or the convex mixture A*Poisson + (1-A)*BoseEinstein.
struct PhotonDistribution {
  DistKind kind = DistKind::Poisson;
  double mean = 0.0;
  double coherent_fraction = 1.0;  // A; only meaningful for Mixture

  void validate() const;  // throws ConfigError
};

inline PhotonDistribution poisson(double mean) { return {DistKind::Poisson, mean, 1.0}; }
inline PhotonDistribution bose_einstein(double mean) { return {DistKind::BoseEinstein, mean, 0.0}; }
inline PhotonDistribution mixture(double mean, double coherent_fraction) {
  return {DistKind::Mixture, mean, coherent_fraction};
}

/// First two moments of n and sqrt(n) under a photon-number law.
struct MomentSummary {
  double mean_sqrt_n = 0.0;
  double var_sqrt_n = 0.0;
  double mean_n = 0.0;
  double var_n = 0.0;
};

/// Half-integer raw moments E[n^(k/2)] for k = 0..8, obtained by direct
/// truncated summation of the PMF, plus truncation diagnostics.
struct SqrtMoments {
  std::array<double, 9> raw{};
  double tail_mass = 0.0;    // PMF mass left beyond the truncation window
  std::uint64_t terms = 0;   // series terms actually summed
  double operator[](std::size_t k) const { return raw[k]; }
};

/// P(n = count) under the law.
double pmf(const PhotonDistribution& dist, std::uint64_t count);

/// One photon count distributed per pmf(). Mixture draws the component first
/// (probability A for Poisson), then samples it.
std::uint64_t sample(const PhotonDistribution& dist, Rng& rng);

/// Truncated-series moments of the law itself. Summation stops once the
/// remaining tail mass is below tail_epsilon (and the running terms have
/// decayed enough not to move the highest moment); it fails with NumericError
/// if the configured term cap is hit first. tail_epsilon must be in (0, 1e-6].
/// max_terms = 0 selects the per-law default cap.
SqrtMoments sqrt_moments(const PhotonDistribution& dist, double tail_epsilon,
                         std::uint64_t max_terms = 0);

/// Same, for min(n1, n2) of two independent draws from the same law.
SqrtMoments min_pair_sqrt_moments(const PhotonDistribution& dist, double tail_epsilon,
                                  std::uint64_t max_terms = 0);

MomentSummary exact_moments(const PhotonDistribution& dist, double tail_epsilon);

/// <n> = pulse energy / (h c / wavelength).
double energy_to_mean_photons(double pulse_energy_j, double wavelength_m);
double wavelength_nm_to_phz(double wavelength_nm);

/// Standard 11-point test-pulse sweep grid (<n> values) of the oscillator
/// scenario, with the matching pulse energies in zeptojoules at 1030 nm.
inline constexpr std::array<double, 11> kStandardSweepMeans = {
    0.0165, 0.033, 0.0702, 0.1363, 0.2766, 0.5491,
    1.1024, 2.1924, 4.3848, 8.8357, 17.5062};
inline constexpr std::array<double, 11> kStandardSweepEnergiesZj = {
    3.19, 6.37, 13.54, 26.28, 53.35, 105.91,
    212.61, 422.83, 845.65, 1704.0, 3376.2};

// Samplers behind sample(); exposed for direct testing.
std::uint64_t sample_poisson(double mean, Rng& rng);
std::uint64_t sample_bose_einstein(double mean, Rng& rng);

}  // namespace qfs

#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "qfs/gabor_analysis.hpp"
#include "qfs/ghost_mc.hpp"
#include "qfs/trace_sim.hpp"

namespace qfs {

// Emitted CSV schemas. Files use '.' decimals and LF line endings, no locale
// dependence; identical inputs produce byte-identical files.
inline constexpr const char* kScalingCsvHeader =
    "mean_photons,raw_mean,raw_std,norm_mean,norm_std,kind,coherent_fraction,shots,seed";
inline constexpr const char* kScanCsvHeader = "delay_fs,mean_signal,std_signal";
inline constexpr const char* kSpectrumCsvHeader = "freq_phz,magnitude";
inline constexpr const char* kGaborCsvHeader =
    "window_label,window_center_fs,mean_photons,norm_mean,norm_std,a_hat";

std::string fmt_double(double v);

/// One scaling curve plus the configuration columns repeated on each row.
/// Analytic (oracle) curves are written with shots = 0.
struct ScalingCsvEntry {
  ScalingCurve curve;
  DistKind kind = DistKind::Poisson;
  double coherent_fraction = 1.0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};

void write_scaling_csv(const std::filesystem::path& path,
                       std::span<const ScalingCsvEntry> entries);
void write_scan_csv(const std::filesystem::path& path, const ScanResult& scan);
ScanResult read_scan_csv(const std::filesystem::path& path);
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);
void write_gabor_csv(const std::filesystem::path& path, std::span<const WindowCurve> curves);

}  // namespace qfs

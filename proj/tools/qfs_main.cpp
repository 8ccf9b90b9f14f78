// qfs: photon-statistics simulator for balanced-heterodyne field sampling.
//
// Subcommands: scaling, trace, spectrum, intrapulse, compare, cep-check.
// Every run writes the requested CSVs plus a run.json manifest with the fully
// resolved configuration; rerunning a manifest's configuration reproduces the
// CSVs byte for byte. Exit codes: 0 success, 2 invalid configuration,
// 3 numeric failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qfs/csv_io.hpp"
#include "qfs/errors.hpp"
#include "qfs/field_model.hpp"
#include "qfs/gabor_analysis.hpp"
#include "qfs/ghost_mc.hpp"
#include "qfs/photon_stats.hpp"
#include "qfs/svg_plot.hpp"
#include "qfs/trace_sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  bool plots = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Base random seed")->capture_default_str();
  cmd->add_flag("--plots", c.plots, "Also emit SVG line plots");
  cmd->set_config("--config", "", "Flat key=value config file; flags override file values");
  cmd->allow_config_extras(false);
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw qfs::ConfigError("log grid needs 0 < lo < hi and n >= 2");
  std::vector<double> grid(n);
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = std::pow(10.0, llo + (lhi - llo) * static_cast<double>(i) /
                                 static_cast<double>(n - 1));
  return grid;
}

std::vector<double> parse_grid(const std::string& text, const std::string& key) {
  if (text == "paper-table")
    return {qfs::kStandardSweepMeans.begin(), qfs::kStandardSweepMeans.end()};
  if (text == "compare") {
    std::vector<double> grid{qfs::kStandardSweepMeans.begin(), qfs::kStandardSweepMeans.end()};
    grid.insert(grid.end(), {1.0, 100.0, 1000.0, 5000.0, 10000.0});
    return grid;
  }
  std::vector<double> grid;
  try {
    if (text.rfind("log:", 0) == 0) {
      const std::string spec = text.substr(4);
      const auto c1 = spec.find(':');
      const auto c2 = spec.find(':', c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos) throw std::invalid_argument(text);
      grid = logspace(std::stod(spec.substr(0, c1)), std::stod(spec.substr(c1 + 1, c2 - c1 - 1)),
                      std::stoul(spec.substr(c2 + 1)));
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    }
  } catch (const qfs::ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw qfs::ConfigError(key + ": cannot parse grid '" + text + "'");
  }
  if (grid.empty()) throw qfs::ConfigError(key + ": empty grid");
  return grid;
}

std::vector<qfs::GaborWindow> parse_windows(const std::string& text, double pulse_fwhm_fs) {
  if (text == "auto") return qfs::default_windows(pulse_fwhm_fs);
  std::vector<qfs::GaborWindow> windows;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto c1 = item.find(':');
    const auto c2 = item.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw qfs::ConfigError("--windows: expected label:center_fs:fwhm_fs, got '" + item + "'");
    try {
      windows.push_back({std::stod(item.substr(c1 + 1, c2 - c1 - 1)),
                         std::stod(item.substr(c2 + 1)), item.substr(0, c1)});
    } catch (const std::exception&) {
      throw qfs::ConfigError("--windows: cannot parse '" + item + "'");
    }
  }
  if (windows.empty()) throw qfs::ConfigError("--windows: no windows given");
  return windows;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const std::vector<std::string>& files) {
  json j;
  j["tool"] = "qfs";
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = config;
  j["files"] = files;
  std::ofstream out(dir / "run.json", std::ios::binary);
  if (!out) throw qfs::ConfigError("cannot write manifest in " + dir.string());
  out << j.dump(2) << '\n';
}

json common_json(const CommonOpts& c) {
  return json{{"out_dir", c.out_dir}, {"seed", c.seed}, {"plots", c.plots}};
}

// ---------------------------------------------------------------------------
// scaling

struct ScalingOpts {
  CommonOpts common;
  std::string kind = "poisson";
  double coherent_fraction = 1.0;
  std::string grid = "paper-table";
  std::uint64_t shots = 10000;
  double sampling_mean = 1e6;
  bool with_oracle = false;
  std::string preset;
};

int run_scaling(const ScalingOpts& o) {
  const std::vector<double> grid = parse_grid(o.grid, "--grid");
  fs::create_directories(o.common.out_dir);

  std::vector<std::pair<qfs::DistKind, double>> kinds;
  bool with_oracle = o.with_oracle;
  if (o.preset == "fig3") {
    kinds = {{qfs::DistKind::Poisson, 1.0},
             {qfs::DistKind::BoseEinstein, 0.0},
             {qfs::DistKind::Mixture, 0.5}};
    with_oracle = true;
  } else {
    kinds = {{qfs::dist_kind_from_string(o.kind), o.coherent_fraction}};
  }

  std::vector<qfs::ScalingCsvEntry> mc_entries, oracle_entries;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    qfs::McConfig cfg;
    cfg.sampling_dist = qfs::poisson(o.sampling_mean);
    cfg.test_dist = {kinds[k].first, grid.front(), kinds[k].second};
    cfg.shots = o.shots;
    cfg.seed = kinds.size() > 1 ? qfs::derive_seed(o.common.seed, k, qfs::SeedTag::Ensemble)
                                : o.common.seed;
    mc_entries.push_back({qfs::scaling_sweep(cfg, grid), kinds[k].first, kinds[k].second,
                          o.shots, o.common.seed});
    if (with_oracle)
      oracle_entries.push_back({qfs::model_curve_oracle(kinds[k].first, kinds[k].second, grid,
                                                        cfg.sampling_dist),
                                kinds[k].first, kinds[k].second, 0, o.common.seed});
  }

  const fs::path dir = o.common.out_dir;
  std::vector<std::string> files{"scaling.csv"};
  qfs::write_scaling_csv(dir / "scaling.csv", mc_entries);
  if (with_oracle) {
    qfs::write_scaling_csv(dir / "scaling_oracle.csv", oracle_entries);
    files.push_back("scaling_oracle.csv");
  }
  if (o.common.plots) {
    std::vector<qfs::PlotSeries> mean_series, std_series;
    for (const auto& e : mc_entries) {
      qfs::PlotSeries sm{std::string(to_string(e.kind)) + " mean", {}, {}};
      qfs::PlotSeries ss{std::string(to_string(e.kind)) + " std", {}, {}};
      for (const auto& p : e.curve.points) {
        sm.x.push_back(p.mean_photons);
        sm.y.push_back(p.norm_mean);
        ss.x.push_back(p.mean_photons);
        ss.y.push_back(p.norm_std);
      }
      mean_series.push_back(std::move(sm));
      std_series.push_back(std::move(ss));
    }
    qfs::write_line_plot(dir / "scaling_mean.svg", "normalized mean signal", "mean photons",
                         "norm_mean", mean_series, true);
    qfs::write_line_plot(dir / "scaling_std.svg", "normalized standard deviation",
                         "mean photons", "norm_std", std_series, true);
    files.push_back("scaling_mean.svg");
    files.push_back("scaling_std.svg");
  }

  json cfg = common_json(o.common);
  cfg["kind"] = o.kind;
  cfg["coherent_fraction"] = o.coherent_fraction;
  cfg["grid"] = o.grid;
  cfg["shots"] = o.shots;
  cfg["sampling_mean"] = o.sampling_mean;
  cfg["with_oracle"] = with_oracle;
  cfg["preset"] = o.preset;
  write_manifest(dir, "scaling", cfg, files);
  return 0;
}

// ---------------------------------------------------------------------------
// trace

struct TraceOpts {
  CommonOpts common;
  double wavelength_nm = 1030.0;
  double carrier_phz = 0.0;    // 0: derived from wavelength
  double detection_phz = 0.0;  // 0: same as carrier
  double fwhm_fs = 150.0;
  double peak_mean = 1.0;
  std::string kind = "poisson";
  double coherent_fraction = 1.0;
  double cep_test = 0.0;
  double cep_sampling = 0.0;
  bool cep_unstable = false;
  int m = 2;
  int n = 2;
  double kappa = 0.05;
  double noise_floor = 0.0;
  double sampling_mean = 1e6;
  std::uint64_t shots = 10000;
  double delay_min = -300.0;
  double delay_max = 300.0;
  double delay_step = 0.5;
  std::size_t smooth = 0;
  std::string preset;
};

qfs::ScanSpec make_scan_spec(const TraceOpts& o) {
  const double carrier =
      o.carrier_phz > 0.0 ? o.carrier_phz : qfs::wavelength_nm_to_phz(o.wavelength_nm);
  qfs::ScanSpec spec;
  spec.test_pulse.carrier_freq_phz = carrier;
  spec.test_pulse.fwhm_fs = o.fwhm_fs;
  spec.test_pulse.cep_rad = o.cep_test;
  spec.test_pulse.cep_stable = !o.cep_unstable;
  spec.sampling_pulse = spec.test_pulse;
  spec.sampling_pulse.cep_rad = o.cep_sampling;
  spec.test_kind = qfs::dist_kind_from_string(o.kind);
  spec.coherent_fraction = o.coherent_fraction;
  spec.peak_mean_photons = o.peak_mean;
  spec.sampling_dist = qfs::poisson(o.sampling_mean);
  spec.det.lo_order = o.m;
  spec.det.mix_order = o.n;
  spec.det.detection_freq_phz = o.detection_phz > 0.0 ? o.detection_phz : carrier;
  spec.det.classical_noise = o.kappa;
  spec.det.shots_per_point = o.shots;
  spec.det.seed = o.common.seed;
  spec.noise_floor = o.noise_floor;
  return spec;
}

json trace_json(const TraceOpts& o) {
  json cfg = common_json(o.common);
  cfg["wavelength_nm"] = o.wavelength_nm;
  cfg["carrier_phz"] = o.carrier_phz;
  cfg["detection_phz"] = o.detection_phz;
  cfg["fwhm_fs"] = o.fwhm_fs;
  cfg["peak_mean"] = o.peak_mean;
  cfg["kind"] = o.kind;
  cfg["coherent_fraction"] = o.coherent_fraction;
  cfg["cep_test"] = o.cep_test;
  cfg["cep_sampling"] = o.cep_sampling;
  cfg["cep_unstable"] = o.cep_unstable;
  cfg["m"] = o.m;
  cfg["n"] = o.n;
  cfg["kappa"] = o.kappa;
  cfg["noise_floor"] = o.noise_floor;
  cfg["sampling_mean"] = o.sampling_mean;
  cfg["shots"] = o.shots;
  cfg["delay_min"] = o.delay_min;
  cfg["delay_max"] = o.delay_max;
  cfg["delay_step"] = o.delay_step;
  cfg["smooth"] = o.smooth;
  cfg["preset"] = o.preset;
  return cfg;
}

int run_trace(const TraceOpts& o) {
  const qfs::ScanSpec spec = make_scan_spec(o);
  const std::vector<double> delays = qfs::make_delay_grid(o.delay_min, o.delay_max, o.delay_step);
  const qfs::ScanResult scan = qfs::simulate_scan(spec, delays);
  const qfs::Spectrum mean_spec = qfs::spectrum(scan, qfs::TraceSelect::Mean, o.smooth);
  const qfs::Spectrum std_spec = qfs::spectrum(scan, qfs::TraceSelect::Std, o.smooth);

  const fs::path dir = o.common.out_dir;
  fs::create_directories(dir);
  qfs::write_scan_csv(dir / "scan.csv", scan);
  qfs::write_spectrum_csv(dir / "spectrum_mean.csv", mean_spec);
  qfs::write_spectrum_csv(dir / "spectrum_std.csv", std_spec);
  std::vector<std::string> files{"scan.csv", "spectrum_mean.csv", "spectrum_std.csv"};
  if (o.common.plots) {
    const std::vector<qfs::PlotSeries> scan_series{
        {"mean", scan.delays_fs, scan.mean_signal}, {"std", scan.delays_fs, scan.std_signal}};
    qfs::write_line_plot(dir / "scan.svg", "delay scan", "delay (fs)", "signal", scan_series);
    const std::vector<qfs::PlotSeries> sp{{"mean", mean_spec.freqs_phz, mean_spec.magnitude},
                                          {"std", std_spec.freqs_phz, std_spec.magnitude}};
    qfs::write_line_plot(dir / "spectrum.svg", "scan spectra", "frequency (PHz)", "magnitude",
                         sp);
    files.push_back("scan.svg");
    files.push_back("spectrum.svg");
  }

  json cfg = trace_json(o);
  cfg["config_digest"] = scan.config_digest;
  write_manifest(dir, "trace", cfg, files);
  return 0;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumOpts {
  CommonOpts common;
  std::string input;
  std::string which = "mean";
  std::size_t smooth = 0;
};

int run_spectrum(const SpectrumOpts& o) {
  const qfs::ScanResult scan = qfs::read_scan_csv(o.input);
  const qfs::Spectrum spec = qfs::spectrum(
      scan, o.which == "std" ? qfs::TraceSelect::Std : qfs::TraceSelect::Mean, o.smooth);
  const fs::path dir = o.common.out_dir;
  fs::create_directories(dir);
  qfs::write_spectrum_csv(dir / "spectrum.csv", spec);
  std::vector<std::string> files{"spectrum.csv"};
  if (o.common.plots) {
    const std::vector<qfs::PlotSeries> sp{{o.which, spec.freqs_phz, spec.magnitude}};
    qfs::write_line_plot(dir / "spectrum.svg", "spectrum", "frequency (PHz)", "magnitude", sp);
    files.push_back("spectrum.svg");
  }
  json cfg = common_json(o.common);
  cfg["input"] = o.input;
  cfg["which"] = o.which;
  cfg["smooth"] = o.smooth;
  write_manifest(dir, "spectrum", cfg, files);
  return 0;
}

// ---------------------------------------------------------------------------
// intrapulse

struct IntrapulseOpts {
  CommonOpts common;
  std::string peak_grid = "log:0.3162:316.23:9";
  std::string energies_zj;
  double wavelength_nm = 1030.0;
  double fwhm_fs = 150.0;
  std::string windows = "auto";
  std::string profile = "intensity-linked";
  double a0 = 1.0;
  double c = 0.5;
  int m = 2;
  int n = 2;
  double kappa = 0.0;
  double sampling_mean = 1e6;
  std::uint64_t shots = 10000;
  double delay_min = -300.0;
  double delay_max = 300.0;
  double delay_step = 1.0;
  std::string preset;
};

int run_intrapulse(const IntrapulseOpts& o) {
  qfs::IntrapulseConfig cfg;
  const double carrier = qfs::wavelength_nm_to_phz(o.wavelength_nm);
  cfg.test_pulse.carrier_freq_phz = carrier;
  cfg.test_pulse.fwhm_fs = o.fwhm_fs;
  cfg.sampling_pulse = cfg.test_pulse;
  cfg.sampling_dist = qfs::poisson(o.sampling_mean);
  cfg.profile.mode = qfs::coherence_mode_from_string(o.profile);
  cfg.profile.a0 = o.a0;
  cfg.profile.c = o.c;
  cfg.det.lo_order = o.m;
  cfg.det.mix_order = o.n;
  cfg.det.detection_freq_phz = carrier;
  cfg.det.classical_noise = o.kappa;
  cfg.det.shots_per_point = o.shots;
  cfg.det.seed = o.common.seed;
  cfg.delays_fs = qfs::make_delay_grid(o.delay_min, o.delay_max, o.delay_step);
  cfg.windows = parse_windows(o.windows, o.fwhm_fs);
  if (!o.energies_zj.empty()) {
    for (double e_zj : parse_grid(o.energies_zj, "--energies-zj"))
      cfg.peak_mean_grid.push_back(
          qfs::energy_to_mean_photons(e_zj * 1e-21, o.wavelength_nm * 1e-9));
  } else {
    cfg.peak_mean_grid = parse_grid(o.peak_grid, "--peak-grid");
  }

  const std::vector<qfs::WindowCurve> curves = qfs::intrapulse_sweep(cfg);
  const fs::path dir = o.common.out_dir;
  fs::create_directories(dir);
  qfs::write_gabor_csv(dir / "gabor.csv", curves);
  std::vector<std::string> files{"gabor.csv"};
  if (o.common.plots) {
    std::vector<qfs::PlotSeries> std_series;
    for (const auto& wc : curves) {
      qfs::PlotSeries s{wc.window.label, {}, {}};
      for (const auto& p : wc.curve.points) {
        s.x.push_back(p.mean_photons);
        s.y.push_back(p.norm_std);
      }
      std_series.push_back(std::move(s));
    }
    qfs::write_line_plot(dir / "gabor_std.svg", "windowed standard-deviation scaling",
                         "mean photons", "norm_std", std_series, true);
    files.push_back("gabor_std.svg");
  }

  json cfg_json = common_json(o.common);
  cfg_json["peak_grid"] = o.peak_grid;
  cfg_json["energies_zj"] = o.energies_zj;
  cfg_json["wavelength_nm"] = o.wavelength_nm;
  cfg_json["fwhm_fs"] = o.fwhm_fs;
  cfg_json["windows"] = o.windows;
  cfg_json["profile"] = o.profile;
  cfg_json["a0"] = o.a0;
  cfg_json["c"] = o.c;
  cfg_json["m"] = o.m;
  cfg_json["n"] = o.n;
  cfg_json["kappa"] = o.kappa;
  cfg_json["sampling_mean"] = o.sampling_mean;
  cfg_json["shots"] = o.shots;
  cfg_json["delay_min"] = o.delay_min;
  cfg_json["delay_max"] = o.delay_max;
  cfg_json["delay_step"] = o.delay_step;
  cfg_json["preset"] = o.preset;
  json window_fits = json::array();
  for (const auto& wc : curves)
    window_fits.push_back({{"label", wc.window.label}, {"a_hat", wc.a_hat}});
  cfg_json["window_fits"] = window_fits;
  write_manifest(dir, "intrapulse", cfg_json, files);
  return 0;
}

// ---------------------------------------------------------------------------
// compare

struct CompareOpts {
  CommonOpts common;
  std::string kind = "poisson";
  double coherent_fraction = 1.0;
  std::string grid = "compare";
  std::uint64_t shots = 100000;
  double sampling_mean = 1e6;
  std::string preset;
};

int run_compare(const CompareOpts& o) {
  const std::vector<double> grid = parse_grid(o.grid, "--grid");
  const qfs::DetectionComparison cmp =
      qfs::detection_comparison(qfs::dist_kind_from_string(o.kind), o.coherent_fraction, grid,
                                o.shots, o.common.seed, qfs::poisson(o.sampling_mean));
  const fs::path dir = o.common.out_dir;
  fs::create_directories(dir);
  const qfs::DistKind kind = qfs::dist_kind_from_string(o.kind);
  const qfs::ScalingCsvEntry field_entry{cmp.field, kind, o.coherent_fraction, o.shots,
                                         o.common.seed};
  const qfs::ScalingCsvEntry intensity_entry{cmp.intensity, kind, o.coherent_fraction, o.shots,
                                             o.common.seed};
  qfs::write_scaling_csv(dir / "compare_field.csv",
                         std::span<const qfs::ScalingCsvEntry>{&field_entry, 1});
  qfs::write_scaling_csv(dir / "compare_intensity.csv",
                         std::span<const qfs::ScalingCsvEntry>{&intensity_entry, 1});
  std::vector<std::string> files{"compare_field.csv", "compare_intensity.csv"};
  if (o.common.plots) {
    std::vector<qfs::PlotSeries> series(2);
    series[0].label = "field";
    series[1].label = "intensity";
    for (const auto& p : cmp.field.points) {
      series[0].x.push_back(p.mean_photons);
      series[0].y.push_back(p.norm_mean);
    }
    for (const auto& p : cmp.intensity.points) {
      series[1].x.push_back(p.mean_photons);
      series[1].y.push_back(p.norm_mean);
    }
    qfs::write_line_plot(dir / "compare.svg", "field vs intensity detection", "mean photons",
                         "norm_mean", series, true);
    files.push_back("compare.svg");
  }

  json cfg = common_json(o.common);
  cfg["kind"] = o.kind;
  cfg["coherent_fraction"] = o.coherent_fraction;
  cfg["grid"] = o.grid;
  cfg["shots"] = o.shots;
  cfg["sampling_mean"] = o.sampling_mean;
  cfg["preset"] = o.preset;
  write_manifest(dir, "compare", cfg, files);
  return 0;
}

// ---------------------------------------------------------------------------
// cep-check

struct CepCheckOpts {
  CommonOpts common;
  double wavelength_nm = 1030.0;
  double fwhm_fs = 150.0;
  double test_amplitude = 1.0;
  double sampling_amplitude = 1.0;
  double cep_test = 0.0;
  double cep_sampling = 0.0;
  int m = 2;
  int n = 2;
  std::uint64_t cep_draws = 10000;
  double delay_min = -300.0;
  double delay_max = 300.0;
  double delay_step = 0.5;
  std::string preset;
};

int run_cep_check(const CepCheckOpts& o) {
  const double carrier = qfs::wavelength_nm_to_phz(o.wavelength_nm);
  qfs::PulseSpec test;
  test.carrier_freq_phz = carrier;
  test.fwhm_fs = o.fwhm_fs;
  test.field_amplitude = o.test_amplitude;
  test.cep_rad = o.cep_test;
  qfs::PulseSpec sampling = test;
  sampling.field_amplitude = o.sampling_amplitude;
  sampling.cep_rad = o.cep_sampling;
  sampling.cep_stable = false;  // averaged trace models the unstabilized run
  qfs::DetectionSpec det;
  det.lo_order = o.m;
  det.mix_order = o.n;
  det.detection_freq_phz = carrier;

  const std::vector<double> delays = qfs::make_delay_grid(o.delay_min, o.delay_max, o.delay_step);
  const std::vector<double> stable = qfs::heterodyne_trace(test, sampling, det, delays);
  qfs::Rng rng(o.common.seed);
  const std::vector<double> averaged =
      qfs::cep_averaged_trace(test, sampling, det, delays, o.cep_draws, rng);

  double stable_peak = 0.0, averaged_peak = 0.0;
  for (double v : stable) stable_peak = std::max(stable_peak, std::fabs(v));
  for (double v : averaged) averaged_peak = std::max(averaged_peak, std::fabs(v));
  const double ratio = stable_peak > 0.0 ? averaged_peak / stable_peak : 0.0;

  const fs::path dir = o.common.out_dir;
  fs::create_directories(dir);
  qfs::ScanResult stable_scan{delays, stable, std::vector<double>(delays.size(), 0.0),
                              "cep-stable"};
  qfs::ScanResult averaged_scan{delays, averaged, std::vector<double>(delays.size(), 0.0),
                                "cep-averaged"};
  qfs::write_scan_csv(dir / "cep_stable.csv", stable_scan);
  qfs::write_scan_csv(dir / "cep_averaged.csv", averaged_scan);
  std::vector<std::string> files{"cep_stable.csv", "cep_averaged.csv"};
  if (o.common.plots) {
    const std::vector<qfs::PlotSeries> series{{"stabilized", delays, stable},
                                              {"averaged", delays, averaged}};
    qfs::write_line_plot(dir / "cep_check.svg", "CEP-stabilized vs CEP-averaged", "delay (fs)",
                         "signal", series);
    files.push_back("cep_check.svg");
  }

  std::cout << "peak ratio (averaged / stabilized) = " << qfs::fmt_double(ratio) << '\n';

  json cfg = common_json(o.common);
  cfg["wavelength_nm"] = o.wavelength_nm;
  cfg["fwhm_fs"] = o.fwhm_fs;
  cfg["test_amplitude"] = o.test_amplitude;
  cfg["sampling_amplitude"] = o.sampling_amplitude;
  cfg["cep_test"] = o.cep_test;
  cfg["cep_sampling"] = o.cep_sampling;
  cfg["m"] = o.m;
  cfg["n"] = o.n;
  cfg["cep_draws"] = o.cep_draws;
  cfg["delay_min"] = o.delay_min;
  cfg["delay_max"] = o.delay_max;
  cfg["delay_step"] = o.delay_step;
  cfg["preset"] = o.preset;
  cfg["peak_ratio"] = ratio;
  write_manifest(dir, "cep-check", cfg, files);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfs: Monte Carlo photon statistics for balanced-heterodyne field sampling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  ScalingOpts scaling;
  CLI::App* scaling_cmd =
      app.add_subcommand("scaling", "Signal statistics versus test-pulse mean photon number");
  add_common(scaling_cmd, scaling.common);
  scaling_cmd->add_option("--kind", scaling.kind, "Test photon statistics")
      ->check(CLI::IsMember({"poisson", "bose-einstein", "mixture"}))
      ->capture_default_str();
  scaling_cmd
      ->add_option("--coherent-fraction", scaling.coherent_fraction,
                   "Mixture coherent fraction A")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  scaling_cmd
      ->add_option("--grid", scaling.grid,
                   "Mean-photon grid: paper-table, compare, log:lo:hi:n, or comma list")
      ->capture_default_str();
  scaling_cmd->add_option("--shots", scaling.shots, "Shots per grid point")
      ->capture_default_str();
  scaling_cmd->add_option("--sampling-mean", scaling.sampling_mean, "Sampling-pulse mean <n>")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scaling_cmd->add_flag("--with-oracle", scaling.with_oracle,
                        "Also emit the closed-form model curve");
  scaling_cmd->add_option("--preset", scaling.preset, "Preset: fig3")
      ->check(CLI::IsMember({"fig3"}));

  TraceOpts trace;
  CLI::App* trace_cmd = app.add_subcommand("trace", "Stochastic delay scan plus its spectra");
  add_common(trace_cmd, trace.common);
  trace_cmd->add_option("--wavelength-nm", trace.wavelength_nm, "Carrier wavelength")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  trace_cmd->add_option("--carrier-phz", trace.carrier_phz, "Carrier frequency override (PHz)");
  trace_cmd->add_option("--detection-phz", trace.detection_phz,
                        "Detection frequency (PHz, default: carrier)");
  trace_cmd->add_option("--fwhm-fs", trace.fwhm_fs, "Intensity-envelope FWHM (fs)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  trace_cmd->add_option("--peak-mean", trace.peak_mean, "Peak test-pulse mean <n>")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  trace_cmd->add_option("--kind", trace.kind, "Test photon statistics")
      ->check(CLI::IsMember({"poisson", "bose-einstein", "mixture"}))
      ->capture_default_str();
  trace_cmd->add_option("--coherent-fraction", trace.coherent_fraction, "Mixture fraction A")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  trace_cmd->add_option("--cep-test", trace.cep_test, "Test-pulse CEP (rad)")
      ->capture_default_str();
  trace_cmd->add_option("--cep-sampling", trace.cep_sampling, "Sampling-pulse CEP (rad)")
      ->capture_default_str();
  trace_cmd->add_flag("--cep-unstable", trace.cep_unstable,
                      "Redraw a common CEP offset every shot");
  trace_cmd->add_option("--m", trace.m, "Local-oscillator order")->capture_default_str();
  trace_cmd->add_option("--n", trace.n, "Mixing order")->capture_default_str();
  trace_cmd->add_option("--kappa", trace.kappa, "Multiplicative classical-noise coefficient")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  trace_cmd->add_option("--noise-floor", trace.noise_floor, "Additive noise floor sigma")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  trace_cmd->add_option("--sampling-mean", trace.sampling_mean, "Sampling-pulse mean <n>")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  trace_cmd->add_option("--shots", trace.shots, "Shots per delay point")->capture_default_str();
  trace_cmd->add_option("--delay-min", trace.delay_min, "Scan start (fs)")->capture_default_str();
  trace_cmd->add_option("--delay-max", trace.delay_max, "Scan end (fs)")->capture_default_str();
  trace_cmd->add_option("--delay-step", trace.delay_step, "Scan step (fs)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  trace_cmd->add_option("--smooth", trace.smooth, "Moving-average width for spectra (points)")
      ->capture_default_str();
  trace_cmd->add_option("--preset", trace.preset, "Preset: figS4 (alias yoctojoule), fig2b")
      ->check(CLI::IsMember({"figS4", "yoctojoule", "fig2b"}));

  SpectrumOpts spectrum_opts;
  CLI::App* spectrum_cmd =
      app.add_subcommand("spectrum", "Fourier magnitude of a stored scan CSV");
  add_common(spectrum_cmd, spectrum_opts.common);
  spectrum_cmd->add_option("--input", spectrum_opts.input, "scan.csv to transform")->required();
  spectrum_cmd->add_option("--which", spectrum_opts.which, "Trace to transform")
      ->check(CLI::IsMember({"mean", "std"}))
      ->capture_default_str();
  spectrum_cmd->add_option("--smooth", spectrum_opts.smooth, "Moving-average width (points)")
      ->capture_default_str();

  IntrapulseOpts intrapulse;
  CLI::App* intrapulse_cmd =
      app.add_subcommand("intrapulse", "Windowed statistics across the pulse profile");
  add_common(intrapulse_cmd, intrapulse.common);
  intrapulse_cmd->add_option("--peak-grid", intrapulse.peak_grid, "Peak-<n> grid per energy")
      ->capture_default_str();
  intrapulse_cmd->add_option("--energies-zj", intrapulse.energies_zj,
                             "Pulse energies in zJ (overrides --peak-grid)");
  intrapulse_cmd->add_option("--wavelength-nm", intrapulse.wavelength_nm, "Carrier wavelength")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  intrapulse_cmd->add_option("--fwhm-fs", intrapulse.fwhm_fs, "Intensity-envelope FWHM (fs)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  intrapulse_cmd
      ->add_option("--windows", intrapulse.windows, "auto or label:center:fwhm[,...] (fs)")
      ->capture_default_str();
  intrapulse_cmd->add_option("--profile", intrapulse.profile, "Coherence profile mode")
      ->check(CLI::IsMember({"constant", "intensity-linked"}))
      ->capture_default_str();
  intrapulse_cmd->add_option("--a0", intrapulse.a0, "Baseline coherent fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  intrapulse_cmd->add_option("--c", intrapulse.c, "Decoherence coefficient")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  intrapulse_cmd->add_option("--m", intrapulse.m, "Local-oscillator order")
      ->capture_default_str();
  intrapulse_cmd->add_option("--n", intrapulse.n, "Mixing order")->capture_default_str();
  intrapulse_cmd->add_option("--kappa", intrapulse.kappa, "Classical-noise coefficient")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  intrapulse_cmd
      ->add_option("--sampling-mean", intrapulse.sampling_mean, "Sampling-pulse mean <n>")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  intrapulse_cmd->add_option("--shots", intrapulse.shots, "Shots per delay point")
      ->capture_default_str();
  intrapulse_cmd->add_option("--delay-min", intrapulse.delay_min, "Scan start (fs)")
      ->capture_default_str();
  intrapulse_cmd->add_option("--delay-max", intrapulse.delay_max, "Scan end (fs)")
      ->capture_default_str();
  intrapulse_cmd->add_option("--delay-step", intrapulse.delay_step, "Scan step (fs)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  intrapulse_cmd->add_option("--preset", intrapulse.preset, "Preset: fig4")
      ->check(CLI::IsMember({"fig4"}));

  CompareOpts compare;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Field detection versus direct photon counting");
  add_common(compare_cmd, compare.common);
  compare_cmd->add_option("--kind", compare.kind, "Test photon statistics")
      ->check(CLI::IsMember({"poisson", "bose-einstein", "mixture"}))
      ->capture_default_str();
  compare_cmd->add_option("--coherent-fraction", compare.coherent_fraction, "Mixture fraction A")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  compare_cmd->add_option("--grid", compare.grid, "Mean-photon grid")->capture_default_str();
  compare_cmd->add_option("--shots", compare.shots, "Shots per grid point")
      ->capture_default_str();
  compare_cmd->add_option("--sampling-mean", compare.sampling_mean, "Sampling-pulse mean <n>")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compare_cmd->add_option("--preset", compare.preset, "Preset: figS3")
      ->check(CLI::IsMember({"figS3"}));

  CepCheckOpts cep;
  CLI::App* cep_cmd =
      app.add_subcommand("cep-check", "Classical CEP-averaging behaviour of a channel");
  add_common(cep_cmd, cep.common);
  cep_cmd->add_option("--wavelength-nm", cep.wavelength_nm, "Carrier wavelength")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cep_cmd->add_option("--fwhm-fs", cep.fwhm_fs, "Intensity-envelope FWHM (fs)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cep_cmd->add_option("--test-amplitude", cep.test_amplitude, "Test field strength")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cep_cmd->add_option("--sampling-amplitude", cep.sampling_amplitude, "Sampling field strength")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cep_cmd->add_option("--cep-test", cep.cep_test, "Test-pulse CEP (rad)")->capture_default_str();
  cep_cmd->add_option("--cep-sampling", cep.cep_sampling, "Sampling-pulse CEP (rad)")
      ->capture_default_str();
  cep_cmd->add_option("--m", cep.m, "Local-oscillator order")->capture_default_str();
  cep_cmd->add_option("--n", cep.n, "Mixing order")->capture_default_str();
  cep_cmd->add_option("--cep-draws", cep.cep_draws, "CEP offsets to average over")
      ->capture_default_str();
  cep_cmd->add_option("--delay-min", cep.delay_min, "Scan start (fs)")->capture_default_str();
  cep_cmd->add_option("--delay-max", cep.delay_max, "Scan end (fs)")->capture_default_str();
  cep_cmd->add_option("--delay-step", cep.delay_step, "Scan step (fs)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cep_cmd->add_option("--preset", cep.preset, "Preset: fig1-cep")
      ->check(CLI::IsMember({"fig1-cep"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*scaling_cmd) return run_scaling(scaling);
    if (*trace_cmd) {
      if (trace.preset == "figS4" || trace.preset == "yoctojoule") {
        if (trace_cmd->count("--peak-mean") == 0) trace.peak_mean = 0.0045;
      } else if (trace.preset == "fig2b") {
        if (trace_cmd->count("--peak-mean") == 0) trace.peak_mean = 6.42e6;
        if (trace_cmd->count("--sampling-mean") == 0) trace.sampling_mean = 3.27e9;
        if (trace_cmd->count("--delay-min") == 0) trace.delay_min = -50.0;
        if (trace_cmd->count("--delay-max") == 0) trace.delay_max = 50.0;
      }
      return run_trace(trace);
    }
    if (*spectrum_cmd) return run_spectrum(spectrum_opts);
    if (*intrapulse_cmd) return run_intrapulse(intrapulse);
    if (*compare_cmd) return run_compare(compare);
    if (*cep_cmd) return run_cep_check(cep);
    return 2;
  } catch (const qfs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const qfs::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

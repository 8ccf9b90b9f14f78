#include "qfs/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qfs/errors.hpp"

namespace qfs {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path.string());
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_scaling_csv(const std::filesystem::path& path,
                       std::span<const ScalingCsvEntry> entries) {
  std::ofstream out = open_out(path);
  out << kScalingCsvHeader << '\n';
  for (const ScalingCsvEntry& e : entries) {
    for (const ScalingPoint& p : e.curve.points) {
      out << fmt_double(p.mean_photons) << ',' << fmt_double(p.raw_mean) << ','
          << fmt_double(p.raw_std) << ',' << fmt_double(p.norm_mean) << ','
          << fmt_double(p.norm_std) << ',' << to_string(e.kind) << ','
          << fmt_double(e.coherent_fraction) << ',' << e.shots << ',' << e.seed << '\n';
    }
  }
}

void write_scan_csv(const std::filesystem::path& path, const ScanResult& scan) {
  std::ofstream out = open_out(path);
  out << kScanCsvHeader << '\n';
  for (std::size_t i = 0; i < scan.delays_fs.size(); ++i)
    out << fmt_double(scan.delays_fs[i]) << ',' << fmt_double(scan.mean_signal[i]) << ','
        << fmt_double(scan.std_signal[i]) << '\n';
}

ScanResult read_scan_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kScanCsvHeader)
    throw ConfigError("unexpected scan CSV header in " + path.string());
  ScanResult scan;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 3)
      throw ConfigError("malformed scan CSV row " + std::to_string(line_no) + " in " +
                        path.string());
    try {
      scan.delays_fs.push_back(std::stod(fields[0]));
      scan.mean_signal.push_back(std::stod(fields[1]));
      scan.std_signal.push_back(std::stod(fields[2]));
    } catch (const std::exception&) {
      throw ConfigError("non-numeric scan CSV row " + std::to_string(line_no) + " in " +
                        path.string());
    }
  }
  if (scan.delays_fs.empty()) throw ConfigError("scan CSV has no data rows: " + path.string());
  scan.config_digest = "loaded:" + path.filename().string();
  return scan;
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
  std::ofstream out = open_out(path);
  out << kSpectrumCsvHeader << '\n';
  for (std::size_t i = 0; i < spectrum.freqs_phz.size(); ++i)
    out << fmt_double(spectrum.freqs_phz[i]) << ',' << fmt_double(spectrum.magnitude[i]) << '\n';
}

void write_gabor_csv(const std::filesystem::path& path, std::span<const WindowCurve> curves) {
  std::ofstream out = open_out(path);
  out << kGaborCsvHeader << '\n';
  for (const WindowCurve& wc : curves) {
    for (const ScalingPoint& p : wc.curve.points) {
      out << wc.window.label << ',' << fmt_double(wc.window.center_fs) << ','
          << fmt_double(p.mean_photons) << ',' << fmt_double(p.norm_mean) << ','
          << fmt_double(p.norm_std) << ',' << fmt_double(wc.a_hat) << '\n';
    }
  }
}

}  // namespace qfs

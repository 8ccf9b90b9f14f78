#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace qfs_test {

inline double binomial_se(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // sample variance, n-1 denominator
};

inline MeanVar sample_mean_var(std::span<const double> xs) {
  MeanVar mv;
  for (double x : xs) mv.mean += x;
  mv.mean /= static_cast<double>(xs.size());
  for (double x : xs) mv.var += (x - mv.mean) * (x - mv.mean);
  mv.var /= static_cast<double>(xs.size() - 1);
  return mv;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool files_identical(const std::string& a, const std::string& b) {
  return read_file(a) == read_file(b) && !read_file(a).empty();
}

}  // namespace qfs_test

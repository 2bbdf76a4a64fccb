#include "invtest/ks.hpp"

#include "invtest/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace invtest {
namespace {

constexpr double kSeriesTol = 1e-17;

// Jacobi-theta form, converges fast for small x.
double kolmogorov_cdf_small(double x) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double sum = 0.0;
  for (int j = 1;; ++j) {
    const double odd = 2.0 * j - 1.0;
    const double term = std::exp(-odd * odd * pi2 / (8.0 * x * x));
    sum += term;
    if (term < kSeriesTol * sum || j > 200) break;
  }
  return std::sqrt(2.0 * std::numbers::pi) / x * sum;
}

// 2 sum (-1)^(j-1) exp(-2 j^2 x^2), converges fast for large x.
double kolmogorov_survival_large(double x) {
  double sum = 0.0;
  for (int j = 1;; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1) ? term : -term;
    if (term < kSeriesTol * std::abs(sum) || term == 0.0 || j > 200) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

constexpr double kSwitch = 1.18;

}  // namespace

Ecdf::Ecdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw InvalidArgument("empirical distribution of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double t) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_two_sample_sorted(std::span<const double> x, std::span<const double> y) {
  const std::size_t n1 = x.size();
  const std::size_t n2 = y.size();
  if (n1 == 0 || n2 == 0) throw InvalidArgument("Kolmogorov-Smirnov statistic of an empty sample");
  // Track |i * n2 - j * n1| in integers so the result is the exact lattice value.
  std::size_t i = 0, j = 0;
  long long best = 0;
  const auto ln1 = static_cast<long long>(n1);
  const auto ln2 = static_cast<long long>(n2);
  while (i < n1 && j < n2) {
    const double t = std::min(x[i], y[j]);
    while (i < n1 && x[i] <= t) ++i;
    while (j < n2 && y[j] <= t) ++j;
    const long long gap = static_cast<long long>(i) * ln2 - static_cast<long long>(j) * ln1;
    best = std::max(best, gap < 0 ? -gap : gap);
  }
  return static_cast<double>(best) / (static_cast<double>(n1) * static_cast<double>(n2));
}

double ks_two_sample(std::span<const double> x, std::span<const double> y) {
  std::vector<double> sx(x.begin(), x.end());
  std::vector<double> sy(y.begin(), y.end());
  std::sort(sx.begin(), sx.end());
  std::sort(sy.begin(), sy.end());
  return ks_two_sample_sorted(sx, sy);
}

double kolmogorov_cdf(double x) {
  if (!(x > 0.0)) return 0.0;
  if (x < kSwitch) return kolmogorov_cdf_small(x);
  return 1.0 - kolmogorov_survival_large(x);
}

double kolmogorov_survival(double x) {
  if (!(x > 0.0)) return 1.0;
  if (x < kSwitch) return 1.0 - kolmogorov_cdf_small(x);
  return kolmogorov_survival_large(x);
}

double kolmogorov_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("Kolmogorov quantile needs p in (0, 1)");
  double lo = 0.0, hi = 1.0;
  while (kolmogorov_cdf(hi) < p) hi *= 2.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ks_critical_value(long n1, long n2, double level) {
  if (n1 < 1 || n2 < 1) throw InvalidArgument("sample sizes must be positive");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must lie in (0, 1)");
  const double scale = std::sqrt(static_cast<double>(n1 + n2) / (static_cast<double>(n1) * n2));
  return kolmogorov_quantile(1.0 - level) * scale;
}

double ks_p_value(double stat, long n1, long n2) {
  if (n1 < 1 || n2 < 1) throw InvalidArgument("sample sizes must be positive");
  const double en = std::sqrt(static_cast<double>(n1) * n2 / static_cast<double>(n1 + n2));
  return kolmogorov_survival(stat * en);
}

}  // namespace invtest

#pragma once

#include <span>
#include <vector>

namespace invtest {

/// Right-continuous empirical distribution function F(t) = #{x_i <= t} / n.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> values);

  double operator()(double t) const;
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted_values() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// sup_t |F_x(t) - F_y(t)|, evaluated exactly at the pooled sample points.
/// Throws InvalidArgument on empty input.
double ks_two_sample(std::span<const double> x, std::span<const double> y);

/// Same statistic for inputs already sorted ascending. O(n1 + n2).
double ks_two_sample_sorted(std::span<const double> x, std::span<const double> y);

/// Limiting Kolmogorov distribution K(x) = 1 - 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2).
double kolmogorov_cdf(double x);

/// 1 - K(x), accurate in the far tail.
double kolmogorov_survival(double x);

/// K^{-1}(p) for p in (0, 1), by bisection.
double kolmogorov_quantile(double p);

/// Asymptotic critical value c with P(KS > c) ~ level:
/// K^{-1}(1 - level) * sqrt((n1 + n2) / (n1 n2)). Conservative-to-liberal
/// error is O(1/sqrt(n)); for small samples prefer exact tables.
double ks_critical_value(long n1, long n2, double level);

/// Asymptotic p-value 1 - K(stat * sqrt(n1 n2 / (n1 + n2))).
double ks_p_value(double stat, long n1, long n2);

}  // namespace invtest

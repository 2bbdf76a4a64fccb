#pragma once

#include "invtest/group_actions.hpp"
#include "invtest/invariance_test.hpp"
#include "invtest/rng.hpp"
#include "invtest/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace invtest {

// ---------------------------------------------------------------------------
// Covariance helpers

/// Unit diagonal, rho everywhere else.
Matrix equicorrelation(int d, double rho);
/// Entry (a, b) = rho^|a - b|.
Matrix toeplitz_ar1(int d, double rho);
/// Throws InvalidArgument if the smallest eigenvalue is below -1e-10.
void require_psd(const Matrix& cov, const std::string& what);

/// Draws rows from N(mean, cov) through a Cholesky factor computed once.
class GaussianSampler {
 public:
  GaussianSampler(Vector mean, const Matrix& cov);
  Matrix draw(long n, Rng& rng) const;
  int dim() const { return static_cast<int>(mean_.size()); }

 private:
  Vector mean_;
  Matrix lower_;
};

// ---------------------------------------------------------------------------
// Scenario generators

/// N(0, (1 - xi) * equicorrelation(rho) + xi * toeplitz_ar1(rho)); exchangeable at xi = 0.
Sample gaussian_mixture_sample(int d, double rho, double xi, long n, Rng& rng);

/// Inverse of the Clayton relation tau = theta / (theta + 2).
double kendall_tau_to_clayton_theta(double tau);

/// C_theta(u, v) = (u^-theta + v^-theta - 1)^(-1/theta).
double clayton_cdf(double theta, double u, double v);

enum class ClaytonVariant { kC1, kC2 };

struct NestedClaytonParams {
  double outer_theta;
  double inner_theta;
};

/// Outer/inner parameters with Kendall's tau 5/12 - xi/60 and 5/12 + xi/60.
NestedClaytonParams nested_clayton_params(double xi);

/// Fully nested three-dimensional Clayton copula sampled with the
/// Marshall-Olkin frailty construction: Gamma(1/theta0) outer frailty and an
/// exponentially tilted stable inner frailty. C1 nests coordinates (2, 3),
/// C2 nests (1, 2). Throws InvalidArgument if theta0 > theta1.
Sample hierarchical_clayton_sample(ClaytonVariant variant, double outer_theta, double inner_theta, long n,
                                   Rng& rng);
Sample hierarchical_clayton_sample(ClaytonVariant variant, int xi, long n, Rng& rng);

/// N(0, equicorrelation(rho)); sign-invariant exchangeable at rho = 0.
Sample sign_invariant_gaussian_sample(int d, double rho, long n, Rng& rng);

/// Three Gaussian curves per observation on t_i = i / grid, i = 1..grid, with
/// mean cos(2 pi t), covariance exp(-|s - t|) within a curve and equal-time
/// cross-correlations (1,2) = 0.5 + delta, (1,3) = 0.5 - delta, (2,3) = 0.5.
/// The joint covariance is the separable R_cross kron K_time.
class FunctionalModel {
 public:
  FunctionalModel(double delta, int grid);
  Sample draw(long n, Rng& rng) const;
  int grid() const { return grid_; }
  const Matrix& covariance() const { return cov_; }

 private:
  int grid_;
  Matrix cov_;
  GaussianSampler sampler_;
};

Sample functional_sample(long n, double delta, int grid, Rng& rng);

// ---------------------------------------------------------------------------
// Power curves

enum class ScenarioKind { kGaussianMixture, kHierarchicalClayton, kSignInvariantGaussian, kFunctional };

struct Scenario {
  ScenarioKind kind = ScenarioKind::kGaussianMixture;
  int dim = 6;
  double rho = 0.5;
  ClaytonVariant variant = ClaytonVariant::kC1;
  long n = 1000;
  int grid = 100;
  /// The swept parameter: xi (mixture, Clayton), rho (sign), delta (functional).
  std::vector<double> params;
};

std::string scenario_name(const Scenario& s);
std::string scenario_param_name(ScenarioKind kind);
/// Default sweeps: xi in {0, .1, .., 1}, xi in {0..7}, rho in {0, .1, .., 1}, delta in {0, .05, .., .3}.
std::vector<double> default_params(ScenarioKind kind);
/// Exchangeable group for every scenario but the sign one (signed
/// permutations); functional groups act on whole curves.
GroupSpec scenario_group(const Scenario& s);
void validate(const Scenario& s);

struct TestSettings {
  Procedure procedure = Procedure::kB;
  double alpha = 0.05;
  int directions = 50;
  int bootstrap = 1000;
  BootstrapScheme scheme = BootstrapScheme::kCentered;
};

struct PowerPoint {
  double param = 0.0;
  int rejections = 0;
  int replicates = 0;
  double rate = 0.0;
  double se = 0.0;
};

struct PowerCurve {
  Scenario scenario;
  TestSettings settings;
  std::uint64_t seed = 0;
  std::vector<PowerPoint> points;
};

/// Runs `replicates` independent tests per sweep value on fresh samples.
/// Replicate r at sweep index p uses derive_seed(seed, {p, r}); results do
/// not depend on `threads`.
PowerCurve power_curve(const Scenario& s, const TestSettings& t, int replicates, std::uint64_t seed,
                       int threads);

/// One test on one fresh sample; the building block of power_curve.
bool simulate_rejection(const Scenario& s, double param, const TestSettings& t, std::uint64_t replicate_seed);

/// CSV columns: param,power,se,replicates,seed
void write_power_curve_csv(std::ostream& os, const PowerCurve& curve);

}  // namespace invtest

#include "invtest/simulate.hpp"

#include "invtest/parallel.hpp"

#include <cmath>
#include <iomanip>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

namespace invtest {
namespace {

void require_unit_interval_open_right(double v, const char* name) {
  if (!(v >= 0.0 && v < 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0, 1)");
}

// Positive stable variate with Laplace transform exp(-s^alpha), 0 < alpha < 1
// (Kanter's representation).
double positive_stable(double alpha, Rng& rng) {
  const double u = std::numbers::pi * rng.uniform_open();
  const double e = rng.exponential();
  const double a = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha);
  const double b = std::pow(std::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
  return a * b;
}

// Variate with Laplace transform exp(-v ((1 + s)^alpha - 1)): the inner
// frailty of a nested Clayton copula given the outer frailty v. Split into
// ceil(v) independent pieces so each rejection step accepts with probability
// at least exp(-1).
double tilted_stable(double alpha, double v, Rng& rng) {
  if (alpha >= 1.0) return v;
  const int pieces = std::max(1, static_cast<int>(std::ceil(v)));
  const double scale = std::pow(v / pieces, 1.0 / alpha);
  double total = 0.0;
  for (int p = 0; p < pieces; ++p) {
    for (;;) {
      const double s = scale * positive_stable(alpha, rng);
      if (rng.uniform() <= std::exp(-s)) {
        total += s;
        break;
      }
    }
  }
  return total;
}

Matrix cross_correlation(double delta) {
  Matrix r(3, 3);
  r << 1.0, 0.5 + delta, 0.5 - delta,
       0.5 + delta, 1.0, 0.5,
       0.5 - delta, 0.5, 1.0;
  return r;
}

Matrix functional_covariance(double delta, int grid) {
  if (grid < 2) throw DimensionError("functional grid must have at least 2 points");
  if (!(delta >= 0.0 && delta < 0.5)) throw InvalidArgument("delta must lie in [0, 0.5)");
  const Matrix r = cross_correlation(delta);
  require_psd(r, "cross-correlation matrix");
  Matrix k(grid, grid);
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b) k(a, b) = std::exp(-std::abs(a - b) / static_cast<double>(grid));
  Matrix cov(3 * grid, 3 * grid);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) cov.block(a * grid, b * grid, grid, grid) = r(a, b) * k;
  return cov;
}

Vector functional_mean(int grid) {
  Vector m(3 * grid);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < grid; ++i)
      m[c * grid + i] = std::cos(2.0 * std::numbers::pi * (i + 1) / static_cast<double>(grid));
  return m;
}

}  // namespace

Matrix equicorrelation(int d, double rho) {
  if (d < 2) throw DimensionError("dimension must be >= 2");
  Matrix m = Matrix::Constant(d, d, rho);
  m.diagonal().setOnes();
  return m;
}

Matrix toeplitz_ar1(int d, double rho) {
  if (d < 2) throw DimensionError("dimension must be >= 2");
  Matrix m(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) m(a, b) = std::pow(rho, std::abs(a - b));
  return m;
}

void require_psd(const Matrix& cov, const std::string& what) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-10) {
    throw InvalidArgument(what + " is not positive semidefinite");
  }
}

GaussianSampler::GaussianSampler(Vector mean, const Matrix& cov) : mean_(std::move(mean)) {
  if (cov.rows() != cov.cols() || cov.rows() != mean_.size()) throw DimensionError("covariance shape mismatch");
  require_psd(cov, "covariance");
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw InvalidArgument("covariance is not positive definite");
  lower_ = llt.matrixL();
}

Matrix GaussianSampler::draw(long n, Rng& rng) const {
  const Eigen::Index d = mean_.size();
  Matrix z(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = rng.normal();
  Matrix x = z * lower_.transpose();
  x.rowwise() += mean_.transpose();
  return x;
}

Sample gaussian_mixture_sample(int d, double rho, double xi, long n, Rng& rng) {
  require_unit_interval_open_right(rho, "rho");
  if (!(xi >= 0.0 && xi <= 1.0)) throw InvalidArgument("xi must lie in [0, 1]");
  const Matrix cov = (1.0 - xi) * equicorrelation(d, rho) + xi * toeplitz_ar1(d, rho);
  return Sample{GaussianSampler(Vector::Zero(d), cov).draw(n, rng), std::nullopt};
}

double kendall_tau_to_clayton_theta(double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw InvalidArgument("Kendall's tau must lie in [0, 1)");
  return 2.0 * tau / (1.0 - tau);
}

double clayton_cdf(double theta, double u, double v) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (theta == 0.0) return u * v;
  const double s = std::pow(u, -theta) + std::pow(v, -theta) - 1.0;
  return std::pow(s, -1.0 / theta);
}

NestedClaytonParams nested_clayton_params(double xi) {
  return {kendall_tau_to_clayton_theta(5.0 / 12.0 - xi / 60.0), kendall_tau_to_clayton_theta(5.0 / 12.0 + xi / 60.0)};
}

Sample hierarchical_clayton_sample(ClaytonVariant variant, double outer_theta, double inner_theta, long n,
                                   Rng& rng) {
  if (!(outer_theta > 0.0)) throw InvalidArgument("Clayton parameters must be positive");
  if (outer_theta > inner_theta) {
    throw InvalidArgument("nesting requires outer theta <= inner theta");
  }
  const double alpha = outer_theta / inner_theta;
  const int outer_col = variant == ClaytonVariant::kC1 ? 0 : 2;
  const int inner_a = variant == ClaytonVariant::kC1 ? 1 : 0;
  const int inner_b = variant == ClaytonVariant::kC1 ? 2 : 1;
  Sample out{Matrix(n, 3), std::nullopt};
  for (long i = 0; i < n; ++i) {
    const double v0 = rng.gamma(1.0 / outer_theta);
    const double v1 = tilted_stable(alpha, v0, rng);
    out.data(i, outer_col) = std::pow(1.0 + rng.exponential() / v0, -1.0 / outer_theta);
    out.data(i, inner_a) = std::pow(1.0 + rng.exponential() / v1, -1.0 / inner_theta);
    out.data(i, inner_b) = std::pow(1.0 + rng.exponential() / v1, -1.0 / inner_theta);
  }
  return out;
}

Sample hierarchical_clayton_sample(ClaytonVariant variant, int xi, long n, Rng& rng) {
  if (xi < 0 || xi > 7) throw InvalidArgument("xi must be an integer in 0..7");
  const auto p = nested_clayton_params(xi);
  return hierarchical_clayton_sample(variant, p.outer_theta, p.inner_theta, n, rng);
}

Sample sign_invariant_gaussian_sample(int d, double rho, long n, Rng& rng) {
  require_unit_interval_open_right(rho, "rho");
  return Sample{GaussianSampler(Vector::Zero(d), equicorrelation(d, rho)).draw(n, rng), std::nullopt};
}

FunctionalModel::FunctionalModel(double delta, int grid)
    : grid_(grid), cov_(functional_covariance(delta, grid)), sampler_(functional_mean(grid), cov_) {}

Sample FunctionalModel::draw(long n, Rng& rng) const {
  return Sample{sampler_.draw(n, rng), FunctionalLayout{3, grid_}};
}

Sample functional_sample(long n, double delta, int grid, Rng& rng) { return FunctionalModel(delta, grid).draw(n, rng); }

std::string scenario_name(const Scenario& s) {
  switch (s.kind) {
    case ScenarioKind::kGaussianMixture: return "gauss";
    case ScenarioKind::kHierarchicalClayton: return s.variant == ClaytonVariant::kC1 ? "clayton-c1" : "clayton-c2";
    case ScenarioKind::kSignInvariantGaussian: return "sign";
    case ScenarioKind::kFunctional: return "functional";
  }
  return "?";
}

std::string scenario_param_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kGaussianMixture:
    case ScenarioKind::kHierarchicalClayton: return "xi";
    case ScenarioKind::kSignInvariantGaussian: return "rho";
    case ScenarioKind::kFunctional: return "delta";
  }
  return "param";
}

std::vector<double> default_params(ScenarioKind kind) {
  std::vector<double> v;
  switch (kind) {
    case ScenarioKind::kGaussianMixture:
    case ScenarioKind::kSignInvariantGaussian:
      for (int i = 0; i <= 10; ++i) v.push_back(i / 10.0);
      break;
    case ScenarioKind::kHierarchicalClayton:
      for (int i = 0; i <= 7; ++i) v.push_back(i);
      break;
    case ScenarioKind::kFunctional:
      for (int i = 0; i <= 6; ++i) v.push_back(i * 0.05);
      break;
  }
  return v;
}

GroupSpec scenario_group(const Scenario& s) {
  switch (s.kind) {
    case ScenarioKind::kGaussianMixture: return permutation_generators(s.dim);
    case ScenarioKind::kHierarchicalClayton: return permutation_generators(3);
    case ScenarioKind::kSignInvariantGaussian: return signed_permutation_generators(s.dim);
    case ScenarioKind::kFunctional: return lift_to_blocks(permutation_generators(3), s.grid);
  }
  throw InvalidArgument("unknown scenario");
}

void validate(const Scenario& s) {
  if (s.n < 2) throw InvalidArgument("scenario sample size must be >= 2");
  if (s.params.empty()) throw InvalidArgument("scenario has no parameter values");
  for (double p : s.params) {
    switch (s.kind) {
      case ScenarioKind::kGaussianMixture:
        require_unit_interval_open_right(s.rho, "rho");
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("xi must lie in [0, 1]");
        break;
      case ScenarioKind::kHierarchicalClayton:
        if (p != std::round(p) || p < 0 || p > 7) throw InvalidArgument("xi must be an integer in 0..7");
        break;
      case ScenarioKind::kSignInvariantGaussian:
        // rho = 1 is singular; the sweep stops short of it.
        require_unit_interval_open_right(p, "rho");
        break;
      case ScenarioKind::kFunctional:
        if (!(p >= 0.0 && p < 0.5)) throw InvalidArgument("delta must lie in [0, 0.5)");
        break;
    }
  }
  if (s.kind != ScenarioKind::kHierarchicalClayton && s.kind != ScenarioKind::kFunctional && s.dim < 2) {
    throw InvalidArgument("dimension must be >= 2");
  }
}

namespace {

Sample draw_scenario(const Scenario& s, double param, const FunctionalModel* model, Rng& rng) {
  switch (s.kind) {
    case ScenarioKind::kGaussianMixture: return gaussian_mixture_sample(s.dim, s.rho, param, s.n, rng);
    case ScenarioKind::kHierarchicalClayton:
      return hierarchical_clayton_sample(s.variant, static_cast<int>(std::lround(param)), s.n, rng);
    case ScenarioKind::kSignInvariantGaussian: return sign_invariant_gaussian_sample(s.dim, param, s.n, rng);
    case ScenarioKind::kFunctional: return model ? model->draw(s.n, rng) : functional_sample(s.n, param, s.grid, rng);
  }
  throw InvalidArgument("unknown scenario");
}

bool run_replicate(const Scenario& s, double param, const GroupSpec& g, const FunctionalModel* model,
                   const TestSettings& t, std::uint64_t replicate_seed) {
  Rng data_rng(derive_seed(replicate_seed, {0}));
  const Sample x = draw_scenario(s, param, model, data_rng);
  const std::uint64_t test_seed = derive_seed(replicate_seed, {1});
  switch (t.procedure) {
    case Procedure::kA: {
      ProcedureAConfig cfg{t.alpha, derive_seed(test_seed, {10}), derive_seed(test_seed, {11}), false};
      return test_procedure_a(x, g, cfg).overall_reject;
    }
    case Procedure::kB: {
      ProcedureBConfig cfg{t.alpha, t.directions, t.bootstrap, test_seed, t.scheme, 1};
      return test_procedure_b(x, g, cfg).overall_reject;
    }
    case Procedure::kPermutationNull: {
      PermutationNullConfig cfg{t.alpha, t.directions, t.bootstrap, test_seed, 1};
      return permutation_null_test(x, g, cfg).overall_reject;
    }
  }
  return false;
}

}  // namespace

bool simulate_rejection(const Scenario& s, double param, const TestSettings& t, std::uint64_t replicate_seed) {
  const GroupSpec g = scenario_group(s);
  return run_replicate(s, param, g, nullptr, t, replicate_seed);
}

PowerCurve power_curve(const Scenario& s, const TestSettings& t, int replicates, std::uint64_t seed, int threads) {
  validate(s);
  if (replicates < 1) throw InvalidArgument("replicates must be >= 1");
  const GroupSpec g = scenario_group(s);
  PowerCurve curve{s, t, seed, {}};
  for (std::size_t p = 0; p < s.params.size(); ++p) {
    const double param = s.params[p];
    std::unique_ptr<FunctionalModel> model;
    if (s.kind == ScenarioKind::kFunctional) model = std::make_unique<FunctionalModel>(param, s.grid);
    std::vector<char> rejected(static_cast<std::size_t>(replicates), 0);
    parallel_for(rejected.size(), threads, [&](std::size_t r) {
      rejected[r] = run_replicate(s, param, g, model.get(), t, derive_seed(seed, {p, r})) ? 1 : 0;
    });
    PowerPoint pt;
    pt.param = param;
    pt.replicates = replicates;
    pt.rejections = static_cast<int>(std::count(rejected.begin(), rejected.end(), 1));
    pt.rate = static_cast<double>(pt.rejections) / replicates;
    pt.se = std::sqrt(pt.rate * (1.0 - pt.rate) / replicates);
    curve.points.push_back(pt);
  }
  return curve;
}

void write_power_curve_csv(std::ostream& os, const PowerCurve& curve) {
  os << "param,power,se,replicates,seed\n";
  for (const auto& pt : curve.points) {
    std::ostringstream line;
    line << std::setprecision(17) << pt.param << ',' << pt.rate << ',' << pt.se << ',' << pt.replicates << ','
         << curve.seed;
    os << line.str() << '\n';
  }
}

}  // namespace invtest

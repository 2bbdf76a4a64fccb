#include "invtest/invariance_test.hpp"
#include "invtest/ks.hpp"
#include "invtest/simulate.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

using namespace invtest;

namespace {

Sample gaussian(long n, int d, Rng& rng, std::vector<double> scales = {}) {
  Matrix x(n, d);
  for (long i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = rng.normal() * (scales.empty() ? 1.0 : scales[static_cast<std::size_t>(j)]);
  }
  return Sample{x, std::nullopt};
}

GroupSpec identity_group(int d) { return GroupSpec("identity", {LinearMap::identity(d)}); }

double brute_d(const Sample& x, const GroupSpec& g, const std::vector<Direction>& dirs) {
  double best = 0.0;
  for (const auto& h : dirs) {
    const Vector a = project(x, h);
    for (const auto& t : g.generators()) {
      const Vector b = project(apply_map(t, x), h);
      best = std::max(best, oracle::ks({a.data(), static_cast<std::size_t>(a.size())},
                                       {b.data(), static_cast<std::size_t>(b.size())}));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("split_sample partitions the rows", "[invariance_test]") {
  Rng data_rng(31);
  const Sample x = gaussian(1000, 2, data_rng);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto [a, b] = split_sample(x, rng);
    REQUIRE(a.rows() + b.rows() == 1000);
    CHECK(std::abs(a.rows() - 500) < 80);
  }
  Rng r1(5), r2(5);
  const auto s1 = split_sample(x, r1);
  const auto s2 = split_sample(x, r2);
  CHECK(s1.first.data == s2.first.data);
  // union of the halves is the input multiset
  Matrix joined(1000, 2);
  joined << s1.first.data, s1.second.data;
  std::vector<double> lhs(joined.data(), joined.data() + joined.size());
  std::vector<double> rhs(x.data.data(), x.data.data() + x.data.size());
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  CHECK(lhs == rhs);
  Rng r3(1);
  const auto tiny = split_sample(Sample{Matrix::Ones(2, 2), std::nullopt}, r3);
  CHECK(tiny.first.rows() == 1);
  CHECK_THROWS_AS(split_sample(Sample{Matrix::Ones(1, 2), std::nullopt}, r3), InvalidArgument);
}

TEST_CASE("D statistic hand example", "[invariance_test]") {
  Sample x{(Matrix(3, 2) << 0, 1, 2, 0, 5, 5).finished(), std::nullopt};
  const std::vector<Direction> e1{Direction{Vector::Unit(2, 0), DirectionKind::kSphere, 0}};
  CHECK(d_statistic(x, permutation_generators(2), e1) == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("D statistic special cases", "[invariance_test]") {
  Rng rng(32);
  const Sample x = gaussian(200, 3, rng);
  const auto dirs = sample_directions_for(x, 20, rng);
  CHECK(d_statistic(x, identity_group(3), dirs) == 0.0);

  // one direction, one generator: the plain KS statistic
  const GroupSpec swap("swap", {permutation_generators(3)[0]});
  const std::vector<Direction> one{dirs[0]};
  const Vector a = project(x, dirs[0]);
  const Vector b = project(apply_map(swap[0], x), dirs[0]);
  CHECK(d_statistic(x, swap, one) == ks_two_sample({a.data(), 200}, {b.data(), 200}));

  // agrees with the brute-force definition
  const GroupSpec g = signed_permutation_generators(3);
  CHECK(d_statistic(x, g, dirs) == brute_d(x, g, dirs));

  // order of directions and generators does not matter
  auto reversed = dirs;
  std::reverse(reversed.begin(), reversed.end());
  auto gens = g.generators();
  std::reverse(gens.begin(), gens.end());
  CHECK(d_statistic(x, GroupSpec("rev", gens), reversed) == d_statistic(x, g, dirs));

  // a sample closed under the generators has D = 0
  Matrix closed(400, 3);
  closed << x.data, apply_map(swap[0], x).data;
  CHECK(d_statistic(Sample{closed, std::nullopt}, swap, dirs) == 0.0);
}

TEST_CASE("D statistic on heavily tied and clustered projections", "[invariance_test]") {
  Rng rng(35);
  Matrix x(300, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = static_cast<double>(rng.below(3));
  std::vector<Direction> dirs = sample_directions_for(Sample{x, std::nullopt}, 6, rng);
  for (int j = 0; j < 3; ++j) dirs.push_back({Vector::Unit(3, j)});
  dirs.push_back({Vector::Constant(3, 1.0 / std::sqrt(3.0))});
  const GroupSpec g = signed_permutation_generators(3);
  CHECK(d_statistic(Sample{x, std::nullopt}, g, dirs) == brute_d(Sample{x, std::nullopt}, g, dirs));

  // one far outlier crowds every other projection into a single bucket
  Matrix y = gaussian(300, 3, rng).data;
  y(7, 1) = 1e12;
  CHECK(d_statistic(Sample{y, std::nullopt}, g, dirs) == brute_d(Sample{y, std::nullopt}, g, dirs));

  const Sample constant{Matrix::Constant(50, 3, 2.5), std::nullopt};
  CHECK(d_statistic(constant, permutation_generators(3), dirs) == 0.0);

  ProcedureBConfig cfg;
  cfg.directions = 4;
  cfg.bootstrap = 8;
  cfg.seed = 78;
  const auto boot = bootstrap_critical_value(Sample{x, std::nullopt}, g, cfg);
  for (std::size_t r = 0; r < 8; ++r) {
    Rng rep(derive_seed(cfg.seed, {1, r}));
    std::vector<int> counts(300, 0);
    for (int i = 0; i < 300; ++i) ++counts[rep.below(300)];
    double expected = 0.0;
    for (const auto& h : sample_directions_for(Sample{x, std::nullopt}, 4, rep)) {
      for (const auto& t : g.generators()) {
        expected = std::max(expected, oracle::centered_gap(x, h.coords, t.transpose_apply(h.coords), counts));
      }
    }
    CHECK(boot.replicates[r] == Catch::Approx(expected).margin(1e-12));
  }
}

TEST_CASE("d_statistic_detail reports the maximizing directions", "[invariance_test]") {
  Rng rng(33);
  const Sample x = gaussian(100, 4, rng, {1, 2, 3, 4});
  const auto dirs = sample_directions_for(x, 15, rng);
  const GroupSpec g = permutation_generators(4);
  const auto detail = d_statistic_detail(x, g, dirs);
  REQUIRE(detail.per_generator.size() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    const GroupSpec single("one", {g[j]});
    CHECK(detail.per_generator[j] == d_statistic(x, single, dirs));
    CHECK(d_statistic(x, single, std::vector<Direction>{dirs[detail.argmax[j]]}) == detail.per_generator[j]);
  }
  CHECK(detail.value == std::max(detail.per_generator[0], detail.per_generator[1]));
}

TEST_CASE("upper quantile convention", "[invariance_test]") {
  std::vector<double> v{5, 1, 4, 2, 3, 10, 9, 8, 7, 6};
  CHECK(upper_quantile(v, 0.1) == 9.0);   // rank ceil(0.9 * 10) = 9
  CHECK(upper_quantile(v, 0.05) == 10.0);  // rank ceil(9.5) = 10
  CHECK(upper_quantile(v, 1e-12) == 10.0);
  CHECK(upper_quantile(v, 0.5) == 5.0);
}

TEST_CASE("centered bootstrap replicates match the ECDF oracle", "[invariance_test]") {
  Rng rng(34);
  const Sample x = gaussian(60, 3, rng, {1, 1.5, 1});
  const GroupSpec g = signed_permutation_generators(3);
  ProcedureBConfig cfg;
  cfg.directions = 4;
  cfg.bootstrap = 12;
  cfg.seed = 77;
  const auto boot = bootstrap_critical_value(x, g, cfg);
  REQUIRE(boot.replicates.size() == 12);
  for (std::size_t r = 0; r < 12; ++r) {
    Rng rep(derive_seed(cfg.seed, {1, r}));
    std::vector<int> counts(60, 0);
    for (int i = 0; i < 60; ++i) ++counts[rep.below(60)];
    const auto dirs = sample_directions_for(x, 4, rep);
    double expected = 0.0;
    for (const auto& h : dirs) {
      for (const auto& t : g.generators()) {
        expected = std::max(expected, oracle::centered_gap(x.data, h.coords, t.transpose_apply(h.coords), counts));
      }
    }
    CHECK(boot.replicates[r] == Catch::Approx(expected).margin(1e-12));
  }
  CHECK(boot.critical_value == upper_quantile(boot.replicates, cfg.alpha));
}

TEST_CASE("plain bootstrap replicates recompute D on the resample", "[invariance_test]") {
  Rng rng(35);
  const Sample x = gaussian(50, 2, rng);
  const GroupSpec g = permutation_generators(2);
  ProcedureBConfig cfg;
  cfg.directions = 3;
  cfg.bootstrap = 8;
  cfg.seed = 78;
  cfg.scheme = BootstrapScheme::kPlain;
  const auto boot = bootstrap_critical_value(x, g, cfg);
  for (std::size_t r = 0; r < 8; ++r) {
    Rng rep(derive_seed(cfg.seed, {1, r}));
    std::vector<Eigen::Index> rows(50);
    for (auto& row : rows) row = static_cast<Eigen::Index>(rep.below(50));
    const auto dirs = sample_directions_for(x, 3, rep);
    const Sample resample{x.data(rows, Eigen::all), std::nullopt};
    CHECK(boot.replicates[r] == brute_d(resample, g, dirs));
  }
}

TEST_CASE("procedure B with the identity group never rejects", "[invariance_test]") {
  Rng rng(36);
  const Sample x = gaussian(100, 3, rng);
  ProcedureBConfig cfg;
  cfg.directions = 5;
  cfg.bootstrap = 50;
  const TestReport r = test_procedure_b(x, identity_group(3), cfg);
  CHECK(r.statistic == 0.0);
  CHECK(r.critical_value >= 0.0);
  CHECK(r.critical_value <= 1.0);
  CHECK_FALSE(r.overall_reject);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("procedure B results do not depend on the thread count", "[invariance_test]") {
  Rng rng(37);
  const Sample x = gaussian(150, 3, rng, {1, 1, 2});
  ProcedureBConfig cfg;
  cfg.directions = 10;
  cfg.bootstrap = 40;
  cfg.seed = 5;
  cfg.threads = 1;
  const auto one = bootstrap_critical_value(x, permutation_generators(3), cfg);
  cfg.threads = 4;
  const auto four = bootstrap_critical_value(x, permutation_generators(3), cfg);
  CHECK(one.replicates == four.replicates);
  const TestReport a = test_procedure_b(x, permutation_generators(3), cfg);
  const TestReport b = test_procedure_b(x, permutation_generators(3), cfg);
  CHECK(a.statistic == b.statistic);
  CHECK(a.critical_value == b.critical_value);
  CHECK(a.p_value == b.p_value);
}

TEST_CASE("procedure B rejects a gross violation and reports per generator", "[invariance_test]") {
  Rng rng(38);
  const Sample x = gaussian(300, 3, rng, {1, 3, 1});
  ProcedureBConfig cfg;
  cfg.directions = 10;
  cfg.bootstrap = 100;
  const TestReport r = test_procedure_b(x, permutation_generators(3), cfg);
  CHECK(r.overall_reject);
  CHECK(r.p_value == 0.0);
  CHECK(r.per_generator.size() == 2);
  CHECK(r.replicates == 100);
  CHECK(r.scheme == BootstrapScheme::kCentered);
}

TEST_CASE("procedure B size on an exchangeable normal pair", "[invariance_test]") {
  // n = 500, l = 10, B = 500, 300 outer replicates.
  const Matrix cov = equicorrelation(2, 0.5);
  const GaussianSampler sampler(Vector::Zero(2), cov);
  const GroupSpec g = permutation_generators(2);
  int rejections = 0;
  const int reps = 300;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(derive_seed(39, {static_cast<std::uint64_t>(rep)}));
    const Sample x{sampler.draw(500, rng), std::nullopt};
    ProcedureBConfig cfg;
    cfg.directions = 10;
    cfg.bootstrap = 500;
    cfg.seed = derive_seed(39, {static_cast<std::uint64_t>(rep), 1});
    rejections += test_procedure_b(x, g, cfg).overall_reject;
  }
  const double size = static_cast<double>(rejections) / reps;
  INFO("empirical size " << size);
  CHECK(size >= 0.03);
  CHECK(size <= 0.08);
}

TEST_CASE("procedure B power grows with n on the Toeplitz alternative", "[invariance_test]") {
  const GroupSpec g = permutation_generators(6);
  std::vector<double> power;
  const int reps = 20;
  for (long n : {200L, 1000L, 5000L}) {
    int rejections = 0;
    for (int rep = 0; rep < reps; ++rep) {
      Rng rng(derive_seed(40, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)}));
      const Sample x = gaussian_mixture_sample(6, 0.5, 1.0, n, rng);
      ProcedureBConfig cfg;
      cfg.directions = 50;
      cfg.bootstrap = 100;
      cfg.seed = rng();
      rejections += test_procedure_b(x, g, cfg).overall_reject;
    }
    power.push_back(static_cast<double>(rejections) / reps);
  }
  INFO("power " << power[0] << " " << power[1] << " " << power[2]);
  for (std::size_t i = 1; i < power.size(); ++i) {
    const double se = std::sqrt((power[i] * (1 - power[i]) + power[i - 1] * (1 - power[i - 1])) / reps);
    CHECK(power[i] >= power[i - 1] - 2 * se);
  }
}

TEST_CASE("procedure A preconditions", "[invariance_test]") {
  Rng rng(41);
  const Sample x = gaussian(100, 2, rng);
  Matrix stretch(2, 2);
  stretch << 2, 0, 0, 1;
  const GroupSpec bad("stretch", {LinearMap(stretch, "diag(2,1)")});
  CHECK_THROWS_WITH(test_procedure_a(x, bad, {}), Catch::Matchers::ContainsSubstring("procedure B"));
  CHECK_THROWS_AS(test_procedure_a(gaussian(19, 2, rng), permutation_generators(2), {}), InvalidArgument);
  CHECK_THROWS_AS(test_procedure_a(x, permutation_generators(3), {}), DimensionError);
  ProcedureAConfig cfg;
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(test_procedure_a(x, permutation_generators(2), cfg), InvalidArgument);
}

TEST_CASE("procedure A report structure", "[invariance_test]") {
  Rng rng(42);
  const Sample x = gaussian(300, 3, rng);
  const TestReport r = test_procedure_a(x, signed_permutation_generators(3), {0.05, 1, 2, false});
  REQUIRE(r.per_generator.size() == 3);
  REQUIRE(r.directions.size() == 3);
  CHECK(*r.n1 + *r.n2 == 300);
  CHECK(r.critical_value == ks_critical_value(*r.n1, *r.n2, 0.05 / 3));
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(r.per_generator[j].directions == std::vector<std::size_t>{j});
    CHECK(r.per_generator[j].reject == (r.per_generator[j].statistic > r.critical_value));
  }
  const TestReport shared = test_procedure_a(x, signed_permutation_generators(3), {0.05, 1, 2, true});
  CHECK(shared.directions.size() == 1);
}

TEST_CASE("procedure A level lies between alpha/k and alpha", "[invariance_test]") {
  const GroupSpec g = signed_permutation_generators(3);
  int rejections = 0;
  const int reps = 2000;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(derive_seed(43, {static_cast<std::uint64_t>(rep)}));
    const Sample x = gaussian(200, 3, rng);
    rejections += test_procedure_a(x, g, {0.05, rng(), rng(), false}).overall_reject;
  }
  const double size = static_cast<double>(rejections) / reps;
  INFO("empirical size " << size);
  CHECK(size >= 0.05 / 3 - 0.012);
  CHECK(size <= 0.05 + 0.012);
}

TEST_CASE("procedure A detects unequal variances", "[invariance_test]") {
  int rejections = 0;
  const int reps = 500;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(derive_seed(44, {static_cast<std::uint64_t>(rep)}));
    const Sample x = gaussian(1000, 2, rng, {1, 3});
    rejections += test_procedure_a(x, permutation_generators(2), {0.05, rng(), rng(), false}).overall_reject;
  }
  // Directions near the swap axis carry no signal; an independent Monte Carlo
  // of one uniform direction with a two-sample KS at 500 vs 500 gives 0.838.
  const double power = static_cast<double>(rejections) / reps;
  INFO("empirical power " << power);
  CHECK(power > 0.838 - 3 * oracle::binomial_se(0.838, reps));
}

TEST_CASE("procedure A with the identity stays within level", "[invariance_test]") {
  int rejections = 0;
  const int reps = 1000;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(derive_seed(45, {static_cast<std::uint64_t>(rep)}));
    const Sample x = gaussian(200, 2, rng);
    rejections += test_procedure_a(x, identity_group(2), {0.05, rng(), rng(), false}).overall_reject;
  }
  const double rate = static_cast<double>(rejections) / reps;
  CHECK(rate <= 0.05 + 3 * oracle::binomial_se(0.05, reps));
}

TEST_CASE("permutation null preconditions", "[invariance_test]") {
  Rng rng(46);
  const Sample u = gaussian(50, 3, rng);
  CHECK_THROWS_AS(permutation_null_test(u, signed_permutation_generators(3), {}), InvalidArgument);
  PermutationNullConfig cfg;
  cfg.replicates = 0;
  CHECK_THROWS_AS(permutation_null_test(u, permutation_generators(3), cfg), InvalidArgument);
}

TEST_CASE("permutation null p-values are valid under exchangeability", "[invariance_test]") {
  std::vector<double> pvalues;
  for (int rep = 0; rep < 200; ++rep) {
    Rng rng(derive_seed(47, {static_cast<std::uint64_t>(rep)}));
    Matrix u(80, 3);
    for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = rng.uniform();
    PermutationNullConfig cfg;
    cfg.directions = 5;
    cfg.replicates = 199;
    cfg.seed = rng();
    pvalues.push_back(*permutation_null_test(Sample{u, std::nullopt}, permutation_generators(3), cfg).p_value);
  }
  // D lives on a lattice, so ties make the >= count super-uniform rather than uniform.
  const double reps = static_cast<double>(pvalues.size());
  for (double alpha : {0.05, 0.1, 0.25, 0.5}) {
    const double share = std::count_if(pvalues.begin(), pvalues.end(), [&](double p) { return p <= alpha; }) / reps;
    INFO("alpha " << alpha << ", share " << share);
    CHECK(share <= alpha + 3 * oracle::binomial_se(alpha, pvalues.size()));
  }
  const double median_share = std::count_if(pvalues.begin(), pvalues.end(), [](double p) { return p <= 0.5; }) / reps;
  CHECK(median_share >= 0.35);
}

TEST_CASE("permutation null p-value uses the >= count", "[invariance_test]") {
  // Columns on disjoint ranges: every permuted replicate looks far less extreme.
  Rng rng(48);
  Matrix u(100, 2);
  for (Eigen::Index i = 0; i < 100; ++i) {
    u(i, 0) = rng.uniform();
    u(i, 1) = 10 + rng.uniform();
  }
  PermutationNullConfig cfg;
  cfg.directions = 5;
  cfg.replicates = 100;
  const TestReport r = permutation_null_test(Sample{u, std::nullopt}, permutation_generators(2), cfg);
  CHECK(r.p_value == 0.0);
  CHECK(r.overall_reject);
  cfg.threads = 3;
  CHECK(permutation_null_test(Sample{u, std::nullopt}, permutation_generators(2), cfg).critical_value ==
        r.critical_value);
}

TEST_CASE("permutation null shuffles whole curves for functional data", "[invariance_test]") {
  // Two curves that differ only by a level shift: exchangeable when permuting curves.
  Rng rng(49);
  Matrix u(60, 8);
  for (Eigen::Index i = 0; i < 60; ++i) {
    const bool flip = rng.coin();
    for (int t = 0; t < 4; ++t) {
      u(i, t) = (flip ? 1.0 : 0.0) + 0.01 * t;
      u(i, 4 + t) = (flip ? 0.0 : 1.0) + 0.01 * t;
    }
  }
  Sample s{u, FunctionalLayout{2, 4}};
  PermutationNullConfig cfg;
  cfg.directions = 3;
  cfg.replicates = 50;
  const TestReport r = permutation_null_test(s, lift_to_blocks(permutation_generators(2), 4), cfg);
  CHECK(r.p_value > 0.05);
}

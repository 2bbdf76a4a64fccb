#pragma once

#include "invtest/types.hpp"

#include <span>

namespace invtest {

/// Column-wise empirical-CDF transform of a sample; entries in (0, 1].
struct RankSample {
  Matrix values;
  long source_n = 0;

  Sample as_sample() const { return Sample{values, std::nullopt}; }
};

/// U_ij = rank of X_ij within column j, divided by n. Tied values share their
/// average rank.
RankSample rank_transform(const Sample& x);

/// Fraction of rows with U_ij <= u_j for every j.
double empirical_copula(const RankSample& u, std::span<const double> point);

/// S_n = (1/n) sum_i [C_n(U_ia, U_ib) - C_n(U_ib, U_ia)]^2, the mean squared
/// asymmetry of the (a, b) bivariate empirical copula over its own atoms.
/// O(n log n).
double bivariate_symmetry_index(const RankSample& u, int a, int b);

/// All pairwise symmetry indices; symmetric with zero diagonal. Needs d >= 2.
Matrix pairwise_symmetry_matrix(const RankSample& u);

}  // namespace invtest

#include "invtest/copula.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace invtest {
namespace {

// Number of points (px_k, py_k) with px_k <= qx and py_k <= qy, for every query.
std::vector<long> dominance_counts(const Vector& px, const Vector& py, const Vector& qx, const Vector& qy) {
  const auto n = static_cast<std::size_t>(px.size());
  const auto q = static_cast<std::size_t>(qx.size());

  std::vector<double> ys(py.begin(), py.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<long> tree(ys.size() + 1, 0);
  auto add = [&](double y) {
    auto i = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin()) + 1;
    for (; i < tree.size(); i += i & (~i + 1)) ++tree[i];
  };
  auto prefix = [&](double y) {
    auto i = static_cast<std::size_t>(std::upper_bound(ys.begin(), ys.end(), y) - ys.begin());
    long s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree[i];
    return s;
  };

  std::vector<std::size_t> points(n), queries(q);
  std::iota(points.begin(), points.end(), 0);
  std::iota(queries.begin(), queries.end(), 0);
  std::sort(points.begin(), points.end(), [&](auto l, auto r) { return px[l] < px[r]; });
  std::sort(queries.begin(), queries.end(), [&](auto l, auto r) { return qx[l] < qx[r]; });

  std::vector<long> out(q, 0);
  std::size_t next = 0;
  for (auto qi : queries) {
    while (next < n && px[points[next]] <= qx[qi]) add(py[points[next++]]);
    out[qi] = prefix(qy[qi]);
  }
  return out;
}

}  // namespace

RankSample rank_transform(const Sample& x) {
  const Eigen::Index n = x.rows();
  if (n < 1) throw InvalidArgument("rank transform of an empty sample");
  RankSample out{Matrix(n, x.cols()), static_cast<long>(n)};
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const auto col = x.data.col(c);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return col[l] < col[r]; });
    std::size_t start = 0;
    while (start < order.size()) {
      std::size_t stop = start + 1;
      while (stop < order.size() && col[order[stop]] == col[order[start]]) ++stop;
      // Positions start+1 .. stop share the average rank.
      const double rank = 0.5 * (static_cast<double>(start + 1) + static_cast<double>(stop));
      for (std::size_t k = start; k < stop; ++k) out.values(order[k], c) = rank / static_cast<double>(n);
      start = stop;
    }
  }
  return out;
}

double empirical_copula(const RankSample& u, std::span<const double> point) {
  if (static_cast<Eigen::Index>(point.size()) != u.values.cols()) {
    throw DimensionError("copula evaluation point has wrong dimension");
  }
  if (u.values.rows() == 0) return 0.0;
  long hits = 0;
  for (Eigen::Index i = 0; i < u.values.rows(); ++i) {
    bool inside = true;
    for (Eigen::Index j = 0; j < u.values.cols() && inside; ++j) inside = u.values(i, j) <= point[j];
    hits += inside ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(u.values.rows());
}

double bivariate_symmetry_index(const RankSample& u, int a, int b) {
  const auto d = static_cast<int>(u.values.cols());
  if (a < 0 || b < 0 || a >= d || b >= d) throw DimensionError("symmetry index column out of range");
  const Eigen::Index n = u.values.rows();
  if (n == 0) return 0.0;
  const Vector ua = u.values.col(a);
  const Vector ub = u.values.col(b);
  const auto direct = dominance_counts(ua, ub, ua, ub);
  const auto swapped = dominance_counts(ua, ub, ub, ua);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto diff = static_cast<double>(direct[static_cast<std::size_t>(i)] - swapped[static_cast<std::size_t>(i)]);
    sum += diff * diff;
  }
  const auto dn = static_cast<double>(n);
  return sum / (dn * dn * dn);
}

Matrix pairwise_symmetry_matrix(const RankSample& u) {
  const auto d = static_cast<int>(u.values.cols());
  if (d < 2) throw DimensionError("pairwise symmetry needs at least two columns");
  Matrix m = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      m(a, b) = bivariate_symmetry_index(u, a, b);
      m(b, a) = m(a, b);
    }
  }
  return m;
}

}  // namespace invtest

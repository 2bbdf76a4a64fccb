#include "invtest/projection.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace invtest {

Direction sample_sphere_direction(int d, Rng& rng) {
  if (d < 2) throw DimensionError("sphere directions need d >= 2");
  Vector v(d);
  double norm = 0.0;
  do {
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    norm = v.norm();
  } while (norm == 0.0);
  return Direction{v / norm, DirectionKind::kSphere, 0};
}

Direction sample_brownian_direction(int components, int grid, Rng& rng) {
  if (components < 1) throw DimensionError("Brownian directions need at least one component");
  if (grid < 2) throw DimensionError("Brownian directions need grid >= 2");
  const double step_sd = std::sqrt(1.0 / grid);
  Vector w(static_cast<Eigen::Index>(components) * grid);
  for (int c = 0; c < components; ++c) {
    double level = 0.0;
    for (int i = 0; i < grid; ++i) {
      level += step_sd * rng.normal();
      w[c * grid + i] = level;
    }
  }
  return Direction{std::move(w), DirectionKind::kBrownian, grid};
}

Direction sample_direction_for(const Sample& x, Rng& rng) {
  if (x.functional) {
    if (x.functional->width() != x.cols()) throw DimensionError("functional layout does not match sample width");
    return sample_brownian_direction(x.functional->components, x.functional->grid, rng);
  }
  return sample_sphere_direction(static_cast<int>(x.cols()), rng);
}

std::vector<Direction> sample_directions_for(const Sample& x, std::size_t count, Rng& rng) {
  std::vector<Direction> dirs;
  dirs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) dirs.push_back(sample_direction_for(x, rng));
  return dirs;
}

Vector project(const Sample& x, const Direction& h) {
  if (h.coords.size() != x.cols()) {
    throw DimensionError("direction of length " + std::to_string(h.coords.size()) +
                         " does not match sample with " + std::to_string(x.cols()) + " columns");
  }
  return project_all(x.data, h.coords * h.weight()).col(0);
}

Matrix project_all(const Matrix& x, const Matrix& h) {
  if (h.rows() != x.cols()) throw DimensionError("projection matrix does not match the sample dimension");
  const Eigen::Index n = x.rows(), d = x.cols(), m = h.cols();
  Matrix out(n, m);
  // Row-major copy of H so that four consecutive columns are contiguous.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> ht = h;
  // Each entry starts at 0 and adds x(i, j) * h(j, c) for j = 0, 1, ... in
  // every branch below, so the result depends only on the row's values.
  Eigen::Index c0 = 0;
  for (; c0 + 4 <= m; c0 += 4) {
    Eigen::Index r0 = 0;
    for (; r0 + 4 <= n; r0 += 4) {
      double acc[4][4] = {};
      for (Eigen::Index j = 0; j < d; ++j) {
        const double* __restrict xs = x.col(j).data() + r0;
        const double* __restrict w = ht.row(j).data() + c0;
        for (int c = 0; c < 4; ++c) {
          for (int r = 0; r < 4; ++r) acc[c][r] += xs[r] * w[c];
        }
      }
      for (int c = 0; c < 4; ++c) {
        for (int r = 0; r < 4; ++r) out(r0 + r, c0 + c) = acc[c][r];
      }
    }
    for (; r0 < n; ++r0) {
      for (Eigen::Index c = c0; c < c0 + 4; ++c) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) acc += x(r0, j) * ht(j, c);
        out(r0, c) = acc;
      }
    }
  }
  for (; c0 < m; ++c0) {
    for (Eigen::Index r = 0; r < n; ++r) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) acc += x(r, j) * ht(j, c0);
      out(r, c0) = acc;
    }
  }
  return out;
}

Direction with_coords(const Direction& h, Vector coords) {
  return Direction{std::move(coords), h.kind, h.grid};
}

void write_directions_csv(std::ostream& os, std::span<const Direction> dirs) {
  os << "index,kind,grid";
  const Eigen::Index width = dirs.empty() ? 0 : dirs.front().coords.size();
  for (Eigen::Index c = 0; c < width; ++c) os << ",c" << c;
  os << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto& h = dirs[i];
    os << i << ',' << (h.kind == DirectionKind::kSphere ? "sphere" : "brownian") << ',' << h.grid;
    for (Eigen::Index c = 0; c < h.coords.size(); ++c) os << ',' << h.coords[c];
    os << '\n';
  }
}

}  // namespace invtest

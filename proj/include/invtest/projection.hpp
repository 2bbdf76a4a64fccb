#pragma once

#include "invtest/rng.hpp"
#include "invtest/types.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace invtest {

enum class DirectionKind { kSphere, kBrownian };

/// A projection direction. Sphere directions are unit vectors in R^d.
/// Brownian directions are discretized standard Brownian paths, one block of
/// `grid` values W(1/grid), ..., W(1) per functional component.
struct Direction {
  Vector coords;
  DirectionKind kind = DirectionKind::kSphere;
  int grid = 0;

  /// Weight applied to the Euclidean inner product: 1 on the sphere, 1/grid
  /// (left Riemann sum of the L2 inner product) for Brownian paths.
  double weight() const { return kind == DirectionKind::kBrownian ? 1.0 / grid : 1.0; }
};

Direction sample_sphere_direction(int d, Rng& rng);
Direction sample_brownian_direction(int components, int grid, Rng& rng);

/// Sphere direction for plain samples, Brownian path for functional ones.
Direction sample_direction_for(const Sample& x, Rng& rng);
std::vector<Direction> sample_directions_for(const Sample& x, std::size_t count, Rng& rng);

/// <h, X_i> for every row i.
Vector project(const Sample& x, const Direction& h);

/// X * H, every entry summed over the columns of X in increasing order, so
/// equal rows of X give bit-identical projections wherever they sit.
Matrix project_all(const Matrix& x, const Matrix& h);

/// The same direction pulled back through a map: coords become M h and the
/// kind and grid are kept. No renormalization is done.
Direction with_coords(const Direction& h, Vector coords);

/// Directions as CSV, one row per direction: index,kind,grid,c0,c1,...
void write_directions_csv(std::ostream& os, std::span<const Direction> dirs);

}  // namespace invtest

#pragma once

#include "invtest/types.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace invtest {

/// Sparse form of a signed permutation matrix: row r of the matrix has its
/// single nonzero entry sign[r] in column source[r], so (T x)[r] = sign[r] * x[source[r]].
struct SignedPermutation {
  std::vector<int> source;
  std::vector<double> sign;

  bool unsigned_only() const;
};

/// An invertible linear self-map of R^dim.
class LinearMap {
 public:
  /// Throws DimensionError unless the matrix is square with dim >= 2, and
  /// InvalidArgument if |det| <= 1e-9.
  LinearMap(Matrix matrix, std::string label);

  static LinearMap identity(int dim, std::string label = "I");
  static LinearMap from_permutation(const std::vector<int>& image, std::string label);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  const std::string& label() const { return label_; }

  /// Present iff the matrix is exactly a signed permutation matrix.
  const std::optional<SignedPermutation>& signed_permutation() const { return perm_; }
  bool is_permutation() const { return perm_ && perm_->unsigned_only(); }

  /// T^T h. Uses the sparse form when available.
  Vector transpose_apply(const Vector& h) const;

 private:
  Matrix m_;
  std::string label_;
  std::optional<SignedPermutation> perm_;
};

/// A named generator set T_1..T_k of a group acting on R^dim.
class GroupSpec {
 public:
  GroupSpec(std::string name, std::vector<LinearMap> generators);

  int dim() const { return generators_.front().dim(); }
  std::size_t size() const { return generators_.size(); }
  const std::string& name() const { return name_; }
  const std::vector<LinearMap>& generators() const { return generators_; }
  const LinearMap& operator[](std::size_t j) const { return generators_[j]; }

  bool all_orthogonal(double tol = 1e-9) const;
  bool all_permutations() const;

 private:
  std::string name_;
  std::vector<LinearMap> generators_;
};

/// Transposition (1 2) and cycle (1 2 ... d), as matrices with T e_j = e_sigma(j).
/// For d = 2 the two coincide and a single generator is returned.
GroupSpec permutation_generators(int d);

/// The permutation generators plus diag(-1, 1, ..., 1).
GroupSpec signed_permutation_generators(int d);

/// Lifts a group on R^components to R^(components*grid) by acting on whole
/// component blocks (T kron I_grid), the action on a component-major
/// functional layout.
GroupSpec lift_to_blocks(const GroupSpec& spec, int grid);

/// Row i of the result is T * (row i of X). The functional layout is kept.
Sample apply_map(const LinearMap& t, const Sample& x);

/// The finite group generated by spec, by breadth-first multiplication with
/// generators and their inverses. Throws InvalidArgument("group too large")
/// once more than cap elements are found.
std::vector<LinearMap> closure(const GroupSpec& spec, std::size_t cap);

bool is_orthogonal(const LinearMap& t, double tol);

/// {"dim": d, "name": s, "generators": [[[row], [row], ...], ...]}. Each
/// generator may also be given as a flat row-major array of d*d numbers.
GroupSpec group_from_json(const nlohmann::json& doc);
nlohmann::ordered_json group_to_json(const GroupSpec& spec);

}  // namespace invtest

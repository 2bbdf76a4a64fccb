#include "invtest/group_actions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

namespace invtest {
namespace {

std::optional<SignedPermutation> detect_signed_permutation(const Matrix& m) {
  const auto d = static_cast<int>(m.rows());
  SignedPermutation p{std::vector<int>(d, -1), std::vector<double>(d, 0.0)};
  std::vector<bool> used(d, false);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const double v = m(r, c);
      if (v == 0.0) continue;
      if ((v != 1.0 && v != -1.0) || p.source[r] >= 0 || used[c]) return std::nullopt;
      p.source[r] = c;
      p.sign[r] = v;
      used[c] = true;
    }
    if (p.source[r] < 0) return std::nullopt;
  }
  return p;
}

// Entries rounded to the 1e-9 lattice; exact for the integer matrices of interest.
std::vector<long long> lattice_key(const Matrix& m) {
  std::vector<long long> key(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    key[static_cast<std::size_t>(i)] = std::llround(m.data()[i] * 1e9);
  }
  return key;
}

Matrix inverse_of(const LinearMap& t) {
  if (is_orthogonal(t, 1e-9)) return t.matrix().transpose();
  return t.matrix().partialPivLu().inverse();
}

}  // namespace

bool SignedPermutation::unsigned_only() const {
  return std::all_of(sign.begin(), sign.end(), [](double s) { return s > 0.0; });
}

LinearMap::LinearMap(Matrix matrix, std::string label)
    : m_(std::move(matrix)), label_(std::move(label)) {
  if (m_.rows() != m_.cols()) {
    throw DimensionError("linear map '" + label_ + "' is not square");
  }
  if (m_.rows() < 2) {
    throw DimensionError("linear map '" + label_ + "' must have dimension >= 2");
  }
  if (!m_.allFinite()) {
    throw InvalidArgument("linear map '" + label_ + "' has non-finite entries");
  }
  perm_ = detect_signed_permutation(m_);
  if (!perm_ && std::abs(m_.fullPivLu().determinant()) <= 1e-9) {
    throw InvalidArgument("linear map '" + label_ + "' is singular");
  }
}

LinearMap LinearMap::identity(int dim, std::string label) {
  if (dim < 2) throw DimensionError("dimension must be >= 2");
  return LinearMap(Matrix::Identity(dim, dim), std::move(label));
}

LinearMap LinearMap::from_permutation(const std::vector<int>& image, std::string label) {
  const auto d = static_cast<int>(image.size());
  Matrix m = Matrix::Zero(d, d);
  // T e_j = e_image[j]: column j carries a one in row image[j].
  for (int j = 0; j < d; ++j) m(image[j], j) = 1.0;
  return LinearMap(std::move(m), std::move(label));
}

Vector LinearMap::transpose_apply(const Vector& h) const {
  if (h.size() != dim()) throw DimensionError("direction length does not match map dimension");
  if (!perm_) return m_.transpose() * h;
  // (T^T h)[source[r]] = sign[r] * h[r]
  Vector out(dim());
  for (int r = 0; r < dim(); ++r) out[perm_->source[r]] = perm_->sign[r] * h[r];
  return out;
}

GroupSpec::GroupSpec(std::string name, std::vector<LinearMap> generators)
    : name_(std::move(name)), generators_(std::move(generators)) {
  if (generators_.empty()) throw InvalidArgument("group '" + name_ + "' has no generators");
  for (const auto& g : generators_) {
    if (g.dim() != generators_.front().dim()) {
      throw DimensionError("generators of group '" + name_ + "' differ in dimension");
    }
  }
}

bool GroupSpec::all_orthogonal(double tol) const {
  return std::all_of(generators_.begin(), generators_.end(),
                     [tol](const LinearMap& g) { return is_orthogonal(g, tol); });
}

bool GroupSpec::all_permutations() const {
  return std::all_of(generators_.begin(), generators_.end(),
                     [](const LinearMap& g) { return g.is_permutation(); });
}

GroupSpec permutation_generators(int d) {
  if (d < 2) throw DimensionError("permutation generators need d >= 2, got " + std::to_string(d));
  std::vector<int> swap(d), cycle(d);
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[0], swap[1]);
  for (int j = 0; j < d; ++j) cycle[j] = (j + 1) % d;
  std::vector<LinearMap> gens;
  gens.push_back(LinearMap::from_permutation(swap, "(1 2)"));
  if (d > 2) {
    std::string label = "(";
    for (int j = 1; j <= d; ++j) label += std::to_string(j) + (j < d ? " " : ")");
    gens.push_back(LinearMap::from_permutation(cycle, label));
  }
  return GroupSpec("exchangeable", std::move(gens));
}

GroupSpec signed_permutation_generators(int d) {
  auto perms = permutation_generators(d);
  // For d = 2 this is {(1 2), flip}: the coincident cycle is already dropped.
  std::vector<LinearMap> gens = perms.generators();
  Matrix flip = Matrix::Identity(d, d);
  flip(0, 0) = -1.0;
  gens.emplace_back(std::move(flip), "diag(-1,1,...,1)");
  return GroupSpec("sign-exchangeable", std::move(gens));
}

GroupSpec lift_to_blocks(const GroupSpec& spec, int grid) {
  if (grid < 1) throw DimensionError("block size must be positive");
  const int c = spec.dim();
  std::vector<LinearMap> lifted;
  for (const auto& g : spec.generators()) {
    Matrix m = Matrix::Zero(c * grid, c * grid);
    for (int a = 0; a < c; ++a) {
      for (int b = 0; b < c; ++b) {
        if (g.matrix()(a, b) == 0.0) continue;
        for (int t = 0; t < grid; ++t) m(a * grid + t, b * grid + t) = g.matrix()(a, b);
      }
    }
    lifted.emplace_back(std::move(m), g.label());
  }
  return GroupSpec(spec.name(), std::move(lifted));
}

Sample apply_map(const LinearMap& t, const Sample& x) {
  if (t.dim() != x.cols()) {
    throw DimensionError("map of dimension " + std::to_string(t.dim()) +
                         " applied to sample with " + std::to_string(x.cols()) + " columns");
  }
  Sample out{Matrix(x.rows(), x.cols()), x.functional};
  if (const auto& p = t.signed_permutation()) {
    for (int r = 0; r < t.dim(); ++r) out.data.col(r) = p->sign[r] * x.data.col(p->source[r]);
  } else {
    out.data.noalias() = x.data * t.matrix().transpose();
  }
  return out;
}

std::vector<LinearMap> closure(const GroupSpec& spec, std::size_t cap) {
  if (cap < 1) throw InvalidArgument("closure cap must be >= 1");
  const int d = spec.dim();
  std::vector<Matrix> steps;
  for (const auto& g : spec.generators()) {
    steps.push_back(g.matrix());
    steps.push_back(inverse_of(g));
  }

  std::map<std::vector<long long>, std::size_t> seen;
  std::vector<LinearMap> elements;
  std::deque<std::size_t> frontier;
  auto visit = [&](Matrix m) {
    auto key = lattice_key(m);
    if (seen.count(key)) return;
    if (elements.size() >= cap) {
      throw InvalidArgument("group too large: closure exceeds " + std::to_string(cap) + " elements");
    }
    seen.emplace(std::move(key), elements.size());
    frontier.push_back(elements.size());
    elements.emplace_back(std::move(m), "g" + std::to_string(elements.size()));
  };

  visit(Matrix::Identity(d, d));
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop_front();
    for (const auto& s : steps) {
      Matrix next = s * elements[i].matrix();
      visit(std::move(next));
    }
  }
  return elements;
}

bool is_orthogonal(const LinearMap& t, double tol) {
  if (tol <= 0.0) throw InvalidArgument("tolerance must be positive");
  if (t.signed_permutation()) return true;
  const Matrix gram = t.matrix().transpose() * t.matrix();
  return (gram - Matrix::Identity(t.dim(), t.dim())).cwiseAbs().maxCoeff() <= tol;
}

GroupSpec group_from_json(const nlohmann::json& doc) {
  try {
    const int d = doc.at("dim").get<int>();
    const std::string name = doc.value("name", std::string("custom"));
    const auto& gens = doc.at("generators");
    if (!gens.is_array() || gens.empty()) throw InvalidArgument("'generators' must be a non-empty array");
    std::vector<LinearMap> maps;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const auto& entry = gens[g];
      Matrix m(d, d);
      if (entry.size() == static_cast<std::size_t>(d) && entry[0].is_array()) {
        for (int r = 0; r < d; ++r) {
          if (entry[r].size() != static_cast<std::size_t>(d)) {
            throw DimensionError("generator " + std::to_string(g) + " row " + std::to_string(r) +
                                 " has wrong length");
          }
          for (int c = 0; c < d; ++c) m(r, c) = entry[r][c].get<double>();
        }
      } else if (entry.size() == static_cast<std::size_t>(d * d)) {
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) m(r, c) = entry[r * d + c].get<double>();
      } else {
        throw DimensionError("generator " + std::to_string(g) + " is not a " + std::to_string(d) +
                             "x" + std::to_string(d) + " matrix");
      }
      std::string label = "T" + std::to_string(g + 1);
      if (doc.contains("labels") && g < doc["labels"].size()) label = doc["labels"][g].get<std::string>();
      maps.emplace_back(std::move(m), std::move(label));
    }
    return GroupSpec(name, std::move(maps));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed group document: ") + e.what());
  }
}

nlohmann::ordered_json group_to_json(const GroupSpec& spec) {
  nlohmann::ordered_json doc;
  doc["dim"] = spec.dim();
  doc["name"] = spec.name();
  auto gens = nlohmann::ordered_json::array();
  auto labels = nlohmann::ordered_json::array();
  for (const auto& g : spec.generators()) {
    auto rows = nlohmann::ordered_json::array();
    for (int r = 0; r < g.dim(); ++r) {
      auto row = nlohmann::ordered_json::array();
      for (int c = 0; c < g.dim(); ++c) row.push_back(g.matrix()(r, c));
      rows.push_back(std::move(row));
    }
    gens.push_back(std::move(rows));
    labels.push_back(g.label());
  }
  doc["generators"] = std::move(gens);
  doc["labels"] = std::move(labels);
  return doc;
}

}  // namespace invtest

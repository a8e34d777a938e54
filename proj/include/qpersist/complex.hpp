#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qpersist/geometry.hpp"

namespace qpersist {

/// A simplex encoded as a bit word: bit i is set iff vertex i belongs to it.
/// Mirrors the qubit encoding, where a k-simplex has k+1 qubits in |1>.
struct SimplexMask {
  std::uint64_t bits = 0;

  constexpr int vertex_count() const { return std::popcount(bits); }
  /// k for a k-simplex; -1 for the empty mask.
  constexpr int dimension() const { return vertex_count() - 1; }
  constexpr bool contains(int vertex) const { return (bits >> vertex) & 1U; }

  std::vector<int> vertices() const;

  friend constexpr bool operator==(SimplexMask a, SimplexMask b) = default;
  friend constexpr auto operator<=>(SimplexMask a, SimplexMask b) = default;
};

SimplexMask mask_of(const std::vector<int>& vertices);

/// "0,2,3"
std::string to_string(SimplexMask mask);

/// Largest pairwise distance among the vertices; 0 for a single vertex.
double simplex_diameter(SimplexMask mask, const DistanceMatrix& dmat);

/// Vietoris-Rips membership: diam(mask) <= epsilon, compared exactly.
bool vr_membership(SimplexMask mask, double epsilon, const DistanceMatrix& dmat);

/// Sorted distinct off-diagonal distances. Values within 1e-12 (relative)
/// of each other are merged into the largest of them.
std::vector<double> critical_scales(const DistanceMatrix& dmat);

class FiltrationContext {
 public:
  explicit FiltrationContext(PointCloud cloud);

  const PointCloud& cloud() const { return cloud_; }
  const DistanceMatrix& distances() const { return dmat_; }
  const std::vector<double>& critical_scales() const { return scales_; }
  int vertex_count() const { return static_cast<int>(cloud_.size()); }

 private:
  PointCloud cloud_;
  DistanceMatrix dmat_;
  std::vector<double> scales_;
};

/// The k-simplices of the VR complex at scale epsilon in ascending mask order.
class SimplexBasis {
 public:
  SimplexBasis(int k, double epsilon, std::vector<SimplexMask> masks);

  int k() const { return k_; }
  double epsilon() const { return epsilon_; }
  std::size_t size() const { return masks_.size(); }
  bool empty() const { return masks_.empty(); }
  const std::vector<SimplexMask>& masks() const { return masks_; }
  SimplexMask operator[](std::size_t i) const { return masks_[i]; }

  std::optional<std::size_t> index_of(SimplexMask mask) const;
  bool contains(SimplexMask mask) const { return index_.contains(mask.bits); }

  /// One line per simplex, vertices as sorted comma-separated indices.
  std::string dump() const;

 private:
  int k_;
  double epsilon_;
  std::vector<SimplexMask> masks_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Enumerates S_k^epsilon by clique extension over the epsilon-neighbourhood
/// graph. k = -1 yields an empty basis (the complex has no empty simplex).
SimplexBasis enumerate_basis(int k, double epsilon, const FiltrationContext& ctx);

}  // namespace qpersist

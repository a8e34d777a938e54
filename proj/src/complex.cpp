#include "qpersist/complex.hpp"

#include <algorithm>
#include <sstream>

#include "qpersist/errors.hpp"

namespace qpersist {

std::vector<int> SimplexMask::vertices() const {
  std::vector<int> out;
  out.reserve(vertex_count());
  for (auto b = bits; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

SimplexMask mask_of(const std::vector<int>& vertices) {
  SimplexMask m;
  for (int v : vertices) m.bits |= std::uint64_t{1} << v;
  return m;
}

std::string to_string(SimplexMask mask) {
  std::string out;
  for (int v : mask.vertices()) {
    if (!out.empty()) out += ',';
    out += std::to_string(v);
  }
  return out;
}

double simplex_diameter(SimplexMask mask, const DistanceMatrix& dmat) {
  if (mask.bits == 0) throw EmptyMask("simplex_diameter of an empty mask");
  const auto vs = mask.vertices();
  double diam = 0.0;
  for (std::size_t a = 0; a < vs.size(); ++a) {
    for (std::size_t b = a + 1; b < vs.size(); ++b) diam = std::max(diam, dmat(vs[a], vs[b]));
  }
  return diam;
}

bool vr_membership(SimplexMask mask, double epsilon, const DistanceMatrix& dmat) {
  return simplex_diameter(mask, dmat) <= epsilon;
}

std::vector<double> critical_scales(const DistanceMatrix& dmat) {
  std::vector<double> out;
  for (std::size_t i = 0; i < dmat.size(); ++i) {
    for (std::size_t j = i + 1; j < dmat.size(); ++j) out.push_back(dmat(i, j));
  }
  std::sort(out.begin(), out.end());
  // Distances that differ only by round-off (e.g. sqrt 2 computed two ways)
  // are one scale; keep the largest so every simplex of that size is in.
  std::vector<double> merged;
  for (double d : out) {
    if (!merged.empty() && d - merged.back() <= 1e-12 * std::max(1.0, d)) {
      merged.back() = d;
    } else {
      merged.push_back(d);
    }
  }
  return merged;
}

FiltrationContext::FiltrationContext(PointCloud cloud)
    : cloud_(std::move(cloud)), dmat_(distance_matrix(cloud_)), scales_(qpersist::critical_scales(dmat_)) {
  if (cloud_.size() > 64) throw TooManyPoints("simplex masks hold at most 64 vertices");
}

SimplexBasis::SimplexBasis(int k, double epsilon, std::vector<SimplexMask> masks)
    : k_(k), epsilon_(epsilon), masks_(std::move(masks)) {
  index_.reserve(masks_.size());
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    if (masks_[i].dimension() != k_) throw DimensionMismatch("mask dimension differs from basis k");
    if (i > 0 && !(masks_[i - 1] < masks_[i])) {
      throw DimensionMismatch("basis masks must be strictly increasing");
    }
    index_.emplace(masks_[i].bits, i);
  }
}

std::optional<std::size_t> SimplexBasis::index_of(SimplexMask mask) const {
  auto it = index_.find(mask.bits);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string SimplexBasis::dump() const {
  std::ostringstream out;
  for (auto m : masks_) out << to_string(m) << '\n';
  return out.str();
}

namespace {

// Grows cliques in increasing vertex order; `candidates` holds the vertices
// adjacent to every vertex already in `clique` and larger than all of them.
void extend_cliques(std::uint64_t clique, std::uint64_t candidates, int remaining,
                    const std::vector<std::uint64_t>& neighbours, std::vector<SimplexMask>& out) {
  if (remaining == 0) {
    out.push_back(SimplexMask{clique});
    return;
  }
  if (std::popcount(candidates) < remaining) return;
  for (auto c = candidates; c != 0; c &= c - 1) {
    const int v = std::countr_zero(c);
    const std::uint64_t above = v == 63 ? 0 : ~((std::uint64_t{2} << v) - 1);
    extend_cliques(clique | (std::uint64_t{1} << v), candidates & neighbours[v] & above,
                   remaining - 1, neighbours, out);
  }
}

}  // namespace

SimplexBasis enumerate_basis(int k, double epsilon, const FiltrationContext& ctx) {
  const int n = ctx.vertex_count();
  std::vector<SimplexMask> masks;
  if (k < 0 || k >= n) return SimplexBasis(k, epsilon, {});

  const auto& d = ctx.distances();
  std::vector<std::uint64_t> neighbours(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && d(i, j) <= epsilon) neighbours[i] |= std::uint64_t{1} << j;
    }
  }
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  extend_cliques(0, all, k + 1, neighbours, masks);
  std::sort(masks.begin(), masks.end());
  return SimplexBasis(k, epsilon, std::move(masks));
}

}  // namespace qpersist

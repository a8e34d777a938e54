#include "qpersist/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "qpersist/errors.hpp"

namespace qpersist {

namespace {

using Triplet = Eigen::Triplet<double>;

Eigen::SparseMatrix<double> from_triplets(Eigen::Index rows, Eigen::Index cols,
                                          const std::vector<Triplet>& t) {
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

RationalMatrix exact_from_integer(const Eigen::SparseMatrix<double>& m) {
  RationalMatrix out(m.rows(), m.cols());
  for (int c = 0; c < m.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it) {
      out(it.row(), it.col()) = mpq_class(it.value());
    }
  }
  return out;
}

bool is_integer_valued(const Eigen::SparseMatrix<double>& m) {
  for (int c = 0; c < m.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it) {
      if (it.value() != std::round(it.value())) return false;
    }
  }
  return true;
}

void check_order(double eps, double eps_prime) {
  if (eps > eps_prime) throw ScaleOrder("scale pair must satisfy eps <= eps'");
}

std::string format_scale(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

const char* to_string(RestrictionVariant v) {
  return v == RestrictionVariant::Projected ? "projected" : "chain";
}

SparseOperator::SparseOperator(std::string row_basis, std::string col_basis,
                               Eigen::SparseMatrix<double> m, std::optional<RationalMatrix> exact)
    : row_basis_(std::move(row_basis)), col_basis_(std::move(col_basis)), m_(std::move(m)),
      exact_(std::move(exact)) {
  m_.prune(0.0);
  m_.makeCompressed();
  if (!exact_ && is_integer_valued(m_)) exact_ = exact_from_integer(m_);
  if (exact_ && (exact_->rows() != static_cast<std::size_t>(m_.rows()) ||
                 exact_->cols() != static_cast<std::size_t>(m_.cols()))) {
    throw DimensionMismatch("exact form has a different shape");
  }
}

std::string SparseOperator::dump() const {
  std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> entries;
  for (int c = 0; c < m_.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m_, c); it; ++it) {
      entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  std::sort(entries.begin(), entries.end());
  std::ostringstream out;
  out << "# rows " << row_basis_ << ' ' << m_.rows() << '\n';
  out << "# cols " << col_basis_ << ' ' << m_.cols() << '\n';
  char buf[64];
  for (const auto& [r, c, v] : entries) {
    std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(r), static_cast<long>(c), v);
    out << buf;
  }
  return out.str();
}

std::string basis_name(const SimplexBasis& b) {
  return "S_" + std::to_string(b.k()) + "^" + format_scale(b.epsilon());
}

SparseOperator boundary(int k, const SimplexBasis& rows, const SimplexBasis& cols) {
  if ((!rows.empty() && rows.k() != k - 1) || (!cols.empty() && cols.k() != k)) {
    throw DimensionMismatch("boundary: bases do not match dimension k=" + std::to_string(k));
  }
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const auto sigma = cols[j];
    int l = 0;
    for (auto b = sigma.bits; b != 0; b &= b - 1, ++l) {
      const SimplexMask face{sigma.bits & ~(b & -b)};
      if (auto row = rows.index_of(face)) {
        t.emplace_back(static_cast<int>(*row), static_cast<int>(j), (l % 2 == 0) ? 1.0 : -1.0);
      }
    }
  }
  return SparseOperator(basis_name(rows), basis_name(cols),
                        from_triplets(rows.size(), cols.size(), t));
}

SparseOperator projector(const SimplexBasis& sub, const SimplexBasis& full) {
  std::vector<Triplet> t;
  for (auto m : sub.masks()) {
    auto i = full.index_of(m);
    if (!i) throw NotASubset("projector: " + to_string(m) + " is not in the full basis");
    t.emplace_back(static_cast<int>(*i), static_cast<int>(*i), 1.0);
  }
  return SparseOperator(basis_name(full), basis_name(full),
                        from_triplets(full.size(), full.size(), t));
}

SparseOperator restricted_boundary_projected(int k, double eps, double eps_prime,
                                             const FiltrationContext& ctx) {
  check_order(eps, eps_prime);
  return boundary(k, enumerate_basis(k - 1, eps, ctx), enumerate_basis(k, eps_prime, ctx));
}

ChainRestriction chain_restricted_boundary(int k, double eps, double eps_prime,
                                           const FiltrationContext& ctx) {
  check_order(eps, eps_prime);
  auto domain = enumerate_basis(k, eps_prime, ctx);
  const auto faces_wide = enumerate_basis(k - 1, eps_prime, ctx);
  const auto faces = enumerate_basis(k - 1, eps, ctx);

  // Rows of d_k that belong to faces present at eps' but not at eps.
  const auto full = boundary(k, faces_wide, domain);
  std::vector<std::size_t> forbidden;
  for (std::size_t i = 0; i < faces_wide.size(); ++i) {
    if (!faces.contains(faces_wide[i])) forbidden.push_back(i);
  }
  const auto kernel = null_space(full.exact()->select_rows(forbidden));
  const auto orth = orthogonal_basis(kernel);

  Eigen::MatrixXd q = orth.to_double();
  for (Eigen::Index c = 0; c < q.cols(); ++c) q.col(c).normalize();

  auto allowed = boundary(k, faces, domain);
  Eigen::MatrixXd restricted = allowed.dense() * q;
  SparseOperator op(basis_name(faces), "Z_" + std::to_string(k) + "^" + format_scale(eps) + "," +
                                           format_scale(eps_prime),
                    restricted.sparseView(), std::nullopt);
  return ChainRestriction{std::move(domain), std::move(q), projector_onto(orth), std::move(op),
                          std::move(allowed)};
}

SparseOperator persistent_laplacian(int k, double eps, double eps_prime,
                                    const FiltrationContext& ctx, RestrictionVariant variant) {
  check_order(eps, eps_prime);
  const auto basis = enumerate_basis(k, eps, ctx);
  const auto down = boundary(k, enumerate_basis(k - 1, eps, ctx), basis);

  RationalMatrix exact = down.exact()->transpose() * *down.exact();
  if (variant == RestrictionVariant::Projected) {
    const auto up = restricted_boundary_projected(k + 1, eps, eps_prime, ctx);
    exact = exact + *up.exact() * up.exact()->transpose();
  } else {
    const auto cr = chain_restricted_boundary(k + 1, eps, eps_prime, ctx);
    const auto& a = *cr.allowed_rows.exact();
    exact = exact + a * cr.projector * a.transpose();
  }
  // Floating-point entries are the exact ones rounded, so the result is
  // exactly symmetric and exact zeros stay zero.
  const Eigen::MatrixXd dense = exact.to_double();
  const auto name = basis_name(basis);
  return SparseOperator(name, name, dense.sparseView(), std::move(exact));
}

std::size_t DiracOperator::block_size(int block) const {
  return static_cast<std::size_t>(std::count_if(elements.begin(), elements.end(),
                                                [&](const DiracElement& e) { return e.block == block; }));
}

std::vector<std::size_t> DiracOperator::positions_of_block(int block) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].block == block) out.push_back(i);
  }
  return out;
}

std::string DiracOperator::label(std::size_t position) const {
  const auto& e = elements.at(position);
  std::string what;
  if (e.block == -1) {
    what = "[" + to_string(lower[e.index]) + "]";
  } else if (e.block == 0) {
    what = "[" + to_string(middle[e.index]) + "]";
  } else if (variant == RestrictionVariant::Projected) {
    what = "[" + to_string(upper_simplices[e.index]) + "]";
  } else {
    what = "z" + std::to_string(e.index);
  }
  return "b=" + std::to_string(e.block) + " " + what;
}

DiracOperator persistent_dirac(int k, double eps, double eps_prime, double xi,
                               const FiltrationContext& ctx, RestrictionVariant variant,
                               bool drop_isolated) {
  check_order(eps, eps_prime);
  if (xi == 0.0) throw ZeroXi("xi must be nonzero: xi = 0 merges the +xi and -xi eigenspaces");

  DiracOperator b;
  b.k = k;
  b.eps = eps;
  b.eps_prime = eps_prime;
  b.xi = xi;
  b.variant = variant;
  b.drop_isolated = drop_isolated;
  b.lower = enumerate_basis(k - 1, eps, ctx);
  b.middle = enumerate_basis(k, eps, ctx);
  b.upper_simplices = enumerate_basis(k + 1, eps_prime, ctx);

  const auto down = boundary(k, b.lower, b.middle);
  Eigen::MatrixXd up;
  if (variant == RestrictionVariant::Projected) {
    up = restricted_boundary_projected(k + 1, eps, eps_prime, ctx).dense();
    b.upper_chains = Eigen::MatrixXd::Identity(b.upper_simplices.size(), b.upper_simplices.size());
  } else {
    auto cr = chain_restricted_boundary(k + 1, eps, eps_prime, ctx);
    up = cr.op.dense();
    b.upper_chains = std::move(cr.subspace);
  }

  const auto nx = static_cast<Eigen::Index>(b.lower.size());
  const auto ny = static_cast<Eigen::Index>(b.middle.size());
  const auto nz = up.cols();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(nx + ny + nz, nx + ny + nz);
  full.block(0, nx, nx, ny) = down.dense();
  full.block(nx, 0, ny, nx) = down.dense().transpose();
  full.block(nx, nx + ny, ny, nz) = up;
  full.block(nx + ny, nx, nz, ny) = up.transpose();

  std::vector<DiracElement> all;
  for (Eigen::Index i = 0; i < nx; ++i) all.push_back({-1, static_cast<std::size_t>(i)});
  for (Eigen::Index i = 0; i < ny; ++i) all.push_back({0, static_cast<std::size_t>(i)});
  for (Eigen::Index i = 0; i < nz; ++i) all.push_back({+1, static_cast<std::size_t>(i)});

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < full.rows(); ++i) {
    const bool side = all[i].block != 0;
    if (drop_isolated && side && full.row(i).cwiseAbs().maxCoeff() == 0.0) continue;
    keep.push_back(i);
  }
  for (Eigen::Index i = 0; i < full.rows(); ++i) full(i, i) = all[i].block == 0 ? xi : -xi;

  std::vector<Triplet> t;
  for (std::size_t a = 0; a < keep.size(); ++a) {
    b.elements.push_back(all[keep[a]]);
    for (std::size_t c = 0; c < keep.size(); ++c) {
      const double v = full(keep[a], keep[c]);
      if (v != 0.0) t.emplace_back(static_cast<int>(a), static_cast<int>(c), v);
    }
  }
  b.matrix = from_triplets(keep.size(), keep.size(), t);
  return b;
}

bool dirac_square_check(const DiracOperator& b, const SparseOperator& laplacian, double tol) {
  const auto mid = b.positions_of_block(0);
  if (static_cast<Eigen::Index>(mid.size()) != laplacian.rows() ||
      laplacian.rows() != laplacian.cols()) {
    throw DimensionMismatch("dirac_square_check: Laplacian does not act on the middle block");
  }
  if (b.dimension() == 0) return true;

  const Eigen::MatrixXd bd = b.dense();
  const Eigen::MatrixXd sq = bd * bd;
  const Eigen::MatrixXd expected =
      laplacian.dense() + b.xi * b.xi * Eigen::MatrixXd::Identity(mid.size(), mid.size());
  for (std::size_t r = 0; r < mid.size(); ++r) {
    for (std::size_t c = 0; c < b.dimension(); ++c) {
      const bool in_mid = b.elements[c].block == 0;
      const double target = in_mid ? expected(r, b.elements[c].index) : 0.0;
      if (std::abs(sq(mid[r], c) - target) > tol) return false;
    }
  }
  return true;
}

}  // namespace qpersist

#include "qpersist/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "qpersist/errors.hpp"

namespace qpersist {

namespace {

void require_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw NotSquare("operator is not square");
  if (static_cast<std::size_t>(m.rows()) > kMaxDenseDimension) {
    throw TooLarge("dense eigendecomposition limited to dimension " +
                   std::to_string(kMaxDenseDimension));
  }
  if (m.size() == 0) return;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NotSymmetric("operator is not symmetric");
  }
}

}  // namespace

std::size_t Spectrum::dimension() const {
  std::size_t total = 0;
  for (int m : multiplicities) total += m;
  return total;
}

int Spectrum::multiplicity_of(double value, double t) const {
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (std::abs(eigenvalues[i] - value) <= t) return multiplicities[i];
  }
  return 0;
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& symmetric) {
  require_symmetric(symmetric);
  if (symmetric.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Spectrum cluster(const Eigen::VectorXd& sorted, double tol) {
  Spectrum s;
  s.tol = tol;
  for (Eigen::Index i = 0; i < sorted.size(); ++i) {
    // Clusters chain: a value joins the current cluster if it is within tol
    // of the previous value.
    if (i > 0 && sorted[i] - sorted[i - 1] <= tol) {
      auto& m = s.multiplicities.back();
      s.eigenvalues.back() = (s.eigenvalues.back() * m + sorted[i]) / (m + 1);
      ++m;
    } else {
      s.eigenvalues.push_back(sorted[i]);
      s.multiplicities.push_back(1);
    }
  }
  return s;
}

Spectrum spectrum(const Eigen::MatrixXd& symmetric, double tol) {
  return cluster(eigenvalues(symmetric), tol);
}

Spectrum spectrum(const SparseOperator& op, double tol) { return spectrum(op.dense(), tol); }

Spectrum spectrum(const DiracOperator& op, double tol) { return spectrum(op.dense(), tol); }

std::size_t kernel_dimension(const SparseOperator& op, KernelMode mode, double tol) {
  if (op.rows() != op.cols()) throw NotSquare("kernel_dimension needs a square operator");
  const auto n = static_cast<std::size_t>(op.rows());
  if (mode == KernelMode::ExactRational) {
    const auto exact = op.exact() ? *op.exact() : RationalMatrix::from_double(op.dense());
    return n - rank(exact);
  }
  const auto values = eigenvalues(op.dense());
  if (values.size() == 0) return 0;
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double g) { return std::abs(g) < tol * scale; }));
}

int betti_homology_oracle(int k, double eps, double eps_prime, const FiltrationContext& ctx) {
  if (eps > eps_prime) throw ScaleOrder("scale pair must satisfy eps <= eps'");
  const auto chains = enumerate_basis(k, eps, ctx);
  const auto chains_wide = enumerate_basis(k, eps_prime, ctx);
  const auto n = chains.size();

  // Ker d_k^eps, columns in S_k^eps coordinates.
  const auto dk = boundary(k, enumerate_basis(k - 1, eps, ctx), chains);
  const auto cycles = null_space(*dk.exact());
  const auto dim_cycles = cycles.cols();

  // A = Im d_{k+1}^eps' inside C_k(S^eps'); C = coordinate subspace C_k(S^eps).
  const auto dup = boundary(k + 1, chains_wide, enumerate_basis(k + 1, eps_prime, ctx));
  const auto& a = *dup.exact();
  RationalMatrix c(chains_wide.size(), n);
  for (std::size_t j = 0; j < n; ++j) c(*chains_wide.index_of(chains[j]), j) = 1;

  // dim(A cap C) = dim A + dim C - dim(A + C).
  const auto dim_a = rank(a);
  const auto dim_ac = dim_a + n - rank(a.hstack(c));

  // A basis of A cap C: solutions of a*u = c*v, read off through v.
  RationalMatrix neg_c = c;
  for (std::size_t r = 0; r < neg_c.rows(); ++r) {
    for (std::size_t j = 0; j < n; ++j) neg_c(r, j) = -neg_c(r, j);
  }
  const auto sol = null_space(a.hstack(neg_c));
  RationalMatrix boundaries(n, sol.cols());
  for (std::size_t s = 0; s < sol.cols(); ++s) {
    for (std::size_t j = 0; j < n; ++j) boundaries(j, s) = sol(a.cols() + j, s);
  }
  if (rank(boundaries) != dim_ac) throw Error("homology oracle: inconsistent intersection rank");

  // dim((A cap C) cap Ker) = dim(A cap C) + dim Ker - dim(A cap C + Ker).
  const auto dim_dead = dim_ac + dim_cycles - rank(boundaries.hstack(cycles));
  return static_cast<int>(dim_cycles - dim_dead);
}

void BettiTable::set(int k, std::size_t i, std::size_t j, int value) {
  if (i > j) throw ScaleOrder("Betti table entries need i <= j");
  entries_[{k, i, j}] = value;
}

int BettiTable::at(int k, std::size_t i, std::size_t j) const { return entries_.at({k, i, j}); }

BettiTable betti_table(const FiltrationContext& ctx, int k_max, const std::vector<double>& scales,
                       RestrictionVariant variant) {
  if (!std::is_sorted(scales.begin(), scales.end())) throw ScaleOrder("scales must be ascending");
  BettiTable table;
  table.scales = scales;
  for (int k = 0; k <= k_max; ++k) {
    for (std::size_t i = 0; i < scales.size(); ++i) {
      for (std::size_t j = i; j < scales.size(); ++j) {
        const auto lap = persistent_laplacian(k, scales[i], scales[j], ctx, variant);
        table.set(k, i + 1, j + 1, static_cast<int>(kernel_dimension(lap, KernelMode::Float)));
      }
    }
  }
  return table;
}

}  // namespace qpersist

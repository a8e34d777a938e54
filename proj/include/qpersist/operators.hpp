#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qpersist/complex.hpp"
#include "qpersist/rational.hpp"

namespace qpersist {

/// How the (k+1)-boundary is restricted between two scales.
///  - Projected: P_k^eps d_{k+1} P_{k+1}^eps', the form the quantum circuit uses.
///  - ChainRestricted: d_{k+1} on the subspace of (k+1)-chains at eps' whose
///    boundary lies in the eps-complex.
enum class RestrictionVariant { Projected, ChainRestricted };

const char* to_string(RestrictionVariant v);

/// Real sparse matrix between two named bases. Explicit zeros are pruned.
/// When the operator has an exact rational form it is carried alongside.
class SparseOperator {
 public:
  SparseOperator(std::string row_basis, std::string col_basis, Eigen::SparseMatrix<double> m,
                 std::optional<RationalMatrix> exact = std::nullopt);

  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }
  const Eigen::SparseMatrix<double>& matrix() const { return m_; }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }
  const std::string& row_basis() const { return row_basis_; }
  const std::string& col_basis() const { return col_basis_; }

  /// Exact rational form if known; integer-valued operators always have one.
  const std::optional<RationalMatrix>& exact() const { return exact_; }

  /// Coordinate-list text: a header naming both bases, then `row col value`.
  std::string dump() const;

 private:
  std::string row_basis_;
  std::string col_basis_;
  Eigen::SparseMatrix<double> m_;
  std::optional<RationalMatrix> exact_;
};

std::string basis_name(const SimplexBasis& b);

/// d_k from `cols` (k-simplices) to `rows` ((k-1)-simplices). Faces missing
/// from `rows` are dropped, which realises P_{k-1} when rows is S_{k-1}^eps.
SparseOperator boundary(int k, const SimplexBasis& rows, const SimplexBasis& cols);

/// Diagonal 0/1 matrix on `full` selecting the simplices of `sub`.
SparseOperator projector(const SimplexBasis& sub, const SimplexBasis& full);

/// P_{k-1}^eps d_k P_k^eps' as a map S_k^eps' -> S_{k-1}^eps.
SparseOperator restricted_boundary_projected(int k, double eps, double eps_prime,
                                             const FiltrationContext& ctx);

struct ChainRestriction {
  /// S_k^eps', the coordinates of the subspace basis.
  SimplexBasis domain;
  /// Orthonormal basis of {x in C_k(S^eps') : d_k x in C_{k-1}(S^eps)}, one column each.
  Eigen::MatrixXd subspace;
  /// Orthogonal projector onto that subspace, exact.
  RationalMatrix projector;
  /// d_k restricted to the subspace, in coordinates S_{k-1}^eps x subspace.
  SparseOperator op;
  /// d_k from S_k^eps' to S_{k-1}^eps with integer entries (rows outside eps dropped).
  SparseOperator allowed_rows;

  std::size_t dimension() const { return static_cast<std::size_t>(subspace.cols()); }
};

ChainRestriction chain_restricted_boundary(int k, double eps, double eps_prime,
                                           const FiltrationContext& ctx);

/// L_k^{eps,eps'} = d~_k^T d~_k + d~_{k+1} d~_{k+1}^T on S_k^eps. Always
/// carries an exact rational form.
SparseOperator persistent_laplacian(int k, double eps, double eps_prime,
                                    const FiltrationContext& ctx, RestrictionVariant variant);

/// Block label of a Dirac basis element: -1 for S_{k-1}^eps, 0 for S_k^eps,
/// +1 for the (k+1) side.
struct DiracElement {
  int block;
  std::size_t index;  // into the block's own basis
};

class DiracOperator {
 public:
  int k = 0;
  double eps = 0.0;
  double eps_prime = 0.0;
  double xi = 1.0;
  RestrictionVariant variant = RestrictionVariant::Projected;
  bool drop_isolated = false;

  SimplexBasis lower{-1, 0.0, {}};
  SimplexBasis middle{0, 0.0, {}};
  /// (k+1)-simplices at eps'. For Projected the upper block is indexed by
  /// these directly; for ChainRestricted it is indexed by `upper_chains` columns.
  SimplexBasis upper_simplices{1, 0.0, {}};
  Eigen::MatrixXd upper_chains;

  std::vector<DiracElement> elements;
  Eigen::SparseMatrix<double> matrix;

  std::size_t dimension() const { return elements.size(); }
  std::size_t block_size(int block) const;
  std::vector<std::size_t> positions_of_block(int block) const;
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }

  /// "b=-1 [0,1]" style label for one basis element.
  std::string label(std::size_t position) const;
};

/// The k-th persistent Dirac operator with diagonal (-xi, +xi, -xi). With
/// drop_isolated, elements of the two side blocks that couple to nothing are
/// removed; each of them is an eigenvector with eigenvalue -xi.
DiracOperator persistent_dirac(int k, double eps, double eps_prime, double xi,
                               const FiltrationContext& ctx, RestrictionVariant variant,
                               bool drop_isolated = false);

/// True iff B^2 restricted to the middle block equals L + xi^2 I and the
/// blocks coupling the middle to the sides vanish, within tol (max-abs).
bool dirac_square_check(const DiracOperator& b, const SparseOperator& laplacian, double tol);

}  // namespace qpersist

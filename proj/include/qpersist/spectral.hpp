#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "qpersist/operators.hpp"

namespace qpersist {

inline constexpr std::size_t kMaxDenseDimension = 4096;
inline constexpr double kClusterTol = 1e-9;
inline constexpr double kKernelTol = 1e-8;

/// Eigenvalues clustered at `tol`, ascending, with multiplicities.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<int> multiplicities;
  double tol = kClusterTol;

  std::size_t dimension() const;
  /// Multiplicity of the cluster within `tol` of `value`, 0 if absent.
  int multiplicity_of(double value, double tol) const;
};

/// All eigenvalues of a dense symmetric matrix, ascending (unclustered).
Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& symmetric);

Spectrum cluster(const Eigen::VectorXd& sorted_eigenvalues, double tol);

Spectrum spectrum(const Eigen::MatrixXd& symmetric, double tol = kClusterTol);
Spectrum spectrum(const SparseOperator& op, double tol = kClusterTol);
Spectrum spectrum(const DiracOperator& op, double tol = kClusterTol);

enum class KernelMode { Float, ExactRational };

/// Float: eigenvalues with |gamma| < tol * max(1, |gamma_max|).
/// ExactRational: dimension minus rank over Q of the exact form.
std::size_t kernel_dimension(const SparseOperator& op, KernelMode mode, double tol = kKernelTol);

/// Independent ground truth for beta_k^{eps,eps'} via exact ranks:
/// dim Ker d_k^eps - dim(Im d_{k+1}^eps' cap C_k(S^eps) cap Ker d_k^eps).
int betti_homology_oracle(int k, double eps, double eps_prime, const FiltrationContext& ctx);

/// beta_k^{scales[i], scales[j]} for i <= j, k = 0..k_max. Indices are 1-based.
class BettiTable {
 public:
  void set(int k, std::size_t i, std::size_t j, int value);
  int at(int k, std::size_t i, std::size_t j) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::tuple<int, std::size_t, std::size_t>, int>& entries() const { return entries_; }

  std::vector<double> scales;

 private:
  std::map<std::tuple<int, std::size_t, std::size_t>, int> entries_;
};

BettiTable betti_table(const FiltrationContext& ctx, int k_max, const std::vector<double>& scales,
                       RestrictionVariant variant = RestrictionVariant::ChainRestricted);

}  // namespace qpersist

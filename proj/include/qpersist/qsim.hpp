#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qpersist/operators.hpp"
#include "qpersist/statevector.hpp"

namespace qpersist {

/// Largest composite register dimension the simulator will allocate.
inline constexpr std::size_t kDefaultSimulationCap = std::size_t{1} << 26;
/// Largest Dirac dimension accepted by the SWAP_B (Trotter) construction.
inline constexpr std::size_t kTrotterMaxDimension = 64;

/// Number of qubits needed to index `n` states (at least 1).
int qubits_for(std::size_t n);

/// Equal-amplitude state over the composite basis of `b`, zero-padded to
/// ceil(log2 N) qubits.
StateVector uniform_projected_state(const DiracOperator& b);

struct GroverResult {
  StateVector state;
  int steps;
  double theta;
};

/// Amplitude amplification toward the indices accepted by `oracle`:
/// K = floor(pi / (4 theta)) applications of -U_psi U_eps, sin(theta) = |P psi|.
GroverResult grover_project(const StateVector& psi, const std::function<bool(std::size_t)>& oracle);

/// e^{i t H} for a real symmetric H via its eigendecomposition.
Eigen::MatrixXcd exact_exponential(const Eigen::MatrixXd& h, double t);
Eigen::MatrixXcd exact_exponential(const DiracOperator& b, double t,
                                   std::size_t max_dim = kDefaultSimulationCap);

/// The SWAP_B channel repeated `steps` times:
///   rho -> tr_1[ e^{-i dt S} (|s><s| (x) rho) e^{i dt S} ],  dt = t / steps,
/// with S = sum_{x,y} B(x,y) |y><x| (x) |x><y| and |s> uniform. Approximates
/// rho -> e^{-i t B/N} rho e^{i t B/N}.
class SwapTrotterChannel {
 public:
  SwapTrotterChannel(Eigen::MatrixXd b, double t, int steps);

  std::size_t dimension() const { return static_cast<std::size_t>(b_.rows()); }
  int steps() const { return steps_; }
  double step_time() const { return dt_; }

  /// One SWAP_B step.
  Eigen::MatrixXcd step(const Eigen::MatrixXcd& rho) const;
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

  /// <s|_1 e^{-i dt S} |s>_1: the operator picked up by coherences between a
  /// branch that ran the step and one that did not (controlled evolution).
  const Eigen::MatrixXcd& coherence() const { return coherence_; }

  /// Liouville matrix of the whole channel, row-major vec(rho).
  Eigen::MatrixXcd superoperator() const;

 private:
  Eigen::MatrixXd b_;
  int steps_;
  double dt_;
  // Kraus operator K_a = diag_[a] + column_[a] e_a^T.
  std::vector<Eigen::VectorXcd> diag_;
  std::vector<Eigen::VectorXcd> column_;
  Eigen::MatrixXcd coherence_;
};

SwapTrotterChannel trotter_exponential(const DiracOperator& b, double t, int steps);

/// Liouville matrix of rho -> U rho U^dagger, row-major vec(rho).
Eigen::MatrixXcd unitary_superoperator(const Eigen::MatrixXcd& u);

struct ExactEvolution {};
struct TrotterEvolution {
  int steps;
};
using Evolution = std::variant<ExactEvolution, TrotterEvolution>;

struct PhaseDistribution {
  std::vector<double> probs;
  int l = 0;
  int M = 0;
  double xi = 1.0;
  std::size_t hilbert_dim = 0;
};

struct PhaseEstimationOptions {
  Evolution evolution = ExactEvolution{};
  std::size_t max_dim = kDefaultSimulationCap;
};

/// Simulates the phase-estimation circuit on B: uniform superposition over
/// the composite basis in register 1, CNOT copy to register 2, Hadamards on
/// the phase register R, controlled e^{2 pi i l y B / M} on register 2, a
/// Fourier transform on R (sign -1), and the exact marginal of R.
PhaseDistribution phase_estimation(const DiracOperator& b, int l, int M,
                                   const PhaseEstimationOptions& options = {});

struct BettiEstimate {
  int betti;
  /// N * P(l xi).
  double unrounded;
  /// P(l xi) - betti / N, the contribution of eigenvalues other than xi.
  double leakage;
};

BettiEstimate betti_from_distribution(const PhaseDistribution& dist);

/// Multinomial draw of `shots` outcomes from P, deterministic per seed.
std::vector<std::uint64_t> sample_counts(const PhaseDistribution& dist, std::uint64_t shots,
                                         std::uint64_t seed);

}  // namespace qpersist

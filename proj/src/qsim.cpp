#include "qpersist/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "qpersist/errors.hpp"
#include "qpersist/spectral.hpp"

namespace qpersist {

namespace {

constexpr double kPi = std::numbers::pi;

void require_power_of_two_m(int M) {
  if (M < 2 || !std::has_single_bit(static_cast<unsigned>(M))) {
    throw BadM("M must be a power of two >= 2, got " + std::to_string(M));
  }
}

// Eigenpairs of a real symmetric matrix.
struct Eigensystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Eigensystem eigensystem(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXcd exponential_from(const Eigensystem& es, double t) {
  const Eigen::VectorXcd phases =
      es.values.unaryExpr([t](double lambda) { return std::polar(1.0, t * lambda); });
  return es.vectors.cast<Complex>() * phases.asDiagonal() * es.vectors.transpose().cast<Complex>();
}

PhaseDistribution exact_phase_estimation(const DiracOperator& b, int l, int M, std::size_t max_dim) {
  const std::size_t n = b.dimension();
  const int q = qubits_for(n);
  const std::size_t reg = std::size_t{1} << q;
  if (reg * reg > max_dim / static_cast<std::size_t>(M)) {
    throw TooLarge("phase estimation needs " + std::to_string(reg * reg) + " x " +
                   std::to_string(M) + " amplitudes, above the cap of " + std::to_string(max_dim));
  }

  StateVector sv({{"system", reg}, {"copy", reg}, {"phase", static_cast<std::size_t>(M)}});
  const std::size_t sys = 0, copy = 1, phase = 2;

  // Uniform superposition over the composite basis: Hadamards, amplitude
  // amplification onto the first N indices, then post-selection on success.
  sv.apply_hadamard_all(sys);
  auto in_basis = [&](std::size_t i) { return sv.digit(i, sys) < n; };
  auto amplified = grover_project(sv, in_basis);
  sv = std::move(amplified.state);
  sv.postselect(in_basis);

  for (int i = 0; i < q; ++i) sv.apply_cnot({sys, i}, {copy, i});
  sv.apply_hadamard_all(phase);

  const auto es = eigensystem(b.dense());
  const int r = std::countr_zero(static_cast<unsigned>(M));
  for (int j = 0; j < r; ++j) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(reg, reg);
    u.topLeftCorner(n, n) = exponential_from(es, 2.0 * kPi * l * std::ldexp(1.0, j) / M);
    sv.apply_matrix(copy, u, QubitRef{phase, j});
  }
  sv.apply_qft(phase, -1);

  const auto p = sv.marginal(phase);
  return {std::vector<double>(p.begin(), p.end()), l, M, b.xi, n};
}

// Above this many entries per side a one-step superoperator is not formed.
constexpr std::size_t kPowerMaxSide = 1024;

Eigen::MatrixXcd matrix_power(Eigen::MatrixXcd base, int e) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(base.rows(), base.cols());
  while (e > 0) {
    if (e & 1) out = out * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return out;
}

// Superoperators act on row-major vec(rho).
Eigen::MatrixXcd apply_superoperator(const Eigen::MatrixXcd& sup, const Eigen::MatrixXcd& rho) {
  const auto n = rho.rows();
  Eigen::VectorXcd v(n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = 0; c < n; ++c) v(a * n + c) = rho(a, c);
  const Eigen::VectorXcd w = sup * v;
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = 0; c < n; ++c) out(a, c) = w(a * n + c);
  return out;
}

// Density-matrix simulation of the same circuit with each controlled power
// realised by SWAP_B steps. Register 1 is never acted on after the copy, so
// tracing it out leaves register 2 maximally mixed; the state kept is that of
// (register 2, R), stored as M x M blocks of N x N.
PhaseDistribution trotter_phase_estimation(const DiracOperator& b, int l, int M, int steps,
                                           std::size_t max_dim) {
  const std::size_t n = b.dimension();
  if (n > kTrotterMaxDimension) {
    throw TooLarge("SWAP_B evolution is limited to dimension " + std::to_string(kTrotterMaxDimension));
  }
  const auto nm = n * static_cast<std::size_t>(M);
  if (nm * nm > max_dim) throw TooLarge("density matrix for Trotter phase estimation exceeds the cap");
  if (steps < 1) throw InputError("Trotter steps must be >= 1");

  const auto m = static_cast<std::size_t>(M);
  std::vector<Eigen::MatrixXcd> rho(m * m, Eigen::MatrixXcd::Identity(n, n) / Complex(double(n * m)));

  const Eigen::MatrixXd bd = b.dense();
  const int r = std::countr_zero(static_cast<unsigned>(M));
  for (int j = 0; j < r; ++j) {
    // e^{-i t B/N} = e^{2 pi i l 2^j B / M}.
    const double t = -2.0 * kPi * l * std::ldexp(1.0, j) * double(n) / M;
    const SwapTrotterChannel channel(bd, t, steps);
    // Small registers: raise the one-step maps to the power `steps` once.
    // Larger ones: iterate the step on every block.
    const bool by_power = n * n <= kPowerMaxSide;
    Eigen::MatrixXcd step_power, g_power;
    if (by_power) {
      step_power = matrix_power(SwapTrotterChannel(bd, channel.step_time(), 1).superoperator(), steps);
      g_power = matrix_power(channel.coherence(), steps);
    }
    for (std::size_t y = 0; y < m; ++y) {
      for (std::size_t y2 = 0; y2 < m; ++y2) {
        const bool on = (y >> j) & 1U;
        const bool on2 = (y2 >> j) & 1U;
        auto& blk = rho[y * m + y2];
        if (by_power) {
          if (on && on2) {
            blk = apply_superoperator(step_power, blk);
          } else if (on) {
            blk = g_power * blk;
          } else if (on2) {
            blk = blk * g_power.adjoint();
          }
          continue;
        }
        for (int s = 0; s < steps; ++s) {
          if (on && on2) {
            blk = channel.step(blk);
          } else if (on) {
            blk = channel.coherence() * blk;
          } else if (on2) {
            blk = blk * channel.coherence().adjoint();
          }
        }
      }
    }
  }

  // Fourier transform on R, keeping only the diagonal of the result.
  Eigen::MatrixXcd f(m, m);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t y = 0; y < m; ++y) f(p, y) = std::polar(1.0 / std::sqrt(double(m)), -2.0 * kPi * double(p * y) / m);
  }
  Eigen::MatrixXcd tau(m, m);
  for (std::size_t y = 0; y < m; ++y) {
    for (std::size_t y2 = 0; y2 < m; ++y2) tau(y, y2) = rho[y * m + y2].trace();
  }
  const Eigen::MatrixXcd out = f * tau * f.adjoint();
  std::vector<double> probs(m);
  for (std::size_t p = 0; p < m; ++p) probs[p] = std::max(0.0, out(p, p).real());
  return {probs, l, M, b.xi, n};
}

}  // namespace

int qubits_for(std::size_t n) {
  int q = 1;
  while ((std::size_t{1} << q) < n) ++q;
  return q;
}

StateVector uniform_projected_state(const DiracOperator& b) {
  const std::size_t n = b.dimension();
  if (n == 0) throw EmptyBasis("the Dirac operator has an empty composite basis");
  const std::size_t reg = std::size_t{1} << qubits_for(n);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(reg);
  amps.head(n).setConstant(1.0 / std::sqrt(double(n)));
  return StateVector({{"system", reg}}, std::move(amps));
}

GroverResult grover_project(const StateVector& psi, const std::function<bool(std::size_t)>& oracle) {
  const auto& a = psi.amplitudes();
  double marked = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (oracle(i)) marked += std::norm(a[i]);
  }
  if (marked == 0.0) throw NoMarkedStates("no amplitude on the marked subspace");
  const double theta = std::asin(std::min(1.0, std::sqrt(marked) / psi.norm()));
  const int steps = static_cast<int>(std::floor(kPi / (4.0 * theta)));

  const Eigen::VectorXcd ref = a / psi.norm();
  Eigen::VectorXcd cur = a;
  for (int s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < psi.size(); ++i) {
      if (oracle(i)) cur[i] = -cur[i];
    }
    cur = 2.0 * ref * ref.dot(cur) - cur;
  }
  return {StateVector(psi.layout(), std::move(cur)), steps, theta};
}

Eigen::MatrixXcd exact_exponential(const Eigen::MatrixXd& h, double t) {
  if (h.rows() != h.cols()) throw NotSquare("exponential of a non-square matrix");
  if (h.size() == 0) return Eigen::MatrixXcd(0, 0);
  return exponential_from(eigensystem(h), t);
}

Eigen::MatrixXcd exact_exponential(const DiracOperator& b, double t, std::size_t max_dim) {
  if (b.dimension() * b.dimension() > max_dim) throw TooLarge("dense exponential exceeds the cap");
  return exact_exponential(b.dense(), t);
}

PhaseDistribution phase_estimation(const DiracOperator& b, int l, int M,
                                   const PhaseEstimationOptions& options) {
  require_power_of_two_m(M);
  if (l < 1) throw InputError("l must be >= 1");
  if (b.dimension() == 0) throw EmptyBasis("the Dirac operator has an empty composite basis");
  if (const auto* trotter = std::get_if<TrotterEvolution>(&options.evolution)) {
    return trotter_phase_estimation(b, l, M, trotter->steps, options.max_dim);
  }
  return exact_phase_estimation(b, l, M, options.max_dim);
}

BettiEstimate betti_from_distribution(const PhaseDistribution& dist) {
  const double peak = dist.l * dist.xi;
  const double rounded = std::round(peak);
  if (std::abs(peak - rounded) > 1e-9) throw InputError("l * xi must be an integer peak position");
  const auto m = static_cast<long>(dist.M);
  const auto p = static_cast<std::size_t>(((static_cast<long>(rounded) % m) + m) % m);

  const double n = static_cast<double>(dist.hilbert_dim);
  const double unrounded = n * dist.probs.at(p);
  const double nearest = std::round(unrounded);
  if (std::abs(unrounded - nearest) > 0.3) {
    throw AmbiguousRounding("N * P(l) = " + std::to_string(unrounded) + " is not near an integer");
  }
  return {static_cast<int>(nearest), unrounded, dist.probs[p] - nearest / n};
}

std::vector<std::uint64_t> sample_counts(const PhaseDistribution& dist, std::uint64_t shots,
                                         std::uint64_t seed) {
  if (shots < 1) throw InputError("shots must be >= 1");
  std::vector<double> cdf(dist.probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) cdf[i] = (acc += dist.probs[i]);

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> counts(dist.probs.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    // 53 random bits -> uniform in [0, acc).
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    ++counts[static_cast<std::size_t>(it - cdf.begin())];
  }
  return counts;
}

}  // namespace qpersist

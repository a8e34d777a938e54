#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qpersist {

using Complex = std::complex<double>;

struct Register {
  std::string name;
  std::size_t dim;
};

/// Selects qubit `qubit` (bit position within the register index) of a register.
struct QubitRef {
  std::size_t reg;
  int qubit;
};

/// Amplitudes over a composite register. The first register in the layout is
/// the most significant digit of the flat index.
class StateVector {
 public:
  /// |0...0>.
  explicit StateVector(std::vector<Register> layout);
  StateVector(std::vector<Register> layout, Eigen::VectorXcd amplitudes);

  std::size_t size() const { return static_cast<std::size_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  const std::vector<Register>& layout() const { return layout_; }
  double norm() const { return amps_.norm(); }

  std::size_t register_index(const std::string& name) const;
  /// Digit of register `reg` within flat index `index`.
  std::size_t digit(std::size_t index, std::size_t reg) const;
  int qubit_count(std::size_t reg) const;

  void apply_hadamard(QubitRef q);
  void apply_hadamard_all(std::size_t reg);
  void apply_cnot(QubitRef control, QubitRef target);
  /// Multiplies the |1>|1> component of two qubits by e^{i phase}.
  void apply_controlled_phase(QubitRef a, QubitRef b, double phase);
  void apply_swap(std::size_t reg, int qa, int qb);

  /// Applies a (reg.dim x reg.dim) matrix to one register, optionally
  /// conditioned on a control qubit being |1>.
  void apply_matrix(std::size_t reg, const Eigen::MatrixXcd& u,
                    std::optional<QubitRef> control = std::nullopt);

  /// Gate-level Fourier transform: |y> -> M^{-1/2} sum_p e^{sign 2 pi i p y / M} |p>.
  void apply_qft(std::size_t reg, int sign);

  /// Replaces the state by its normalised projection onto indices accepted
  /// by `keep`; returns the probability of that outcome.
  double postselect(const std::function<bool(std::size_t)>& keep);

  Eigen::VectorXd marginal(std::size_t reg) const;

 private:
  std::size_t stride(std::size_t reg) const { return strides_.at(reg); }

  std::vector<Register> layout_;
  std::vector<std::size_t> strides_;
  Eigen::VectorXcd amps_;
};

}  // namespace qpersist

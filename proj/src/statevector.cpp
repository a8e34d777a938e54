#include "qpersist/statevector.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "qpersist/errors.hpp"

namespace qpersist {

namespace {

std::size_t product(const std::vector<Register>& layout) {
  std::size_t d = 1;
  for (const auto& r : layout) {
    if (r.dim == 0) throw DimensionMismatch("register " + r.name + " has dimension 0");
    d *= r.dim;
  }
  return d;
}

}  // namespace

StateVector::StateVector(std::vector<Register> layout)
    : StateVector(layout, Eigen::VectorXcd::Unit(product(layout), 0)) {}

StateVector::StateVector(std::vector<Register> layout, Eigen::VectorXcd amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != product(layout_)) {
    throw DimensionMismatch("amplitude count does not match the register layout");
  }
  strides_.assign(layout_.size(), 1);
  for (std::size_t r = layout_.size(); r-- > 1;) strides_[r - 1] = strides_[r] * layout_[r].dim;
}

std::size_t StateVector::register_index(const std::string& name) const {
  for (std::size_t r = 0; r < layout_.size(); ++r) {
    if (layout_[r].name == name) return r;
  }
  throw DimensionMismatch("no register named " + name);
}

std::size_t StateVector::digit(std::size_t index, std::size_t reg) const {
  return (index / strides_[reg]) % layout_[reg].dim;
}

int StateVector::qubit_count(std::size_t reg) const {
  const auto d = layout_.at(reg).dim;
  if (!std::has_single_bit(d)) throw DimensionMismatch("register " + layout_[reg].name + " is not a qubit register");
  return std::countr_zero(d);
}

void StateVector::apply_hadamard(QubitRef q) {
  qubit_count(q.reg);
  const std::size_t offset = (std::size_t{1} << q.qubit) * stride(q.reg);
  const double h = std::numbers::sqrt2 / 2;
  for (std::size_t i = 0; i < size(); ++i) {
    if (((digit(i, q.reg) >> q.qubit) & 1U) == 0) {
      const Complex a = amps_[i];
      const Complex b = amps_[i + offset];
      amps_[i] = h * (a + b);
      amps_[i + offset] = h * (a - b);
    }
  }
}

void StateVector::apply_hadamard_all(std::size_t reg) {
  const int n = qubit_count(reg);
  for (int q = 0; q < n; ++q) apply_hadamard({reg, q});
}

void StateVector::apply_cnot(QubitRef control, QubitRef target) {
  const std::size_t offset = (std::size_t{1} << target.qubit) * stride(target.reg);
  for (std::size_t i = 0; i < size(); ++i) {
    if (((digit(i, target.reg) >> target.qubit) & 1U) != 0) continue;
    if (((digit(i, control.reg) >> control.qubit) & 1U) == 0) continue;
    std::swap(amps_[i], amps_[i + offset]);
  }
}

void StateVector::apply_controlled_phase(QubitRef a, QubitRef b, double phase) {
  const Complex f = std::polar(1.0, phase);
  for (std::size_t i = 0; i < size(); ++i) {
    if (((digit(i, a.reg) >> a.qubit) & 1U) && ((digit(i, b.reg) >> b.qubit) & 1U)) amps_[i] *= f;
  }
}

void StateVector::apply_swap(std::size_t reg, int qa, int qb) {
  if (qa == qb) return;
  const std::size_t s = stride(reg);
  for (std::size_t i = 0; i < size(); ++i) {
    const auto d = digit(i, reg);
    const bool ba = (d >> qa) & 1U;
    const bool bb = (d >> qb) & 1U;
    if (ba && !bb) {
      const auto other = d ^ (std::size_t{1} << qa) ^ (std::size_t{1} << qb);
      std::swap(amps_[i], amps_[i - d * s + other * s]);
    }
  }
}

void StateVector::apply_matrix(std::size_t reg, const Eigen::MatrixXcd& u,
                               std::optional<QubitRef> control) {
  const auto d = layout_.at(reg).dim;
  if (static_cast<std::size_t>(u.rows()) != d || static_cast<std::size_t>(u.cols()) != d) {
    throw DimensionMismatch("matrix does not match register " + layout_[reg].name);
  }
  const std::size_t s = stride(reg);
  const std::size_t block = d * s;
  Eigen::VectorXcd local(d);
  for (std::size_t outer = 0; outer < size(); outer += block) {
    for (std::size_t inner = 0; inner < s; ++inner) {
      const std::size_t base = outer + inner;
      if (control && ((digit(base, control->reg) >> control->qubit) & 1U) == 0) continue;
      for (std::size_t t = 0; t < d; ++t) local[t] = amps_[base + t * s];
      local = u * local;
      for (std::size_t t = 0; t < d; ++t) amps_[base + t * s] = local[t];
    }
  }
}

void StateVector::apply_qft(std::size_t reg, int sign) {
  const int n = qubit_count(reg);
  const double pi = std::numbers::pi;
  for (int j = n - 1; j >= 0; --j) {
    apply_hadamard({reg, j});
    for (int m = j - 1; m >= 0; --m) {
      apply_controlled_phase({reg, m}, {reg, j}, sign * 2.0 * pi / std::ldexp(1.0, j - m + 1));
    }
  }
  for (int i = 0; i < n / 2; ++i) apply_swap(reg, i, n - 1 - i);
}

double StateVector::postselect(const std::function<bool(std::size_t)>& keep) {
  double p = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (keep(i)) {
      p += std::norm(amps_[i]);
    } else {
      amps_[i] = 0.0;
    }
  }
  if (p == 0.0) throw NoMarkedStates("post-selection on an outcome of probability zero");
  amps_ /= std::sqrt(p);
  return p;
}

Eigen::VectorXd StateVector::marginal(std::size_t reg) const {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(layout_.at(reg).dim);
  for (std::size_t i = 0; i < size(); ++i) p[digit(i, reg)] += std::norm(amps_[i]);
  return p;
}

}  // namespace qpersist

#include <cmath>

#include "qpersist/errors.hpp"
#include "qpersist/qsim.hpp"

namespace qpersist {

// e^{-i dt S} is block diagonal on the pairs {|x,y>, |y,x>}:
//   |x,y> -> cos(dt B_xy) |x,y> - i sin(dt B_xy) |y,x>   (x != y)
//   |x,x> -> e^{-i dt B_xx} |x,x>
// Contracting the ancilla against |s> = N^{-1/2} sum_x |x> gives Kraus
// operators K_a = <a|_1 e^{-i dt S} |s>_1 with
//   K_a[j][j] = s cos(dt B_aj)        (j != a)
//   K_a[a][a] = s e^{-i dt B_aa}
//   K_a[m][a] = -i s sin(dt B_ma)     (m != a)
// and zeros elsewhere.
SwapTrotterChannel::SwapTrotterChannel(Eigen::MatrixXd b, double t, int steps)
    : b_(std::move(b)), steps_(steps), dt_(steps > 0 ? t / steps : 0.0) {
  if (steps < 1) throw InputError("Trotter steps must be >= 1");
  if (b_.rows() != b_.cols()) throw NotSquare("SWAP_B needs a square matrix");
  const auto n = b_.rows();
  if (static_cast<std::size_t>(n) > kTrotterMaxDimension) {
    throw TooLarge("SWAP_B evolution is limited to dimension " + std::to_string(kTrotterMaxDimension));
  }
  if (n == 0) return;
  if ((b_ - b_.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw NotSymmetric("SWAP_B needs a symmetric B");

  const double s = 1.0 / std::sqrt(double(n));
  const Complex minus_i(0.0, -1.0);
  diag_.assign(n, Eigen::VectorXcd::Zero(n));
  column_.assign(n, Eigen::VectorXcd::Zero(n));
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == a) {
        diag_[a][a] = s * std::polar(1.0, -dt_ * b_(a, a));
      } else {
        diag_[a][j] = s * std::cos(dt_ * b_(a, j));
        column_[a][j] = minus_i * s * std::sin(dt_ * b_(j, a));
      }
    }
  }
  coherence_ = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    coherence_.diagonal() += s * diag_[a];
    coherence_.col(a) += s * column_[a];
  }
}

Eigen::MatrixXcd SwapTrotterChannel::step(const Eigen::MatrixXcd& rho) const {
  const auto n = b_.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto& d = diag_[a];
    const auto& c = column_[a];
    // K rho K^dagger with K = D + c e_a^T.
    const Eigen::VectorXcd rho_col = rho.col(a);   // rho e_a
    const Eigen::RowVectorXcd rho_row = rho.row(a); // e_a^T rho
    const Eigen::VectorXcd d_rho_col = d.cwiseProduct(rho_col);
    out += d.asDiagonal() * rho * d.conjugate().asDiagonal();
    out += d_rho_col * c.adjoint();
    out += c * (rho_row * d.conjugate().asDiagonal());
    out += rho(a, a) * c * c.adjoint();
  }
  // The step leaves the composite subspace invariant, so no re-projection is needed.
  return out;
}

Eigen::MatrixXcd SwapTrotterChannel::apply(const Eigen::MatrixXcd& rho) const {
  Eigen::MatrixXcd out = rho;
  for (int s = 0; s < steps_; ++s) out = step(out);
  return out;
}

Eigen::MatrixXcd SwapTrotterChannel::superoperator() const {
  const auto n = b_.rows();
  Eigen::MatrixXcd sup(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
      e(a, b) = 1.0;
      const Eigen::MatrixXcd img = apply(e);
      for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) sup(r * n + c, a * n + b) = img(r, c);
      }
    }
  }
  return sup;
}

Eigen::MatrixXcd unitary_superoperator(const Eigen::MatrixXcd& u) {
  const auto n = u.rows();
  Eigen::MatrixXcd sup(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index d = 0; d < n; ++d) sup(a * n + b, c * n + d) = u(a, c) * std::conj(u(b, d));
      }
    }
  }
  return sup;
}

SwapTrotterChannel trotter_exponential(const DiracOperator& b, double t, int steps) {
  return SwapTrotterChannel(b.dense(), t, steps);
}

}  // namespace qpersist

#pragma once

// Shared fixtures and brute-force reference implementations. Nothing here
// calls into the library beyond constructing inputs, so the tests compare
// against genuinely independent computations.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qpersist/geometry.hpp"

namespace testing {

inline constexpr double kEps1 = 1.2;
inline constexpr double kEps2 = 1.8;

/// n points uniform in [0,1]^d.
inline qpersist::PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> pts(n, std::vector<double>(d));
  for (auto& p : pts) {
    for (auto& x : p) x = u(rng);
  }
  return qpersist::PointCloud(std::move(pts));
}

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// All k-simplices of the VR complex by scanning every subset of vertices.
inline std::vector<std::uint64_t> brute_simplices(const qpersist::PointCloud& cloud, int k, double eps) {
  std::vector<std::uint64_t> out;
  const auto n = cloud.size();
  if (k < 0) return out;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    if (std::popcount(m) != k + 1) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        if (((m >> i) & 1U) && ((m >> j) & 1U) && euclid(cloud.point(i), cloud.point(j)) > eps) ok = false;
      }
    }
    if (ok) out.push_back(m);
  }
  return out;
}

/// Full boundary from `cols` to `rows`: entry (-1)^l for the face that omits
/// the l-th vertex, when that face is listed in `rows`.
inline Eigen::MatrixXd brute_boundary(const std::vector<std::uint64_t>& rows,
                                      const std::vector<std::uint64_t>& cols) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    int l = 0;
    for (int v = 0; v < 64; ++v) {
      if (!((cols[c] >> v) & 1U)) continue;
      const std::uint64_t face = cols[c] & ~(std::uint64_t{1} << v);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] == face) d(r, c) = (l % 2 == 0) ? 1.0 : -1.0;
      }
      ++l;
    }
  }
  return d;
}

inline int float_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

/// beta_k^{eps,eps'} = dim Z_k(K) - dim(B_k(L) cap C_k(K)), where
/// dim(B_k(L) cap C_k(K)) = rank d - rank(R d) with R the rows of k-simplices
/// of L that are not in K.
inline int brute_persistent_betti(const qpersist::PointCloud& cloud, int k, double eps, double eps2) {
  const auto km1 = brute_simplices(cloud, k - 1, eps);
  const auto kk = brute_simplices(cloud, k, eps);
  const auto lk = brute_simplices(cloud, k, eps2);
  const auto lk1 = brute_simplices(cloud, k + 1, eps2);
  const int z = static_cast<int>(kk.size()) - float_rank(brute_boundary(km1, kk));
  const Eigen::MatrixXd d = brute_boundary(lk, lk1);
  std::vector<Eigen::Index> outside;
  for (std::size_t r = 0; r < lk.size(); ++r) {
    if (std::find(kk.begin(), kk.end(), lk[r]) == kk.end()) outside.push_back(static_cast<Eigen::Index>(r));
  }
  Eigen::MatrixXd rd(outside.size(), d.cols());
  for (std::size_t i = 0; i < outside.size(); ++i) rd.row(i) = d.row(outside[i]);
  return z - (float_rank(d) - float_rank(rd));
}

/// Phase-estimation outcome distribution from the eigenvalues alone:
/// P(p) = (1/N) sum_lambda |M^{-1} sum_y e^{2 pi i y (l lambda - p)/M}|^2,
/// evaluated in the sin-ratio form with its removable singularity handled.
inline std::vector<double> analytic_distribution(const Eigen::VectorXd& lambdas, int l, int M) {
  std::vector<double> p(M, 0.0);
  for (int q = 0; q < M; ++q) {
    for (double lambda : lambdas) {
      const double delta = (l * lambda - q) / M;
      const double den = std::sin(std::numbers::pi * delta);
      const double num = std::sin(std::numbers::pi * M * delta);
      p[q] += std::abs(den) < 1e-12 ? 1.0 : (num * num) / (double(M) * M * den * den);
    }
    p[q] /= double(lambdas.size());
  }
  return p;
}

/// Dense SWAP_B generator S = sum B(x,y) |y><x| (x) |x><y| on N^2 states.
inline Eigen::MatrixXd dense_swap_generator(const Eigen::MatrixXd& b) {
  const auto n = b.rows();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      // |y><x| (x) |x><y| maps |x,y> to |y,x>.
      s(y * n + x, x * n + y) += b(x, y);
    }
  }
  return s;
}

/// tr_1[ u (|s><s| (x) rho) u^dagger ] with |s> uniform.
inline Eigen::MatrixXcd dense_partial_trace_step(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& rho) {
  const auto n = rho.rows();
  Eigen::MatrixXcd big(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = 0; c < n; ++c) big.block(a * n, c * n, n, n) = rho / std::complex<double>(double(n));
  const Eigen::MatrixXcd evolved = u * big * u.adjoint();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) out += evolved.block(a * n, a * n, n, n);
  return out;
}

inline Eigen::MatrixXcd expi(const Eigen::MatrixXd& h, double t);

/// One SWAP_B step: e^{-i dt S} applied to |s><s| (x) rho, first factor traced out.
inline Eigen::MatrixXcd dense_swap_step(const Eigen::MatrixXd& b, double dt, const Eigen::MatrixXcd& rho) {
  return dense_partial_trace_step(expi(dense_swap_generator(b), -dt), rho);
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

inline Eigen::MatrixXcd expi(const Eigen::MatrixXd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::VectorXcd ph = es.eigenvalues().unaryExpr([t](double v) { return std::polar(1.0, t * v); });
  return es.eigenvectors().cast<std::complex<double>>() * ph.asDiagonal() *
         es.eigenvectors().transpose().cast<std::complex<double>>();
}

}  // namespace testing

namespace testing {

/// Phase-estimation distribution with every controlled power realised by
/// `steps` dense SWAP_B steps. Tracks the (copy register, R) density matrix
/// in full as an (N M) x (N M) matrix with R as the slow index.
inline std::vector<double> dense_trotter_distribution(const Eigen::MatrixXd& b, int l, int M, int steps) {
  using C = std::complex<double>;
  const auto n = b.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_swap_generator(b));

  // Register 2 maximally mixed, R in |+>.
  Eigen::MatrixXcd rho(n * M, n * M);
  for (int y = 0; y < M; ++y)
    for (int y2 = 0; y2 < M; ++y2) rho.block(y * n, y2 * n, n, n) = Eigen::MatrixXcd::Identity(n, n) / C(double(n * M));
  for (int j = 0; (1 << j) < M; ++j) {
    const double dt = -2.0 * std::numbers::pi * l * double(1 << j) * double(n) / M / steps;
    const Eigen::VectorXcd ph = es.eigenvalues().unaryExpr([dt](double v) { return std::polar(1.0, -dt * v); });
    const Eigen::MatrixXcd u = es.eigenvectors().cast<C>() * ph.asDiagonal() * es.eigenvectors().transpose().cast<C>();
    // <s|_1 U |s>_1
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index c = 0; c < n; ++c) g += u.block(a * n, c * n, n, n) / C(double(n));
    for (int st = 0; st < steps; ++st) {
      for (int y = 0; y < M; ++y) {
        for (int y2 = 0; y2 < M; ++y2) {
          const bool on = (y >> j) & 1, on2 = (y2 >> j) & 1;
          Eigen::MatrixXcd blk = rho.block(y * n, y2 * n, n, n);
          if (on && on2) blk = dense_partial_trace_step(u, blk);
          else if (on) blk = g * blk;
          else if (on2) blk = blk * g.adjoint();
          rho.block(y * n, y2 * n, n, n) = blk;
        }
      }
    }
  }
  std::vector<double> p(M);
  for (int q = 0; q < M; ++q) {
    C acc = 0.0;
    for (int y = 0; y < M; ++y)
      for (int y2 = 0; y2 < M; ++y2)
        acc += std::polar(1.0, -2.0 * std::numbers::pi * q * (y - y2) / M) * rho.block(y * n, y2 * n, n, n).trace();
    p[q] = acc.real() / M;
  }
  return p;
}

}  // namespace testing

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qpersist/errors.hpp"
#include "qpersist/qsim.hpp"
#include "qpersist/spectral.hpp"
#include "support.hpp"

using namespace qpersist;
using testing::kEps1;
using testing::kEps2;
using std::numbers::pi;

namespace {

// A DiracOperator shell around an arbitrary symmetric matrix.
DiracOperator wrap(const Eigen::MatrixXd& m, double xi = 1.0) {
  DiracOperator b;
  b.xi = xi;
  for (Eigen::Index i = 0; i < m.rows(); ++i) b.elements.push_back({0, std::size_t(i)});
  b.matrix = m.sparseView();
  return b;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Eigen::VectorXd eig(const DiracOperator& b) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(b.dense(), Eigen::EigenvaluesOnly).eigenvalues();
}

double opnorm(const Eigen::MatrixXcd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

}  // namespace

TEST_CASE("Fourier transform matches the DFT matrix") {
  for (int sign : {-1, 1}) {
    for (std::size_t m : {2u, 4u, 8u, 32u}) {
      for (std::size_t y = 0; y < m; ++y) {
        StateVector sv({{"a", 2}, {"r", m}, {"b", 4}});
        // |1>|y>|3>
        Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(2 * m * 4);
        amps[(1 * m + y) * 4 + 3] = 1.0;
        sv = StateVector(sv.layout(), amps);
        sv.apply_qft(1, sign);
        for (std::size_t p = 0; p < m; ++p) {
          const auto expected = std::polar(1.0 / std::sqrt(double(m)), sign * 2.0 * pi * double(p * y) / double(m));
          REQUIRE(std::abs(sv.amplitudes()[(1 * m + p) * 4 + 3] - expected) < 1e-12);
        }
        CHECK(std::abs(sv.norm() - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("elementary gates") {
  StateVector sv({{"x", 4}, {"y", 4}});
  CHECK(sv.qubit_count(0) == 2);
  CHECK(sv.register_index("y") == 1);
  sv.apply_hadamard({0, 0});
  sv.apply_cnot({0, 0}, {1, 1});
  // (|0,0> + |1,2>)/sqrt2
  CHECK(std::abs(sv.amplitudes()[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(sv.amplitudes()[1 * 4 + 2] - 1.0 / std::sqrt(2.0)) < 1e-15);
  sv.apply_controlled_phase({0, 0}, {1, 1}, pi);
  CHECK(std::abs(sv.amplitudes()[1 * 4 + 2] + 1.0 / std::sqrt(2.0)) < 1e-15);
  sv.apply_swap(1, 0, 1);
  CHECK(std::abs(sv.amplitudes()[1 * 4 + 1] + 1.0 / std::sqrt(2.0)) < 1e-15);
  const auto marg = sv.marginal(0);
  CHECK(marg[0] == doctest::Approx(0.5));
  CHECK(marg[1] == doctest::Approx(0.5));
  const double kept = sv.postselect([&](std::size_t i) { return sv.digit(i, 0) == 0; });
  CHECK(kept == doctest::Approx(0.5));
  CHECK(std::abs(sv.amplitudes()[0] - 1.0) < 1e-15);
}

TEST_CASE("gates preserve the norm") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Eigen::VectorXcd amps(8 * 4 * 8);
  for (auto& a : amps) a = {g(rng), g(rng)};
  amps.normalize();
  StateVector sv({{"s", 8}, {"c", 4}, {"r", 8}}, amps);
  const Eigen::MatrixXcd u = testing::expi(testing::random_symmetric(rng, 4), 0.7);
  sv.apply_hadamard_all(0);
  sv.apply_cnot({0, 2}, {1, 1});
  sv.apply_matrix(1, u, QubitRef{2, 1});
  sv.apply_matrix(1, u);
  sv.apply_controlled_phase({0, 1}, {2, 2}, 0.3);
  sv.apply_qft(2, -1);
  CHECK(std::abs(sv.norm() - 1.0) < 1e-10);
}

TEST_CASE("uniform projected state") {
  const auto four = uniform_projected_state(wrap(Eigen::MatrixXd::Identity(4, 4)));
  CHECK(four.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(four.amplitudes()[i] - 0.5) < 1e-15);

  const FiltrationContext ctx(two_squares());
  const auto b12 = persistent_dirac(1, kEps1, kEps2, 1.0, ctx, RestrictionVariant::Projected, true);
  const auto s12 = uniform_projected_state(b12);
  CHECK(s12.size() == 16);
  CHECK(b12.dimension() == 12);
  for (int i = 12; i < 16; ++i) CHECK(s12.amplitudes()[i] == Complex(0.0));
  CHECK(uniform_projected_state(persistent_dirac(1, kEps2, kEps2, 1.0, ctx, RestrictionVariant::Projected)).size() == 32);
  CHECK_THROWS_AS(uniform_projected_state(wrap(Eigen::MatrixXd(0, 0))), EmptyBasis);
}

TEST_CASE("Grover projection") {
  SUBCASE("already inside") {
    StateVector sv({{"x", 4}}, Eigen::VectorXcd::Unit(4, 1));
    const auto r = grover_project(sv, [](std::size_t i) { return i == 1; });
    CHECK(r.steps == 0);
    CHECK(r.state.amplitudes().isApprox(sv.amplitudes()));
  }
  SUBCASE("one step to certainty") {
    StateVector sv({{"x", 16}});
    sv.apply_hadamard_all(0);
    const auto r = grover_project(sv, [](std::size_t i) { return i < 4; });
    CHECK(r.steps == 1);
    double p = 0.0;
    for (int i = 0; i < 4; ++i) p += std::norm(r.state.amplitudes()[i]);
    CHECK(std::abs(std::sqrt(p) - 1.0) < 1e-12);
  }
  SUBCASE("single marked state out of 64") {
    StateVector sv({{"x", 64}});
    sv.apply_hadamard_all(0);
    const auto r = grover_project(sv, [](std::size_t i) { return i == 0; });
    CHECK(r.steps == 6);
    const double theta = std::asin(1.0 / 8.0);
    CHECK(std::abs(std::abs(r.state.amplitudes()[0]) - std::sin(13 * theta)) < 1e-12);
  }
  SUBCASE("no marked states") {
    StateVector sv({{"x", 4}});
    CHECK_THROWS_AS(grover_project(sv, [](std::size_t i) { return i == 3; }), NoMarkedStates);
  }
}

TEST_CASE("Grover closed form on random instances") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = std::size_t{1} << (1 + rng() % 8);
    Eigen::VectorXcd amps(dim);
    for (auto& a : amps) a = {g(rng), g(rng)};
    amps.normalize();
    std::vector<bool> marked(dim);
    bool any = false;
    for (std::size_t i = 0; i < dim; ++i) any |= (marked[i] = rng() % 5 == 0);
    if (!any) marked[0] = true;
    const auto r = grover_project(StateVector({{"x", dim}}, amps), [&](std::size_t i) { return marked[i]; });
    double p = 0.0;
    for (std::size_t i = 0; i < dim; ++i) if (marked[i]) p += std::norm(r.state.amplitudes()[i]);
    CHECK(std::abs(std::sqrt(p) - std::sin((2 * r.steps + 1) * r.theta)) < 1e-12);
    CHECK(r.steps == int(std::floor(pi / (4 * r.theta))));
  }
}

TEST_CASE("exact exponential") {
  CHECK(exact_exponential(Eigen::MatrixXd::Identity(3, 3) * 2.0, 0.0).isIdentity(1e-14));
  Eigen::MatrixXd d(2, 2);
  d << -1, 0, 0, 1;
  CHECK(exact_exponential(d, pi).isApprox(-Eigen::MatrixXcd::Identity(2, 2), 1e-14));

  const FiltrationContext ctx(two_squares());
  const auto b = persistent_dirac(1, kEps1, kEps1, 1.0, ctx, RestrictionVariant::Projected, true);
  const double t = 2 * pi * 3 / 16;
  const auto u = exact_exponential(b, t);
  CHECK((u * u.adjoint()).isIdentity(1e-10));
  const Eigen::VectorXcd phases = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(u).eigenvalues();
  for (double lambda : eig(b)) {
    const auto target = std::polar(1.0, t * lambda);
    double best = 1e9;
    for (auto z : phases) best = std::min(best, std::abs(z - target));
    CHECK(best < 1e-9);
  }
  CHECK_THROWS_AS(exact_exponential(b, t, 10), TooLarge);
}

TEST_CASE("phase estimation on a scalar operator") {
  const auto b = wrap(2.0 * Eigen::MatrixXd::Identity(5, 5), 2.0);
  const auto dist = phase_estimation(b, 3, 16);
  CHECK(dist.hilbert_dim == 5);
  for (int p = 0; p < 16; ++p) CHECK(dist.probs[p] == doctest::Approx(p == 6 ? 1.0 : 0.0).epsilon(1e-12));
  CHECK(betti_from_distribution(dist).betti == 5);
}

TEST_CASE("phase estimation matches the closed form") {
  const FiltrationContext ctx(two_squares());
  const auto p = RestrictionVariant::Projected;
  for (auto [e1, e2, drop] : {std::tuple{kEps1, kEps1, true}, {kEps2, kEps2, false}, {kEps1, kEps2, true}}) {
    const auto b = persistent_dirac(1, e1, e2, 1.0, ctx, p, drop);
    for (int m : {16, 256}) {
      const auto dist = phase_estimation(b, 3, m);
      CHECK(max_diff(dist.probs, testing::analytic_distribution(eig(b), 3, m)) < 1e-9);
      double total = 0.0;
      for (double x : dist.probs) total += x;
      CHECK(std::abs(total - 1.0) < 1e-9);
    }
  }
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = 2 + rng() % 5;
    const FiltrationContext rc(testing::random_cloud(rng, n, 2));
    const auto& cs = rc.critical_scales();
    const double e1 = cs[rng() % cs.size()];
    const double e2 = std::max(e1, cs[rng() % cs.size()]);
    const auto b = persistent_dirac(int(rng() % 2), e1, e2, 1.0, rc, p);
    const auto dist = phase_estimation(b, 3, 16);
    CHECK(max_diff(dist.probs, testing::analytic_distribution(eig(b), 3, 16)) < 1e-9);
  }
}

TEST_CASE("phase estimation argument checks") {
  const auto b = wrap(Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(phase_estimation(b, 3, 12), BadM);
  CHECK_THROWS_AS(phase_estimation(b, 3, 1), BadM);
  CHECK_THROWS_AS(phase_estimation(b, 0, 16), InputError);
  CHECK_THROWS_AS(phase_estimation(b, 3, 16, {ExactEvolution{}, 16}), TooLarge);
  CHECK_THROWS_AS(phase_estimation(wrap(Eigen::MatrixXd(0, 0)), 3, 16), EmptyBasis);
}

TEST_CASE("peaks sit at the scaled eigenvalues") {
  // A peak's own contribution at the nearest bin is the squared Dirichlet
  // kernel, >= 0.968 within 0.1 of a bin centre and >= 4/pi^2 at worst.
  std::mt19937_64 rng(41);
  const int l = 3, M = 64;
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = 3 + rng() % 4;
    const FiltrationContext rc(testing::random_cloud(rng, n, 2));
    const auto& cs = rc.critical_scales();
    const double e = cs[rng() % cs.size()];
    const auto b = persistent_dirac(1, e, e, 1.0, rc, RestrictionVariant::Projected);
    const auto dist = phase_estimation(b, l, M);
    const auto s = spectrum(b, 1e-8);
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
      const double x = l * s.eigenvalues[i];
      if (x < 0 || x >= M - 1) continue;
      bool isolated = true;
      for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
        if (j != i && std::abs(l * s.eigenvalues[j] - x) < 2.0) isolated = false;
      }
      if (!isolated) continue;
      const auto p = static_cast<std::size_t>(std::lround(x)) % M;
      const double base = double(s.multiplicities[i]) / double(dist.hilbert_dim);
      const double offset = std::abs(x - std::round(x));
      CHECK(dist.probs[p] >= base * (offset <= 0.1 ? 0.9 : 4.0 / (pi * pi)));
    }
  }
}

TEST_CASE("Betti numbers from distributions") {
  const FiltrationContext ctx(two_squares());
  const auto p = RestrictionVariant::Projected;
  const auto d11 = phase_estimation(persistent_dirac(1, kEps1, kEps1, 1.0, ctx, p, true), 3, 16);
  const auto e11 = betti_from_distribution(d11);
  CHECK(e11.betti == 1);
  CHECK(std::abs(d11.probs[3] - e11.leakage - 1.0 / 8.0) < 1e-12);
  const auto e12 = betti_from_distribution(phase_estimation(persistent_dirac(1, kEps1, kEps2, 1.0, ctx, p, true), 3, 16));
  CHECK(e12.betti == 0);

  // No eigenvalue at +xi and every 3*lambda far from bin 3.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << 4.3, -2.2, 5.1;
  const auto far = betti_from_distribution(phase_estimation(wrap(d), 3, 1024));
  CHECK(far.betti == 0);
  CHECK(far.unrounded < 0.01);

  PhaseDistribution ambiguous{{0.5, 0.5}, 1, 2, 1.0, 1};
  CHECK_THROWS_AS(betti_from_distribution(ambiguous), AmbiguousRounding);
}

TEST_CASE("sampling") {
  PhaseDistribution point{{0.0, 0.0, 1.0, 0.0}, 1, 4, 1.0, 1};
  CHECK(sample_counts(point, 500, 1) == std::vector<std::uint64_t>{0, 0, 500, 0});
  const auto one = sample_counts(point, 1, 9);
  CHECK(std::count_if(one.begin(), one.end(), [](auto c) { return c != 0; }) == 1);
  CHECK_THROWS_AS(sample_counts(point, 0, 1), InputError);

  const FiltrationContext ctx(two_squares());
  const auto dist = phase_estimation(persistent_dirac(1, kEps1, kEps1, 1.0, ctx, RestrictionVariant::Projected, true), 3, 16);
  const std::uint64_t shots = 100000;
  const auto a = sample_counts(dist, shots, 7);
  CHECK(a == sample_counts(dist, shots, 7));
  CHECK(a != sample_counts(dist, shots, 8));
  const double emp = double(a[3]) / double(shots);
  const double sigma = std::sqrt(dist.probs[3] * (1 - dist.probs[3]) / double(shots));
  CHECK(std::abs(emp - dist.probs[3]) <= 3 * sigma);
  MESSAGE("empirical P(3) = " << emp << ", exact " << dist.probs[3] << ", (P - 1/8)/sigma = "
                              << (emp - 0.125) / sigma);
}

TEST_CASE("SWAP_B step equals the dense partial-trace construction") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    const auto n = 2 + rng() % 6;
    const Eigen::MatrixXd b = testing::random_symmetric(rng, n);
    Eigen::MatrixXcd x(n, n);
    for (auto& v : x.reshaped()) v = {g(rng), g(rng)};
    Eigen::MatrixXcd rho = x * x.adjoint();
    rho /= rho.trace();
    const double t = 0.37;
    const SwapTrotterChannel ch(b, t, 1);
    CHECK((ch.step(rho) - testing::dense_swap_step(b, t, rho)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(ch.step(rho).trace() - 1.0) < 1e-12);
    CHECK(SwapTrotterChannel(b, 0.0, 3).apply(rho).isApprox(rho, 1e-14));
  }
  CHECK_THROWS_AS(SwapTrotterChannel(Eigen::MatrixXd::Identity(2, 2), 1.0, 0), InputError);
  CHECK_THROWS_AS(SwapTrotterChannel(Eigen::MatrixXd::Identity(65, 65), 1.0, 1), TooLarge);
}

TEST_CASE("SWAP_B single-step error is second order") {
  // One step of length dt against the exact e^{-i dt B/N}: error ~ dt^2.
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto n = 3 + rng() % 6;
    const Eigen::MatrixXd b = testing::random_symmetric(rng, n);
    auto err = [&](double dt) {
      const auto exact = unitary_superoperator(testing::expi(b, -dt / double(n)));
      return opnorm(SwapTrotterChannel(b, dt, 1).superoperator() - exact);
    };
    const double ratio = err(0.02) / err(0.01);
    CHECK(ratio > 3.8);
    CHECK(ratio < 4.2);
  }
}

TEST_CASE("SWAP_B evolution converges to the exact unitary channel") {
  std::mt19937_64 rng(12);
  const auto n = 4;
  const Eigen::MatrixXd b = testing::random_symmetric(rng, n);
  const double t = 1.0;
  const auto exact = unitary_superoperator(testing::expi(b, -t / n));
  double prev = 1e9;
  for (int steps : {10, 100, 1000}) {
    const double e = opnorm(trotter_exponential(wrap(b), t, steps).superoperator() - exact);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("Trotterized phase estimation approaches the exact distribution") {
  const FiltrationContext ctx(two_squares());
  const auto b = persistent_dirac(1, kEps1, kEps1, 1.0, ctx, RestrictionVariant::Projected, true);
  const auto exact = phase_estimation(b, 3, 16);
  double prev = 1e9;
  // Globally first order in the step count, so convergence is slow.
  for (int steps : {1000, 10000, 100000}) {
    const auto trot = phase_estimation(b, 3, 16, {TrotterEvolution{steps}});
    double total = 0.0;
    for (double x : trot.probs) total += x;
    CHECK(std::abs(total - 1.0) < 1e-9);
    const double e = max_diff(trot.probs, exact.probs);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 2e-3);
  CHECK(betti_from_distribution(phase_estimation(b, 3, 16, {TrotterEvolution{100000}})).betti == 1);
}

TEST_CASE("Trotterized phase estimation equals the dense construction") {
  std::mt19937_64 rng(77);
  // 5 takes the matrix-power route, 33 the step-by-step one.
  for (auto [n, M, steps] : {std::tuple{5, 4, 3}, {33, 2, 1}}) {
    const Eigen::MatrixXd b = testing::random_symmetric(rng, n);
    const auto dist = phase_estimation(wrap(b), 1, M, {TrotterEvolution{steps}});
    CHECK(max_diff(dist.probs, testing::dense_trotter_distribution(b, 1, M, steps)) < 1e-10);
  }
}

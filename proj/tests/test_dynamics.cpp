#include <doctest.h>

#include <cmath>
#include <random>

#include "srpair/dynamics.hpp"
#include "srpair/errors.hpp"
#include "srpair/operators.hpp"

using namespace srpair;

namespace {

std::vector<double> grid(double start, double stop, double step) {
  std::vector<double> t;
  for (double x = start; x <= stop + 1e-12; x += step) t.push_back(x);
  return t;
}

Density4 random_density(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Operator4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = std::complex<double>(n(rng), n(rng));
  Density4 rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace

TEST_CASE("a lone emitter decays exponentially regardless of the channel split") {
  for (const double beta : {0.0, 0.37, 1.0}) {
    SystemParams p;
    p.gamma1 = 1.0;
    p.gamma2 = 0.0;
    p.beta = beta;
    const SpectralDecomposition dec = decompose(build_liouvillian(p, false));
    const Density4 rho1 = propagate(dec, basis_state(kEG), {1.0}).front();
    const double population = (number_operator(1) * rho1).trace().real();
    CHECK(population == doctest::Approx(0.36787944117144233).epsilon(1e-10));
  }
}

TEST_CASE("propagation preserves trace, hermiticity and positivity") {
  SystemParams p;
  p.gamma1 = 1.3;
  p.gamma2 = 0.7;
  p.beta = 0.65;
  p.delta = 2.2;
  p.gamma_d = 3.0;
  p.gamma_nr = 0.1;
  p.gamma_p = 0.2;

  std::mt19937 rng(3);
  const SpectralDecomposition dec = decompose(build_liouvillian(p, true));
  const Density4 rho0 = random_density(rng);
  for (const Density4& rho : propagate(dec, rho0, grid(0.0, 4.0, 0.25))) {
    CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-10);
    CHECK((rho - rho.adjoint()).norm() <= 1e-10);
    Eigen::SelfAdjointEigenSolver<Operator4> es(rho);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("without the shared channel the emitters stay uncorrelated") {
  SystemParams p;
  p.gamma1 = 0.9;
  p.gamma2 = 0.4;
  p.beta = 0.0;
  p.delta = 1.7;
  p.gamma_d = 0.8;

  const SpectralDecomposition dec = decompose(build_liouvillian(p, false));
  const Operator4 n1 = number_operator(1);
  const Operator4 n2 = number_operator(2);
  for (const double t : {0.3, 1.0, 2.5}) {
    const Density4 rho = propagate(dec, basis_state(kEE), {t}).front();
    const double joint = (n1 * n2 * rho).trace().real();
    const double p1 = (n1 * rho).trace().real();
    const double p2 = (n2 * rho).trace().real();
    CHECK(joint == doctest::Approx(p1 * p2).epsilon(1e-10));
    CHECK(p1 == doctest::Approx(std::exp(-p.gamma1 * t)).epsilon(1e-10));
    CHECK(p2 == doctest::Approx(std::exp(-p.gamma2 * t)).epsilon(1e-10));
  }
}

TEST_CASE("optical coherence decays at half the population plus dephasing rate") {
  SystemParams p;
  p.gamma1 = 0.8;
  p.gamma2 = 0.0;
  p.beta = 0.5;
  p.gamma_d = 1.5;

  // Emitter 1 in (|g> + |e>)/sqrt(2), emitter 2 idle.
  Density4 rho0 = Density4::Zero();
  rho0(kGG, kGG) = 0.5;
  rho0(kEG, kEG) = 0.5;
  rho0(kGG, kEG) = 0.5;
  rho0(kEG, kGG) = 0.5;

  const SpectralDecomposition dec = decompose(build_liouvillian(p, false));
  for (const double t : {0.5, 1.0, 2.0}) {
    const Density4 rho = propagate(dec, rho0, {t}).front();
    const double expected = 0.5 * std::exp(-0.5 * (p.gamma1 + p.gamma_d) * t);
    CHECK(std::abs(rho(kGG, kEG)) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("ideal collective decay: bright state at twice the single rate, dark state frozen") {
  SystemParams p;
  p.gamma1 = 1.0;
  p.gamma2 = 1.0;
  p.beta = 1.0;

  const SpectralDecomposition dec = decompose(build_liouvillian(p, false));
  const Operator4 sig = collective_operator(p.gamma1, p.gamma2);
  const Operator4 sds = sig.adjoint() * sig;

  for (const double t : {0.1, 0.5, 1.5}) {
    const Density4 rb = propagate(dec, bright_state(1.0, 1.0), {t}).front();
    const double ib = (sds * rb).trace().real();
    CHECK(ib == doctest::Approx(2.0 * std::exp(-2.0 * t)).epsilon(1e-9));

    const Density4 rd = propagate(dec, dark_state(1.0, 1.0), {t}).front();
    CHECK((sds * rd).trace().real() <= 1e-12);
    // The dark state does not evolve at all in the ideal limit.
    CHECK((rd - dark_state(1.0, 1.0)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("steady state under weak repumping") {
  SystemParams p;
  p.gamma1 = 1.0;
  p.gamma2 = 1.0;
  p.beta = 0.0;
  p.gamma_p = 0.01;

  const SteadyState ss = steady_state(build_liouvillian(p, true));
  CHECK(ss.unique);
  CHECK(ss.residual <= 1e-10);
  CHECK(std::abs(ss.rho.trace().real() - 1.0) <= 1e-12);
  const double n1 = (number_operator(1) * ss.rho).trace().real();
  CHECK(n1 == doctest::Approx(0.01 / 1.01).epsilon(1e-10));
}

TEST_CASE("steady state uniqueness reflects the kernel of the generator") {
  SystemParams p;
  p.gamma1 = 1.0;
  p.gamma2 = 1.0;

  // Ideal collective decay leaves the dark state stationary as well: the
  // kernel is degenerate and the solver must say so.
  p.beta = 1.0;
  CHECK_FALSE(steady_state(build_liouvillian(p, false)).unique);

  // Side channels drain the dark state; the ground state is the unique
  // stationary point.
  p.beta = 0.8;
  const SteadyState ss = steady_state(build_liouvillian(p, false));
  CHECK(ss.unique);
  CHECK(ss.rho(kGG, kGG).real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("propagation through a defective generator falls back to the exponential") {
  // Two identical resonant emitters with pure collective decay produce a
  // non-diagonalizable generator; results must still be exact.
  SystemParams p;
  p.gamma1 = 1.0;
  p.gamma2 = 1.0;
  p.beta = 1.0;

  const SpectralDecomposition dec = decompose(build_liouvillian(p, false));
  const Density4 rho = propagate(dec, basis_state(kEE), {0.7}).front();
  CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-10);
  // Population of |e1 e2> still decays at the full rate 2 gamma.
  CHECK(rho(kEE, kEE).real() == doctest::Approx(std::exp(-2.0 * 0.7)).epsilon(1e-9));
}

TEST_CASE("regression evolution matches the propagator applied per delay") {
  SystemParams p;
  p.gamma1 = 0.6;
  p.gamma2 = 1.1;
  p.beta = 0.8;
  p.delta = 3.3;
  p.gamma_d = 2.0;
  p.gamma_p = 0.1;

  const SpectralDecomposition dec = decompose(build_liouvillian(p, true));
  std::mt19937 rng(5);
  const Operator4 seed = random_density(rng) * std::complex<double>(0.4, 0.9);

  const std::vector<double> taus = {0.0, 0.2, 1.0, 2.7};
  const std::vector<Operator4> evolved = regression_evolve(dec, seed, taus);
  REQUIRE(evolved.size() == taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    CHECK((evolved[i] - apply_propagator(dec, seed, taus[i])).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK((evolved[0] - seed).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("propagation validates its inputs") {
  SystemParams p;
  const SpectralDecomposition dec = decompose(build_liouvillian(p, false));

  CHECK_THROWS_AS(propagate(dec, basis_state(kEG), {-0.5}), ValidationError);

  Density4 bad = basis_state(kEG);
  bad(0, 1) = std::complex<double>(0.0, 0.3);
  CHECK_THROWS_AS(propagate(dec, bad, {1.0}), ValidationError);
}

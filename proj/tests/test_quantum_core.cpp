#include <doctest.h>

#include <complex>
#include <random>

#include "srpair/errors.hpp"
#include "srpair/operators.hpp"
#include "srpair/oracle.hpp"
#include "srpair/superop.hpp"

using namespace srpair;
using std::complex;

namespace {

Operator4 random_matrix(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Operator4 a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = complex<double>(n(rng), n(rng));
  return a;
}

Density4 random_density(std::mt19937& rng) {
  const Operator4 g = random_matrix(rng);
  Operator4 rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

SystemParams sample_params(int which) {
  SystemParams p;
  switch (which) {
    case 0:
      p.gamma1 = 1.3;
      p.gamma2 = 0.7;
      p.beta = 0.65;
      p.delta = 2.2;
      p.gamma_d = 3.0;
      p.gamma_nr = 0.1;
      p.gamma_p = 0.0;
      break;
    case 1:
      p.gamma1 = 0.4;
      p.gamma2 = 0.4;
      p.beta = 1.0;
      p.delta = -1.1;
      p.gamma_d = 0.0;
      p.gamma_nr = 0.0;
      p.gamma_p = 0.05;
      break;
    default:
      p.gamma1 = 2.0;
      p.gamma2 = 0.2;
      p.beta = 0.0;
      p.delta = 0.0;
      p.gamma_d = 8.0;
      p.gamma_nr = 0.5;
      p.gamma_p = 0.3;
      break;
  }
  return p;
}

}  // namespace

TEST_CASE("lowering and number operators act on the documented basis") {
  const Operator4 s1 = lowering_operator(1);
  const Operator4 s2 = lowering_operator(2);

  // sigma_1^- sends |e1 g2> -> |g1 g2> and |e1 e2> -> |g1 e2>.
  CHECK(s1(kGG, kEG) == complex<double>(1.0, 0.0));
  CHECK(s1(kGE, kEE) == complex<double>(1.0, 0.0));
  CHECK(s1.cwiseAbs().sum() == doctest::Approx(2.0).epsilon(1e-15));

  // sigma_2^- sends |g1 e2> -> |g1 g2> and |e1 e2> -> |e1 g2>.
  CHECK(s2(kGG, kGE) == complex<double>(1.0, 0.0));
  CHECK(s2(kEG, kEE) == complex<double>(1.0, 0.0));

  // Nilpotent on a two-level system.
  CHECK((s1 * s1).norm() == 0.0);
  CHECK((s2 * s2).norm() == 0.0);

  // Number operators are the adjoint products and are projectors.
  const Operator4 n1 = number_operator(1);
  const Operator4 n2 = number_operator(2);
  CHECK((n1 - s1.adjoint() * s1).norm() <= 1e-15);
  CHECK((n2 - s2.adjoint() * s2).norm() <= 1e-15);
  CHECK((n1 * n1 - n1).norm() <= 1e-15);
  CHECK(n1(kEG, kEG).real() == 1.0);
  CHECK(n1(kGE, kGE).real() == 0.0);
  CHECK(n2(kGE, kGE).real() == 1.0);
  CHECK((n1 + n2)(kEE, kEE).real() == 2.0);
}

TEST_CASE("detuning hamiltonian splits the single-excitation states symmetrically") {
  const double delta_uev = 1.1;
  const Operator4 h = detuning_hamiltonian(delta_uev);
  const double half_angular = 0.5 * delta_uev / kHbarUevNs;

  CHECK(h(kEG, kEG).real() == doctest::Approx(0.8355970964).epsilon(1e-9));
  CHECK(h(kEG, kEG).real() == doctest::Approx(half_angular).epsilon(1e-14));
  CHECK(h(kGE, kGE).real() == doctest::Approx(-half_angular).epsilon(1e-14));
  CHECK(h(kGG, kGG) == complex<double>(0.0, 0.0));
  CHECK(h(kEE, kEE) == complex<double>(0.0, 0.0));
  CHECK(std::abs(h.trace()) <= 1e-15);

  // Diagonal, so it commutes with the total excitation number.
  const Operator4 ntot = number_operator(1) + number_operator(2);
  CHECK((h * ntot - ntot * h).norm() <= 1e-15);

  // Sign convention: emitter 1 above the mean for positive detuning.
  CHECK(detuning_hamiltonian(-1.1)(kEG, kEG).real() == doctest::Approx(-half_angular));
}

TEST_CASE("collective operator interferes the two emission amplitudes") {
  const double g1 = 1.3, g2 = 0.7;
  const Operator4 sig = collective_operator(g1, g2);
  const Operator4 expected = std::sqrt(g1) * lowering_operator(1) + std::sqrt(g2) * lowering_operator(2);
  CHECK((sig - expected).norm() <= 1e-15);

  // Two-photon amplitude: Sigma^2 = 2 sqrt(g1 g2) |gg><ee|.
  const Operator4 sig2 = sig * sig;
  CHECK(sig2(kGG, kEE).real() == doctest::Approx(2.0 * std::sqrt(g1 * g2)).epsilon(1e-14));
  CHECK(sig2.cwiseAbs().sum() == doctest::Approx(2.0 * std::sqrt(g1 * g2)).epsilon(1e-14));

  CHECK_THROWS_AS(collective_operator(-1.0, 1.0), ValidationError);
}

TEST_CASE("bright and dark states are orthogonal and the dark state is decoupled") {
  for (const auto& [g1, g2] : {std::pair{1.0, 1.0}, std::pair{1.3, 0.7}}) {
    const Density4 bright = bright_state(g1, g2);
    const Density4 dark = dark_state(g1, g2);
    const Operator4 sig = collective_operator(g1, g2);

    CHECK(bright.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dark.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    // Orthogonal rank-one projectors.
    CHECK((bright * dark).cwiseAbs().maxCoeff() <= 1e-14);
    // The dark state never emits into the shared channel.
    CHECK((sig * dark * sig.adjoint()).trace().real() <= 1e-14);
    // The bright state carries the whole collective emission rate g1 + g2.
    CHECK((sig * bright * sig.adjoint()).trace().real() == doctest::Approx(g1 + g2).epsilon(1e-13));
  }
}

TEST_CASE("single excitation states are normalized pure states") {
  const Density4 rho = single_excitation_state({0.3, 0.4}, {-0.2, 0.1});
  CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((rho - rho.adjoint()).norm() <= 1e-14);
  CHECK((rho * rho - rho).norm() <= 1e-13);  // pure
  CHECK(rho(kGG, kGG).real() == 0.0);
  CHECK(rho(kEE, kEE).real() == 0.0);

  CHECK_THROWS_AS(single_excitation_state(0.0, 0.0), ValidationError);
}

TEST_CASE("vectorization identities hold for random matrices") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Operator4 a = random_matrix(rng);
    const Operator4 b = random_matrix(rng);
    const Operator4 rho = random_matrix(rng);

    CHECK((devectorize(vectorize(rho)) - rho).norm() <= 1e-15);

    // vec(A rho B) = right_multiplier(B) left_multiplier(A) vec(rho).
    const Vec16 lhs = vectorize(a * rho * b);
    const Vec16 rhs = right_multiplier(b) * (left_multiplier(a) * vectorize(rho));
    CHECK((lhs - rhs).norm() <= 1e-12);

    const std::complex<double> traced = (trace_functional() * vectorize(rho)).value();
    CHECK(std::abs(traced - rho.trace()) <= 1e-13);
  }
}

TEST_CASE("generator action matches the term-by-term master equation") {
  std::mt19937 rng(11);
  for (int which = 0; which < 3; ++which) {
    const SystemParams p = sample_params(which);
    for (const bool with_pump : {false, true}) {
      const Superoperator16 lv = build_liouvillian(p, with_pump);
      for (int trial = 0; trial < 3; ++trial) {
        const Operator4 rho = random_matrix(rng);
        const Operator4 via_superop = devectorize(lv * vectorize(rho));
        const Operator4 direct = oracle::master_equation_rhs(p, rho, with_pump);
        CHECK((via_superop - direct).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("generator preserves the trace exactly") {
  std::mt19937 rng(13);
  for (int which = 0; which < 3; ++which) {
    const SystemParams p = sample_params(which);
    for (const bool with_pump : {false, true}) {
      const Superoperator16 lv = build_liouvillian(p, with_pump);
      CHECK((trace_functional() * lv).cwiseAbs().maxCoeff() <= 1e-12);
      const Density4 rho = random_density(rng);
      CHECK(std::abs(devectorize(lv * vectorize(rho)).trace()) <= 1e-12);
    }
  }
}

TEST_CASE("relabeling the emitters is a symmetry of the generator") {
  // Swap gamma1 <-> gamma2 and flip the detuning sign; physics must follow
  // the basis permutation |g1 e2> <-> |e1 g2>.
  Operator4 perm = Operator4::Zero();
  perm(kGG, kGG) = 1.0;
  perm(kGE, kEG) = 1.0;
  perm(kEG, kGE) = 1.0;
  perm(kEE, kEE) = 1.0;

  SystemParams p = sample_params(0);
  SystemParams q = p;
  std::swap(q.gamma1, q.gamma2);
  q.delta = -p.delta;

  std::mt19937 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    const Operator4 rho = random_matrix(rng);
    const Operator4 lhs = oracle::master_equation_rhs(q, perm * rho * perm, true);
    const Operator4 rhs = perm * oracle::master_equation_rhs(p, rho, true) * perm;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("parameter validation rejects unphysical values") {
  SystemParams p;
  p.gamma1 = -0.1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = SystemParams{};
  p.beta = 1.2;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = SystemParams{};
  p.gamma_d = std::nan("");
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = SystemParams{};
  p.gamma_p = -1e-9;
  CHECK_THROWS_AS(p.validate(), ValidationError);

  p = SystemParams{};
  p.gamma1 = 0.1;
  p.gamma2 = 0.1;
  p.delta = 100.0;  // angular frequency dominates every rate
  CHECK(p.max_rate() >= detuning_to_angular(100.0));
}

TEST_CASE("basis state projectors and density validation") {
  const Density4 eg = basis_state(kEG);
  CHECK(eg(kEG, kEG).real() == 1.0);
  CHECK(eg.trace().real() == 1.0);

  Density4 bad = eg;
  bad(0, 1) = complex<double>(0.0, 0.5);  // not hermitian
  CHECK_THROWS_AS(validate_density(bad), ValidationError);

  bad = 2.0 * eg;  // trace 2
  CHECK_THROWS_AS(validate_density(bad), ValidationError);

  Density4 neg = Density4::Zero();
  neg(kGG, kGG) = 1.5;
  neg(kEE, kEE) = -0.5;  // negative eigenvalue
  CHECK_THROWS_AS(validate_density(neg), ValidationError);
}

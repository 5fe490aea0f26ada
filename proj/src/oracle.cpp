#include "srpair/oracle.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "srpair/errors.hpp"

namespace srpair::oracle {

namespace {

using Cplx = std::complex<double>;

// All jump channels of the master equation with their operators prebuilt,
// so the Euler loop pays only matrix products. Everything here works on
// plain 4x4 matrices; none of the vectorized machinery is used.
struct Channels {
  Operator4 hamiltonian;
  std::vector<Operator4> ops;       // each already carries sqrt(rate)
  std::vector<Operator4> ops_sq;    // O^dag O per channel
};

Channels build_channels(const SystemParams& params, bool with_pump) {
  params.validate();
  Channels ch;
  ch.hamiltonian = detuning_hamiltonian(params.delta);

  auto add = [&ch](const Operator4& op) {
    ch.ops.push_back(op);
    ch.ops_sq.push_back(op.adjoint() * op);
  };

  if (params.beta > 0.0) {
    add(std::sqrt(params.beta) * collective_operator(params.gamma1, params.gamma2));
  }
  if (params.beta < 1.0) {
    add(std::sqrt((1.0 - params.beta) * params.gamma1) * lowering_operator(1));
    add(std::sqrt((1.0 - params.beta) * params.gamma2) * lowering_operator(2));
  }
  if (params.gamma_d > 0.0) {
    add(std::sqrt(params.gamma_d) * number_operator(1));
    add(std::sqrt(params.gamma_d) * number_operator(2));
  }
  if (params.gamma_nr > 0.0) {
    add(std::sqrt(params.gamma_nr) * lowering_operator(1));
    add(std::sqrt(params.gamma_nr) * lowering_operator(2));
  }
  if (with_pump && params.gamma_p > 0.0) {
    add(std::sqrt(params.gamma_p) * lowering_operator(1).adjoint());
    add(std::sqrt(params.gamma_p) * lowering_operator(2).adjoint());
  }
  return ch;
}

Operator4 rhs_from_channels(const Channels& ch, const Operator4& rho) {
  const Cplx i_unit(0.0, 1.0);
  Operator4 out = -i_unit * (ch.hamiltonian * rho - rho * ch.hamiltonian);
  for (std::size_t k = 0; k < ch.ops.size(); ++k) {
    out += ch.ops[k] * rho * ch.ops[k].adjoint();
    out -= 0.5 * (ch.ops_sq[k] * rho + rho * ch.ops_sq[k]);
  }
  return out;
}

void check_step(const SystemParams& params, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("Euler step size must be positive and finite");
  }
  const double rate = params.max_rate();
  if (rate > 0.0 && dt > 1e-4 / rate) {
    std::ostringstream msg;
    msg << "Euler step " << dt << " ns too coarse for max rate " << rate
        << " 1/ns (need dt <= 1e-4 / rate)";
    throw ValidationError(msg.str());
  }
}

}  // namespace

Operator4 master_equation_rhs(const SystemParams& params, const Operator4& rho, bool with_pump) {
  return rhs_from_channels(build_channels(params, with_pump), rho);
}

Operator4 euler_propagate(const SystemParams& params, const Operator4& seed, double t_end,
                          double dt, bool with_pump) {
  check_step(params, dt);
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw ValidationError("Euler end time must be >= 0 and finite");
  }
  const double steps_real = t_end / dt;
  const long long steps = std::llround(steps_real);
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-6) {
    throw ValidationError("Euler end time must be an integer multiple of dt");
  }
  const Channels ch = build_channels(params, with_pump);
  Operator4 rho = seed;
  for (long long s = 0; s < steps; ++s) {
    rho += dt * rhs_from_channels(ch, rho);
  }
  return rho;
}

std::vector<Operator4> euler_trajectory(const SystemParams& params, const Operator4& seed,
                                        const std::vector<double>& times, double dt,
                                        bool with_pump) {
  check_step(params, dt);
  std::vector<long long> marks;
  marks.reserve(times.size());
  long long prev = -1;
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw ValidationError("Euler sample times must be >= 0 and finite");
    }
    const double steps_real = t / dt;
    const long long k = std::llround(steps_real);
    if (std::abs(steps_real - static_cast<double>(k)) > 1e-6) {
      throw ValidationError("Euler sample times must be integer multiples of dt");
    }
    if (k <= prev) {
      throw ValidationError("Euler sample times must be strictly increasing");
    }
    prev = k;
    marks.push_back(k);
  }

  const Channels ch = build_channels(params, with_pump);
  std::vector<Operator4> out;
  out.reserve(times.size());
  Operator4 rho = seed;
  long long step = 0;
  for (long long mark : marks) {
    for (; step < mark; ++step) rho += dt * rhs_from_channels(ch, rho);
    out.push_back(rho);
  }
  return out;
}

SingleEmitterState analytic_single_emitter(double gamma, double gamma_d, double p0, double c0,
                                           double t) {
  if (gamma < 0.0 || gamma_d < 0.0) {
    throw ValidationError("single-emitter rates must be >= 0");
  }
  SingleEmitterState s;
  s.excited_population = p0 * std::exp(-gamma * t);
  // The number-operator dephasing channel D[sqrt(gamma_d) n] damps the
  // coherence at gamma_d / 2, on top of the radiative gamma / 2.
  s.coherence_magnitude = c0 * std::exp(-0.5 * (gamma + gamma_d) * t);
  return s;
}

double analytic_dicke_pair(double gamma, double beta, double t) {
  if (gamma < 0.0 || beta < 0.0 || beta > 1.0) {
    throw ValidationError("Dicke pair needs gamma >= 0 and beta in [0, 1]");
  }
  // For two identical resonant emitters without dephasing, the combination
  // <Sigma^dag Sigma> closes on itself and decays at exactly (1 + beta)
  // gamma from any single-excitation initial state.
  return std::exp(-(1.0 + beta) * gamma * t);
}

RatePair collective_rate_pair(double gamma1, double gamma2, double beta) {
  if (gamma1 < 0.0 || gamma2 < 0.0 || beta < 0.0 || beta > 1.0) {
    throw ValidationError("rate pair needs nonnegative rates and beta in [0, 1]");
  }
  const double mean = 0.5 * (gamma1 + gamma2);
  const double split = std::sqrt(0.25 * (gamma1 - gamma2) * (gamma1 - gamma2) +
                                 beta * beta * gamma1 * gamma2);
  return RatePair{mean + split, mean - split};
}

double independent_g2_zero(double gamma1, double gamma2, double p1, double p2) {
  const double total = gamma1 * p1 + gamma2 * p2;
  if (total <= 0.0) {
    throw ValidationError("independent g2 needs a nonzero total emission rate");
  }
  return 2.0 * gamma1 * gamma2 * p1 * p2 / (total * total);
}

}  // namespace srpair::oracle

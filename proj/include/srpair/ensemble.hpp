#pragma once

#include <vector>

#include "srpair/observables.hpp"

namespace srpair {

// Slow spectral wandering: between experimental shots the detuning drifts
// on timescales much longer than a single decay, so measured traces are
// averages of fixed-detuning runs over a Gaussian detuning distribution.
// The average is evaluated by Gauss-Hermite quadrature; node k carries
// detuning detunings[k] and weight weights[k], with weights summing to 1.
struct WanderingEnsemble {
  double mean_detuning = 0.0;  // ueV
  double sigma = 0.0;          // ueV, std deviation of the drift
  std::vector<double> detunings;
  std::vector<double> weights;
};

// Gauss-Hermite nodes/weights mapped onto N(mean, sigma^2). n_nodes must be
// odd (so the mean itself is sampled) and positive. sigma = 0 collapses to
// a single node at the mean.
WanderingEnsemble gauss_hermite_ensemble(double mean, double sigma, int n_nodes);

// Ensemble-averaged emission intensity after pulsed preparation, normalized
// to its own t = 0 value. Traces are averaged unnormalized (every shot
// starts from the same state, so early shots weigh equally).
TimeSeries wandering_average_intensity(const SystemParams& params, const WanderingEnsemble& ens,
                                       const Density4& rho0, const std::vector<double>& times);

// Ensemble-averaged g2: numerator and denominator (steady-state intensity)
// are averaged separately over the ensemble, then divided, matching how a
// long HBT integration mixes shots.
TimeSeries wandering_average_g2(const SystemParams& params, const WanderingEnsemble& ens,
                                const std::vector<double>& taus);

// Gaussian instrument response of a timing chain, standard deviation in ns.
// sigma = 0 means ideal detection.
struct InstrumentResponse {
  double sigma = 0.0;
};

// Convolution of a sampled trace with the Gaussian response. The trace is
// interpreted as its piecewise-linear interpolant, taken as zero outside
// the sampled window, and the convolution integral is evaluated in closed
// form per segment, so step edges at the window boundary are handled
// exactly. Requires sample spacing <= sigma / 2 (else ValidationError);
// sigma = 0 returns the input unchanged.
TimeSeries convolve_irf(const TimeSeries& trace, const InstrumentResponse& irf);

// Same, but evaluated on a grid extended to the left down to `start` (e.g.
// to show the instrument-broadened rising edge before the pulse).
TimeSeries convolve_irf_extended(const TimeSeries& trace, const InstrumentResponse& irf,
                                 double start);

// Convolution for symmetric correlation histograms: the trace, sampled on
// tau >= 0, is extended by even reflection about tau = 0 before convolving,
// and returned on the original grid.
TimeSeries convolve_symmetric(const TimeSeries& trace, const InstrumentResponse& irf);

// Full forward model of an HBT measurement: wandering-averaged g2 on an
// internally refined uniform grid (fine enough to resolve the beat at the
// largest ensemble detuning and the detector response), mirrored about
// tau = 0, convolved with the detector response, and evaluated at the
// requested nonnegative delays (strictly increasing, not necessarily
// uniform). This is the model a fit to measured histograms uses.
TimeSeries measured_g2(const SystemParams& params, double wander_sigma, int nodes,
                       const std::vector<double>& taus, const InstrumentResponse& detector);

}  // namespace srpair

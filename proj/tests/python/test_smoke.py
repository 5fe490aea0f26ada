"""End-to-end smoke tests of the Python bindings.

The heavy numerical validation lives in the C++ unit and acceptance suites;
here we only check that the module imports, maps errors, and returns
physically sane numbers through a few representative call chains.
"""

import json
import math

import pytest

import srpair


def test_module_metadata():
    assert srpair.__version__
    assert srpair.HBAR_UEV_NS == pytest.approx(0.6582119569, abs=1e-12)
    assert (srpair.GG, srpair.GE, srpair.EG, srpair.EE) == (0, 1, 2, 3)


def test_validation_maps_to_value_error():
    params = srpair.SystemParams()
    params.beta = 1.5
    with pytest.raises(ValueError):
        params.validate()
    with pytest.raises(ValueError):
        srpair.gauss_hermite_ensemble(0.0, 1.0, 4)


def test_single_emitter_decay_and_threshold():
    params = srpair.SystemParams()
    params.gamma1 = 1.0
    params.gamma2 = 0.0
    times = [0.01 * i for i in range(301)]
    trace = srpair.intensity_trace(params, srpair.basis_state(srpair.EG), times)
    assert trace.values[100] == pytest.approx(math.exp(-1.0), abs=1e-9)

    metrics = srpair.threshold_times(trace, [math.exp(-1.0)])
    assert metrics.crossing_times[0] == pytest.approx(1.0, abs=1e-4)


def test_g2_zero_matches_steady_state_identity():
    params = srpair.SystemParams()
    params.gamma1 = 0.3
    params.gamma2 = 0.2
    params.beta = 0.7
    params.gamma_d = 1.0
    params.gamma_p = 0.02

    rho = srpair.steady_state(params)
    num = 4.0 * params.gamma1 * params.gamma2 * rho[3, 3].real
    den = srpair.intensity(params, rho) ** 2
    g2 = srpair.g2_trace(params, [0.0]).values[0]
    assert g2 == pytest.approx(num / den, abs=1e-10)


def test_gauss_hermite_moments():
    ens = srpair.gauss_hermite_ensemble(3.3, 1.3, 11)
    weights = list(ens.weights)
    nodes = list(ens.detunings)
    assert sum(weights) == pytest.approx(1.0, abs=1e-12)
    mean = sum(w * x for w, x in zip(weights, nodes))
    var = sum(w * (x - 3.3) ** 2 for w, x in zip(weights, nodes))
    assert mean == pytest.approx(3.3, abs=1e-10)
    assert var == pytest.approx(1.69, abs=1e-10)


def test_measured_g2_far_plateau():
    params = srpair.SystemParams()
    params.gamma1 = params.gamma2 = 0.2
    params.beta = 0.8
    params.gamma_d = 8.0
    params.gamma_p = 0.002
    params.delta = 50.0
    trace = srpair.measured_g2(params, 1.3, 11, [0.0, 1.0], 0.15)
    assert abs(trace.values[0] - 0.5) <= 0.03


def test_euler_oracle_agrees_with_spectral_path():
    params = srpair.SystemParams()
    params.gamma1 = 0.15
    params.gamma2 = 0.1
    params.beta = 0.6
    params.delta = 0.05
    params.gamma_d = 0.1

    rho0 = srpair.basis_state(srpair.EE)
    spectral = srpair.evolve(params, rho0, [1.0])[0]
    euler = srpair.euler_propagate(params, rho0, 1.0, 1e-5, False)
    gap = max(abs(spectral[i, j] - euler[i, j]) for i in range(4) for j in range(4))
    assert gap <= 1e-6


def test_run_scenario_json_round_trip(tmp_path):
    config = {
        "kind": "lifetime",
        "ensemble": {"sigma": 0.0, "nodes": 1},
        "irf": {"sigma": 0.1},
        "grid": {"start": -0.2, "stop": 1.0, "step": 0.01},
        "sweep": [0.0],
        "gated": "both",
        "out_dir": str(tmp_path),
    }
    written = srpair.run_scenario_json(json.dumps(config))
    assert len(written) == 4
    summary = next(p for p in written if "lifetime_summary" in p)
    text = open(summary).read()
    assert "detuning_ueV,tau_half_ns,tau_e_ns,tau_tenth_ns,gated" in text


def test_fit_round_trip_quick():
    fixed = srpair.SystemParams()
    fixed.gamma1 = fixed.gamma2 = 0.5
    fixed.beta = 0.8
    fixed.gamma_p = 0.05

    taus = [0.3 * i for i in range(15)]
    datasets = []
    for detuning in (0.0, 2.2):
        truth = fixed.with_delta(detuning)
        truth.gamma_d = 2.0
        data = srpair.FitDataset()
        data.mean_detuning = detuning
        data.taus = taus
        data.values = srpair.measured_g2(truth, 0.5, 5, taus, 0.15).values
        datasets.append(data)

    options = srpair.FitOptions()
    options.nodes = 5
    result = srpair.fit_parameters(datasets, fixed, 1.0, 0.2, options)
    assert result.converged
    assert result.gamma_d == pytest.approx(2.0, rel=0.05)
    assert result.sigma == pytest.approx(0.5, rel=0.1)

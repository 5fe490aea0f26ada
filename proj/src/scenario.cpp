#include "srpair/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "srpair/csvio.hpp"
#include "srpair/dynamics.hpp"
#include "srpair/ensemble.hpp"
#include "srpair/errors.hpp"
#include "srpair/observables.hpp"
#include "srpair/operators.hpp"
#include "srpair/oracle.hpp"
#include "srpair/superop.hpp"
#include "srpair/svg.hpp"
#include "srpair/version.hpp"

namespace srpair {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kInvE = 0.36787944117144233;

void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError("config: unknown key '" + it.key() + "' in " + where);
    }
  }
}

double get_num(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw ValidationError("config: " + where + "." + key + " must be a number");
  }
  return j[key].get<double>();
}

std::vector<double> make_grid(double start, double stop, double step) {
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> times(count);
  for (std::size_t i = 0; i < count; ++i) times[i] = start + static_cast<double>(i) * step;
  return times;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  }
}

std::string gating_name(bool gated) { return gated ? "gated" : "ungated"; }

// Single-emitter reference configuration: the optical gate removes emitter
// 2 entirely.
SystemParams ungate(const SystemParams& params) {
  SystemParams p = params;
  p.gamma2 = 0.0;
  return p;
}

std::vector<bool> gating_variants(Scenario::Gating g) {
  switch (g) {
    case Scenario::Gating::kGatedOnly:
      return {true};
    case Scenario::Gating::kUngatedOnly:
      return {false};
    default:
      return {true, false};
  }
}

// One lifetime measurement: wandering-averaged decay after pulsed
// preparation of emitter 1, broadened by the excitation timing jitter and
// renormalized to the measured peak.
TimeSeries lifetime_trace(const Scenario& sc, double detuning, bool gated) {
  const SystemParams base = gated ? sc.params : ungate(sc.params);
  const WanderingEnsemble ens =
      gauss_hermite_ensemble(detuning, sc.wander_sigma, sc.nodes);
  const std::vector<double> sim_times = make_grid(0.0, sc.grid_stop, sc.grid_step);
  TimeSeries trace =
      wandering_average_intensity(base.with_delta(detuning), ens, basis_state(kEG), sim_times);
  trace = convolve_irf_extended(trace, InstrumentResponse{sc.irf_sigma}, sc.grid_start);
  const double peak = *std::max_element(trace.values.begin(), trace.values.end());
  if (peak <= 0.0) {
    throw NumericalError("lifetime trace has no positive peak");
  }
  for (double& v : trace.values) v /= peak;
  trace.normalization = "peak";
  return trace;
}

json metrics_to_json(double detuning, bool gated, const DecayMetrics& m) {
  json row;
  row["detuning_ueV"] = detuning;
  row["gated"] = gated;
  row["peak_time_ns"] = m.peak_time;
  json durations = json::array();
  for (std::size_t i = 0; i < m.thresholds.size(); ++i) {
    json entry;
    entry["threshold"] = m.thresholds[i];
    entry["duration_ns"] = m.crossing_times[i] - m.peak_time;
    entry["crossing_time_ns"] = m.crossing_times[i];
    entry["uncertainty_ns"] = m.uncertainties[i];
    durations.push_back(entry);
  }
  row["thresholds"] = durations;
  row["uncertainty_method"] =
      "half local sample spacing through the crossing slope; resolution heuristic";
  return row;
}

std::vector<std::vector<double>> threshold_summary_rows(const Scenario& sc,
                                                        const std::vector<double>& detunings) {
  std::vector<std::vector<double>> rows;
  for (double d : detunings) {
    for (bool gated : gating_variants(sc.gating)) {
      const TimeSeries trace = lifetime_trace(sc, d, gated);
      const DecayMetrics m = threshold_times(trace, {0.5, kInvE, 0.1});
      rows.push_back({d, m.crossing_times[0] - m.peak_time, m.crossing_times[1] - m.peak_time,
                      m.crossing_times[2] - m.peak_time, gated ? 1.0 : 0.0});
    }
  }
  return rows;
}

void write_rows(const Scenario& sc, const std::string& base_name, const std::string& kind,
                const std::string& columns, const std::vector<std::vector<double>>& rows,
                std::vector<std::string>& written) {
  if (sc.format == "json") {
    json doc;
    doc["tool"] = kToolName;
    doc["version"] = kVersion;
    doc["kind"] = kind;
    doc["config"] = json::parse(sc.to_json());
    doc["columns"] = json::parse("[]");
    std::istringstream cols(columns);
    std::string col;
    while (std::getline(cols, col, ',')) doc["columns"].push_back(col);
    doc["rows"] = rows;
    const std::string path = join(sc.out_dir, base_name + ".json");
    csv::write_text_file(path, doc.dump(2) + "\n");
    written.push_back(path);
  } else {
    const std::string path = join(sc.out_dir, base_name + ".csv");
    csv::write_table(path, kind, columns, rows, sc.to_json());
    written.push_back(path);
  }
}

}  // namespace

Scenario Scenario::defaults(const std::string& kind) {
  Scenario sc;
  sc.kind = kind;
  // Device-style defaults: beta, dephasing and wandering follow the fitted
  // values this model family is typically run with; the radiative rates are
  // placeholders to be calibrated against lifetime data.
  sc.params.gamma1 = 1.0;
  sc.params.gamma2 = 1.0;
  sc.params.beta = 0.8;
  sc.params.gamma_d = 8.0;
  sc.params.delta = 0.0;
  sc.wander_sigma = 1.3;
  sc.nodes = 21;
  sc.irf_sigma = 0.15;
  sc.detector_sigma = 0.15;

  if (kind == "lifetime") {
    sc.grid_start = -1.0;
    sc.grid_stop = 10.0;
    sc.grid_step = 0.004;
    sc.sweep = {0.0, 1.1, 2.2, 3.3};
  } else if (kind == "hbt") {
    sc.params.gamma_p = 0.01;  // low-power pump, 0.01 * min(gamma1, gamma2)
    sc.grid_start = 0.0;
    sc.grid_stop = 12.0;
    sc.grid_step = 0.02;
    sc.sweep = {0.0, 2.2, 15.0};
  } else if (kind == "sweep") {
    sc.grid_start = -1.0;
    sc.grid_stop = 10.0;
    sc.grid_step = 0.004;
    for (int i = 0; i <= 32; ++i) sc.sweep.push_back(-4.0 + 0.25 * i);
  } else if (kind == "fit") {
    sc.init_gamma_d = 4.0;
    sc.init_sigma = 1.0;
  } else if (kind == "oracle-check") {
    // fixed battery; no tunables beyond output location
  } else {
    throw ValidationError("unknown scenario kind '" + kind + "'");
  }
  return sc;
}

Scenario Scenario::from_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  if (!j.is_object()) {
    throw ValidationError(origin + ": config root must be a JSON object");
  }
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError(origin + ": config needs a string field 'kind'");
  }

  Scenario sc = defaults(j["kind"].get<std::string>());
  expect_keys(j,
              {"kind", "params", "ensemble", "irf", "detector", "grid", "sweep", "gated",
               "out_dir", "format", "seed", "fit"},
              "top level");

  if (j.contains("params")) {
    const json& p = j["params"];
    expect_keys(p, {"gamma1", "gamma2", "beta", "delta", "gamma_d", "gamma_p", "gamma_nr"},
                "params");
    sc.params.gamma1 = get_num(p, "gamma1", sc.params.gamma1, "params");
    sc.params.gamma2 = get_num(p, "gamma2", sc.params.gamma2, "params");
    sc.params.beta = get_num(p, "beta", sc.params.beta, "params");
    sc.params.delta = get_num(p, "delta", sc.params.delta, "params");
    sc.params.gamma_d = get_num(p, "gamma_d", sc.params.gamma_d, "params");
    sc.params.gamma_p = get_num(p, "gamma_p", sc.params.gamma_p, "params");
    sc.params.gamma_nr = get_num(p, "gamma_nr", sc.params.gamma_nr, "params");
  }
  if (j.contains("ensemble")) {
    const json& e = j["ensemble"];
    expect_keys(e, {"sigma", "nodes"}, "ensemble");
    sc.wander_sigma = get_num(e, "sigma", sc.wander_sigma, "ensemble");
    sc.nodes = static_cast<int>(get_num(e, "nodes", sc.nodes, "ensemble"));
  }
  if (j.contains("irf")) {
    expect_keys(j["irf"], {"sigma"}, "irf");
    sc.irf_sigma = get_num(j["irf"], "sigma", sc.irf_sigma, "irf");
  }
  if (j.contains("detector")) {
    expect_keys(j["detector"], {"sigma"}, "detector");
    sc.detector_sigma = get_num(j["detector"], "sigma", sc.detector_sigma, "detector");
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    expect_keys(g, {"start", "stop", "step"}, "grid");
    sc.grid_start = get_num(g, "start", sc.grid_start, "grid");
    sc.grid_stop = get_num(g, "stop", sc.grid_stop, "grid");
    sc.grid_step = get_num(g, "step", sc.grid_step, "grid");
  }
  if (j.contains("sweep")) {
    if (!j["sweep"].is_array()) {
      throw ValidationError("config: sweep must be an array of detunings");
    }
    sc.sweep.clear();
    for (const json& v : j["sweep"]) {
      if (!v.is_number()) throw ValidationError("config: sweep entries must be numbers");
      sc.sweep.push_back(v.get<double>());
    }
  }
  if (j.contains("gated")) {
    if (j["gated"].is_boolean()) {
      sc.gating = j["gated"].get<bool>() ? Gating::kGatedOnly : Gating::kUngatedOnly;
    } else if (j["gated"].is_string() && j["gated"].get<std::string>() == "both") {
      sc.gating = Gating::kBoth;
    } else {
      throw ValidationError("config: gated must be true, false or \"both\"");
    }
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) throw ValidationError("config: out_dir must be a string");
    sc.out_dir = j["out_dir"].get<std::string>();
  }
  if (j.contains("format")) {
    if (!j["format"].is_string()) throw ValidationError("config: format must be a string");
    sc.format = j["format"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw ValidationError("config: seed must be an integer");
    sc.seed = j["seed"].get<long>();
  }
  if (j.contains("fit")) {
    const json& f = j["fit"];
    expect_keys(f, {"datasets", "init"}, "fit");
    if (f.contains("datasets")) {
      if (!f["datasets"].is_array()) {
        throw ValidationError("config: fit.datasets must be an array");
      }
      for (const json& d : f["datasets"]) {
        expect_keys(d, {"detuning", "path"}, "fit.datasets[]");
        if (!d.contains("path") || !d["path"].is_string()) {
          throw ValidationError("config: each fit dataset needs a string 'path'");
        }
        Scenario::FitInput input;
        input.detuning = get_num(d, "detuning", 0.0, "fit.datasets[]");
        input.path = d["path"].get<std::string>();
        sc.fit_datasets.push_back(input);
      }
    }
    if (f.contains("init")) {
      expect_keys(f["init"], {"gamma_d", "sigma"}, "fit.init");
      sc.init_gamma_d = get_num(f["init"], "gamma_d", sc.init_gamma_d, "fit.init");
      sc.init_sigma = get_num(f["init"], "sigma", sc.init_sigma, "fit.init");
    }
  }
  sc.validate();
  return sc;
}

Scenario Scenario::from_file(const std::string& path) {
  return from_json(csv::read_text_file(path), path);
}

std::string Scenario::to_json() const {
  json j;
  j["kind"] = kind;
  j["params"] = {{"gamma1", params.gamma1},   {"gamma2", params.gamma2},
                 {"beta", params.beta},       {"delta", params.delta},
                 {"gamma_d", params.gamma_d}, {"gamma_p", params.gamma_p},
                 {"gamma_nr", params.gamma_nr}};
  j["ensemble"] = {{"sigma", wander_sigma}, {"nodes", nodes}};
  j["irf"] = {{"sigma", irf_sigma}};
  j["detector"] = {{"sigma", detector_sigma}};
  j["grid"] = {{"start", grid_start}, {"stop", grid_stop}, {"step", grid_step}};
  j["sweep"] = sweep;
  if (gating == Gating::kBoth) {
    j["gated"] = "both";
  } else {
    j["gated"] = (gating == Gating::kGatedOnly);
  }
  j["out_dir"] = out_dir;
  j["format"] = format;
  j["seed"] = seed;
  if (kind == "fit") {
    json datasets = json::array();
    for (const FitInput& d : fit_datasets) {
      datasets.push_back({{"detuning", d.detuning}, {"path", d.path}});
    }
    j["fit"] = {{"datasets", datasets},
                {"init", {{"gamma_d", init_gamma_d}, {"sigma", init_sigma}}}};
  }
  return j.dump();
}

void Scenario::validate() const {
  params.validate();
  if (kind != "lifetime" && kind != "hbt" && kind != "sweep" && kind != "fit" &&
      kind != "oracle-check") {
    throw ValidationError("unknown scenario kind '" + kind + "'");
  }
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
    throw ValidationError("grid step must be positive");
  }
  if (!(grid_stop > grid_start)) {
    throw ValidationError("grid stop must exceed grid start");
  }
  if (nodes < 1 || nodes % 2 == 0) {
    throw ValidationError("ensemble nodes must be odd and >= 1");
  }
  if (wander_sigma < 0.0 || irf_sigma < 0.0 || detector_sigma < 0.0) {
    throw ValidationError("widths (ensemble, irf, detector) must be >= 0");
  }
  if (format != "csv" && format != "json") {
    throw ValidationError("format must be csv or json");
  }
  if (kind == "lifetime" || kind == "sweep") {
    if (params.gamma_p > 0.0) {
      throw ValidationError("lifetime scenarios forbid a pump (gamma_p must be 0)");
    }
    if (grid_start > 0.0) {
      throw ValidationError("lifetime grid must start at or before the pulse (start <= 0)");
    }
  }
  if (kind == "hbt" && params.gamma_p <= 0.0) {
    throw ValidationError("hbt scenarios require a pump (gamma_p > 0)");
  }
  if (kind == "fit" && fit_datasets.empty()) {
    throw ValidationError("fit scenarios need at least one dataset");
  }
}

std::vector<std::string> run_lifetime(const Scenario& sc) {
  sc.validate();
  ensure_out_dir(sc.out_dir);
  const std::vector<double> detunings = sc.sweep.empty() ? std::vector<double>{sc.params.delta}
                                                         : sc.sweep;
  std::vector<std::string> written;
  json metrics = json::array();
  std::vector<std::vector<double>> rows;
  for (double d : detunings) {
    for (bool gated : gating_variants(sc.gating)) {
      const TimeSeries trace = lifetime_trace(sc, d, gated);
      const DecayMetrics m = threshold_times(trace, {0.5, kInvE, 0.1});
      rows.push_back({d, m.crossing_times[0] - m.peak_time, m.crossing_times[1] - m.peak_time,
                      m.crossing_times[2] - m.peak_time, gated ? 1.0 : 0.0});
      metrics.push_back(metrics_to_json(d, gated, m));

      const std::string name = "lifetime_delta_" + csv::format_double(d) + "_" +
                               gating_name(gated) + ".csv";
      const std::string path = join(sc.out_dir, name);
      csv::write_trace(path, trace, sc.to_json());
      written.push_back(path);
    }
  }
  write_rows(sc, "lifetime_summary", "threshold_summary",
             "detuning_ueV,tau_half_ns,tau_e_ns,tau_tenth_ns,gated", rows, written);

  json doc;
  doc["tool"] = kToolName;
  doc["version"] = kVersion;
  doc["config"] = json::parse(sc.to_json());
  doc["metrics"] = metrics;
  const std::string metrics_path = join(sc.out_dir, "lifetime_metrics.json");
  csv::write_text_file(metrics_path, doc.dump(2) + "\n");
  written.push_back(metrics_path);
  return written;
}

std::vector<std::string> run_hbt(const Scenario& sc) {
  sc.validate();
  ensure_out_dir(sc.out_dir);
  const std::vector<double> detunings = sc.sweep.empty() ? std::vector<double>{sc.params.delta}
                                                         : sc.sweep;
  const std::vector<double> taus = make_grid(0.0, sc.grid_stop, sc.grid_step);

  std::vector<std::string> written;
  std::vector<std::vector<double>> rows;
  for (double d : detunings) {
    const TimeSeries measured = measured_g2(sc.params.with_delta(d), sc.wander_sigma, sc.nodes,
                                            taus, InstrumentResponse{sc.detector_sigma});

    // Mirror to negative delays for the stored histogram.
    TimeSeries full;
    full.kind = measured.kind;
    full.normalization = measured.normalization;
    const std::size_t n = measured.times.size();
    full.times.reserve(2 * n - 1);
    full.values.reserve(2 * n - 1);
    for (std::size_t i = n - 1; i > 0; --i) {
      full.times.push_back(-measured.times[i]);
      full.values.push_back(measured.values[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      full.times.push_back(measured.times[i]);
      full.values.push_back(measured.values[i]);
    }

    const std::optional<double> beat = beat_period(measured);
    rows.push_back({d, measured.values.front(),
                    beat ? *beat : std::numeric_limits<double>::quiet_NaN()});

    const std::string path =
        join(sc.out_dir, "hbt_delta_" + csv::format_double(d) + ".csv");
    csv::write_trace(path, full, sc.to_json());
    written.push_back(path);
  }
  write_rows(sc, "hbt_summary", "hbt_summary", "detuning_ueV,g2_zero,beat_period_ns", rows,
             written);
  return written;
}

std::vector<std::string> run_sweep(const Scenario& sc) {
  sc.validate();
  ensure_out_dir(sc.out_dir);
  if (sc.sweep.empty()) {
    throw ValidationError("sweep scenarios need a nonempty detuning grid");
  }
  std::vector<std::string> written;
  const std::vector<std::vector<double>> rows = threshold_summary_rows(sc, sc.sweep);
  write_rows(sc, "sweep_summary", "threshold_summary",
             "detuning_ueV,tau_half_ns,tau_e_ns,tau_tenth_ns,gated", rows, written);
  return written;
}

std::vector<std::string> run_fit(const Scenario& sc) {
  sc.validate();
  ensure_out_dir(sc.out_dir);

  std::vector<FitDataset> datasets;
  json inputs = json::array();
  for (const Scenario::FitInput& input : sc.fit_datasets) {
    FitDataset ds;
    ds.mean_detuning = input.detuning;
    std::vector<double> errors;
    const TimeSeries trace = csv::read_trace(input.path, &errors);
    ds.taus = trace.times;
    ds.values = trace.values;
    ds.errors = errors;
    datasets.push_back(std::move(ds));

    std::ostringstream hash;
    hash << std::hex << std::setfill('0') << std::setw(16) << csv::fnv1a_file(input.path);
    inputs.push_back({{"path", input.path},
                      {"detuning_ueV", input.detuning},
                      {"fnv1a", hash.str()}});
  }

  FitOptions options;
  options.detector_sigma = sc.detector_sigma;
  options.nodes = sc.nodes;
  const FitResult fit =
      fit_parameters(datasets, sc.params, sc.init_gamma_d, sc.init_sigma, options);

  json doc;
  doc["tool"] = kToolName;
  doc["version"] = kVersion;
  doc["config"] = json::parse(sc.to_json());
  doc["inputs"] = inputs;
  doc["result"] = {{"gamma_d_per_ns", fit.gamma_d},
                   {"sigma_ueV", fit.sigma},
                   {"residual", fit.residual},
                   {"converged", fit.converged},
                   {"iterations", fit.iterations},
                   {"evaluations", fit.evaluations},
                   {"covariance", {fit.covariance[0], fit.covariance[1], fit.covariance[2],
                                   fit.covariance[3]}}};
  const std::string path = join(sc.out_dir, "fit_result.json");
  csv::write_text_file(path, doc.dump(2) + "\n");
  return {path};
}

namespace {

struct OracleRow {
  std::string name;
  double main = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass() const { return std::abs(main - reference) <= tolerance; }
};

std::vector<OracleRow> oracle_battery() {
  std::vector<OracleRow> rows;

  // Spectral propagation against the brute-force integrator on an
  // asymmetric, detuned, dephased, leaky configuration.
  {
    SystemParams p;
    p.gamma1 = 0.12;
    p.gamma2 = 0.08;
    p.beta = 0.7;
    p.delta = 0.1;
    p.gamma_d = 0.05;
    p.gamma_nr = 0.02;
    const Density4 rho0 = basis_state(kEG);
    const SpectralDecomposition dec = decompose(build_liouvillian(p, false));
    const Density4 main = propagate(dec, rho0, {1.2}).front();
    const Operator4 ref = oracle::euler_propagate(p, rho0, 1.2, 1e-5, false);
    rows.push_back({"state vs Euler integrator, t=1.2 ns (max elementwise gap)",
                    (main - ref).cwiseAbs().maxCoeff(), 0.0, 1e-5});
  }

  // Exponential population decay of a lone emitter.
  {
    SystemParams p;
    p.gamma1 = 1.0;
    p.gamma2 = 0.0;
    const SpectralDecomposition dec = decompose(build_liouvillian(p, false));
    const Density4 rho = propagate(dec, basis_state(kEG), {1.0}).front();
    rows.push_back({"single-emitter excited population, t=1 ns",
                    (number_operator(1) * rho).trace().real(),
                    oracle::analytic_single_emitter(1.0, 0.0, 1.0, 0.0, 1.0).excited_population,
                    1e-10});
  }

  // Coherence envelope with pure dephasing.
  {
    SystemParams p;
    p.gamma1 = 0.8;
    p.gamma2 = 0.0;
    p.gamma_d = 1.5;
    const SpectralDecomposition dec = decompose(build_liouvillian(p, false));
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi(kGG) = std::sqrt(0.5);
    psi(kEG) = std::sqrt(0.5);
    const Density4 rho0 = psi * psi.adjoint();
    const Density4 rho = propagate(dec, rho0, {1.0}).front();
    rows.push_back({"single-emitter coherence envelope, t=1 ns", std::abs(rho(kEG, kGG)),
                    oracle::analytic_single_emitter(0.8, 1.5, 0.5, 0.5, 1.0).coherence_magnitude,
                    1e-10});
  }

  // Collective decay of two identical resonant emitters.
  {
    SystemParams p;
    p.gamma1 = 1.0;
    p.gamma2 = 1.0;
    p.beta = 0.8;
    const Density4 rho0 = basis_state(kEG);
    const double i0 = intensity(p, rho0);
    const SpectralDecomposition dec = decompose(build_liouvillian(p, false));
    const Density4 rho = propagate(dec, rho0, {0.7}).front();
    rows.push_back({"collective decay intensity, beta=0.8, t=0.7 ns", intensity(p, rho) / i0,
                    oracle::analytic_dicke_pair(1.0, 0.8, 0.7), 1e-10});
  }

  // Fast/slow decay rates of the shared channel for unequal emitters.
  {
    const double g1 = 1.3;
    const double g2 = 0.7;
    const double beta = 0.65;
    SystemParams p;
    p.gamma1 = g1;
    p.gamma2 = g2;
    p.beta = beta;
    const Superoperator16 lv = build_liouvillian(p, false);
    // Single-excitation block: vectorized indices of rho restricted to
    // {|ge>, |eg>} x {|ge>, |eg>}.
    const int idx[4] = {kGE + 4 * kGE, kEG + 4 * kGE, kGE + 4 * kEG, kEG + 4 * kEG};
    Eigen::Matrix4cd block;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) block(r, c) = lv(idx[r], idx[c]);
    }
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(block);
    double fast = 0.0;
    double slow = 1e300;
    for (int i = 0; i < 4; ++i) {
      fast = std::max(fast, -es.eigenvalues()(i).real());
      slow = std::min(slow, -es.eigenvalues()(i).real());
    }
    const oracle::RatePair pair = oracle::collective_rate_pair(g1, g2, beta);
    rows.push_back({"fast collective rate, g1=1.3 g2=0.7 beta=0.65", fast, pair.fast, 1e-9});
    rows.push_back({"slow collective rate, g1=1.3 g2=0.7 beta=0.65", slow, pair.slow, 1e-9});
  }

  // Pumped steady-state population of a lone emitter.
  {
    SystemParams p;
    p.gamma1 = 1.0;
    p.gamma2 = 0.0;
    p.gamma_p = 0.01;
    const SteadyState ss = steady_state(build_liouvillian(p, true));
    rows.push_back({"pumped steady-state population, gamma_p=0.01",
                    (number_operator(1) * ss.rho).trace().real(), 0.01 / 1.01, 1e-10});
  }

  // Measured zero-delay correlation of far-detuned emitters against the
  // closed-form uncorrelated value.
  {
    SystemParams p;
    p.gamma1 = 0.3;
    p.gamma2 = 0.1;
    p.beta = 0.0;
    p.delta = 200.0;
    p.gamma_p = 0.05;
    const double p1 = 0.05 / 0.35;
    const double p2 = 0.05 / 0.15;
    const std::vector<double> taus = make_grid(0.0, 0.5, 0.01);
    const TimeSeries g2 = measured_g2(p, 0.0, 1, taus, InstrumentResponse{0.15});
    rows.push_back({"far-detuned measured g2(0) vs uncorrelated value", g2.values.front(),
                    oracle::independent_g2_zero(0.3, 0.1, p1, p2), 0.02});
  }

  return rows;
}

}  // namespace

bool run_oracle_check(const Scenario& sc, std::ostream& out, const std::string& out_path) {
  (void)sc;  // the battery is fixed; callers choose only the output location
  const std::vector<OracleRow> rows = oracle_battery();
  bool all_pass = true;
  out << "oracle cross-checks (" << kToolName << " " << kVersion << ")\n";
  for (const OracleRow& row : rows) {
    const bool ok = row.pass();
    all_pass = all_pass && ok;
    out << (ok ? "[PASS] " : "[FAIL] ") << row.name << ": main=" << csv::format_double(row.main)
        << " oracle=" << csv::format_double(row.reference)
        << " |diff|=" << csv::format_double(std::abs(row.main - row.reference))
        << " tol=" << csv::format_double(row.tolerance) << "\n";
  }
  out << (all_pass ? "all checks passed\n" : "oracle disagreement detected\n");

  if (!out_path.empty()) {
    const fs::path parent = fs::path(out_path).parent_path();
    if (!parent.empty()) ensure_out_dir(parent.string());
    json doc;
    doc["tool"] = kToolName;
    doc["version"] = kVersion;
    doc["checks"] = json::array();
    for (const OracleRow& row : rows) {
      doc["checks"].push_back({{"name", row.name},
                               {"main", row.main},
                               {"oracle", row.reference},
                               {"abs_diff", std::abs(row.main - row.reference)},
                               {"tolerance", row.tolerance},
                               {"pass", row.pass()}});
    }
    doc["all_pass"] = all_pass;
    csv::write_text_file(out_path, doc.dump(2) + "\n");
  }
  return all_pass;
}

std::string export_plot(const std::vector<std::string>& trace_paths, const std::string& out_svg,
                        const PlotStyle& style) {
  if (trace_paths.empty()) {
    throw ValidationError("plot needs at least one trace file");
  }
  std::vector<svg::Curve> curves;
  bool any_g2 = false;
  bool any_intensity = false;
  for (const std::string& path : trace_paths) {
    const TimeSeries trace = csv::read_trace(path);
    svg::Curve curve;
    curve.x = trace.times;
    curve.y = trace.values;
    curve.label = fs::path(path).stem().string();
    curves.push_back(std::move(curve));
    if (trace.kind.rfind("g2", 0) == 0) any_g2 = true;
    if (trace.kind == "intensity") any_intensity = true;
  }

  svg::PlotOptions options;
  options.log_y = style.log_y;
  options.title = style.title;
  if (any_g2 && !any_intensity) {
    options.x_label = "delay (ns)";
    options.y_label = "g2";
    options.reference_lines = {0.5, 1.0};
    if (options.title.empty()) options.title = "second-order correlation";
  } else {
    options.x_label = "time (ns)";
    options.y_label = "normalized intensity";
    if (options.title.empty()) options.title = "emission decay";
  }
  csv::write_text_file(out_svg, svg::render(curves, options));
  return out_svg;
}

}  // namespace srpair

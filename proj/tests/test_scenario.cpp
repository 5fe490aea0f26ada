#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "srpair/csvio.hpp"
#include "srpair/ensemble.hpp"
#include "srpair/errors.hpp"
#include "srpair/scenario.hpp"

using namespace srpair;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "srpair_scenario_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::map<std::string, std::string> snapshot(const std::vector<std::string>& paths) {
  std::map<std::string, std::string> bytes;
  for (const std::string& p : paths) bytes[p] = csv::read_text_file(p);
  return bytes;
}

}  // namespace

TEST_CASE("defaults produce valid scenarios for every runnable kind") {
  for (const std::string kind : {"lifetime", "hbt", "sweep", "oracle-check"}) {
    const Scenario sc = Scenario::defaults(kind);
    CHECK_NOTHROW(sc.validate());
    CHECK(sc.kind == kind);
    CHECK(sc.nodes % 2 == 1);
  }
  // A fit scenario is only complete once datasets are attached.
  CHECK_THROWS_AS(Scenario::defaults("fit").validate(), ValidationError);
  CHECK_THROWS_AS(Scenario::defaults("frobnicate"), ValidationError);
}

TEST_CASE("configuration JSON round-trips exactly") {
  for (const std::string kind : {"lifetime", "hbt", "sweep"}) {
    const Scenario base = Scenario::defaults(kind);
    const std::string once = base.to_json();
    const Scenario back = Scenario::from_json(once, "round-trip");
    CHECK(back.to_json() == once);
  }
}

TEST_CASE("configuration parsing rejects unknown or ill-typed keys") {
  CHECK_THROWS_WITH_AS(Scenario::from_json(R"({"kind":"lifetime","bogus":1})", "cfg"),
                       doctest::Contains("unknown key 'bogus'"), ValidationError);
  CHECK_THROWS_WITH_AS(Scenario::from_json(R"({"kind":"lifetime","params":{"gamma3":1}})", "cfg"),
                       doctest::Contains("gamma3"), ValidationError);
  CHECK_THROWS_AS(Scenario::from_json(R"({"kind":"lifetime","seed":1.5})", "cfg"),
                  ValidationError);
  CHECK_THROWS_AS(Scenario::from_json(R"({"kind":"lifetime","gated":1})", "cfg"),
                  ValidationError);
  CHECK_THROWS_AS(Scenario::from_json(R"([1,2,3])", "cfg"), ValidationError);
  CHECK_THROWS_AS(Scenario::from_json(R"({"params":{}})", "cfg"), ValidationError);
}

TEST_CASE("gating flag accepts true, false and both") {
  const Scenario g = Scenario::from_json(R"({"kind":"lifetime","gated":true})", "cfg");
  CHECK(g.gating == Scenario::Gating::kGatedOnly);
  const Scenario u = Scenario::from_json(R"({"kind":"lifetime","gated":false})", "cfg");
  CHECK(u.gating == Scenario::Gating::kUngatedOnly);
  const Scenario b = Scenario::from_json(R"({"kind":"lifetime","gated":"both"})", "cfg");
  CHECK(b.gating == Scenario::Gating::kBoth);
}

TEST_CASE("kind-specific constraints are enforced") {
  CHECK_THROWS_WITH_AS(
      Scenario::from_json(R"({"kind":"lifetime","params":{"gamma_p":0.01}})", "cfg"),
      doctest::Contains("forbid a pump"), ValidationError);
  CHECK_THROWS_WITH_AS(Scenario::from_json(R"({"kind":"hbt","params":{"gamma_p":0}})", "cfg"),
                       doctest::Contains("require a pump"), ValidationError);
  CHECK_THROWS_AS(Scenario::from_json(R"({"kind":"hbt","ensemble":{"nodes":4}})", "cfg"),
                  ValidationError);
  CHECK_THROWS_AS(Scenario::from_json(R"({"kind":"hbt","format":"yaml"})", "cfg"),
                  ValidationError);
  CHECK_THROWS_AS(
      Scenario::from_json(R"({"kind":"hbt","grid":{"start":0,"stop":1,"step":-0.1}})", "cfg"),
      ValidationError);
  CHECK_THROWS_AS(
      Scenario::from_json(R"({"kind":"hbt","grid":{"start":2,"stop":1,"step":0.1}})", "cfg"),
      ValidationError);
  CHECK_THROWS_AS(
      Scenario::from_json(R"({"kind":"lifetime","grid":{"start":0.5,"stop":2,"step":0.01}})",
                          "cfg"),
      ValidationError);
}

TEST_CASE("config files surface IO and parse problems with their origin") {
  const fs::path dir = fresh_dir("config_io");
  CHECK_THROWS_AS(Scenario::from_file((dir / "missing.json").string()), IoError);

  const fs::path bad = dir / "broken.json";
  csv::write_text_file(bad.string(), "{ not json");
  try {
    Scenario::from_file(bad.string());
    FAIL("expected a parse failure");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("broken.json") != std::string::npos);
  }
}

TEST_CASE("lifetime runner writes traces, summary and metrics") {
  const fs::path dir = fresh_dir("lifetime_small");
  Scenario sc = Scenario::defaults("lifetime");
  sc.nodes = 3;
  sc.irf_sigma = 0.1;
  sc.grid_start = -0.2;
  sc.grid_stop = 1.5;
  sc.grid_step = 0.01;
  sc.sweep = {0.0};
  sc.out_dir = dir.string();

  const std::vector<std::string> written = run_lifetime(sc);
  REQUIRE(written.size() == 4);  // gated trace, ungated trace, summary, metrics
  for (const std::string& p : written) CHECK(fs::exists(p));
  CHECK(written[0].find("lifetime_delta_0_gated.csv") != std::string::npos);
  CHECK(written[1].find("lifetime_delta_0_ungated.csv") != std::string::npos);
  CHECK(written[2].find("lifetime_summary.csv") != std::string::npos);
  CHECK(written[3].find("lifetime_metrics.json") != std::string::npos);

  const TimeSeries gated = csv::read_trace(written[0]);
  REQUIRE(!gated.times.empty());
  // The reported grid starts before the pulse and shows a rising edge up to
  // a unit peak.
  CHECK(gated.times.front() == doctest::Approx(-0.2).epsilon(1e-9));
  CHECK(gated.values.front() < 0.2);
  double peak = 0.0;
  for (double v : gated.values) peak = std::max(peak, v);
  CHECK(peak == doctest::Approx(1.0).epsilon(1e-9));

  const std::string summary = csv::read_text_file(written[2]);
  CHECK(summary.find("detuning_ueV,tau_half_ns,tau_e_ns,tau_tenth_ns,gated") !=
        std::string::npos);

  const auto metrics = nlohmann::json::parse(csv::read_text_file(written[3]));
  REQUIRE(metrics.contains("metrics"));
  CHECK(metrics["metrics"].size() == 2);
  CHECK(metrics["config"]["kind"] == "lifetime");
}

TEST_CASE("the optical gate is inert when the emitters share no channel") {
  // With beta = 0 and only emitter 1 excited, emitter 2 never participates,
  // so removing it (ungated) cannot change the trace.
  const fs::path dir = fresh_dir("lifetime_beta0");
  Scenario sc = Scenario::defaults("lifetime");
  sc.params.beta = 0.0;
  sc.wander_sigma = 0.0;
  sc.nodes = 1;
  sc.grid_start = -0.2;
  sc.grid_stop = 2.0;
  sc.grid_step = 0.01;
  sc.sweep = {0.0};
  sc.out_dir = dir.string();

  const std::vector<std::string> written = run_lifetime(sc);
  const TimeSeries gated = csv::read_trace(written[0]);
  const TimeSeries ungated = csv::read_trace(written[1]);
  REQUIRE(gated.values.size() == ungated.values.size());
  for (std::size_t i = 0; i < gated.values.size(); ++i) {
    CHECK(gated.values[i] == doctest::Approx(ungated.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("repeated runs into the same directory are byte-identical") {
  const fs::path dir = fresh_dir("lifetime_repeat");
  Scenario sc = Scenario::defaults("lifetime");
  sc.nodes = 3;
  sc.grid_start = -0.2;
  sc.grid_stop = 1.0;
  sc.grid_step = 0.01;
  sc.sweep = {0.0, 3.3};
  sc.gating = Scenario::Gating::kGatedOnly;
  sc.out_dir = dir.string();

  const auto first = snapshot(run_lifetime(sc));
  const auto second = snapshot(run_lifetime(sc));
  CHECK(first == second);
}

TEST_CASE("hbt runner writes mirrored histograms and a beat summary") {
  const fs::path dir = fresh_dir("hbt_small");
  Scenario sc = Scenario::defaults("hbt");
  // No spectral wandering and a mild detector, so the resonant histogram is
  // genuinely beat-free while the detuned one keeps a crisp oscillation.
  sc.wander_sigma = 0.0;
  sc.nodes = 1;
  sc.params.gamma_d = 0.5;
  sc.detector_sigma = 0.05;
  sc.grid_stop = 3.0;
  sc.grid_step = 0.02;
  sc.sweep = {0.0, 15.0};
  sc.out_dir = dir.string();

  const std::vector<std::string> written = run_hbt(sc);
  REQUIRE(written.size() == 3);
  CHECK(written[0].find("hbt_delta_0.csv") != std::string::npos);
  CHECK(written[1].find("hbt_delta_15.csv") != std::string::npos);
  CHECK(written[2].find("hbt_summary.csv") != std::string::npos);

  const TimeSeries far = csv::read_trace(written[1]);
  const std::size_t n = far.times.size();
  REQUIRE(n % 2 == 1);  // mirrored about zero delay
  CHECK(far.times.front() == doctest::Approx(-3.0).epsilon(1e-9));
  CHECK(far.times.back() == doctest::Approx(3.0).epsilon(1e-9));
  for (std::size_t i = 0; i < n / 2; ++i) {
    CHECK(far.values[i] == far.values[n - 1 - i]);
  }

  const std::string summary = csv::read_text_file(written[2]);
  CHECK(summary.find("detuning_ueV,g2_zero,beat_period_ns") != std::string::npos);

  // Pull the beat column out of each data row.
  std::map<double, std::string> beat_field;
  std::istringstream lines(summary);
  for (std::string line; std::getline(lines, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (line.find("detuning_ueV") != std::string::npos) continue;
    const std::size_t first = line.find(',');
    const std::size_t last = line.rfind(',');
    REQUIRE(first != std::string::npos);
    REQUIRE(last > first);
    beat_field[std::stod(line.substr(0, first))] = line.substr(last + 1);
  }
  REQUIRE(beat_field.size() == 2);
  // The resonant histogram relaxes monotonically, so its period reads nan.
  CHECK(beat_field.at(0.0) == "nan");
  // The detuned one oscillates at the frequency set by the splitting.
  const double measured_period = std::stod(beat_field.at(15.0));
  CHECK(measured_period ==
        doctest::Approx(2.0 * M_PI * kHbarUevNs / 15.0).epsilon(0.05));
}

TEST_CASE("sweep runner emits one summary row per detuning and gating") {
  const fs::path dir = fresh_dir("sweep_small");
  Scenario sc = Scenario::defaults("sweep");
  sc.nodes = 3;
  sc.grid_start = -0.2;
  sc.grid_stop = 1.0;
  sc.grid_step = 0.01;
  sc.sweep = {0.0, 3.3};
  sc.format = "json";
  sc.out_dir = dir.string();

  const std::vector<std::string> written = run_sweep(sc);
  REQUIRE(written.size() == 1);
  CHECK(written[0].find("sweep_summary.json") != std::string::npos);

  const auto doc = nlohmann::json::parse(csv::read_text_file(written[0]));
  CHECK(doc["columns"].size() == 5);
  REQUIRE(doc["rows"].size() == 4);  // 2 detunings x {gated, ungated}
  for (const auto& row : doc["rows"]) CHECK(row.size() == 5);

  Scenario empty = sc;
  empty.sweep.clear();
  CHECK_THROWS_AS(run_sweep(empty), ValidationError);
}

TEST_CASE("fit runner recovers parameters from on-disk histograms") {
  const fs::path dir = fresh_dir("fit_small");

  SystemParams truth;
  truth.gamma1 = 0.5;
  truth.gamma2 = 0.5;
  truth.beta = 0.8;
  truth.gamma_p = 0.05;
  truth.gamma_d = 2.0;
  const double true_sigma = 0.8;

  std::vector<double> taus;
  for (int i = 0; i <= 16; ++i) taus.push_back(0.25 * i);

  nlohmann::json datasets = nlohmann::json::array();
  for (double d : {0.0, 2.2}) {
    const TimeSeries model =
        measured_g2(truth.with_delta(d), true_sigma, 5, taus, InstrumentResponse{0.15});
    std::ostringstream csv_text;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      csv_text << csv::format_double(taus[i]) << "," << csv::format_double(model.values[i])
               << ",0.01\n";
    }
    const fs::path path = dir / ("hist_" + csv::format_double(d) + ".csv");
    csv::write_text_file(path.string(), csv_text.str());
    datasets.push_back({{"detuning", d}, {"path", path.string()}});
  }

  nlohmann::json cfg;
  cfg["kind"] = "fit";
  cfg["params"] = {{"gamma1", truth.gamma1}, {"gamma2", truth.gamma2}, {"beta", truth.beta},
                   {"gamma_p", truth.gamma_p}};
  cfg["ensemble"] = {{"nodes", 5}};
  cfg["detector"] = {{"sigma", 0.15}};
  cfg["fit"] = {{"datasets", datasets}, {"init", {{"gamma_d", 1.0}, {"sigma", 0.4}}}};
  cfg["out_dir"] = dir.string();

  Scenario sc = Scenario::from_json(cfg.dump(), "fit test");
  const std::vector<std::string> written = run_fit(sc);
  REQUIRE(written.size() == 1);
  CHECK(written[0].find("fit_result.json") != std::string::npos);

  const auto doc = nlohmann::json::parse(csv::read_text_file(written[0]));
  CHECK(doc["result"]["converged"].get<bool>());
  CHECK(doc["result"]["gamma_d_per_ns"].get<double>() == doctest::Approx(2.0).epsilon(0.05));
  CHECK(doc["result"]["sigma_ueV"].get<double>() == doctest::Approx(0.8).epsilon(0.05));
  REQUIRE(doc["inputs"].size() == 2);
  for (const auto& input : doc["inputs"]) {
    CHECK(input["fnv1a"].get<std::string>().size() == 16);
  }
}

TEST_CASE("oracle battery passes and reports in both formats") {
  const fs::path dir = fresh_dir("oracle_small");
  const Scenario sc = Scenario::defaults("oracle-check");
  std::ostringstream table;
  const std::string report = (dir / "oracle_report.json").string();

  CHECK(run_oracle_check(sc, table, report));
  CHECK(table.str().find("[PASS]") != std::string::npos);
  CHECK(table.str().find("[FAIL]") == std::string::npos);
  CHECK(table.str().find("all checks passed") != std::string::npos);

  const auto doc = nlohmann::json::parse(csv::read_text_file(report));
  CHECK(doc["all_pass"].get<bool>());
  REQUIRE(doc["checks"].is_array());
  CHECK(doc["checks"].size() >= 5);
  for (const auto& row : doc["checks"]) CHECK(row["pass"].get<bool>());
}

TEST_CASE("plot export renders traces into an SVG") {
  const fs::path dir = fresh_dir("plot_small");
  Scenario sc = Scenario::defaults("lifetime");
  sc.nodes = 1;
  sc.wander_sigma = 0.0;
  sc.grid_start = -0.2;
  sc.grid_stop = 1.0;
  sc.grid_step = 0.01;
  sc.sweep = {0.0};
  sc.out_dir = dir.string();

  const std::vector<std::string> written = run_lifetime(sc);
  const std::vector<std::string> traces = {written[0], written[1]};

  PlotStyle style;
  style.log_y = true;
  const std::string svg_path = export_plot(traces, (dir / "decay.svg").string(), style);
  const std::string svg = csv::read_text_file(svg_path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<path") != std::string::npos);

  CHECK_THROWS_AS(export_plot({}, (dir / "never.svg").string(), style), ValidationError);
}

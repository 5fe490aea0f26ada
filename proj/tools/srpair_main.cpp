#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "srpair/errors.hpp"
#include "srpair/scenario.hpp"
#include "srpair/version.hpp"

namespace {

// Flags shared by the simulation subcommands. Values only override the
// config (or the built-in defaults) when the flag was actually given.
struct SharedFlags {
  std::string config;
  std::string out_dir;
  std::vector<double> deltas;
  int nodes = 0;
  long seed = 0;
  std::string format;
  bool gated = false;
  bool ungated = false;
  CLI::Option* out_opt = nullptr;
  CLI::Option* nodes_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* format_opt = nullptr;
};

void add_shared(CLI::App* sub, SharedFlags& f, bool with_delta, bool with_gating) {
  sub->add_option("--config", f.config, "JSON config file");
  f.out_opt = sub->add_option("--out", f.out_dir, "output directory");
  if (with_delta) {
    sub->add_option("--delta", f.deltas,
                    "mean detuning in ueV (repeatable; overrides the config sweep)");
  }
  f.nodes_opt = sub->add_option("--nodes", f.nodes, "Gauss-Hermite nodes for wandering (odd)");
  f.seed_opt = sub->add_option("--seed", f.seed, "seed echoed into output headers");
  f.format_opt = sub->add_option("--format", f.format, "summary table format")
                     ->check(CLI::IsMember({"csv", "json"}));
  if (with_gating) {
    CLI::Option* g =
        sub->add_flag("--gated", f.gated, "emit only the gated (two-emitter) variant");
    CLI::Option* u = sub->add_flag("--ungated", f.ungated,
                                   "emit only the ungated (single-emitter) variant");
    g->excludes(u);
    u->excludes(g);
  }
}

srpair::Scenario build_scenario(const std::string& kind, const SharedFlags& f) {
  srpair::Scenario sc = f.config.empty() ? srpair::Scenario::defaults(kind)
                                         : srpair::Scenario::from_file(f.config);
  if (sc.kind != kind) {
    throw srpair::ValidationError("config kind '" + sc.kind + "' does not match subcommand '" +
                                  kind + "'");
  }
  if (f.out_opt->count() > 0) sc.out_dir = f.out_dir;
  if (!f.deltas.empty()) {
    sc.sweep = f.deltas;
    sc.params.delta = f.deltas.front();
  }
  if (f.nodes_opt->count() > 0) sc.nodes = f.nodes;
  if (f.seed_opt->count() > 0) sc.seed = f.seed;
  if (f.format_opt->count() > 0) sc.format = f.format;
  if (f.gated) sc.gating = srpair::Scenario::Gating::kGatedOnly;
  if (f.ungated) sc.gating = srpair::Scenario::Gating::kUngatedOnly;
  sc.validate();
  return sc;
}

void report_written(const std::vector<std::string>& paths) {
  for (const std::string& p : paths) std::cout << "wrote " << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collective-emission simulator for a detuned emitter pair in a waveguide"};
  app.set_version_flag("--version", std::string(srpair::kVersion));
  app.require_subcommand(1);

  int exit_code = 0;

  SharedFlags lifetime_flags;
  CLI::App* lifetime =
      app.add_subcommand("lifetime", "pulsed decay traces and threshold decay times");
  add_shared(lifetime, lifetime_flags, true, true);
  lifetime->callback(
      [&] { report_written(srpair::run_lifetime(build_scenario("lifetime", lifetime_flags))); });

  SharedFlags hbt_flags;
  CLI::App* hbt =
      app.add_subcommand("hbt", "steady-state second-order correlation histograms");
  add_shared(hbt, hbt_flags, true, false);
  hbt->callback([&] { report_written(srpair::run_hbt(build_scenario("hbt", hbt_flags))); });

  SharedFlags sweep_flags;
  CLI::App* sweep =
      app.add_subcommand("sweep", "threshold decay times over a dense detuning grid");
  add_shared(sweep, sweep_flags, true, true);
  sweep->callback(
      [&] { report_written(srpair::run_sweep(build_scenario("sweep", sweep_flags))); });

  SharedFlags fit_flags;
  CLI::App* fit =
      app.add_subcommand("fit", "joint dephasing/wandering fit to measured g2 histograms");
  add_shared(fit, fit_flags, false, false);
  fit->callback([&] { report_written(srpair::run_fit(build_scenario("fit", fit_flags))); });

  std::string oracle_out;
  CLI::App* oracle =
      app.add_subcommand("oracle-check", "cross-check the propagator against independent oracles");
  oracle->add_option("--out", oracle_out, "also write the table as JSON to this path");
  oracle->callback([&] {
    const srpair::Scenario sc = srpair::Scenario::defaults("oracle-check");
    exit_code = srpair::run_oracle_check(sc, std::cout, oracle_out) ? 0 : 3;
  });

  std::vector<std::string> plot_inputs;
  std::string plot_out;
  srpair::PlotStyle style;
  CLI::App* plot = app.add_subcommand("plot", "render trace CSVs into one SVG figure");
  plot->add_option("traces", plot_inputs, "trace CSV files")->required()->expected(-1);
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_flag("--log-y", style.log_y, "logarithmic value axis");
  plot->add_option("--title", style.title, "figure title");
  plot->callback(
      [&] { std::cout << "wrote " << srpair::export_plot(plot_inputs, plot_out, style) << "\n"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const srpair::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const srpair::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const srpair::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}

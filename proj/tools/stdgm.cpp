#include <omp.h>

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stdgm/error.hpp"
#include "stdgm/pipeline.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_usage = 2;

int report(const std::string& kind, const std::string& message, int code) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatio-temporal spectral analysis and dependence graphs for multitype point patterns", "stdgm"};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.require_subcommand(1);

  stdgm::RunConfig cfg;
  int threads = 0;
  std::string smoothing;
  std::string out_dir = cfg.out_dir.string();

  app.add_option("--input", cfg.input, "Event CSV (x, y, time, type[, mark]); simulate when omitted");
  app.add_option("--col", cfg.columns, "Column remapping, e.g. x=lon,y=lat,time=date");
  app.add_flag("--time-is-index", cfg.time_is_index, "Time column holds 1-based step indices");
  app.add_option("--bin-width", cfg.bin_width, "Time bin width: 45s, 15min, 6h, 7d, 2w, 1mo")->capture_default_str();
  app.add_option("--window", cfg.window, "Observation window x_min,x_max,y_min,y_max (default: bounding box)");

  app.add_option("--sim-kind", cfg.sim_kind, "homogeneous_poisson or linked_cluster")->capture_default_str();
  app.add_option("--components", cfg.components, "Number of simulated components")->capture_default_str();
  app.add_option("--rates", cfg.rates, "Background events per component per step")->delimiter(',');
  app.add_option("--steps", cfg.steps, "Simulated time steps T")->capture_default_str();
  app.add_option("--links", cfg.links, "Linked pairs i-j:offspring_rate:dispersion;...")->capture_default_str();
  app.add_option("--mark-dist", cfg.mark_dist, "Attach i.i.d. marks, e.g. normal:10,2");
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();

  app.add_option("--p-max", cfg.grid.p_max, "Largest p");
  app.add_option("--q-min", cfg.grid.q_min, "Smallest q");
  app.add_option("--q-max", cfg.grid.q_max, "Largest q");
  app.add_option("--u-min", cfg.grid.u_min, "Smallest u");
  app.add_option("--u-max", cfg.grid.u_max, "Largest u");
  app.add_flag("--include-dc", cfg.grid.include_dc, "Keep the (0,0,0) ordinate in smoothing and sup statistics");
  app.add_option("--smoothing", smoothing, "Daniell half-widths hp,hq,hu");
  app.add_flag("--marked", cfg.marked, "Use mark-weighted transforms");

  app.add_option("--xi", cfg.xi, "Edge threshold: a number, or null:q95 for matched-count calibration");
  app.add_option("--replicates", cfg.replicates, "Null replicates for calibration")->capture_default_str();
  app.add_flag("--per-slice", cfg.per_slice, "Also build one graph per time step");
  app.add_option("--format", cfg.format, "Graph format")->check(CLI::IsMember({"dot", "json"}))->capture_default_str();

  app.add_option("--r-grid", cfg.r_grid, "Spatial distances for K and g")->delimiter(',');
  app.add_option("--t-grid", cfg.t_grid, "Temporal distances (in steps) for K and g")->delimiter(',');
  app.add_option("--epsilon", cfg.epsilon, "Spatial kernel half-width for g")->capture_default_str();
  app.add_option("--delta", cfg.delta, "Temporal kernel half-width for g")->capture_default_str();
  app.add_option("--C", cfg.C, "Reference types for K (labels, comma separated, or all)")->capture_default_str();
  app.add_option("--D", cfg.D, "Target types for K (labels, comma separated, or all)")->capture_default_str();
  app.add_flag("--homogeneous,!--kernel-intensity", cfg.homogeneous,
               "Constant plug-in intensity (default) or separable kernel estimate");
  app.add_option("--edge", cfg.edge, "Edge correction")->check(CLI::IsMember({"border", "none"}))->capture_default_str();
  app.add_option("--cells", cfg.cells, "Cells per axis for intensity surfaces")->capture_default_str();
  app.add_option("--spatial-bandwidth", cfg.spatial_bandwidth, "Spatial bandwidth (<= 0: Scott's rule)");
  app.add_option("--temporal-bandwidth", cfg.temporal_bandwidth, "Temporal bandwidth (<= 0: Scott's rule)");

  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads (0: OpenMP default)")->envname("STDGM_THREADS");

  for (const char* name : {"ingest", "simulate", "classical", "spectra", "partial", "graph", "invert", "pipeline"})
    app.add_subcommand(name)->fallthrough();
  app.get_subcommand("ingest")->description("Load, bin and rescale an event CSV; write events.csv and summary.json");
  app.get_subcommand("simulate")->description("Simulate a pattern; write events.csv and truth.json");
  app.get_subcommand("classical")->description("Intensity surfaces, K and pair correlation");
  app.get_subcommand("spectra")->description("Periodograms, coherence, dot and polar spectra");
  app.get_subcommand("partial")->description("Partial cross-spectra and |d_ij|");
  app.get_subcommand("graph")->description("Threshold sup |d_ij| into a dependence graph");
  app.get_subcommand("invert")->description("Lag-domain covariance densities");
  app.get_subcommand("pipeline")->description("Run the full chain");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), exit_usage);
  }

  try {
    if (!smoothing.empty()) cfg.widths = stdgm::parse_widths(smoothing);
    cfg.out_dir = out_dir;
    if (threads < 0) throw stdgm::Error(stdgm::ErrorKind::usage, "--threads must be >= 0");
    if (threads > 0) omp_set_num_threads(threads);
    const std::string sub = app.get_subcommands().front()->get_name();
    for (const auto& path : stdgm::run(sub, cfg)) std::cout << (cfg.out_dir / path).string() << "\n";
  } catch (const stdgm::Error& e) {
    return report(std::string(stdgm::to_string(e.kind())), e.what(),
                  e.kind() == stdgm::ErrorKind::usage ? exit_usage : exit_error);
  } catch (const std::exception& e) {
    return report("internal", e.what(), exit_error);
  }
  return exit_ok;
}

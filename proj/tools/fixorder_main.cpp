#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fixorder/analysis.hpp"
#include "fixorder/benchmarks.hpp"
#include "fixorder/errors.hpp"
#include "fixorder/format.hpp"
#include "fixorder/interconnect.hpp"
#include "fixorder/json_io.hpp"
#include "fixorder/synthesis.hpp"

namespace {

using namespace fixorder;

// A plant argument is a benchmark case name or a path to a JSON file.
StateSpaceModel resolve_plant(const std::string& spec) {
  std::string names;
  for (const auto& c : catalog()) {
    if (c.name == spec) return c.plant;
    names += names.empty() ? c.name : ", " + c.name;
  }
  if (std::ifstream probe(spec); probe) return plant_from_file(spec);
  throw PlantFormatError("'" + spec +
                         "' is neither a readable file nor a benchmark case (known cases: " +
                         names + ")");
}

StateSpaceModel maybe_close(const StateSpaceModel& plant, const std::string& controller_path) {
  if (controller_path.empty()) return plant;
  return close_loop(plant, plant_from_file(controller_path));
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << text;
  if (!text.empty() && text.back() != '\n') out << "\n";
}

void print_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, int digits) {
  std::string text;
  for (std::size_t i = 0; i < header.size(); ++i) text += (i ? "," : "") + header[i];
  text += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      text += (i ? "," : "") + format_number(row[i], digits);
    text += "\n";
  }
  write_text(path, text);
}

struct SynthArgs {
  std::string plant;
  int order = 0;
  std::string objective = "hinf";
  int starts = 3;
  std::uint64_t seed = 0;
  int max_iters = 1000;
  double grad_tol = 1e-6;
  double init_scale = 1.0;
  double barrier = 1e-3;
  std::string warm_path;
  std::string out_path;
  bool serial = false;
  int digits = 6;
};

int run_synth(const SynthArgs& a) {
  const StateSpaceModel plant = resolve_plant(a.plant);
  SynthesisOptions opts;
  opts.objective = parse_objective(a.objective);
  opts.n_starts = a.starts;
  opts.rng_seed = a.seed;
  opts.max_iters_per_start = a.max_iters;
  opts.grad_tol = a.grad_tol;
  opts.init_scale = a.init_scale;
  opts.penalty_barrier = a.barrier;
  opts.parallel = !a.serial;
  if (!a.warm_path.empty())
    opts.warm_start = controller_from_model(plant_from_file(a.warm_path));

  const SynthesisResult res = synthesize(plant, a.order, opts);

  std::cout << "objective:       " << to_string(opts.objective) << "\n";
  std::cout << "value:           " << format_number(res.value, a.digits) << "\n";
  std::cout << "closed-loop abscissa: " << format_number(res.alpha, a.digits) << "\n";
  std::cout << "best start:      " << res.best_start << "\n";
  for (const auto& t : res.per_start)
    std::cout << "  start " << t.start_index << ": value "
              << format_number(t.final_value, a.digits) << ", " << t.iterations << " iters, "
              << to_string(t.reason) << (t.stabilized ? "" : ", not stabilized")
              << ", |theta| = " << format_number(t.theta_norm, a.digits) << "\n";

  const StateSpaceModel k = res.best.to_model();
  if (res.best.ny == 1 && res.best.nu == 1) {
    std::cout << "\nTransfer function:\n"
              << format_tf(channel_tf(k), a.digits) << "\n";
    std::cout << "\nZero/pole/gain:\n" << format_zpk(ss_to_zpk(k), a.digits) << "\n";
  } else {
    std::cout << "\nAk =\n" << format_matrix(res.best.Ak, a.digits) << "\n";
    std::cout << "Bk =\n" << format_matrix(res.best.Bk, a.digits) << "\n";
    std::cout << "Ck =\n" << format_matrix(res.best.Ck, a.digits) << "\n";
    std::cout << "Dk =\n" << format_matrix(res.best.Dk, a.digits) << "\n";
  }

  const std::string json = plant_to_json(k);
  if (a.out_path.empty()) {
    std::cout << "\ncontroller JSON:\n" << json << "\n";
  } else {
    write_text(a.out_path, json);
    std::cout << "\ncontroller written to " << a.out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fixed-order output-feedback controller synthesis and closed-loop analysis\n"
      "Plants are JSON files {\"A\",\"B\",\"C\",\"D\"[,\"nmeas\",\"ncont\"]} (row-major)\n"
      "or built-in benchmark case names."};
  app.require_subcommand(1);

  SynthArgs sa;
  CLI::App* synth = app.add_subcommand("synth", "synthesize a fixed-order controller");
  synth->add_option("--plant", sa.plant, "plant file or benchmark case")->required();
  synth->add_option("--order", sa.order, "controller order k >= 0")->required();
  synth->add_option("--objective", sa.objective,
                    "stabilize_only|spectral_abscissa|hinf (aliases +, s, h)");
  synth->add_option("--starts", sa.starts, "number of randomized starts (default 3)");
  synth->add_option("--seed", sa.seed, "RNG seed")->envname("FIXORDER_SEED");
  synth->add_option("--max-iters", sa.max_iters, "iteration budget per phase and start");
  synth->add_option("--grad-tol", sa.grad_tol, "gradient stopping tolerance");
  synth->add_option("--init-scale", sa.init_scale, "scale of random initial parameters");
  synth->add_option("--barrier", sa.barrier, "stabilization margin / instability penalty");
  synth->add_option("--warm", sa.warm_path, "warm-start controller JSON file");
  synth->add_option("--out", sa.out_path, "write the controller JSON here instead of stdout");
  synth->add_flag("--serial", sa.serial, "disable parallel starts");
  synth->add_option("--digits", sa.digits, "significant digits in printed output (default 6)");

  std::string plant_spec, close_with, out_path;
  int digits = 6;
  double norm_tol = 1e-6;
  CLI::App* norm = app.add_subcommand("norm", "H-infinity norm of a model (as loaded)");
  norm->add_option("--plant", plant_spec, "model file or benchmark case")->required();
  norm->add_option("--close-with", close_with, "close a partitioned plant with this controller");
  norm->add_option("--tol", norm_tol, "relative bisection tolerance");
  norm->add_option("--digits", digits, "significant digits (default 6)");

  CLI::App* absc = app.add_subcommand("abscissa", "spectral abscissa and eigenvalues");
  absc->add_option("--plant", plant_spec, "model file or benchmark case")->required();
  absc->add_option("--close-with", close_with, "close a partitioned plant with this controller");
  absc->add_option("--digits", digits, "significant digits (default 6)");

  double t_final = 2.0;
  int n_points = 201;
  CLI::App* step = app.add_subcommand("step", "unit step response as CSV (t, then y per output/input pair)");
  step->add_option("--plant", plant_spec, "model file or benchmark case")->required();
  step->add_option("--close-with", close_with, "close a partitioned plant with this controller");
  step->add_option("--tfinal", t_final, "simulation horizon (default 2)");
  step->add_option("--points", n_points, "number of samples (default 201)");
  step->add_option("--out", out_path, "write CSV here instead of stdout");
  step->add_option("--digits", digits, "significant digits (default 6)");

  double wmin = 1e-2, wmax = 1e2;
  int n_freq = 200;
  CLI::App* sig = app.add_subcommand("sigma", "singular values over frequency as CSV (w, sigma1..k)");
  sig->add_option("--plant", plant_spec, "model file or benchmark case")->required();
  sig->add_option("--close-with", close_with, "close a partitioned plant with this controller");
  sig->add_option("--wmin", wmin, "lowest frequency (default 1e-2)");
  sig->add_option("--wmax", wmax, "highest frequency (default 1e2)");
  sig->add_option("--points", n_freq, "grid points (default 200)");
  sig->add_option("--out", out_path, "write CSV here instead of stdout");
  sig->add_option("--digits", digits, "significant digits (default 6)");

  int out_index = 1, in_index = 1;
  CLI::App* zpk = app.add_subcommand("zpk", "zero/pole/gain of one channel");
  zpk->add_option("--plant", plant_spec, "model file or benchmark case")->required();
  zpk->add_option("--close-with", close_with, "close a partitioned plant with this controller");
  zpk->add_option("--output", out_index, "output channel, 1-based (default 1)");
  zpk->add_option("--input", in_index, "input channel, 1-based (default 1)");
  zpk->add_option("--digits", digits, "significant digits (default 6)");

  RunOptions ro;
  std::vector<int> bench_orders;
  std::uint64_t bench_seed = 0;
  int bench_starts = 0, bench_iters = 0;
  bool no_refine = false, bench_serial = false;
  CLI::App* bench = app.add_subcommand(
      "bench", "run benchmark experiments; exits 0 once the sweep completes (see pass flags)");
  bench->add_option("--case", ro.selection, "case names (default: all)");
  bench->add_option("--orders", bench_orders, "controller orders (single --case only)");
  bench->add_option("--starts", bench_starts, "override starts per case");
  bench->add_option("--seed", bench_seed, "override RNG seed")->envname("FIXORDER_SEED");
  bench->add_option("--max-iters", bench_iters, "override iteration budget");
  bench->add_flag("--no-refine", no_refine, "skip the warm restart pass");
  bench->add_flag("--serial", bench_serial, "disable parallel starts");
  bench->add_option("--outdir", ro.outdir, "directory for CSV artifacts (default: none)");
  bench->add_option("--out", out_path, "write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (synth->parsed()) return run_synth(sa);

    if (norm->parsed()) {
      const StateSpaceModel sys = maybe_close(resolve_plant(plant_spec), close_with);
      const HinfResult hr = hinf_norm(sys, norm_tol);
      std::cout << "Hinf norm: " << format_number(hr.norm, digits);
      if (std::isfinite(hr.norm))
        std::cout << " (peak near w = " << format_number(hr.peak_frequency, digits)
                  << " rad/s)";
      else
        std::cout << " (unstable)";
      std::cout << "\n";
      return 0;
    }

    if (absc->parsed()) {
      const StateSpaceModel sys = maybe_close(resolve_plant(plant_spec), close_with);
      auto [alpha, eig] = spectral_abscissa(sys);
      std::cout << "spectral abscissa: " << format_number(alpha, digits) << "\n";
      std::cout << "eigenvalues:\n";
      for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        std::cout << "  " << format_complex(eig.values(i), digits) << "\n";
      return 0;
    }

    if (step->parsed()) {
      const StateSpaceModel sys = maybe_close(resolve_plant(plant_spec), close_with);
      const StepResponse resp = step_response(sys, t_final, n_points);
      std::vector<std::string> header{"t"};
      for (int c = 0; c < sys.inputs(); ++c)
        for (int r = 0; r < sys.outputs(); ++r)
          header.push_back("y" + std::to_string(r + 1) + std::to_string(c + 1));
      std::vector<std::vector<double>> rows;
      rows.reserve(resp.t.size());
      for (std::size_t i = 0; i < resp.t.size(); ++i) {
        std::vector<double> row{resp.t[i]};
        for (int c = 0; c < sys.inputs(); ++c)
          for (int r = 0; r < sys.outputs(); ++r) row.push_back(resp.y[i](r, c));
        rows.push_back(std::move(row));
      }
      print_csv(out_path, header, rows, digits);
      return 0;
    }

    if (sig->parsed()) {
      const StateSpaceModel sys = maybe_close(resolve_plant(plant_spec), close_with);
      const std::vector<double> grid = log_grid(wmin, wmax, n_freq);
      const Mat s = sigma(sys, grid);
      std::vector<std::string> header{"w"};
      for (Eigen::Index c = 0; c < s.cols(); ++c)
        header.push_back("sigma" + std::to_string(c + 1));
      std::vector<std::vector<double>> rows;
      rows.reserve(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> row{grid[i]};
        for (Eigen::Index c = 0; c < s.cols(); ++c)
          row.push_back(s(static_cast<Eigen::Index>(i), c));
        rows.push_back(std::move(row));
      }
      print_csv(out_path, header, rows, digits);
      return 0;
    }

    if (zpk->parsed()) {
      const StateSpaceModel sys = maybe_close(resolve_plant(plant_spec), close_with);
      if (out_index < 1 || in_index < 1)
        throw IndexError("channel indices are 1-based");
      const ZpkForm z = ss_to_zpk(sys, out_index - 1, in_index - 1);
      std::cout << "Zero/pole/gain:\n" << format_zpk(z, digits) << "\n";
      std::cout << "\nTransfer function:\n"
                << format_tf(channel_tf(sys, out_index - 1, in_index - 1), digits) << "\n";
      return 0;
    }

    if (bench->parsed()) {
      if (!bench_orders.empty()) {
        if (ro.selection.size() != 1)
          throw ConfigError("--orders needs exactly one --case");
        ro.orders_override[ro.selection.front()] = bench_orders;
      }
      if (bench_starts > 0) ro.n_starts = bench_starts;
      if (bench->count("--seed") > 0) ro.seed = bench_seed;
      if (bench_iters > 0) ro.max_iters_per_start = bench_iters;
      ro.refine_pass = !no_refine;
      ro.parallel = !bench_serial;
      const BenchmarkReport report = run_benchmarks(ro);
      write_text(out_path, report_to_json(report));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

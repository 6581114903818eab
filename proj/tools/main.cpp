#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kaczmarz/bench.hpp"
#include "kaczmarz/cost_model.hpp"
#include "kaczmarz/errors.hpp"
#include "kaczmarz/instance_io.hpp"
#include "kaczmarz/oracle.hpp"
#include "kaczmarz/problem_gen.hpp"
#include "kaczmarz/schedule.hpp"
#include "kaczmarz/trace_io.hpp"

using namespace kaczmarz;

namespace {

constexpr int kUsageError = 1;
constexpr int kNumericalError = 2;

struct InstanceArgs {
  std::string instance;  // file prefix; empty = generate in memory
  std::string kind = "dense";
  std::size_t m = 100;
  std::size_t n = 50;
  double delta = 1.0;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  bool normalize = false;
};

void add_instance_options(CLI::App* app, InstanceArgs& args) {
  app->add_option("--instance", args.instance, "Instance file prefix (<prefix>.A.mtx, <prefix>.b.mtx, ...)");
  app->add_option("--kind", args.kind, "Generator when no --instance is given")
      ->check(CLI::IsMember({"dense", "sparse", "spectrum"}));
  app->add_option("--m", args.m, "Rows");
  app->add_option("--n", args.n, "Columns");
  app->add_option("--delta", args.delta, "Density for the sparse generator");
  app->add_option("--alpha", args.alpha, "Decay exponent for the spectrum generator");
  app->add_option("--instance-seed", args.seed, "Generator seed");
  app->add_flag("--normalize", args.normalize, "Scale rows of a loaded instance to unit norm");
}

ProblemInstance make_instance(const InstanceArgs& args) {
  if (!args.instance.empty()) {
    ProblemInstance inst = load_instance(args.instance);
    if (args.normalize) {
      auto [a, b] = normalize_rows(inst.a, inst.b);
      inst.a = std::move(a);
      inst.b = std::move(b);
    }
    return inst;
  }
  if (args.kind == "sparse") return gen_sparse_gaussian(args.m, args.n, args.delta, args.seed);
  if (args.kind == "spectrum") return gen_spectrum_controlled(args.n, args.alpha, args.seed);
  return gen_dense_gaussian(args.m, args.n, args.seed);
}

std::optional<std::size_t> parse_cycle(const std::string& text) {
  if (text.empty() || text == "auto") return std::nullopt;
  const long v = std::stol(text);
  if (v < 1) throw InvalidCycle("--cycle must be a positive integer or 'auto'");
  return static_cast<std::size_t>(v);
}

// "ark" takes the default lambda; "ark:min", "sark:0.01" override it.
SolverSpec parse_solver(const std::string& text, const std::string& default_lambda, const std::string& cycle) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string lam = colon == std::string::npos ? default_lambda : text.substr(colon + 1);
  const auto kind = parse_solver_kind(name);
  if (!kind) throw InvalidArgument("unknown solver '" + name + "'");
  SolverSpec spec;
  spec.kind = *kind;
  if (lam == "min") {
    spec.lambda_mode = LambdaMode::Min;
  } else if (lam == "auto") {
    spec.lambda_mode = LambdaMode::Auto;
  } else {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(lam, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != lam.size()) throw InvalidLambda("--lambda must be a number, 'min', or 'auto' (got '" + lam + "')");
    spec.lambda_mode = v == 0.0 ? LambdaMode::Zero : LambdaMode::Value;
    spec.lambda_value = v;
  }
  if (spec.kind == SolverKind::Sark) spec.cycle_length = parse_cycle(cycle);
  return spec;
}

// "20" = twenty seeds 0..19, "3,7,9" = that list, "10:30" = 10..29.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    const auto lo = std::stoull(text.substr(0, colon));
    const auto hi = std::stoull(text.substr(colon + 1));
    for (auto s = lo; s < hi; ++s) seeds.push_back(s);
  } else if (text.find(',') != std::string::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      seeds.push_back(std::stoull(text.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else {
    const auto count = std::stoull(text);
    for (std::uint64_t s = 0; s < count; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw InvalidArgument("--seeds selects no seeds");
  return seeds;
}

void write_output(const std::string& path, const TraceTable& table) {
  if (path.empty() || path == "-") {
    std::cout << traces_to_csv(table);
    return;
  }
  const bool json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
  export_traces(table, json ? TraceFormat::Json : TraceFormat::Csv, path);
}

bool needs_spectral(const std::vector<SolverSpec>& specs, const ProblemInstance& inst) {
  for (const auto& s : specs) {
    if (s.lambda_mode == LambdaMode::Min && !inst.meta.lambda_min) return true;
  }
  return false;
}

std::vector<double> log_grid(double lo, double hi, std::size_t steps) {
  std::vector<double> g(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
    g[i] = std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo)));
  }
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized Kaczmarz solvers and benchmarks"};
  app.require_subcommand(1);

  InstanceArgs gen_args;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic instance and write it to disk");
  add_instance_options(generate, gen_args);
  generate->add_option("--out", gen_out, "Output file prefix")->required();

  InstanceArgs run_args;
  std::vector<std::string> solver_names{"rk"};
  std::string lambda_text = "0";
  std::string cycle_text = "auto";
  std::string seeds_text = "1";
  std::size_t iters = 1000;
  std::optional<std::size_t> stride;
  std::optional<double> target;
  std::string out_path;
  bool oracle = false;
  std::size_t workers = 0;
  double sample_fraction = 0.0;
  std::uint64_t solve_seed = 0;

  auto add_run_options = [&](CLI::App* sub, bool many) {
    add_instance_options(sub, run_args);
    if (many) {
      sub->add_option("--solver", solver_names, "Solvers: rk, ark, ark-ref, sark, cgne; optional :lambda suffix")
          ->delimiter(',');
      sub->add_option("--seeds", seeds_text, "Seed count N (0..N-1), list a,b,c, or range lo:hi");
    } else {
      sub->add_option("--solver", solver_names, "rk, ark, ark-ref, sark, or cgne")->expected(1);
      sub->add_option("--seed", solve_seed, "Index stream seed");
    }
    sub->add_option("--lambda", lambda_text, "Acceleration parameter: a value, min, 0, or auto");
    sub->add_option("--cycle", cycle_text, "SARK cycle length or auto");
    sub->add_option("--iters", iters, "Iteration budget (row projections, or CG steps)");
    sub->add_option("--stride", stride, "Residual trace stride (default m; 1 for cgne)");
    sub->add_option("--target", target, "Stop once the residual falls to this value");
    sub->add_option("--out", out_path, "Trace output (.csv or .json); stdout when omitted");
    sub->add_flag("--oracle", oracle, "Compute exact spectral data for error columns and envelopes");
    sub->add_option("--sample-rows", sample_fraction, "Row fraction used by the auto-lambda residual probe");
  };

  auto* solve = app.add_subcommand("solve", "Run one solver with one seed");
  add_run_options(solve, false);
  auto* bench = app.add_subcommand("bench", "Run several solvers over several seeds");
  add_run_options(bench, true);
  bench->add_option("--workers", workers, "Worker threads (default: KACZMARZ_WORKERS or hardware)");

  std::size_t delta_steps = 50, lambda_steps = 50;
  double delta_lo = 1e-3, lambda_lo = 1e-8, lambda_hi = 1.0;
  std::string regions_out;
  auto* regions = app.add_subcommand("regions", "Classify a (delta, lambda_min) grid by best solver");
  regions->add_option("--delta-steps", delta_steps)->check(CLI::PositiveNumber);
  regions->add_option("--lambda-steps", lambda_steps)->check(CLI::PositiveNumber);
  regions->add_option("--delta-min", delta_lo)->check(CLI::Range(1e-300, 1.0));
  regions->add_option("--lambda-min", lambda_lo)->check(CLI::PositiveNumber);
  regions->add_option("--lambda-max", lambda_hi)->check(CLI::PositiveNumber);
  regions->add_option("--out", regions_out, "CSV output; stdout when omitted");

  std::size_t sched_m = 100, horizon = 10;
  double sched_lambda = 0.0;
  auto* schedule = app.add_subcommand("schedule", "Dump the acceleration schedule as JSON");
  schedule->add_option("--m", sched_m)->required();
  schedule->add_option("--lambda", sched_lambda)->required();
  schedule->add_option("--horizon", horizon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*generate) {
      save_instance(gen_out, make_instance(gen_args));
    } else if (*solve || *bench) {
      const ProblemInstance inst = make_instance(run_args);
      std::vector<SolverSpec> specs;
      for (const auto& s : solver_names) specs.push_back(parse_solver(s, lambda_text, cycle_text));
      const std::vector<std::uint64_t> seeds = *solve ? std::vector<std::uint64_t>{solve_seed} : parse_seeds(seeds_text);

      std::optional<SpectralData> spectral;
      if (oracle || needs_spectral(specs, inst)) spectral = spectral_decompose(inst.a);

      BenchConfig cfg;
      cfg.iterations = iters;
      cfg.residual_stride = stride;
      cfg.target_residual = target;
      cfg.workers = *solve ? 1 : workers;
      cfg.row_sample_fraction = sample_fraction;
      const TraceTable table = run_benchmark(inst, specs, seeds, cfg, spectral ? &*spectral : nullptr);
      write_output(out_path, table);
      for (const auto& note : table.notes) std::cerr << "note: " << note << '\n';
      for (const auto& r : table.runs) {
        std::fprintf(stderr, "%s seed %llu: k=%zu lambda=%.6g residual=%.6g ops=%.6g\n", r.solver.c_str(),
                     static_cast<unsigned long long>(r.seed), r.iterations, r.lambda, r.final_residual, r.final_ops);
      }
    } else if (*regions) {
      const auto grid = sweep_regions(log_grid(delta_lo, 1.0, delta_steps), log_grid(lambda_lo, lambda_hi, lambda_steps));
      const std::string csv = regions_csv(grid);
      if (regions_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(regions_out, std::ios::binary);
        if (!out) throw IoError("cannot open " + regions_out + " for writing");
        out << csv;
      }
    } else if (*schedule) {
      const AccelSchedule s = build_schedule(sched_m, sched_lambda, horizon);
      const auto g = s.gammas();
      nlohmann::json j = {{"m", sched_m},
                          {"lambda", sched_lambda},
                          {"gamma_prev", g[0]},
                          {"gamma", std::vector<double>(g.begin() + 1, g.end())},
                          {"alpha", std::vector<double>(s.alphas().begin(), s.alphas().end())},
                          {"beta", std::vector<double>(s.betas().begin(), s.betas().end())},
                          {"p", std::vector<double>(s.ps().begin(), s.ps().end())},
                          {"q", std::vector<double>(s.qs().begin(), s.qs().end())},
                          {"r", std::vector<double>(s.rs().begin(), s.rs().end())}};
      std::cout << j.dump(2) << '\n';
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return 0;
}

#include "kaczmarz/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <thread>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/lambda_estimator.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

namespace {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool is_accelerated(SolverKind k) {
  return k == SolverKind::ArkReference || k == SolverKind::ArkEfficient || k == SolverKind::Sark;
}

struct RunOutput {
  Trace trace;
  std::vector<double> weighted;  // aligned with trace when spectral data is present
  std::vector<std::optional<double>> envelope;
  RunSummary summary;
  std::vector<std::string> notes;
};

class BenchContext {
 public:
  BenchContext(const ProblemInstance& inst, const SpectralData* spectral, const BenchConfig& config)
      : inst_(inst), spectral_(spectral), config_(config), x0_(inst.a.cols(), 0.0) {
    if (spectral_) {
      x_ref_ = project_solution_set(inst.a, inst.b, x0_, *spectral_);
      lambda_min_ = spectral_->lambda_min;
      lambda_max_ = spectral_->lambda_max;
      initial_sq_ = squared_distance(x0_, x_ref_);
      initial_weighted_ = weighted_norm_sq(x_ref_, *spectral_);
      const double r0 = residual_norm(inst.a, x0_, inst.b);
      initial_residual_sq_ = r0 * r0;
    } else {
      x_ref_ = inst.x_star;
      if (inst.meta.lambda_min) lambda_min_ = *inst.meta.lambda_min;
    }
  }

  RunOutput run(const SolverSpec& spec, std::uint64_t seed) const {
    RunOutput out;
    out.summary.solver = spec.label();
    out.summary.seed = seed;
    IndexStream stream(seed);
    const RowMatrix& a = inst_.a;
    const std::size_t budget = config_.iterations;

    SolverConfig cfg;
    cfg.max_iterations = budget;
    cfg.residual_stride = config_.residual_stride;
    cfg.target_residual = config_.target_residual;
    cfg.reference_solution = x_ref_;
    cfg.cycle_length = spec.cycle_length;
    std::map<std::size_t, double> weighted;  // keyed by k; warm-up and main runs share k = K2
    if (spectral_) {
      cfg.observer = [&](const IterateView& it) {
        Vector d(it.x.begin(), it.x.end());
        for (std::size_t j = 0; j < d.size(); ++j) d[j] -= x_ref_[j];
        weighted[it.k] = weighted_norm_sq(d, *spectral_);
      };
    }

    Trace warm;
    Vector start = x0_;
    std::optional<EnvelopeKind> env_kind;
    double lambda = 0.0;
    bool rk_only = false;

    if (is_accelerated(spec.kind)) {
      switch (spec.lambda_mode) {
        case LambdaMode::Value: lambda = spec.lambda_value; break;
        case LambdaMode::Zero: lambda = 0.0; break;
        case LambdaMode::Min:
          if (!lambda_min_) throw InvalidArgument("lambda=min requires spectral data or instance metadata");
          lambda = *lambda_min_;
          break;
        case LambdaMode::Auto: {
          LambdaEstimatorOptions opts;
          opts.row_sample_fraction = config_.row_sample_fraction;
          opts.residual_stride = config_.residual_stride;
          opts.reference_solution = x_ref_;
          opts.observer = cfg.observer;
          try {
            LambdaEstimate est = estimate_lambda(a, inst_.b, x0_, budget, stream, opts);
            lambda = est.lambda_hat;
            if (lambda == 0.0) {
              out.notes.push_back(spec.label() + " seed " + std::to_string(seed) +
                                  ": lambda estimate is 0, running ARK(0)");
            }
            warm = std::move(est.trace);
            start = std::move(est.warm_start);
            cfg.max_iterations = budget - est.k2;
            cfg.k_offset = est.k2;
            cfg.ops_offset = warm.back().modeled_ops;
          } catch (const DegenerateResiduals&) {
            out.notes.push_back(spec.label() + " seed " + std::to_string(seed) +
                                ": converged during lambda estimation, running RK only");
            rk_only = true;
          }
          break;
        }
      }
      if (spectral_ && spec.lambda_mode != LambdaMode::Auto) {
        env_kind = lambda > 0.0 ? EnvelopeKind::ArkThmX : EnvelopeKind::ArkSublinear;
      }
    } else if (spec.kind == SolverKind::Rk && spectral_) {
      env_kind = EnvelopeKind::RkEq51;
    } else if (spec.kind == SolverKind::Cgne && spectral_) {
      env_kind = EnvelopeKind::CgEq55;
    }
    cfg.lambda = lambda;

    SolveResult res;
    if (rk_only) {
      IndexStream fresh(seed);
      res = solve_rk(a, inst_.b, x0_, cfg, fresh);
    } else {
      switch (spec.kind) {
        case SolverKind::Rk: res = solve_rk(a, inst_.b, start, cfg, stream); break;
        case SolverKind::ArkReference: res = solve_ark_reference(a, inst_.b, start, cfg, stream); break;
        case SolverKind::ArkEfficient: res = solve_ark_efficient(a, inst_.b, start, cfg, stream); break;
        case SolverKind::Sark: res = solve_sark(a, inst_.b, start, cfg, stream); break;
        case SolverKind::Cgne: res = solve_cgne(a, inst_.b, start, cfg); break;
      }
    }

    // Stitch the warm-up trace in front; its last point coincides with the
    // accelerated run's first.
    if (!warm.empty()) {
      if (!res.trace.empty() && warm.back().k == res.trace.front().k) {
        res.trace.erase(res.trace.begin());
      }
      warm.insert(warm.end(), res.trace.begin(), res.trace.end());
      res.trace = std::move(warm);
    }
    if (spectral_) {
      for (const TracePoint& tp : res.trace) out.weighted.push_back(weighted.at(tp.k));
    }

    if (env_kind) {
      EnvelopeParams p;
      p.m = a.rows();
      p.lambda = lambda;
      p.lambda_min = *lambda_min_;
      p.lambda_max = lambda_max_;
      p.initial = *env_kind == EnvelopeKind::RkEq51   ? initial_sq_
                  : *env_kind == EnvelopeKind::CgEq55 ? initial_residual_sq_
                                                      : initial_weighted_;
      const BoundEnvelope env = bound_envelope(*env_kind, p);
      for (const TracePoint& tp : res.trace) {
        const double e = env.at_iterate(tp.k);
        out.envelope.push_back(std::isfinite(e) ? std::optional<double>(e) : std::nullopt);
      }
    } else {
      out.envelope.assign(res.trace.size(), std::nullopt);
    }

    out.summary.iterations = res.trace.empty() ? 0 : res.trace.back().k;
    out.summary.lambda = lambda;
    out.summary.final_residual = res.trace.empty() ? 0.0 : res.trace.back().residual;
    out.summary.final_ops = res.trace.empty() ? 0.0 : res.trace.back().modeled_ops;
    out.trace = std::move(res.trace);
    return out;
  }

 private:
  const ProblemInstance& inst_;
  const SpectralData* spectral_;
  const BenchConfig& config_;
  Vector x0_;
  Vector x_ref_;
  std::optional<double> lambda_min_;
  double lambda_max_ = 0.0;
  double initial_sq_ = 0.0;
  double initial_weighted_ = 0.0;
  double initial_residual_sq_ = 0.0;
};

TraceRow make_row(const std::string& label, std::optional<std::uint64_t> seed, const RunOutput& run,
                  std::size_t idx) {
  const TracePoint& tp = run.trace[idx];
  TraceRow row;
  row.solver = label;
  row.seed = seed;
  row.k = tp.k;
  row.modeled_ops = tp.modeled_ops;
  row.residual = tp.residual;
  row.error_sq = tp.error_sq;
  if (idx < run.weighted.size()) row.weighted_error_sq = run.weighted[idx];
  row.envelope = run.envelope[idx];
  return row;
}

}  // namespace

std::string SolverSpec::label() const {
  std::string name(to_string(kind));
  if (kind == SolverKind::Rk || kind == SolverKind::Cgne) return name;
  switch (lambda_mode) {
    case LambdaMode::Value: name += "(" + format_real(lambda_value) + ")"; break;
    case LambdaMode::Min: name += "(min)"; break;
    case LambdaMode::Zero: name += "(0)"; break;
    case LambdaMode::Auto: name += "(auto)"; break;
  }
  if (kind == SolverKind::Sark && cycle_length) name += "[T=" + std::to_string(*cycle_length) + "]";
  return name;
}

std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KACZMARZ_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

TraceTable run_benchmark(const ProblemInstance& instance, const std::vector<SolverSpec>& solvers,
                         const std::vector<std::uint64_t>& seeds, const BenchConfig& config,
                         const SpectralData* spectral) {
  if (seeds.empty()) throw InvalidArgument("run_benchmark: at least one seed is required");
  const bool have_lambda_min = spectral != nullptr || instance.meta.lambda_min.has_value();
  for (const SolverSpec& s : solvers) {
    if (s.lambda_mode == LambdaMode::Min && !have_lambda_min) {
      throw InvalidArgument(s.label() + ": lambda=min requires spectral data or instance metadata");
    }
  }
  const BenchContext ctx(instance, spectral, config);

  const std::size_t tasks = solvers.size() * seeds.size();
  std::vector<RunOutput> results(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      try {
        results[t] = ctx.run(solvers[t / seeds.size()], seeds[t % seeds.size()]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const std::size_t nworkers = std::min(resolve_workers(config.workers), std::max<std::size_t>(tasks, 1));
  if (nworkers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < nworkers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t t = 0; t < tasks; ++t) {
    if (!errors[t]) continue;
    const std::string where = solvers[t / seeds.size()].label() + " seed " +
                              std::to_string(seeds[t % seeds.size()]) + ": ";
    try {
      std::rethrow_exception(errors[t]);
    } catch (const NumericalError& e) {
      throw NumericalError(where + e.what());
    } catch (const std::exception& e) {
      throw Error(where + e.what());
    }
  }

  TraceTable table;
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    const std::string label = solvers[s].label();
    std::size_t common = SIZE_MAX;
    for (std::size_t r = 0; r < seeds.size(); ++r) {
      const RunOutput& run = results[s * seeds.size() + r];
      for (std::size_t i = 0; i < run.trace.size(); ++i) table.rows.push_back(make_row(label, seeds[r], run, i));
      table.runs.push_back(run.summary);
      table.notes.insert(table.notes.end(), run.notes.begin(), run.notes.end());
      common = std::min(common, run.trace.size());
    }
    const double count = static_cast<double>(seeds.size());
    const RunOutput& first = results[s * seeds.size()];
    for (std::size_t i = 0; i < common; ++i) {
      TraceRow row = make_row(label, std::nullopt, first, i);
      double res = 0.0, err = 0.0, wer = 0.0;
      bool have_err = true, have_wer = true;
      for (std::size_t r = 0; r < seeds.size(); ++r) {
        const RunOutput& run = results[s * seeds.size() + r];
        res += run.trace[i].residual;
        if (run.trace[i].error_sq) err += *run.trace[i].error_sq; else have_err = false;
        if (i < run.weighted.size()) wer += run.weighted[i]; else have_wer = false;
      }
      row.residual = res / count;
      row.error_sq = have_err ? std::optional<double>(err / count) : std::nullopt;
      row.weighted_error_sq = have_wer ? std::optional<double>(wer / count) : std::nullopt;
      table.rows.push_back(row);
    }
  }
  return table;
}

}  // namespace kaczmarz

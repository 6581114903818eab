#include <cmath>

#include <gtest/gtest.h>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/oracle.hpp"
#include "kaczmarz/problem_gen.hpp"
#include "kaczmarz/solvers.hpp"

using namespace kaczmarz;

namespace {

using SolverFn = SolveResult (*)(const RowMatrix&, std::span<const double>, std::span<const double>,
                                 const SolverConfig&, IndexStream&);

double rel_diff(const Vector& a, const Vector& b) {
  return std::sqrt(squared_distance(a, b)) / std::max(norm2(a), 1e-300);
}

SolveResult run(SolverFn fn, const ProblemInstance& inst, SolverConfig cfg, std::uint64_t seed) {
  IndexStream s(seed);
  return fn(inst.a, inst.b, Vector(inst.a.cols(), 0.0), cfg, s);
}

SolveResult sark_fixed(const RowMatrix& a, std::span<const double> b, std::span<const double> x0,
                       SolverConfig cfg, IndexStream& s, std::optional<std::size_t> t) {
  cfg.cycle_length = t;
  return solve_sark(a, b, x0, cfg, s);
}

}  // namespace

TEST(Rk, SingleHyperplaneOneStep) {
  const RowMatrix a = RowMatrix::dense(1, 2, {1, 0});
  SolverConfig cfg;
  cfg.max_iterations = 1;
  IndexStream s(0);
  const SolveResult r = solve_rk(a, Vector{3}, Vector{0, 0}, cfg, s);
  EXPECT_EQ(r.x, (Vector{3, 0}));
  EXPECT_EQ(r.iterations, 1u);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.back().k, 1u);
  EXPECT_LE(r.trace.back().residual, 1e-12);
}

TEST(AllSolvers, FixedPointAtSolution) {
  const ProblemInstance inst = gen_dense_gaussian(30, 20, 3);
  SolverConfig cfg;
  cfg.max_iterations = 200;
  cfg.lambda = 0.1;
  for (SolverFn fn : {&solve_rk, &solve_ark_reference, &solve_ark_efficient, &solve_sark}) {
    IndexStream s(1);
    const SolveResult r = fn(inst.a, inst.b, inst.x_star, cfg, s);
    EXPECT_LT(rel_diff(inst.x_star, r.x), 1e-13);
  }
  const SolveResult c = solve_cgne(inst.a, inst.b, inst.x_star, cfg);
  EXPECT_LT(rel_diff(inst.x_star, c.x), 1e-13);
}

TEST(ArkReference, FirstStepWithLambdaZeroIsRk) {
  const ProblemInstance inst = gen_dense_gaussian(20, 10, 4);
  SolverConfig cfg;
  cfg.max_iterations = 1;
  const Vector x0(10, 0.5);
  IndexStream s1(9), s2(9);
  const Vector rk = solve_rk(inst.a, inst.b, x0, cfg, s1).x;
  const Vector ark = solve_ark_reference(inst.a, inst.b, x0, cfg, s2).x;
  EXPECT_LT(rel_diff(rk, ark), 1e-15);
}

TEST(ArkEfficient, IdentityOneStep) {
  const RowMatrix eye = RowMatrix::dense(2, 2, {1, 0, 0, 1});
  SolverConfig cfg;
  cfg.max_iterations = 1;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    IndexStream peek(seed);
    const std::size_t i = peek.next(2);
    IndexStream s(seed);
    const Vector x = solve_ark_efficient(eye, Vector{1, 1}, Vector{0, 0}, cfg, s).x;
    Vector want{0, 0};
    want[i] = 1;
    EXPECT_EQ(x, want);
  }
}

TEST(Equivalence, DenseAllAccelForms) {
  const ProblemInstance inst = gen_dense_gaussian(100, 50, 10);
  const SpectralData sd = spectral_decompose(inst.a);
  SolverConfig cfg;
  cfg.max_iterations = 1000;
  cfg.lambda = sd.lambda_min;
  const Vector ref = run(&solve_ark_reference, inst, cfg, 5).x;
  EXPECT_LT(rel_diff(ref, run(&solve_ark_efficient, inst, cfg, 5).x), 1e-8);
  for (std::optional<std::size_t> t : {std::optional<std::size_t>(1), std::optional<std::size_t>(5),
                                       std::optional<std::size_t>()}) {
    IndexStream s(5);
    const Vector x = sark_fixed(inst.a, inst.b, Vector(50, 0.0), cfg, s, t).x;
    EXPECT_LT(rel_diff(ref, x), 1e-8) << "T=" << (t ? *t : 0);
  }
}

TEST(Equivalence, SparseAndBudgetMidCycle) {
  const ProblemInstance inst = gen_sparse_gaussian(200, 150, 0.05, 11);
  SolverConfig cfg;
  cfg.max_iterations = 1237;  // not a multiple of the cycle
  cfg.lambda = 0.01;
  const Vector eff = run(&solve_ark_efficient, inst, cfg, 6).x;
  EXPECT_LT(rel_diff(eff, run(&solve_ark_reference, inst, cfg, 6).x), 1e-8);
  for (std::size_t t : {1u, 5u, 9u, 40u}) {
    IndexStream s(6);
    EXPECT_LT(rel_diff(eff, sark_fixed(inst.a, inst.b, Vector(150, 0.0), cfg, s, t).x), 1e-8) << t;
  }
}

TEST(Sark, CycleOneMatchesEfficientTightly) {
  const ProblemInstance inst = gen_sparse_gaussian(80, 60, 0.2, 12);
  SolverConfig cfg;
  cfg.max_iterations = 500;
  cfg.lambda = 0.05;
  const Vector eff = run(&solve_ark_efficient, inst, cfg, 7).x;
  IndexStream s(7);
  EXPECT_LT(rel_diff(eff, sark_fixed(inst.a, inst.b, Vector(60, 0.0), cfg, s, 1).x), 1e-10);
}

TEST(Sark, AutoCycleFromDensity) {
  const ProblemInstance inst = gen_sparse_gaussian(300, 1000, 0.01, 13);
  SolverConfig cfg;
  cfg.max_iterations = 100;
  const SolveResult r = run(&solve_sark, inst, cfg, 1);
  EXPECT_EQ(r.cycle_length, 20u);
}

TEST(Sark, ConsumesSameIndicesAsArk) {
  const ProblemInstance inst = gen_sparse_gaussian(50, 40, 0.2, 14);
  SolverConfig cfg;
  cfg.max_iterations = 333;
  cfg.lambda = 0.01;
  cfg.cycle_length = 7;
  IndexStream a(3), b(3);
  solve_ark_efficient(inst.a, inst.b, Vector(40, 0.0), cfg, a);
  solve_sark(inst.a, inst.b, Vector(40, 0.0), cfg, b);
  EXPECT_EQ(a.consumed(), b.consumed());
  EXPECT_EQ(a.next(50), b.next(50));
}

TEST(Sark, RejectsZeroCycle) {
  const ProblemInstance inst = gen_dense_gaussian(5, 3, 1);
  SolverConfig cfg;
  cfg.cycle_length = 0;
  EXPECT_THROW(run(&solve_sark, inst, cfg, 1), InvalidCycle);
}

TEST(AccelSolvers, RejectLambdaOutsideRange) {
  const ProblemInstance inst = gen_dense_gaussian(5, 3, 1);
  SolverConfig cfg;
  cfg.lambda = 6.0;
  for (SolverFn fn : {&solve_ark_reference, &solve_ark_efficient, &solve_sark}) {
    EXPECT_THROW(run(fn, inst, cfg, 1), InvalidLambda);
  }
}

TEST(AllSolvers, ShapeMismatch) {
  const ProblemInstance inst = gen_dense_gaussian(5, 3, 1);
  SolverConfig cfg;
  IndexStream s(1);
  EXPECT_THROW(solve_rk(inst.a, inst.b, Vector(4, 0.0), cfg, s), ShapeMismatch);
  EXPECT_THROW(solve_sark(inst.a, Vector(4, 0.0), Vector(3, 0.0), cfg, s), ShapeMismatch);
  EXPECT_THROW(solve_cgne(inst.a, inst.b, Vector(2, 0.0), cfg), ShapeMismatch);
}

TEST(Trace, StrideOpsAndDeterminism) {
  const ProblemInstance inst = gen_dense_gaussian(40, 30, 15);
  SolverConfig cfg;
  cfg.max_iterations = 1000;
  cfg.residual_stride = 100;
  cfg.lambda = 0.01;
  cfg.reference_solution = inst.x_star;
  for (SolverFn fn : {&solve_rk, &solve_ark_reference, &solve_ark_efficient, &solve_sark}) {
    const SolveResult a = run(fn, inst, cfg, 21);
    const SolveResult b = run(fn, inst, cfg, 21);
    ASSERT_EQ(a.trace.size(), 11u);
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
      EXPECT_EQ(a.trace[i].k, 100 * i);
      EXPECT_EQ(a.trace[i].residual, b.trace[i].residual);
      EXPECT_EQ(a.trace[i].error_sq, b.trace[i].error_sq);
      ASSERT_TRUE(a.trace[i].error_sq.has_value());
      if (i > 0) EXPECT_GE(a.trace[i].modeled_ops, a.trace[i - 1].modeled_ops);
    }
    EXPECT_EQ(a.x, b.x);
  }
}

TEST(Trace, EarlyExitOnTarget) {
  const ProblemInstance inst = gen_dense_gaussian(50, 20, 16);
  SolverConfig cfg;
  cfg.max_iterations = 100000;
  cfg.target_residual = 1e-6;
  const SolveResult r = run(&solve_rk, inst, cfg, 2);
  EXPECT_LT(r.iterations, 100000u);
  EXPECT_LE(r.trace.back().residual, 1e-6);
  EXPECT_EQ(r.trace.back().k, r.iterations);
}

TEST(Trace, OffsetsShiftKAndOps) {
  const ProblemInstance inst = gen_dense_gaussian(10, 5, 17);
  SolverConfig cfg;
  cfg.max_iterations = 20;
  cfg.k_offset = 100;
  cfg.ops_offset = 7.0;
  const SolveResult r = run(&solve_rk, inst, cfg, 2);
  EXPECT_EQ(r.trace.front().k, 100u);
  EXPECT_EQ(r.trace.front().modeled_ops, 7.0);
  EXPECT_EQ(r.trace.back().k, 120u);
  EXPECT_DOUBLE_EQ(r.trace.back().modeled_ops, 7.0 + 20 * 4.0 * 5);
}

TEST(Rk, SparseUpdateTouchesOnlyRowSupport) {
  const ProblemInstance inst = gen_sparse_gaussian(60, 80, 0.05, 18);
  SolverConfig cfg;
  cfg.max_iterations = 1;
  IndexStream s(4), peek(4);
  Vector x(80, 0.25);
  for (int step = 0; step < 50; ++step) {
    const std::size_t i = peek.next(inst.a.rows());
    const Vector next = solve_rk(inst.a, inst.b, x, cfg, s).x;
    std::vector<bool> in_support(80, false);
    for (auto c : inst.a.row(i).cols) in_support[c] = true;
    for (std::size_t j = 0; j < 80; ++j) {
      if (!in_support[j]) EXPECT_EQ(next[j], x[j]);
    }
    x = next;
  }
}

TEST(AllSolvers, DuplicateEquationStillConverges) {
  const ProblemInstance base = gen_dense_gaussian(30, 20, 19);
  std::vector<double> vals = base.a.dense_values();
  vals.insert(vals.end(), vals.begin(), vals.begin() + 20);  // repeat row 0
  const RowMatrix a = RowMatrix::dense(31, 20, vals);
  Vector b = base.b;
  b.push_back(base.b[0]);
  SolverConfig cfg;
  cfg.max_iterations = 200000;
  cfg.target_residual = 1e-8;
  cfg.lambda = 1e-3;
  for (SolverFn fn : {&solve_rk, &solve_ark_reference, &solve_ark_efficient, &solve_sark}) {
    IndexStream s(1);
    const SolveResult r = fn(a, b, Vector(20, 0.0), cfg, s);
    EXPECT_LE(residual_norm(a, r.x, b), 1e-8);
  }
  EXPECT_LE(residual_norm(a, solve_cgne(a, b, Vector(20, 0.0), cfg).x, b), 1e-8);
}

TEST(AllSolvers, LemmaTwoAtVisitedStates) {
  const ProblemInstance inst = gen_dense_gaussian(40, 25, 20);
  SolverConfig cfg;
  cfg.max_iterations = 2000;
  cfg.residual_stride = 100;
  cfg.lambda = 0.01;
  int checked = 0;
  cfg.observer = [&](const IterateView& it) {
    const LemmaTerms t = check_lemma2(inst.a, inst.b, it.x, inst.x_star);
    EXPECT_NEAR(t.lhs, t.rhs, 1e-10 * std::max(1.0, std::abs(t.rhs)));
    ++checked;
  };
  run(&solve_rk, inst, cfg, 1);
  run(&solve_sark, inst, cfg, 1);
  EXPECT_EQ(checked, 42);
}

TEST(Cgne, OrthogonalAndIdentity) {
  const RowMatrix eye = RowMatrix::dense(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  SolverConfig cfg;
  cfg.max_iterations = 1;
  const Vector b{1, -2, 3};
  const SolveResult r = solve_cgne(eye, b, Vector(3, 0.0), cfg);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(r.x[j], b[j], 1e-15);

  const double c = std::cos(0.3), s = std::sin(0.3);
  const RowMatrix rot = RowMatrix::dense(2, 2, {c, -s, s, c});
  const Vector rb{0.7, -1.1};
  const SolveResult q = solve_cgne(rot, rb, Vector(2, 0.0), cfg);
  EXPECT_LE(residual_norm(rot, q.x, rb), 1e-14);
}

TEST(Cgne, ConvergesAndTracesEveryStep) {
  const ProblemInstance inst = gen_dense_gaussian(60, 40, 22);
  SolverConfig cfg;
  cfg.max_iterations = 200;
  cfg.target_residual = 1e-10;
  const SolveResult r = solve_cgne(inst.a, inst.b, Vector(40, 0.0), cfg);
  EXPECT_LE(r.trace.back().residual, 1e-10);
  for (std::size_t i = 0; i < r.trace.size(); ++i) EXPECT_EQ(r.trace[i].k, i);
  EXPECT_DOUBLE_EQ(r.trace[1].modeled_ops, 4.0 * 60 * 40);
}

TEST(Trace, StrideAlignedToGlobalIndex) {
  const ProblemInstance inst = gen_dense_gaussian(10, 5, 17);
  SolverConfig cfg;
  cfg.max_iterations = 25;
  cfg.k_offset = 3;
  cfg.residual_stride = 10;
  const SolveResult r = run(&solve_rk, inst, cfg, 2);
  std::vector<std::size_t> ks;
  for (const TracePoint& p : r.trace) ks.push_back(p.k);
  EXPECT_EQ(ks, (std::vector<std::size_t>{3, 10, 20, 28}));
}

#pragma once

#include <string>
#include <vector>

#include "cycleflow/grid.hpp"
#include "cycleflow/solver.hpp"

namespace cycleflow {

struct MethodTiming {
    double total_mean = 0.0;  // seconds, full PTDF construction
    double total_sd = 0.0;
    double solve_mean = 0.0;  // seconds, linear factor+solve step alone
    double solve_sd = 0.0;
    Eigen::Index solve_dimension = 0;
};

/// One grid's benchmark record: size columns, per-method timings, and the
/// speedup ratios of the mean totals.
struct BenchReport {
    std::string name;
    int nodes = 0;
    int lines = 0;
    int cycles = 0;
    double ratio = 0.0;  // (L-N+1)/N
    MethodTiming conventional;
    MethodTiming dual;
    double speedup_total = 0.0;  // conventional mean / dual mean
    double speedup_solve = 0.0;
    int repetitions = 0;
    SolveMode mode = SolveMode::Sparse;
};

/// Time the full PTDF construction and its linear-solve step for both
/// methods on each grid: one warm-up run is discarded, then `repetitions`
/// measured runs (automatically batched when a run is too short for the
/// clock). Topology products (tree, cycle basis) are built once per grid
/// outside the timed region since they are load-independent. After timing,
/// the two methods' PTDFs are recomputed and compared; disagreement beyond
/// 1e-8 throws NumericalError. repetitions must be >= 3.
std::vector<BenchReport> run_bench(const std::vector<Grid>& grids, int repetitions,
                                   SolveMode mode);

/// Fixed-schema CSV (stable column names, one row per grid).
std::string bench_csv(const std::vector<BenchReport>& reports);
extern const char* const kBenchCsvHeader;

struct PowerLawFit {
    double alpha = 0.0;
    double gamma = 0.0;
};

/// Least-squares fit of speedup = alpha * ratio^(-gamma) in log-log space.
/// Needs at least 4 points whose ratios span a factor of 10; otherwise
/// throws ValidationError.
PowerLawFit fit_power_law(const std::vector<double>& ratios,
                          const std::vector<double>& speedups);
PowerLawFit fit_speedup_curve(const std::vector<BenchReport>& reports);

}  // namespace cycleflow

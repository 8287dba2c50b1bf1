#include "cycleflow/bench.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "cycleflow/conventional.hpp"
#include "cycleflow/dual.hpp"
#include "cycleflow/errors.hpp"
#include "cycleflow/operators.hpp"
#include "cycleflow/sensitivity.hpp"
#include "cycleflow/topology.hpp"

namespace cycleflow {
namespace {

using Clock = std::chrono::steady_clock;

double now_seconds() {
    return std::chrono::duration<double>(Clock::now().time_since_epoch()).count();
}

// Smallest observable nonzero clock increment.
double clock_granularity() {
    double smallest = 1.0;
    for (int i = 0; i < 32; ++i) {
        const auto a = Clock::now();
        auto b = Clock::now();
        while (b == a) b = Clock::now();
        smallest = std::min(smallest, std::chrono::duration<double>(b - a).count());
    }
    return smallest;
}

struct Samples {
    std::vector<double> total;
    std::vector<double> solve;
    Eigen::Index dimension = 0;
};

// Warm-up once, then `repetitions` measurements. A measurement whose single
// run is shorter than 10 clock ticks is batched until it spans at least 100
// ticks and the per-run time is the batch average.
Samples measure(const std::function<void(SolveInfo*)>& run, int repetitions,
                double tick) {
    Samples samples;
    SolveInfo warmup_info;
    run(&warmup_info);  // warm-up, excluded
    samples.dimension = warmup_info.dimension;

    const double floor = 10.0 * tick;
    const double target = 100.0 * tick;
    for (int rep = 0; rep < repetitions; ++rep) {
        SolveInfo info;
        double start = now_seconds();
        run(&info);
        double elapsed = now_seconds() - start;
        double solve = info.seconds();
        if (elapsed < floor) {
            long batch = 2;
            while (true) {
                start = now_seconds();
                double solve_sum = 0.0;
                for (long i = 0; i < batch; ++i) {
                    SolveInfo batched;
                    run(&batched);
                    solve_sum += batched.seconds();
                }
                elapsed = now_seconds() - start;
                if (elapsed >= target || batch >= (1L << 20)) {
                    elapsed /= static_cast<double>(batch);
                    solve = solve_sum / static_cast<double>(batch);
                    break;
                }
                batch *= 4;
            }
        }
        samples.total.push_back(elapsed);
        samples.solve.push_back(solve);
    }
    return samples;
}

double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v, double mean) {
    double sum = 0.0;
    for (double x : v) sum += (x - mean) * (x - mean);
    return std::sqrt(sum / static_cast<double>(v.size() - 1));
}

MethodTiming summarize(const Samples& samples) {
    MethodTiming t;
    t.total_mean = mean_of(samples.total);
    t.total_sd = sd_of(samples.total, t.total_mean);
    t.solve_mean = mean_of(samples.solve);
    t.solve_sd = sd_of(samples.solve, t.solve_mean);
    t.solve_dimension = samples.dimension;
    return t;
}

}  // namespace

std::vector<BenchReport> run_bench(const std::vector<Grid>& grids, int repetitions,
                                   SolveMode mode) {
    if (repetitions < 3) {
        throw ValidationError("benchmark needs at least 3 repetitions, got " +
                              std::to_string(repetitions));
    }
    const double tick = clock_granularity();

    std::vector<BenchReport> reports;
    reports.reserve(grids.size());
    for (const Grid& grid : grids) {
        // Load-independent topology products, built once and reused.
        const Topology topo = build_topology(grid);

        const auto conventional_run = [&](SolveInfo* info) {
            const SusceptanceOperators ops = assemble_operators(grid, topo.incidence);
            ptdf_conventional(ops, grid.slack(), mode, info);
        };
        const auto dual_run = [&](SolveInfo* info) {
            ptdf_dual(grid, topo.cycles, topo.tree, mode, info);
        };

        BenchReport report;
        report.name = grid.name();
        report.nodes = grid.node_count();
        report.lines = grid.line_count();
        report.cycles = grid.cycle_count();
        report.ratio = static_cast<double>(report.cycles) / report.nodes;
        report.repetitions = repetitions;
        report.mode = mode;
        report.conventional = summarize(measure(conventional_run, repetitions, tick));
        report.dual = summarize(measure(dual_run, repetitions, tick));
        report.speedup_total = report.conventional.total_mean / report.dual.total_mean;
        report.speedup_solve = report.conventional.solve_mean / report.dual.solve_mean;
        reports.push_back(report);

        // Benchmarking must not change results.
        const SusceptanceOperators ops = assemble_operators(grid, topo.incidence);
        const SensitivityMatrix a = ptdf_conventional(ops, grid.slack(), mode);
        const SensitivityMatrix b = ptdf_dual(grid, topo.cycles, topo.tree, mode);
        const double deviation = max_abs_difference(a, b);
        if (!(deviation < 1e-8)) {
            throw NumericalError("post-benchmark verification failed on " + grid.name() +
                                 ": methods deviate by " + std::to_string(deviation));
        }
    }
    return reports;
}

const char* const kBenchCsvHeader =
    "name,nodes,lines,cycles,cycles_per_node,"
    "conv_total_mean_s,conv_total_sd_s,conv_solve_mean_s,conv_solve_sd_s,conv_solve_dim,"
    "dual_total_mean_s,dual_total_sd_s,dual_solve_mean_s,dual_solve_sd_s,dual_solve_dim,"
    "speedup_total,speedup_solve,repetitions,mode";

std::string bench_csv(const std::vector<BenchReport>& reports) {
    std::ostringstream out;
    out.precision(9);
    out << kBenchCsvHeader << '\n';
    for (const BenchReport& r : reports) {
        out << r.name << ',' << r.nodes << ',' << r.lines << ',' << r.cycles << ','
            << r.ratio << ',' << r.conventional.total_mean << ',' << r.conventional.total_sd
            << ',' << r.conventional.solve_mean << ',' << r.conventional.solve_sd << ','
            << r.conventional.solve_dimension << ',' << r.dual.total_mean << ','
            << r.dual.total_sd << ',' << r.dual.solve_mean << ',' << r.dual.solve_sd << ','
            << r.dual.solve_dimension << ',' << r.speedup_total << ',' << r.speedup_solve
            << ',' << r.repetitions << ','
            << (r.mode == SolveMode::Sparse ? "sparse" : "dense") << '\n';
    }
    return out.str();
}

PowerLawFit fit_power_law(const std::vector<double>& ratios,
                          const std::vector<double>& speedups) {
    if (ratios.size() != speedups.size()) {
        throw ValidationError("fit needs matching ratio and speedup lists");
    }
    if (ratios.size() < 4) {
        throw ValidationError("power-law fit needs at least 4 points, got " +
                              std::to_string(ratios.size()));
    }
    double lo = ratios[0], hi = ratios[0];
    for (double r : ratios) {
        if (!(r > 0.0)) throw ValidationError("power-law fit needs positive ratios");
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    for (double s : speedups) {
        if (!(s > 0.0)) throw ValidationError("power-law fit needs positive speedups");
    }
    if (hi < 10.0 * lo) {
        throw ValidationError("degenerate ratio spread: fit needs ratios spanning a decade, got " +
                              std::to_string(hi / lo) + "x");
    }

    const auto n = static_cast<double>(ratios.size());
    double sum_x = 0.0, sum_y = 0.0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        sum_x += std::log(ratios[i]);
        sum_y += std::log(speedups[i]);
    }
    const double mean_x = sum_x / n, mean_y = sum_y / n;
    double var = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double dx = std::log(ratios[i]) - mean_x;
        const double dy = std::log(speedups[i]) - mean_y;
        var += dx * dx;
        cov += dx * dy;
    }
    const double slope = cov / var;
    return PowerLawFit{std::exp(mean_y - slope * mean_x), -slope};
}

PowerLawFit fit_speedup_curve(const std::vector<BenchReport>& reports) {
    std::vector<double> ratios, speedups;
    ratios.reserve(reports.size());
    speedups.reserve(reports.size());
    for (const BenchReport& r : reports) {
        ratios.push_back(r.ratio);
        speedups.push_back(r.speedup_total);
    }
    return fit_power_law(ratios, speedups);
}

}  // namespace cycleflow

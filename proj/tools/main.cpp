#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cycleflow/applications.hpp"
#include "cycleflow/bench.hpp"
#include "cycleflow/conventional.hpp"
#include "cycleflow/dual.hpp"
#include "cycleflow/errors.hpp"
#include "cycleflow/grid.hpp"
#include "cycleflow/native_io.hpp"
#include "cycleflow/operators.hpp"
#include "cycleflow/oracle.hpp"
#include "cycleflow/sensitivity.hpp"
#include "cycleflow/synth.hpp"
#include "cycleflow/topology.hpp"

namespace {

using namespace cycleflow;
using nlohmann::json;
using nlohmann::ordered_json;

struct GlobalOptions {
    SolveMode mode = SolveMode::Sparse;
    std::string format = "csv";
    std::string out_path;
    std::uint64_t seed = 0;
};

void emit(const GlobalOptions& global, const std::string& text) {
    if (global.out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream stream(global.out_path);
    if (!stream) throw ValidationError("cannot write to " + global.out_path);
    stream << text;
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

std::string sensitivity_csv(const Grid& grid, const SensitivityMatrix& m) {
    std::ostringstream out;
    out.precision(12);
    out << "line";
    if (m.kind == FactorKind::Ptdf) {
        for (const Bus& bus : grid.buses()) out << ',' << bus.id;
    } else {
        for (int line = 0; line < grid.line_count(); ++line) out << ',' << line;
    }
    out << '\n';
    for (Eigen::Index row = 0; row < m.values.rows(); ++row) {
        out << row;
        for (Eigen::Index col = 0; col < m.values.cols(); ++col) {
            out << ',' << m.values(row, col);
        }
        out << '\n';
    }
    return out.str();
}

ordered_json sensitivity_json(const Grid& grid, const SensitivityMatrix& m) {
    ordered_json doc;
    switch (m.kind) {
        case FactorKind::Ptdf: doc["kind"] = "ptdf"; break;
        case FactorKind::PtdfPrime: doc["kind"] = "ptdf_prime"; break;
        case FactorKind::Lodf: doc["kind"] = "lodf"; break;
    }
    doc["rows"] = "lines";
    if (m.kind == FactorKind::Ptdf) {
        doc["columns"] = "buses";
        auto& ids = doc["bus_ids"] = ordered_json::array();
        for (const Bus& bus : grid.buses()) ids.push_back(bus.id);
        doc["slack"] = grid.id_of(m.slack);
    } else {
        doc["columns"] = "lines";
    }
    if (!m.undefined_columns.empty()) {
        auto& undefined = doc["undefined_columns"] = ordered_json::array();
        for (std::size_t col = 0; col < m.undefined_columns.size(); ++col) {
            if (m.undefined_columns[col]) undefined.push_back(col);
        }
    }
    auto& values = doc["values"] = ordered_json::array();
    for (Eigen::Index row = 0; row < m.values.rows(); ++row) {
        ordered_json line = ordered_json::array();
        for (Eigen::Index col = 0; col < m.values.cols(); ++col) {
            line.push_back(m.values(row, col));
        }
        values.push_back(std::move(line));
    }
    return doc;
}

// One signed-line rendering of a cycle column, e.g. "+1 -5 -2".
std::string cycle_lines(const Eigen::VectorXi& cycle) {
    std::ostringstream out;
    bool first = true;
    for (Eigen::Index line = 0; line < cycle.size(); ++line) {
        if (cycle[line] == 0) continue;
        if (!first) out << ' ';
        out << (cycle[line] > 0 ? '+' : '-') << line;
        first = false;
    }
    return out.str();
}

Eigen::VectorXd schedule_from_json(const Grid& grid, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("schedule JSON: ") + e.what());
    }
    Eigen::VectorXd schedule = Eigen::VectorXd::Zero(grid.line_count());
    if (doc.is_object() && doc.contains("nodes")) {
        const auto& nodes = doc["nodes"];
        if (!nodes.is_array() || nodes.size() < 2) {
            throw ValidationError("schedule 'nodes' must list at least two bus ids");
        }
        int previous = grid.index_of(nodes[0].get<int>());
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            const int next = grid.index_of(nodes[i].get<int>());
            bool found = false;
            for (int line = 0; line < grid.line_count(); ++line) {
                const Branch& br = grid.branches()[line];
                if (br.tail == previous && br.head == next) {
                    schedule[line] += 1.0;
                    found = true;
                    break;
                }
                if (br.head == previous && br.tail == next) {
                    schedule[line] -= 1.0;
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw ValidationError("schedule path has no line between bus " +
                                      std::to_string(nodes[i - 1].get<int>()) + " and bus " +
                                      std::to_string(nodes[i].get<int>()));
            }
            previous = next;
        }
    } else if (doc.is_object() && doc.contains("entries")) {
        for (const auto& entry : doc["entries"]) {
            const int line = entry.at("line").get<int>();
            if (line < 0 || line >= grid.line_count()) {
                throw ValidationError("schedule entry references unknown line " +
                                      std::to_string(line));
            }
            schedule[line] += entry.at("value").get<double>();
        }
    } else {
        throw ValidationError("schedule JSON needs a 'nodes' path or an 'entries' list");
    }
    return schedule;
}

int run(int argc, char** argv) {
    CLI::App app{"DC power-flow sensitivity factors via node-based and cycle-based methods"};
    app.require_subcommand(1);

    GlobalOptions global;
    std::string mode_name = "sparse";
    app.add_option("--mode", mode_name, "linear algebra mode")
        ->check(CLI::IsMember({"sparse", "dense"}));
    app.add_option("--format", global.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", global.out_path, "write output to a file instead of stdout");
    app.add_option("--seed", global.seed, "seed for synthetic grids");

    std::string case_path;
    std::string method = "dual";
    std::optional<int> slack_id;
    double power = 1.0;
    int from_id = 0, to_id = 0;
    std::string add_spec, schedule_path;
    int synth_nodes = 0, synth_chords = 0;
    double xmin = 0.01, xmax = 1.0;
    std::optional<std::uint64_t> synth_seed;
    std::vector<std::string> bench_cases, bench_synths;
    int repetitions = 20;
    std::string fit_input;

    auto* info_cmd = app.add_subcommand("info", "grid size summary: nodes lines cycles cycles/nodes");
    info_cmd->add_option("--case", case_path, "grid file (.m or .json)")->required();

    auto* ptdf_cmd = app.add_subcommand("ptdf", "power transfer distribution factors");
    ptdf_cmd->add_option("--case", case_path)->required();
    ptdf_cmd->add_option("--method", method)->check(CLI::IsMember({"conventional", "dual", "qr"}));
    ptdf_cmd->add_option("--slack", slack_id, "slack bus id (defaults to the case slack)");

    auto* lodf_cmd = app.add_subcommand("lodf", "line outage distribution factors");
    lodf_cmd->add_option("--case", case_path)->required();
    lodf_cmd->add_option("--method", method)->check(CLI::IsMember({"conventional", "dual"}));

    auto* decompose_cmd =
        app.add_subcommand("decompose", "split a transaction into direct path and cycle flows");
    decompose_cmd->add_option("--case", case_path)->required();
    decompose_cmd->add_option("--from", from_id, "source bus id")->required();
    decompose_cmd->add_option("--to", to_id, "sink bus id")->required();
    decompose_cmd->add_option("--power", power, "transaction size in MW");

    auto* verify_cmd =
        app.add_subcommand("verify", "cross-check node, cycle, qr and brute-force routes");
    verify_cmd->add_option("--case", case_path)->required();

    auto* tie_cmd = app.add_subcommand("tie-switch", "PTDF change from closing a switch on a tree");
    tie_cmd->add_option("--case", case_path)->required();
    tie_cmd->add_option("--add", add_spec, "new branch as from:to:x")->required();
    tie_cmd->add_option("--slack", slack_id, "slack bus id (defaults to the case slack)");

    auto* unscheduled_cmd =
        app.add_subcommand("unscheduled", "split scheduled versus loop flows for a transaction");
    unscheduled_cmd->add_option("--case", case_path)->required();
    unscheduled_cmd->add_option("--schedule", schedule_path, "schedule JSON file")->required();
    unscheduled_cmd->add_option("--power", power, "transaction size in MW");

    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic grid");
    synth_cmd->add_option("--nodes", synth_nodes)->required();
    synth_cmd->add_option("--chords", synth_chords)->required();
    synth_cmd->add_option("--seed", synth_seed, "overrides the global --seed");
    synth_cmd->add_option("--xmin", xmin, "reactance range lower bound");
    synth_cmd->add_option("--xmax", xmax, "reactance range upper bound");

    auto* bench_cmd = app.add_subcommand("bench", "time both methods over a set of grids");
    bench_cmd->add_option("--case", bench_cases, "grid file, repeatable");
    bench_cmd->add_option("--synth", bench_synths, "synthetic spec N:K or N:K:seed, repeatable");
    bench_cmd->add_option("--reps", repetitions, "measured repetitions per method (>= 3)");

    auto* fit_cmd = app.add_subcommand("fit", "power-law fit of speedup vs cycles/nodes");
    fit_cmd->add_option("--input", fit_input, "bench CSV file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    global.mode = mode_name == "dense" ? SolveMode::Dense : SolveMode::Sparse;

    const auto load_case = [&]() { return load_grid_file(case_path); };

    if (info_cmd->parsed()) {
        const Grid grid = load_case();
        const double ratio = static_cast<double>(grid.cycle_count()) / grid.node_count();
        if (global.format == "json") {
            ordered_json doc{{"name", grid.name()},
                             {"nodes", grid.node_count()},
                             {"lines", grid.line_count()},
                             {"cycles", grid.cycle_count()},
                             {"cycles_per_node", ratio},
                             {"slack", grid.id_of(grid.slack())}};
            emit(global, doc.dump(2));
        } else {
            std::ostringstream out;
            out << "name,nodes,lines,cycles,cycles_per_node,slack\n"
                << grid.name() << ',' << grid.node_count() << ',' << grid.line_count() << ','
                << grid.cycle_count() << ',' << format_double(ratio) << ','
                << grid.id_of(grid.slack()) << '\n';
            emit(global, out.str());
        }
        return 0;
    }

    if (ptdf_cmd->parsed()) {
        const Grid grid = load_case();
        const int slack = slack_id ? grid.index_of(*slack_id) : grid.slack();
        SensitivityMatrix result;
        if (method == "conventional") {
            const auto ops = assemble_operators(grid, build_incidence(grid));
            result = ptdf_conventional(ops, slack, global.mode);
        } else {
            const auto tree = build_spanning_tree(grid, slack);
            const auto basis = build_cycle_basis(grid, tree);
            result = method == "qr" ? ptdf_qr(grid, basis, tree)
                                    : ptdf_dual(grid, basis, tree, global.mode);
        }
        emit(global, global.format == "json" ? sensitivity_json(grid, result).dump(2)
                                             : sensitivity_csv(grid, result));
        return 0;
    }

    if (lodf_cmd->parsed()) {
        const Grid grid = load_case();
        const auto bridges = find_bridges(grid);
        std::vector<std::string> warnings;
        SensitivityMatrix result;
        if (method == "conventional") {
            const auto ops = assemble_operators(grid, build_incidence(grid));
            result = lodf_from_ptdf_prime(ptdf_prime_conventional(ops, global.mode), bridges,
                                          &warnings);
        } else {
            const auto tree = build_spanning_tree(grid);
            const auto basis = build_cycle_basis(grid, tree);
            result = lodf_dual(grid, basis, bridges, global.mode, nullptr, &warnings);
        }
        for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
        emit(global, global.format == "json" ? sensitivity_json(grid, result).dump(2)
                                             : sensitivity_csv(grid, result));
        return 0;
    }

    if (decompose_cmd->parsed()) {
        const Grid grid = load_case();
        const auto tree = build_spanning_tree(grid);
        const auto basis = build_cycle_basis(grid, tree);
        const int source = grid.index_of(from_id);
        const int sink = grid.index_of(to_id);
        const auto d = cycle_flows(grid, basis, tree, source, sink, power, global.mode);
        const Eigen::MatrixXi cycle_matrix = Eigen::MatrixXi(basis.mat);

        if (global.format == "json") {
            ordered_json doc{{"grid", grid.name()},
                             {"from", from_id},
                             {"to", to_id},
                             {"power_mw", power}};
            auto& lines = doc["lines"] = ordered_json::array();
            for (int line = 0; line < grid.line_count(); ++line) {
                lines.push_back(ordered_json{{"line", line},
                                             {"from", grid.id_of(grid.branches()[line].tail)},
                                             {"to", grid.id_of(grid.branches()[line].head)},
                                             {"direct_mw", d.direct[line]},
                                             {"cycle_mw", d.total[line] - d.direct[line]},
                                             {"total_mw", d.total[line]}});
            }
            auto& cycles = doc["cycles"] = ordered_json::array();
            for (Eigen::Index c = 0; c < d.cycle_strengths.size(); ++c) {
                cycles.push_back(ordered_json{{"cycle", c},
                                              {"f_mw", d.cycle_strengths[c]},
                                              {"lines", cycle_lines(cycle_matrix.col(c))}});
            }
            emit(global, doc.dump(2));
        } else {
            std::ostringstream out;
            out.precision(12);
            out << "line,from,to,direct_mw,cycle_mw,total_mw\n";
            for (int line = 0; line < grid.line_count(); ++line) {
                out << line << ',' << grid.id_of(grid.branches()[line].tail) << ','
                    << grid.id_of(grid.branches()[line].head) << ',' << d.direct[line] << ','
                    << d.total[line] - d.direct[line] << ',' << d.total[line] << '\n';
            }
            out << "\ncycle,f_mw,lines\n";
            for (Eigen::Index c = 0; c < d.cycle_strengths.size(); ++c) {
                out << c << ',' << d.cycle_strengths[c] << ','
                    << cycle_lines(cycle_matrix.col(c)) << '\n';
            }
            emit(global, out.str());
        }
        return 0;
    }

    if (verify_cmd->parsed()) {
        const Grid grid = load_case();
        const auto topo = build_topology(grid);
        const auto ops = assemble_operators(grid, topo.incidence);

        const auto conv = ptdf_conventional(ops, grid.slack(), global.mode);
        const auto dual = ptdf_dual(grid, topo.cycles, topo.tree, global.mode);
        const auto conv_prime = ptdf_prime_conventional(ops, global.mode);
        const auto dual_prime = ptdf_prime_dual(grid, topo.cycles, global.mode);
        const auto qr_prime = ptdf_prime_qr(grid, topo.cycles);
        const auto conv_lodf = lodf_from_ptdf_prime(conv_prime, topo.bridges);
        const auto dual_lodf = lodf_from_ptdf_prime(dual_prime, topo.bridges);

        struct RowEntry {
            std::string quantity, pair;
            double deviation, threshold;
            bool skipped = false;
        };
        std::vector<RowEntry> rows;
        rows.push_back({"ptdf", "conventional_vs_dual", max_abs_difference(conv, dual), 1e-8});
        rows.push_back({"ptdf_prime", "conventional_vs_dual",
                        max_abs_difference(conv_prime, dual_prime), 1e-8});
        rows.push_back({"ptdf_prime", "dual_vs_qr", max_abs_difference(dual_prime, qr_prime), 1e-8});
        rows.push_back({"lodf", "conventional_vs_dual", max_abs_difference(conv_lodf, dual_lodf), 1e-6});

        if (grid.node_count() <= 500) {
            SensitivityMatrix truth;
            truth.kind = FactorKind::Ptdf;
            truth.slack = grid.slack();
            truth.values = oracle_ptdf(grid, grid.slack());
            rows.push_back({"ptdf", "conventional_vs_oracle", max_abs_difference(conv, truth), 1e-8});
            rows.push_back({"ptdf", "dual_vs_oracle", max_abs_difference(dual, truth), 1e-8});
        } else {
            rows.push_back({"ptdf", "conventional_vs_oracle", 0.0, 1e-8, true});
            rows.push_back({"ptdf", "dual_vs_oracle", 0.0, 1e-8, true});
        }
        if (grid.node_count() <= 200) {
            const auto lodf_truth = oracle_lodf(grid);
            SensitivityMatrix truth;
            truth.kind = FactorKind::Lodf;
            truth.values = lodf_truth.values;
            truth.undefined_columns = lodf_truth.undefined_columns;
            rows.push_back({"lodf", "conventional_vs_oracle", max_abs_difference(conv_lodf, truth), 1e-6});
            rows.push_back({"lodf", "dual_vs_oracle", max_abs_difference(dual_lodf, truth), 1e-6});
        } else {
            rows.push_back({"lodf", "conventional_vs_oracle", 0.0, 1e-6, true});
            rows.push_back({"lodf", "dual_vs_oracle", 0.0, 1e-6, true});
        }

        bool failed = false;
        std::ostringstream out;
        out << "quantity,pair,max_abs_dev,threshold,status\n";
        for (const auto& row : rows) {
            std::string status = "ok";
            if (row.skipped) {
                status = "skipped";
            } else if (!(row.deviation < row.threshold)) {
                status = "FAIL";
                failed = true;
            }
            out << row.quantity << ',' << row.pair << ','
                << (row.skipped ? "" : format_double(row.deviation)) << ','
                << format_double(row.threshold) << ',' << status << '\n';
        }
        emit(global, out.str());
        if (failed) throw NumericalError("verification failed: methods disagree beyond tolerance");
        return 0;
    }

    if (tie_cmd->parsed()) {
        const Grid grid = load_case();
        int from = 0, to = 0;
        double x = 0.0;
        {
            std::istringstream spec(add_spec);
            std::string part;
            std::vector<std::string> parts;
            while (std::getline(spec, part, ':')) parts.push_back(part);
            if (parts.size() != 3) throw ValidationError("--add expects from:to:x");
            try {
                from = std::stoi(parts[0]);
                to = std::stoi(parts[1]);
                x = std::stod(parts[2]);
            } catch (const std::exception&) {
                throw ValidationError("--add expects numeric from:to:x, got " + add_spec);
            }
        }
        const int slack = slack_id ? grid.index_of(*slack_id) : grid.slack();
        const auto delta =
            tie_switch_delta(grid, grid.index_of(from), grid.index_of(to), x, slack);

        if (global.format == "json") {
            ordered_json doc{{"grid", grid.name()},
                             {"added", ordered_json{{"from", from}, {"to", to}, {"x", x}}},
                             {"induced_cycle", cycle_lines(delta.induced_cycle)},
                             {"recompute_deviation", delta.recompute_deviation}};
            auto& ratios = doc["overlap_ratio"] = ordered_json::array();
            for (Eigen::Index r = 0; r < delta.overlap_ratio.size(); ++r) {
                ratios.push_back(delta.overlap_ratio[r]);
            }
            auto& rows = doc["delta_ptdf"] = ordered_json::array();
            for (Eigen::Index row = 0; row < delta.delta_ptdf.rows(); ++row) {
                ordered_json line = ordered_json::array();
                for (Eigen::Index col = 0; col < delta.delta_ptdf.cols(); ++col) {
                    line.push_back(delta.delta_ptdf(row, col));
                }
                rows.push_back(std::move(line));
            }
            emit(global, doc.dump(2));
        } else {
            std::ostringstream out;
            out.precision(12);
            out << "induced_cycle," << cycle_lines(delta.induced_cycle) << '\n';
            out << "recompute_deviation," << delta.recompute_deviation << "\n\n";
            out << "line";
            for (const Bus& bus : grid.buses()) out << ',' << bus.id;
            out << '\n';
            for (Eigen::Index row = 0; row < delta.delta_ptdf.rows(); ++row) {
                out << row;
                for (Eigen::Index col = 0; col < delta.delta_ptdf.cols(); ++col) {
                    out << ',' << delta.delta_ptdf(row, col);
                }
                out << '\n';
            }
            emit(global, out.str());
        }
        return 0;
    }

    if (unscheduled_cmd->parsed()) {
        const Grid grid = load_case();
        std::ifstream stream(schedule_path);
        if (!stream) throw ValidationError("cannot open schedule file: " + schedule_path);
        std::ostringstream buffer;
        buffer << stream.rdbuf();
        const Eigen::VectorXd schedule = schedule_from_json(grid, buffer.str());

        const auto tree = build_spanning_tree(grid);
        const auto basis = build_cycle_basis(grid, tree);
        const auto split = unscheduled_flows(grid, basis, schedule, power, global.mode);

        if (global.format == "json") {
            ordered_json doc{{"grid", grid.name()},
                             {"from", grid.id_of(split.source)},
                             {"to", grid.id_of(split.sink)},
                             {"power_mw", power}};
            auto& lines = doc["lines"] = ordered_json::array();
            for (int line = 0; line < grid.line_count(); ++line) {
                lines.push_back(ordered_json{{"line", line},
                                             {"from", grid.id_of(grid.branches()[line].tail)},
                                             {"to", grid.id_of(grid.branches()[line].head)},
                                             {"scheduled_mw", split.scheduled[line]},
                                             {"unscheduled_mw", split.unscheduled[line]},
                                             {"actual_mw", split.actual[line]}});
            }
            emit(global, doc.dump(2));
        } else {
            std::ostringstream out;
            out.precision(12);
            out << "transaction," << grid.id_of(split.source) << "->" << grid.id_of(split.sink)
                << ',' << power << "MW\n\n";
            out << "line,from,to,scheduled_mw,unscheduled_mw,actual_mw\n";
            for (int line = 0; line < grid.line_count(); ++line) {
                out << line << ',' << grid.id_of(grid.branches()[line].tail) << ','
                    << grid.id_of(grid.branches()[line].head) << ',' << split.scheduled[line]
                    << ',' << split.unscheduled[line] << ',' << split.actual[line] << '\n';
            }
            emit(global, out.str());
        }
        return 0;
    }

    if (synth_cmd->parsed()) {
        SynthSpec spec;
        spec.nodes = synth_nodes;
        spec.chords = synth_chords;
        spec.reactance_min = xmin;
        spec.reactance_max = xmax;
        spec.seed = synth_seed.value_or(global.seed);
        emit(global, save_native(generate(spec)));
        return 0;
    }

    if (bench_cmd->parsed()) {
        std::vector<Grid> grids;
        for (const std::string& path : bench_cases) grids.push_back(load_grid_file(path));
        std::uint64_t next_seed = global.seed;
        for (const std::string& spec_text : bench_synths) {
            std::istringstream spec_stream(spec_text);
            std::string part;
            std::vector<std::string> parts;
            while (std::getline(spec_stream, part, ':')) parts.push_back(part);
            if (parts.size() != 2 && parts.size() != 3) {
                throw ValidationError("--synth expects N:K or N:K:seed, got " + spec_text);
            }
            SynthSpec spec;
            try {
                spec.nodes = std::stoi(parts[0]);
                spec.chords = std::stoi(parts[1]);
                spec.seed = parts.size() == 3 ? std::stoull(parts[2]) : next_seed++;
            } catch (const std::exception&) {
                throw ValidationError("--synth expects numeric N:K[:seed], got " + spec_text);
            }
            grids.push_back(generate(spec));
        }
        if (grids.empty()) throw ValidationError("bench needs at least one --case or --synth");

        const auto reports = run_bench(grids, repetitions, global.mode);
        if (global.format == "json") {
            ordered_json doc = ordered_json::array();
            for (const auto& r : reports) {
                doc.push_back(ordered_json{
                    {"name", r.name},
                    {"nodes", r.nodes},
                    {"lines", r.lines},
                    {"cycles", r.cycles},
                    {"cycles_per_node", r.ratio},
                    {"conventional",
                     ordered_json{{"total_mean_s", r.conventional.total_mean},
                                  {"total_sd_s", r.conventional.total_sd},
                                  {"solve_mean_s", r.conventional.solve_mean},
                                  {"solve_sd_s", r.conventional.solve_sd},
                                  {"solve_dim", r.conventional.solve_dimension}}},
                    {"dual", ordered_json{{"total_mean_s", r.dual.total_mean},
                                          {"total_sd_s", r.dual.total_sd},
                                          {"solve_mean_s", r.dual.solve_mean},
                                          {"solve_sd_s", r.dual.solve_sd},
                                          {"solve_dim", r.dual.solve_dimension}}},
                    {"speedup_total", r.speedup_total},
                    {"speedup_solve", r.speedup_solve},
                    {"repetitions", r.repetitions},
                    {"mode", r.mode == SolveMode::Sparse ? "sparse" : "dense"}});
            }
            emit(global, doc.dump(2));
        } else {
            emit(global, bench_csv(reports));
        }
        return 0;
    }

    if (fit_cmd->parsed()) {
        std::ifstream stream(fit_input);
        if (!stream) throw ValidationError("cannot open bench CSV: " + fit_input);
        std::string header;
        if (!std::getline(stream, header)) throw ValidationError("empty bench CSV");
        std::vector<std::string> columns;
        {
            std::istringstream head_stream(header);
            std::string col;
            while (std::getline(head_stream, col, ',')) columns.push_back(col);
        }
        int ratio_col = -1, speedup_col = -1;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == "cycles_per_node") ratio_col = static_cast<int>(i);
            if (columns[i] == "speedup_total") speedup_col = static_cast<int>(i);
        }
        if (ratio_col < 0 || speedup_col < 0) {
            throw ValidationError("bench CSV must have cycles_per_node and speedup_total columns");
        }
        std::vector<double> ratios, speedups;
        std::string row;
        int line_number = 1;
        while (std::getline(stream, row)) {
            ++line_number;
            if (row.empty()) continue;
            std::istringstream row_stream(row);
            std::string cell;
            std::vector<std::string> cells;
            while (std::getline(row_stream, cell, ',')) cells.push_back(cell);
            if (static_cast<int>(cells.size()) <= std::max(ratio_col, speedup_col)) {
                throw ParseError("short row in bench CSV", line_number);
            }
            try {
                ratios.push_back(std::stod(cells[ratio_col]));
                speedups.push_back(std::stod(cells[speedup_col]));
            } catch (const std::exception&) {
                throw ParseError("non-numeric cell in bench CSV", line_number);
            }
        }
        const auto fit = fit_power_law(ratios, speedups);
        if (global.format == "json") {
            emit(global, ordered_json{{"alpha", fit.alpha}, {"gamma", fit.gamma}}.dump(2));
        } else {
            emit(global, "alpha,gamma\n" + format_double(fit.alpha) + ',' +
                             format_double(fit.gamma) + '\n');
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

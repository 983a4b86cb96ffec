#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vmplace/baselines.hpp"
#include "vmplace/bench.hpp"
#include "vmplace/instance.hpp"
#include "vmplace/mfea.hpp"
#include "vmplace/placement.hpp"

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

int run_gen(int vms, std::uint64_t seed, std::int64_t ps_per_type, const std::string& out) {
    const vmplace::Instance inst = vmplace::generate_instance(vms, seed, ps_per_type);
    vmplace::save_instance(inst, out);
    std::cout << "wrote " << out << " (vms=" << inst.num_vms()
              << ", hash=" << vmplace::hash_hex(inst.content_hash()) << ")\n";
    return 0;
}

int run_solve(const std::string& solver, const std::string& instance_path, std::uint64_t seed,
              int repeats, const vmplace::MfeaConfig& cfg, const std::string& report_path,
              const std::string& trace_path, const std::string& placement_path) {
    const vmplace::Instance inst = vmplace::load_instance(instance_path);

    vmplace::RunTrace trace;
    vmplace::Placement best;
    const std::vector<vmplace::RunReport> reports = vmplace::run_repeats(
        solver, inst, seed, repeats, cfg, trace_path.empty() ? nullptr : &trace,
        placement_path.empty() ? nullptr : &best);

    // all outputs are built in memory first; a failed run leaves no files
    write_file(report_path, vmplace::report_csv(reports));
    if (!trace_path.empty()) write_file(trace_path, vmplace::trace_csv(trace));
    if (!placement_path.empty()) {
        int best_idx = 0;
        for (int i = 1; i < repeats; ++i) {
            if (reports[i].cost < reports[best_idx].cost) best_idx = i;
        }
        vmplace::PlacementFile pf;
        pf.instance_hash = inst.content_hash();
        pf.solver = solver;
        pf.seed = reports[best_idx].seed;
        pf.placement = std::move(best);
        vmplace::save_placement(pf, inst, placement_path);
    }
    std::cout << "wrote " << report_path << " (" << reports.size() << " runs)\n";
    return 0;
}

int run_sweep(const std::string& solver, const std::string& param,
              const std::vector<std::string>& values, const std::string& instance_path,
              std::uint64_t seed, int repeats, vmplace::MfeaConfig cfg,
              const std::string& report_path) {
    const vmplace::Instance inst = vmplace::load_instance(instance_path);

    std::ostringstream out;
    out << vmplace::sweep_csv_header();
    for (const std::string& value : values) {
        vmplace::MfeaConfig cell = cfg;
        if (param == "rmp") {
            cell.rmp = std::stod(value);
        } else if (param == "task-size") {
            cell.n_per_task = std::stoi(value);
        } else if (param == "mutation-prob") {
            cell.mutation_prob = std::stod(value);
        } else {
            throw std::runtime_error("unknown sweep parameter: " + param);
        }
        for (const auto& report : vmplace::run_repeats(solver, inst, seed, repeats, cell)) {
            out << vmplace::sweep_csv_row(param, value, report);
        }
    }
    write_file(report_path, out.str());
    std::cout << "wrote " << report_path << "\n";
    return 0;
}

int run_verify(const std::string& instance_path, const std::string& placement_path) {
    const vmplace::Instance inst = vmplace::load_instance(instance_path);
    const vmplace::PlacementFile pf = vmplace::load_placement(placement_path, inst);

    std::vector<std::string> issues;
    if (pf.instance_hash != inst.content_hash()) {
        issues.push_back("instance hash mismatch: placement was produced for " +
                         vmplace::hash_hex(pf.instance_hash));
    }
    for (auto& issue : vmplace::check_placement(inst, pf.placement, true)) {
        issues.push_back(std::move(issue));
    }

    const auto util = vmplace::cluster_utilization(inst, pf.placement);
    std::cout << "instance: " << vmplace::hash_hex(inst.content_hash()) << "\n"
              << "solver: " << pf.solver << " seed: " << pf.seed << "\n"
              << "servers: " << pf.placement.num_servers() << "\n"
              << "cost: " << vmplace::format_centi(
                     vmplace::placement_cost(pf.placement, inst.ps_types))
              << "\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "util: %.6f (cpu %.6f, ram %.6f, disk %.6f)\n",
                  util.comprehensive, util.cpu, util.ram, util.disk);
    std::cout << buf;

    if (issues.empty()) {
        std::cout << "status: OK\n";
        return 0;
    }
    std::cout << "status: INVALID\n";
    for (const auto& issue : issues) std::cout << "  " << issue << "\n";
    return 1;
}

int run_summarize(const std::vector<std::string>& report_paths, const std::string& out_path) {
    std::vector<vmplace::RunReport> rows;
    for (const auto& path : report_paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open report file: " + path);
        for (auto& r : vmplace::parse_report_csv(in)) rows.push_back(std::move(r));
    }
    const std::string csv = vmplace::summary_csv(vmplace::summarize(rows));
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_file(out_path, csv);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deployment-cost VM placement solvers and benchmarks"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a benchmark instance");
    int gen_vms = 0;
    std::uint64_t gen_seed = 1;
    std::int64_t gen_ps = vmplace::kUnboundedPs;
    std::string gen_out;
    gen->add_option("--vms", gen_vms, "number of VM requests")->required();
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--ps-per-type", gen_ps, "server supply per type (default: unbounded)");
    gen->add_option("--out", gen_out, "instance file to write")->required();

    // shared solver knobs
    vmplace::MfeaConfig cfg;
    const auto add_cfg = [&cfg](CLI::App* cmd) {
        cmd->add_option("--rmp", cfg.rmp, "random mating probability");
        cmd->add_option("--task-size", cfg.n_per_task, "target VMs per task");
        cmd->add_option("--pop-per-task", cfg.individuals_per_task, "individuals per task");
        cmd->add_option("--iters", cfg.max_iterations, "iterations");
        cmd->add_option("--mutation-prob", cfg.mutation_prob, "swap mutation probability");
    };

    // solve
    auto* solve = app.add_subcommand("solve", "run a solver and write a report");
    std::string solve_solver, solve_instance, solve_out, solve_trace, solve_placement;
    std::uint64_t solve_seed = 1;
    int solve_repeats = 1;
    solve->add_option("--solver", solve_solver, "mfea | sfea | ffd | exact")
        ->required()
        ->check(CLI::IsMember({"mfea", "sfea", "ffd", "exact"}));
    solve->add_option("--instance", solve_instance, "instance file")->required();
    solve->add_option("--seed", solve_seed, "base seed; repeat i uses seed+i");
    solve->add_option("--repeats", solve_repeats, "independent repeats")
        ->check(CLI::PositiveNumber);
    solve->add_option("--out", solve_out, "report CSV to write")->required();
    solve->add_option("--trace", solve_trace, "write first repeat's convergence trace CSV");
    solve->add_option("--placement", solve_placement, "write best repeat's placement");
    add_cfg(solve);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "grid over one parameter");
    std::string sweep_solver = "mfea", sweep_param, sweep_instance, sweep_out;
    std::vector<std::string> sweep_values;
    std::uint64_t sweep_seed = 1;
    int sweep_repeats = 1;
    sweep->add_option("--solver", sweep_solver, "mfea | sfea")
        ->check(CLI::IsMember({"mfea", "sfea"}));
    sweep->add_option("--param", sweep_param, "rmp | task-size | mutation-prob")
        ->required()
        ->check(CLI::IsMember({"rmp", "task-size", "mutation-prob"}));
    sweep->add_option("--values", sweep_values, "comma-separated values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--instance", sweep_instance, "instance file")->required();
    sweep->add_option("--seed", sweep_seed, "base seed");
    sweep->add_option("--repeats", sweep_repeats, "repeats per cell")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", sweep_out, "report CSV to write")->required();
    add_cfg(sweep);

    // verify
    auto* verify = app.add_subcommand("verify", "re-check a placement against its instance");
    std::string verify_instance, verify_placement;
    verify->add_option("--instance", verify_instance, "instance file")->required();
    verify->add_option("--placement", verify_placement, "placement file")->required();

    // summarize
    auto* summ = app.add_subcommand("summarize", "aggregate report CSVs");
    std::vector<std::string> summ_reports;
    std::string summ_out;
    summ->add_option("--reports", summ_reports, "report CSV files")->required();
    summ->add_option("--out", summ_out, "summary CSV to write (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(gen_vms, gen_seed, gen_ps, gen_out);
        if (solve->parsed()) {
            return run_solve(solve_solver, solve_instance, solve_seed, solve_repeats, cfg,
                             solve_out, solve_trace, solve_placement);
        }
        if (sweep->parsed()) {
            return run_sweep(sweep_solver, sweep_param, sweep_values, sweep_instance,
                             sweep_seed, sweep_repeats, cfg, sweep_out);
        }
        if (verify->parsed()) return run_verify(verify_instance, verify_placement);
        if (summ->parsed()) return run_summarize(summ_reports, summ_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vmplace/instance.hpp"
#include "vmplace/mfea.hpp"
#include "vmplace/placement.hpp"

namespace vmplace {

struct RunReport {
    std::string solver;
    std::string instance_hash;  // 16 hex digits
    std::uint64_t seed = 0;
    double wall_time_ms = 0.0;  // solver core only
    Utilization util;
    int servers = 0;
    CostCenti cost = 0;
    double lower_bound = 0.0;
};

// Runs one solver ("mfea", "sfea", "ffd", "exact") on the instance. The
// wall clock covers the solve call only. Every returned placement has been
// re-checked against the instance. Optional outputs receive the
// convergence trace (evolutionary solvers) and the placement itself.
RunReport run_solver(const std::string& solver, const Instance& inst, std::uint64_t seed,
                     MfeaConfig cfg, RunTrace* trace_out = nullptr,
                     Placement* placement_out = nullptr);

// Repeats with seeds seed, seed+1, ... Executed in parallel (bounded by
// VMPLACE_THREADS when set); row order follows repeat order regardless.
std::vector<RunReport> run_repeats(const std::string& solver, const Instance& inst,
                                   std::uint64_t seed, int repeats, const MfeaConfig& cfg,
                                   RunTrace* first_trace = nullptr,
                                   Placement* best_placement = nullptr);

std::string report_csv_header();
std::string report_csv_row(const RunReport& r);

// Per-run rows followed by <solver>:mean / <solver>:stddev summary rows.
std::string report_csv(const std::vector<RunReport>& rows);
std::vector<RunReport> parse_report_csv(std::istream& in);

struct SolverSummary {
    std::string solver;
    std::string instance_hash;
    int runs = 0;
    double time_mean = 0.0, time_stddev = 0.0;
    double util_mean = 0.0, util_stddev = 0.0;
    double servers_mean = 0.0, servers_stddev = 0.0;
    double cost_mean = 0.0, cost_stddev = 0.0;
    // relative cost improvement against baselines on the same instance,
    // when those rows are present
    std::optional<double> improvement_vs_ffd;
    std::optional<double> improvement_vs_sfea;
};

// Groups rows by (solver, instance): mean/stddev of the four indicators
// plus relative improvement over FFD and the single-factorial baseline.
std::vector<SolverSummary> summarize(const std::vector<RunReport>& rows);

std::string summary_csv(const std::vector<SolverSummary>& rows);

// Sweep rows carry the swept parameter ahead of the standard columns.
std::string sweep_csv_header();
std::string sweep_csv_row(const std::string& param, const std::string& value,
                          const RunReport& r);

}  // namespace vmplace

#include "vmplace/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vmplace/baselines.hpp"

namespace vmplace {

RunReport run_solver(const std::string& solver, const Instance& inst, std::uint64_t seed,
                     MfeaConfig cfg, RunTrace* trace_out, Placement* placement_out) {
    cfg.seed = seed;

    Placement placement;
    RunTrace trace;

    const auto t0 = std::chrono::steady_clock::now();
    if (solver == "mfea") {
        MfeaResult r = run_mfea(inst, cfg);
        placement = std::move(r.merged);
        trace = std::move(r.trace);
    } else if (solver == "sfea") {
        SfeaResult r = run_sfea(inst, cfg);
        placement = std::move(r.placement);
        trace = std::move(r.trace);
    } else if (solver == "ffd") {
        placement = ffd_solve(inst);
    } else if (solver == "exact") {
        placement = exact_solve(inst).placement;
    } else {
        throw std::runtime_error("unknown solver: " + solver);
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    const auto issues = check_placement(inst, placement, true);
    if (!issues.empty()) {
        throw std::logic_error("solver " + solver + " produced an invalid placement: " +
                               issues.front());
    }

    RunReport report;
    report.solver = solver;
    report.instance_hash = hash_hex(inst.content_hash());
    report.seed = seed;
    report.wall_time_ms = wall_ms;
    report.util = cluster_utilization(inst, placement);
    report.servers = placement.num_servers();
    report.cost = placement_cost(placement, inst.ps_types);
    report.lower_bound = lower_bound(inst);

    if (trace_out) *trace_out = std::move(trace);
    if (placement_out) *placement_out = std::move(placement);
    return report;
}

namespace {

int thread_budget(int repeats) {
    if (const char* env = std::getenv("VMPLACE_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return std::min(v, repeats);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return std::min<int>(hw == 0 ? 1 : static_cast<int>(hw), repeats);
}

}  // namespace

std::vector<RunReport> run_repeats(const std::string& solver, const Instance& inst,
                                   std::uint64_t seed, int repeats, const MfeaConfig& cfg,
                                   RunTrace* first_trace, Placement* best_placement) {
    if (repeats < 1) throw std::runtime_error("repeats must be >= 1");

    std::vector<RunReport> reports(repeats);
    std::vector<Placement> placements(repeats);

    const int width = thread_budget(repeats);
    for (int start = 0; start < repeats; start += width) {
        const int end = std::min(repeats, start + width);
        std::vector<std::future<void>> wave;
        wave.reserve(end - start);
        for (int i = start; i < end; ++i) {
            wave.push_back(std::async(std::launch::async, [&, i] {
                reports[i] = run_solver(solver, inst, seed + static_cast<std::uint64_t>(i), cfg,
                                        i == 0 ? first_trace : nullptr, &placements[i]);
            }));
        }
        for (auto& f : wave) f.get();
    }

    if (best_placement) {
        int best = 0;
        for (int i = 1; i < repeats; ++i) {
            if (reports[i].cost < reports[best].cost) best = i;
        }
        *best_placement = std::move(placements[best]);
    }
    return reports;
}

namespace {

std::string fmt(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

std::string report_csv_header() {
    return "solver,instance,seed,wall_time_ms,util,util_cpu,util_ram,util_disk,servers,cost,"
           "lower_bound\n";
}

std::string report_csv_row(const RunReport& r) {
    std::ostringstream out;
    out << r.solver << ',' << r.instance_hash << ',' << r.seed << ','
        << fmt(r.wall_time_ms, "%.3f") << ',' << fmt(r.util.comprehensive, "%.6f") << ','
        << fmt(r.util.cpu, "%.6f") << ',' << fmt(r.util.ram, "%.6f") << ','
        << fmt(r.util.disk, "%.6f") << ',' << r.servers << ',' << format_centi(r.cost) << ','
        << fmt(r.lower_bound, "%.6f") << '\n';
    return out.str();
}

namespace {

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};

Stats stats_of(const std::vector<double>& xs) {
    Stats s;
    if (xs.empty()) return s;
    for (const double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double acc = 0.0;
        for (const double x : xs) acc += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
    }
    return s;
}

}  // namespace

std::string report_csv(const std::vector<RunReport>& rows) {
    std::ostringstream out;
    out << report_csv_header();
    for (const auto& r : rows) out << report_csv_row(r);

    // per-solver aggregate rows, in order of first appearance
    std::vector<std::string> solvers;
    for (const auto& r : rows) {
        if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) {
            solvers.push_back(r.solver);
        }
    }
    for (const auto& solver : solvers) {
        std::vector<double> time, util, ucpu, uram, udisk, servers, cost, lb;
        for (const auto& r : rows) {
            if (r.solver != solver) continue;
            time.push_back(r.wall_time_ms);
            util.push_back(r.util.comprehensive);
            ucpu.push_back(r.util.cpu);
            uram.push_back(r.util.ram);
            udisk.push_back(r.util.disk);
            servers.push_back(static_cast<double>(r.servers));
            cost.push_back(static_cast<double>(r.cost) / 100.0);
            lb.push_back(r.lower_bound);
        }
        const auto emit = [&](const char* kind, const auto& pick) {
            out << solver << ':' << kind << ",,," << fmt(pick(stats_of(time)), "%.3f") << ','
                << fmt(pick(stats_of(util)), "%.6f") << ',' << fmt(pick(stats_of(ucpu)), "%.6f")
                << ',' << fmt(pick(stats_of(uram)), "%.6f") << ','
                << fmt(pick(stats_of(udisk)), "%.6f") << ','
                << fmt(pick(stats_of(servers)), "%.2f") << ','
                << fmt(pick(stats_of(cost)), "%.2f") << ',' << fmt(pick(stats_of(lb)), "%.6f")
                << '\n';
        };
        emit("mean", [](const Stats& s) { return s.mean; });
        emit("stddev", [](const Stats& s) { return s.stddev; });
    }
    return out.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

std::vector<RunReport> parse_report_csv(std::istream& in) {
    std::vector<RunReport> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("solver,", 0) == 0) continue;  // header
        }
        const auto f = split_csv(line);
        if (f.size() != 11) throw std::runtime_error("report parse error: bad row: " + line);
        if (f[0].find(':') != std::string::npos) continue;  // summary row

        RunReport r;
        r.solver = f[0];
        r.instance_hash = f[1];
        r.seed = std::stoull(f[2]);
        r.wall_time_ms = std::stod(f[3]);
        r.util.comprehensive = std::stod(f[4]);
        r.util.cpu = std::stod(f[5]);
        r.util.ram = std::stod(f[6]);
        r.util.disk = std::stod(f[7]);
        r.util.empty = false;
        r.servers = std::stoi(f[8]);
        r.cost = parse_centi(f[9]);
        r.lower_bound = std::stod(f[10]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SolverSummary> summarize(const std::vector<RunReport>& rows) {
    // group by (solver, instance) in order of first appearance
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& r : rows) {
        const auto key = std::make_pair(r.solver, r.instance_hash);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }

    std::vector<SolverSummary> out;
    for (const auto& [solver, instance] : keys) {
        std::vector<double> time, util, servers, cost;
        for (const auto& r : rows) {
            if (r.solver != solver || r.instance_hash != instance) continue;
            time.push_back(r.wall_time_ms);
            util.push_back(r.util.comprehensive);
            servers.push_back(static_cast<double>(r.servers));
            cost.push_back(static_cast<double>(r.cost) / 100.0);
        }
        SolverSummary s;
        s.solver = solver;
        s.instance_hash = instance;
        s.runs = static_cast<int>(cost.size());
        const Stats t = stats_of(time), u = stats_of(util), n = stats_of(servers),
                    c = stats_of(cost);
        s.time_mean = t.mean;
        s.time_stddev = t.stddev;
        s.util_mean = u.mean;
        s.util_stddev = u.stddev;
        s.servers_mean = n.mean;
        s.servers_stddev = n.stddev;
        s.cost_mean = c.mean;
        s.cost_stddev = c.stddev;
        out.push_back(std::move(s));
    }

    // relative cost improvement against baseline rows on the same instance
    for (auto& s : out) {
        for (const auto& base : out) {
            if (base.instance_hash != s.instance_hash || base.cost_mean == 0.0) continue;
            const double impr = (base.cost_mean - s.cost_mean) / base.cost_mean;
            if (base.solver == "ffd" && s.solver != "ffd") s.improvement_vs_ffd = impr;
            if (base.solver == "sfea" && s.solver != "sfea") s.improvement_vs_sfea = impr;
        }
    }
    return out;
}

std::string summary_csv(const std::vector<SolverSummary>& rows) {
    std::ostringstream out;
    out << "solver,instance,runs,time_mean,time_stddev,util_mean,util_stddev,servers_mean,"
           "servers_stddev,cost_mean,cost_stddev,impr_vs_ffd,impr_vs_sfea\n";
    for (const auto& s : rows) {
        out << s.solver << ',' << s.instance_hash << ',' << s.runs << ','
            << fmt(s.time_mean, "%.3f") << ',' << fmt(s.time_stddev, "%.3f") << ','
            << fmt(s.util_mean, "%.6f") << ',' << fmt(s.util_stddev, "%.6f") << ','
            << fmt(s.servers_mean, "%.2f") << ',' << fmt(s.servers_stddev, "%.2f") << ','
            << fmt(s.cost_mean, "%.2f") << ',' << fmt(s.cost_stddev, "%.2f") << ',';
        if (s.improvement_vs_ffd) out << fmt(*s.improvement_vs_ffd, "%.6f");
        out << ',';
        if (s.improvement_vs_sfea) out << fmt(*s.improvement_vs_sfea, "%.6f");
        out << '\n';
    }
    return out.str();
}

std::string sweep_csv_header() {
    return "param,value," + report_csv_header();
}

std::string sweep_csv_row(const std::string& param, const std::string& value,
                          const RunReport& r) {
    return param + ',' + value + ',' + report_csv_row(r);
}

}  // namespace vmplace

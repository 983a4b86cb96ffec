#include "vmplace/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "vmplace/allocation.hpp"

namespace vmplace {

Placement ffd_solve(const Instance& inst) {
    const int V = inst.num_vms();
    std::vector<int> order(V);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&inst](int x, int y) {
        const Resources& a = inst.vm_requests[x].demand;
        const Resources& b = inst.vm_requests[y].demand;
        if (a.cpu != b.cpu) return a.cpu > b.cpu;
        if (a.ram != b.ram) return a.ram > b.ram;
        if (a.disk != b.disk) return a.disk > b.disk;
        return x < y;
    });

    std::vector<std::int64_t> budget = inst.ps_availability;
    Placement placement;
    std::vector<Resources> residual;  // parallel to placement.servers

    for (const int vm : order) {
        const Resources& demand = inst.vm_requests[vm].demand;

        bool placed = false;
        for (std::size_t s = 0; s < placement.servers.size(); ++s) {
            if (demand.fits_within(residual[s])) {
                residual[s] -= demand;
                placement.servers[s].loaded.push_back(vm);
                placed = true;
                break;
            }
        }
        if (placed) continue;

        // open the cheapest server type that can take this VM
        int pick = -1;
        for (int l = 0; l < inst.num_ps_types(); ++l) {
            if (budget[l] <= 0 || !demand.fits_within(inst.ps_types[l].capacity)) continue;
            if (pick < 0 || inst.ps_types[l].cost < inst.ps_types[pick].cost ||
                (inst.ps_types[l].cost == inst.ps_types[pick].cost &&
                 inst.ps_types[l].type_id < inst.ps_types[pick].type_id)) {
                pick = l;
            }
        }
        if (pick < 0) {
            throw AllocationError("ffd: vm " + std::to_string(vm) +
                                  " fits no server type with remaining supply");
        }
        --budget[pick];
        placement.servers.push_back({pick, {vm}});
        residual.push_back(inst.ps_types[pick].capacity - demand);
    }
    return placement;
}

SfeaResult run_sfea(const Instance& inst, const MfeaConfig& cfg) {
    validate_mfea_config(cfg);
    if (inst.num_vms() < 1) throw std::runtime_error("run_sfea: instance has no VMs");

    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed_ms = [&t0] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    const SearchSpace space = make_single_task_search_space(inst);
    std::vector<Individual> pop = initialize_population(space, cfg);
    std::int64_t seq = static_cast<std::int64_t>(pop.size());
    Rng mating(derive_seed(cfg.seed, Stream::Mating));
    Rng mutation(derive_seed(cfg.seed, Stream::Mutation));

    SfeaResult result;
    const auto best_of = [](const std::vector<Individual>& v) {
        const Individual* b = &v.front();
        for (const auto& ind : v) {
            if (ind.cost < b->cost || (ind.cost == b->cost && ind.seq < b->seq)) b = &ind;
        }
        return b;
    };
    const auto record = [&](int iteration) {
        result.trace.rows.push_back({iteration, 1, best_of(pop)->cost, elapsed_ms()});
    };

    record(0);
    for (int iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
        pop = evolve(std::move(pop), cfg, space, mating, mutation, seq,
                     &result.trace.refill_events);
        record(iteration);
    }

    // items of the single task are the VM indices themselves
    result.placement = best_of(pop)->pheno;
    return result;
}

ExactResult exact_solve(const Instance& inst) {
    const int V = inst.num_vms();
    if (V < 1) throw std::runtime_error("exact_solve: instance has no VMs");
    if (V > 10) throw std::runtime_error("exact_solve: instance too large, at most 10 VMs");
    const int L = inst.num_ps_types();

    // greedy incumbent bounds the search from the start
    CostCenti best_cost = 0;
    Placement best_placement;
    bool have_incumbent = false;
    try {
        std::vector<AllocItem> items;
        for (int i = 0; i < V; ++i) items.push_back({i, inst.vm_requests[i].demand});
        best_placement = greedy_allocate(items, inst.ps_types, inst.ps_availability);
        best_cost = placement_cost(best_placement, inst.ps_types);
        have_incumbent = true;
    } catch (const AllocationError&) {
        // fall through; the search itself decides feasibility
    }

    // cheapest cost per unit of each resource, for the remaining-demand bound
    double unit_cpu = 0, unit_ram = 0, unit_disk = 0;
    {
        bool first = true;
        for (const auto& ps : inst.ps_types) {
            const double c = static_cast<double>(ps.cost);
            const double uc = c / ps.capacity.cpu;
            const double ur = c / ps.capacity.ram;
            const double ud = c / ps.capacity.disk;
            if (first || uc < unit_cpu) unit_cpu = uc;
            if (first || ur < unit_ram) unit_ram = ur;
            if (first || ud < unit_disk) unit_disk = ud;
            first = false;
        }
    }

    std::vector<Resources> suffix_demand(V + 1);
    for (int j = V; j-- > 0;) {
        suffix_demand[j] = suffix_demand[j + 1] + inst.vm_requests[j].demand;
    }

    struct OpenServer {
        int ps = 0;
        Resources residual;
        std::vector<int> loaded;
    };
    std::vector<OpenServer> open;
    std::vector<std::int64_t> budget = inst.ps_availability;
    Resources open_residual_total;

    std::int64_t nodes = 0;
    constexpr std::int64_t kNodeCap = 50'000'000;

    const auto snapshot = [&open]() {
        Placement p;
        for (const auto& s : open) p.servers.push_back({s.ps, s.loaded});
        return p;
    };

    const std::function<void(int, CostCenti)> dfs = [&](int j, CostCenti cost) {
        if (++nodes > kNodeCap) {
            throw std::runtime_error("exact_solve: search-space cap exceeded");
        }
        if (have_incumbent && cost >= best_cost) return;
        if (j == V) {
            best_cost = cost;
            best_placement = snapshot();
            have_incumbent = true;
            return;
        }

        // what the open servers cannot absorb must be bought, at best at
        // the cheapest per-unit price
        const Resources& rem = suffix_demand[j];
        const double extra =
            std::max({(rem.cpu > open_residual_total.cpu
                           ? (rem.cpu - open_residual_total.cpu) * unit_cpu
                           : 0.0),
                      (rem.ram > open_residual_total.ram
                           ? (rem.ram - open_residual_total.ram) * unit_ram
                           : 0.0),
                      (rem.disk > open_residual_total.disk
                           ? (rem.disk - open_residual_total.disk) * unit_disk
                           : 0.0)});
        if (have_incumbent && static_cast<double>(cost) + extra >= static_cast<double>(best_cost) - 1e-6) {
            return;
        }

        const Resources& demand = inst.vm_requests[j].demand;

        for (std::size_t s = 0; s < open.size(); ++s) {
            if (!demand.fits_within(open[s].residual)) continue;
            open[s].residual -= demand;
            open[s].loaded.push_back(j);
            open_residual_total -= demand;
            dfs(j + 1, cost);
            open_residual_total += demand;
            open[s].loaded.pop_back();
            open[s].residual += demand;
        }

        // a fresh server always starts with the lowest-index unplaced VM,
        // so same-type servers open in ascending first-VM order
        for (int l = 0; l < L; ++l) {
            if (budget[l] <= 0 || !demand.fits_within(inst.ps_types[l].capacity)) continue;
            const Resources residual = inst.ps_types[l].capacity - demand;
            open.push_back({l, residual, {j}});
            --budget[l];
            open_residual_total += residual;
            dfs(j + 1, cost + inst.ps_types[l].cost);
            open_residual_total -= residual;
            ++budget[l];
            open.pop_back();
        }
    };

    dfs(0, 0);
    if (!have_incumbent) {
        throw std::runtime_error("exact_solve: no feasible placement exists");
    }
    return {best_cost, best_placement};
}

double lower_bound(const Instance& inst) {
    if (inst.vm_requests.empty()) return 0.0;
    if (inst.ps_types.empty()) throw std::runtime_error("lower_bound: no ps types");

    const Resources demand = inst.total_demand();
    double best_cpu = 0, best_ram = 0, best_disk = 0;
    bool first = true;
    for (const auto& ps : inst.ps_types) {
        const double c = static_cast<double>(ps.cost) / 100.0;
        const double uc = c / ps.capacity.cpu;
        const double ur = c / ps.capacity.ram;
        const double ud = c / ps.capacity.disk;
        if (first || uc < best_cpu) best_cpu = uc;
        if (first || ur < best_ram) best_ram = ur;
        if (first || ud < best_disk) best_disk = ud;
        first = false;
    }
    return std::max({demand.cpu * best_cpu, demand.ram * best_ram, demand.disk * best_disk});
}

}  // namespace vmplace

#include "vmplace/mfea.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "vmplace/allocation.hpp"
#include "vmplace/consolidation.hpp"

namespace vmplace {

SearchSpace make_unified_search_space(const UnifiedSpace& space,
                                      const std::vector<TaskSpec>& tasks,
                                      const Instance& inst) {
    SearchSpace s;
    s.item_demand.reserve(space.num_slots());
    s.item_type = space.slot_type;
    for (const int t : space.slot_type) s.item_demand.push_back(space.types.demands[t]);
    s.task_need = space.task_need;
    for (const auto& task : tasks) s.task_budget.push_back(task.ps_budget);
    s.ps_types = inst.ps_types;
    return s;
}

SearchSpace make_single_task_search_space(const Instance& inst) {
    const TypeTable types = build_type_table(inst);
    SearchSpace s;
    s.item_demand.reserve(inst.num_vms());
    s.item_type.reserve(inst.num_vms());
    std::vector<int> need(types.num_types(), 0);
    for (const auto& vm : inst.vm_requests) {
        const int t = types.index_of(vm.type_id);
        s.item_demand.push_back(vm.demand);
        s.item_type.push_back(t);
        ++need[t];
    }
    s.task_need.push_back(std::move(need));
    s.task_budget.push_back(inst.ps_availability);
    s.ps_types = inst.ps_types;
    return s;
}

void evaluate(Individual& ind, const SearchSpace& space) {
    const std::vector<int> kept = decode(ind.order, space.item_type, space.task_need[ind.task]);
    std::vector<AllocItem> items;
    items.reserve(kept.size());
    for (const int id : kept) items.push_back({id, space.item_demand[id]});
    ind.pheno = greedy_allocate(items, space.ps_types, space.task_budget[ind.task]);
    ind.cost = placement_cost(ind.pheno, space.ps_types);
}

std::vector<int> crossover(const Individual& a, const Individual& b,
                           const SearchSpace& space, Rng& rng) {
    struct PoolEntry {
        double util;
        const ActivatedPs* server;
    };
    std::vector<PoolEntry> pool;
    pool.reserve(a.pheno.servers.size() + b.pheno.servers.size());
    for (const Individual* parent : {&a, &b}) {
        for (const auto& server : parent->pheno.servers) {
            Resources load;
            for (const int id : server.loaded) load += space.item_demand[id];
            pool.push_back(
                {server_utilization(load, space.ps_types[server.ps_type].capacity), &server});
        }
    }
    // stable: ties keep parent a's servers ahead, in phenotype order
    std::stable_sort(pool.begin(), pool.end(),
                     [](const PoolEntry& x, const PoolEntry& y) { return x.util > y.util; });

    const int D = space.num_items();
    std::vector<char> claimed(D, 0);
    std::vector<int> child;
    child.reserve(D);
    for (const auto& entry : pool) {
        bool free = true;
        for (const int id : entry.server->loaded) {
            if (claimed[id]) {
                free = false;
                break;
            }
        }
        if (!free) continue;
        for (const int id : entry.server->loaded) {
            claimed[id] = 1;
            child.push_back(id);
        }
    }

    std::vector<int> rest;
    rest.reserve(D - child.size());
    for (int id = 0; id < D; ++id) {
        if (!claimed[id]) rest.push_back(id);
    }
    rng.shuffle(rest);
    child.insert(child.end(), rest.begin(), rest.end());
    return child;
}

void mutate(std::vector<int>& order, double mutation_prob, Rng& rng) {
    if (rng.uniform01() >= mutation_prob) return;
    const std::size_t n = order.size();
    if (n < 2) return;
    const std::size_t i = rng.index(n);
    std::size_t j = rng.index(n - 1);
    if (j >= i) ++j;
    std::swap(order[i], order[j]);
}

std::vector<Individual> initialize_population(const SearchSpace& space, const MfeaConfig& cfg) {
    const int H = space.num_tasks();
    const int n = cfg.individuals_per_task;
    const int N = n * H;

    std::vector<Individual> pop(N);
    for (int k = 0; k < N; ++k) {
        Individual& ind = pop[k];
        ind.order.resize(space.num_items());
        std::iota(ind.order.begin(), ind.order.end(), 0);
        // per-individual stream: population can be built or evaluated in
        // any order without changing the result
        Rng rng(derive_seed(cfg.seed, Stream::Init, static_cast<std::uint64_t>(k)));
        rng.shuffle(ind.order);
        ind.task = k / n;
        ind.seq = k;
        evaluate(ind, space);
    }
    return pop;
}

std::vector<Individual> reproduce(const std::vector<Individual>& pop, const MfeaConfig& cfg,
                                  const SearchSpace& space, Rng& mating_rng,
                                  Rng& mutation_rng, std::int64_t& seq_counter) {
    const int N = static_cast<int>(pop.size());
    if (N < 2) throw std::runtime_error("reproduce: population needs at least two individuals");

    std::vector<Individual> offspring;
    offspring.reserve(N);
    while (static_cast<int>(offspring.size()) < N) {
        const int a = static_cast<int>(mating_rng.index(N));
        int b = static_cast<int>(mating_rng.index(N - 1));
        if (b >= a) ++b;

        if (pop[a].task == pop[b].task || mating_rng.uniform01() < cfg.rmp) {
            Individual kid;
            kid.order = crossover(pop[a], pop[b], space, mating_rng);
            mutate(kid.order, cfg.mutation_prob, mutation_rng);
            kid.task = mating_rng.index(2) == 0 ? pop[a].task : pop[b].task;
            kid.seq = seq_counter++;
            offspring.push_back(std::move(kid));
        } else {
            for (const int p : {a, b}) {
                if (static_cast<int>(offspring.size()) == N) break;
                Individual kid;
                kid.order = pop[p].order;
                mutate(kid.order, cfg.mutation_prob, mutation_rng);
                kid.task = pop[p].task;
                kid.seq = seq_counter++;
                offspring.push_back(std::move(kid));
            }
        }
    }
    return offspring;
}

std::vector<Individual> select_survivors(std::vector<Individual> pool, int per_task,
                                         int num_tasks, const SearchSpace& space,
                                         Rng& mutation_rng, std::int64_t& seq_counter,
                                         int* refill_events) {
    std::vector<std::vector<int>> by_task(num_tasks);
    for (std::size_t i = 0; i < pool.size(); ++i) by_task[pool[i].task].push_back(static_cast<int>(i));

    std::vector<Individual> out;
    out.reserve(static_cast<std::size_t>(per_task) * num_tasks);
    for (int task = 0; task < num_tasks; ++task) {
        auto& cand = by_task[task];
        std::sort(cand.begin(), cand.end(), [&pool](int x, int y) {
            if (pool[x].cost != pool[y].cost) return pool[x].cost < pool[y].cost;
            return pool[x].seq < pool[y].seq;
        });
        for (std::size_t r = 0; r < cand.size(); ++r) {
            pool[cand[r]].rank = static_cast<int>(r) + 1;
            pool[cand[r]].scalar_fitness = 1.0 / (static_cast<double>(r) + 1.0);
        }

        const int keep = std::min<int>(per_task, static_cast<int>(cand.size()));
        for (int r = 0; r < keep; ++r) out.push_back(std::move(pool[cand[r]]));

        if (keep == 0) {
            throw std::runtime_error("select_survivors: task " + std::to_string(task + 1) +
                                     " has no candidates");
        }
        const std::size_t best_at = out.size() - keep;
        for (int r = keep; r < per_task; ++r) {
            Individual clone = out[best_at];
            clone.seq = seq_counter++;
            mutate(clone.order, 1.0, mutation_rng);
            evaluate(clone, space);
            out.push_back(std::move(clone));
            if (refill_events) ++(*refill_events);
        }
    }
    return out;
}

std::vector<Individual> evolve(std::vector<Individual> pop, const MfeaConfig& cfg,
                               const SearchSpace& space, Rng& mating_rng, Rng& mutation_rng,
                               std::int64_t& seq_counter, int* refill_events) {
    const int per_task = cfg.individuals_per_task;
    const int num_tasks = space.num_tasks();

    std::vector<Individual> offspring =
        reproduce(pop, cfg, space, mating_rng, mutation_rng, seq_counter);
    for (auto& kid : offspring) evaluate(kid, space);

    pop.reserve(pop.size() + offspring.size());
    for (auto& kid : offspring) pop.push_back(std::move(kid));
    return select_survivors(std::move(pop), per_task, num_tasks, space, mutation_rng,
                            seq_counter, refill_events);
}

Placement bind_phenotype(const Placement& pheno, const SearchSpace& space,
                         const TypeTable& types, const std::vector<int>& task_vm_indices,
                         const Instance& inst) {
    std::vector<std::vector<int>> queue(types.num_types());
    for (const int vm : task_vm_indices) {
        queue[types.index_of(inst.vm_requests[vm].type_id)].push_back(vm);
    }
    for (auto& q : queue) std::sort(q.begin(), q.end());

    std::vector<std::size_t> next(types.num_types(), 0);
    Placement bound;
    bound.servers.reserve(pheno.servers.size());
    for (const auto& server : pheno.servers) {
        ActivatedPs b;
        b.ps_type = server.ps_type;
        b.loaded.reserve(server.loaded.size());
        for (const int slot : server.loaded) {
            const int t = space.item_type[slot];
            b.loaded.push_back(queue[t].at(next[t]++));
        }
        bound.servers.push_back(std::move(b));
    }
    return bound;
}

CostCenti RunTrace::merged_cost_at(int iteration) const {
    for (const auto& row : rows) {
        if (row.task_index == -1 && row.iteration == iteration) return row.best_cost;
    }
    throw std::out_of_range("no merged-cost trace row for iteration " +
                            std::to_string(iteration));
}

std::string trace_csv(const RunTrace& trace) {
    std::ostringstream out;
    out << "iteration,task_index,best_cost,elapsed_ms\n";
    char buf[64];
    for (const auto& row : trace.rows) {
        std::snprintf(buf, sizeof(buf), "%.3f", row.elapsed_ms);
        out << row.iteration << ',' << row.task_index << ',' << format_centi(row.best_cost)
            << ',' << buf << '\n';
    }
    return out.str();
}

void validate_mfea_config(const MfeaConfig& cfg) {
    if (cfg.rmp < 0.0 || cfg.rmp > 1.0) throw std::runtime_error("rmp must be in [0, 1]");
    if (cfg.mutation_prob < 0.0 || cfg.mutation_prob > 1.0) {
        throw std::runtime_error("mutation_prob must be in [0, 1]");
    }
    if (cfg.individuals_per_task < 1) {
        throw std::runtime_error("individuals_per_task must be >= 1");
    }
    if (cfg.n_per_task < 1) throw std::runtime_error("n_per_task must be >= 1");
    if (cfg.max_iterations < 0) throw std::runtime_error("max_iterations must be >= 0");
}

MfeaResult run_mfea(const Instance& inst, const MfeaConfig& cfg) {
    validate_mfea_config(cfg);
    if (inst.num_vms() < 1) throw std::runtime_error("run_mfea: instance has no VMs");

    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed_ms = [&t0] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    MfeaConfig eff = cfg;
    eff.n_per_task = std::min(cfg.n_per_task, inst.num_vms());

    const std::vector<TaskSpec> tasks = split(inst, eff.n_per_task, cfg.seed);
    const TypeTable types = build_type_table(inst);
    const UnifiedSpace unified = build_unified_space(types, tasks);
    const SearchSpace space = make_unified_search_space(unified, tasks, inst);

    const int H = static_cast<int>(tasks.size());
    std::vector<Individual> pop = initialize_population(space, eff);
    std::int64_t seq = static_cast<std::int64_t>(pop.size());
    Rng mating(derive_seed(cfg.seed, Stream::Mating));
    Rng mutation(derive_seed(cfg.seed, Stream::Mutation));

    RunTrace trace;

    // best individual per task: lowest cost, oldest wins ties
    const auto bests = [&]() {
        std::vector<const Individual*> best(H, nullptr);
        for (const auto& ind : pop) {
            const Individual*& b = best[ind.task];
            if (!b || ind.cost < b->cost || (ind.cost == b->cost && ind.seq < b->seq)) b = &ind;
        }
        return best;
    };

    const auto bind_bests = [&](const std::vector<const Individual*>& best) {
        std::vector<Placement> bound;
        bound.reserve(H);
        for (int task = 0; task < H; ++task) {
            bound.push_back(
                bind_phenotype(best[task]->pheno, space, types, tasks[task].vm_indices, inst));
        }
        return bound;
    };

    const auto merge_bound = [&](const std::vector<Placement>& bound) {
        std::vector<std::int64_t> budget = inst.ps_availability;
        for (const auto& p : bound) {
            for (const auto& server : p.servers) --budget[server.ps_type];
        }
        return remigrate_and_merge(bound, inst, std::move(budget));
    };

    const auto record = [&](int iteration) {
        const std::vector<const Individual*> best = bests();
        const double ms = elapsed_ms();
        for (int task = 0; task < H; ++task) {
            trace.rows.push_back({iteration, task + 1, best[task]->cost, ms});
        }
        const Placement merged = merge_bound(bind_bests(best));
        trace.rows.push_back(
            {iteration, -1, placement_cost(merged, inst.ps_types), elapsed_ms()});
    };

    record(0);
    for (int iteration = 1; iteration <= eff.max_iterations; ++iteration) {
        pop = evolve(std::move(pop), eff, space, mating, mutation, seq, &trace.refill_events);
        record(iteration);
    }

    MfeaResult result;
    result.best_per_task = bind_bests(bests());
    result.merged = merge_bound(result.best_per_task);
    result.trace = std::move(trace);
    return result;
}

}  // namespace vmplace

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vmplace/decomposition.hpp"
#include "vmplace/instance.hpp"
#include "vmplace/placement.hpp"
#include "vmplace/rng.hpp"

namespace vmplace {

struct MfeaConfig {
    double rmp = 0.3;              // random mating probability across tasks
    int n_per_task = 200;          // target VMs per task (clamped to V)
    int individuals_per_task = 5;  // elite size n; population is n * H
    int max_iterations = 50;
    double mutation_prob = 0.1;
    std::uint64_t seed = 1;
};

// One search space drives both drivers: the multifactorial solver's items
// are unified slots, the single-factorial baseline's items are the VM
// indices themselves with a single task wanting all of them. Operators
// never look past this view, so both solvers share identical code paths.
struct SearchSpace {
    std::vector<Resources> item_demand;              // per item id
    std::vector<int> item_type;                      // compact type per item
    std::vector<std::vector<int>> task_need;         // [task][compact type]
    std::vector<std::vector<std::int64_t>> task_budget;  // [task][ps type]
    std::vector<PsType> ps_types;

    int num_items() const { return static_cast<int>(item_demand.size()); }
    int num_tasks() const { return static_cast<int>(task_need.size()); }
};

SearchSpace make_unified_search_space(const UnifiedSpace& space,
                                      const std::vector<TaskSpec>& tasks,
                                      const Instance& inst);
SearchSpace make_single_task_search_space(const Instance& inst);

void validate_mfea_config(const MfeaConfig& cfg);

struct Individual {
    std::vector<int> order;      // permutation of item ids
    int task = 0;                // skill factor, 0-based
    CostCenti cost = 0;          // factorial cost on `task`
    int rank = 0;                // factorial rank within task, 1-based
    double scalar_fitness = 0.0; // 1 / rank
    std::int64_t seq = 0;        // birth order; lower = older, breaks ties
    Placement pheno;             // cached phenotype, loaded ids are item ids
};

// Decode + greedy allocation against the individual's task; fills cost and
// the cached phenotype. Consumes no randomness.
void evaluate(Individual& ind, const SearchSpace& space);

// Exon-shuffling order crossover: pools both parents' activated servers,
// keeps them in descending utilization order while their items are still
// unclaimed, then appends the unclaimed remainder shuffled.
std::vector<int> crossover(const Individual& a, const Individual& b,
                           const SearchSpace& space, Rng& rng);

// With probability mutation_prob swaps two distinct positions.
void mutate(std::vector<int>& order, double mutation_prob, Rng& rng);

std::vector<Individual> initialize_population(const SearchSpace& space, const MfeaConfig& cfg);

// Assortative mating: parents of the same task, or any pair with
// probability rmp, produce one crossover child inheriting a uniformly
// chosen parent's task; otherwise each parent yields a mutation-only child
// of its own task. Children arrive unevaluated.
std::vector<Individual> reproduce(const std::vector<Individual>& pop, const MfeaConfig& cfg,
                                  const SearchSpace& space, Rng& mating_rng,
                                  Rng& mutation_rng, std::int64_t& seq_counter);

// Ranks every candidate within its task by ascending cost (age then
// insertion order break ties), writes rank and scalar fitness, and keeps
// the best per_task survivors of each task. A task short on candidates is
// refilled by cloning and force-mutating its best (counted in
// refill_events); this cannot happen in a normal run.
std::vector<Individual> select_survivors(std::vector<Individual> pool, int per_task,
                                         int num_tasks, const SearchSpace& space,
                                         Rng& mutation_rng, std::int64_t& seq_counter,
                                         int* refill_events);

// One generation: reproduce, evaluate the offspring, select survivors.
// Both the multifactorial and single-factorial drivers run exactly this.
std::vector<Individual> evolve(std::vector<Individual> pop, const MfeaConfig& cfg,
                               const SearchSpace& space, Rng& mating_rng, Rng& mutation_rng,
                               std::int64_t& seq_counter, int* refill_events);

// Rewrites a phenotype expressed in unified slot ids into instance VM
// indices: slots of a type consume the task's VMs of that type in
// ascending index order.
Placement bind_phenotype(const Placement& pheno, const SearchSpace& space,
                         const TypeTable& types, const std::vector<int>& task_vm_indices,
                         const Instance& inst);

struct TraceRow {
    int iteration = 0;    // 0 = initial population
    int task_index = 0;   // 1-based task; -1 = merged whole-instance solution
    CostCenti best_cost = 0;
    double elapsed_ms = 0.0;
};

struct RunTrace {
    std::vector<TraceRow> rows;
    int refill_events = 0;

    CostCenti merged_cost_at(int iteration) const;  // -1 rows
};

std::string trace_csv(const RunTrace& trace);

struct MfeaResult {
    std::vector<Placement> best_per_task;  // bound to instance VM indices
    Placement merged;                      // after re-migration and merge
    RunTrace trace;
};

MfeaResult run_mfea(const Instance& inst, const MfeaConfig& cfg);

}  // namespace vmplace

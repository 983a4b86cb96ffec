#pragma once

#include <cstdint>
#include <vector>

#include "vmplace/instance.hpp"

namespace vmplace {

// Compact view of the distinct VM types present in an instance, ordered by
// ascending type_id. Demands are indexed by compact type index.
struct TypeTable {
    std::vector<int> type_ids;
    std::vector<Resources> demands;

    int num_types() const { return static_cast<int>(type_ids.size()); }
    int index_of(int type_id) const;  // -1 when absent
};

TypeTable build_type_table(const Instance& inst);

// One subproblem of the decomposed placement. Tasks 1..H-1 receive an
// equal share of VMs and server budgets; the H-th task absorbs both
// remainders, so nothing is lost to rounding.
struct TaskSpec {
    int index = 0;                        // 1-based
    std::vector<int> vm_indices;          // instance VM indices owned by this task
    std::vector<int> type_need;           // per compact type; sums to vm_indices.size()
    std::vector<std::int64_t> ps_budget;  // per instance ps type
};

// H = floor(V / n_per_task). VMs are dealt to tasks uniformly at random
// (seeded); budgets follow the same quotient/remainder split.
std::vector<TaskSpec> split(const Instance& inst, int n_per_task, std::uint64_t seed);

// The shared genotype universe: per type, the maximum count any task
// needs, laid out as slots in ascending type order. Every task's demand
// can be expressed by selecting slots from this one multiset.
struct UnifiedSpace {
    TypeTable types;
    std::vector<int> type_counts;            // per compact type: max over tasks
    std::vector<int> slot_type;              // slot id -> compact type
    std::vector<std::vector<int>> task_need; // per task: copy of type_need

    int num_slots() const { return static_cast<int>(slot_type.size()); }
};

UnifiedSpace build_unified_space(const TypeTable& types, const std::vector<TaskSpec>& tasks);

// Scans `order` left to right, keeping each slot while its type still has
// unmet demand in `need`; stops as soon as every demand is met. The result
// preserves scan order.
std::vector<int> decode(const std::vector<int>& order, const std::vector<int>& slot_type,
                        const std::vector<int>& need);

}  // namespace vmplace

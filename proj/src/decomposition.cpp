#include "vmplace/decomposition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "vmplace/rng.hpp"

namespace vmplace {

int TypeTable::index_of(int type_id) const {
    const auto it = std::lower_bound(type_ids.begin(), type_ids.end(), type_id);
    if (it == type_ids.end() || *it != type_id) return -1;
    return static_cast<int>(it - type_ids.begin());
}

TypeTable build_type_table(const Instance& inst) {
    std::vector<int> ids;
    ids.reserve(inst.vm_requests.size());
    for (const auto& vm : inst.vm_requests) ids.push_back(vm.type_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    TypeTable table;
    table.type_ids = std::move(ids);
    table.demands.resize(table.type_ids.size());
    for (const auto& vm : inst.vm_requests) {
        table.demands[table.index_of(vm.type_id)] = vm.demand;
    }
    return table;
}

std::vector<TaskSpec> split(const Instance& inst, int n_per_task, std::uint64_t seed) {
    const int V = inst.num_vms();
    if (n_per_task < 1) throw std::runtime_error("split: n_per_task must be >= 1");
    if (n_per_task > V) throw std::runtime_error("split: task size exceeds instance");

    const int H = V / n_per_task;
    const int base = V / H;
    const int vm_rem = V % H;

    std::vector<int> order(V);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, Stream::Split));
    rng.shuffle(order);

    const TypeTable types = build_type_table(inst);
    const int L = inst.num_ps_types();

    std::vector<TaskSpec> tasks(H);
    int next = 0;
    for (int i = 0; i < H; ++i) {
        TaskSpec& task = tasks[i];
        task.index = i + 1;
        const int size = base + (i == H - 1 ? vm_rem : 0);
        task.vm_indices.assign(order.begin() + next, order.begin() + next + size);
        next += size;

        task.type_need.assign(types.num_types(), 0);
        for (const int vm : task.vm_indices) {
            ++task.type_need[types.index_of(inst.vm_requests[vm].type_id)];
        }

        task.ps_budget.resize(L);
        for (int l = 0; l < L; ++l) {
            task.ps_budget[l] = inst.ps_availability[l] / H +
                                (i == H - 1 ? inst.ps_availability[l] % H : 0);
        }
    }
    return tasks;
}

UnifiedSpace build_unified_space(const TypeTable& types, const std::vector<TaskSpec>& tasks) {
    UnifiedSpace space;
    space.types = types;
    space.type_counts.assign(types.num_types(), 0);
    for (const auto& task : tasks) {
        for (int t = 0; t < types.num_types(); ++t) {
            space.type_counts[t] = std::max(space.type_counts[t], task.type_need[t]);
        }
        space.task_need.push_back(task.type_need);
    }
    for (int t = 0; t < types.num_types(); ++t) {
        for (int k = 0; k < space.type_counts[t]; ++k) space.slot_type.push_back(t);
    }
    return space;
}

std::vector<int> decode(const std::vector<int>& order, const std::vector<int>& slot_type,
                        const std::vector<int>& need) {
    int remaining = 0;
    for (const int n : need) remaining += n;

    std::vector<int> pending = need;
    std::vector<int> kept;
    kept.reserve(remaining);
    for (const int slot : order) {
        if (remaining == 0) break;
        int& n = pending[slot_type[slot]];
        if (n > 0) {
            --n;
            --remaining;
            kept.push_back(slot);
        }
    }
    return kept;
}

}  // namespace vmplace

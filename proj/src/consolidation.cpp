#include "vmplace/consolidation.hpp"

#include "vmplace/allocation.hpp"

namespace vmplace {

Placement remigrate_and_merge(const std::vector<Placement>& per_task,
                              const Instance& inst,
                              std::vector<std::int64_t> remaining_budget) {
    Placement merged;
    std::vector<AllocItem> pool;

    for (const auto& placement : per_task) {
        for (const auto& server : placement.servers) {
            const Resources load = server_load(inst, server);
            const Resources& cap = inst.ps_types[server.ps_type].capacity;
            if (server_has_surplus(load, cap)) {
                // under-filled in every dimension: release the server and
                // queue its VMs for re-migration
                for (const int vm : server.loaded) {
                    pool.push_back({vm, inst.vm_requests[vm].demand});
                }
                ++remaining_budget[server.ps_type];
            } else {
                merged.servers.push_back(server);
            }
        }
    }

    // the pool stays in release order: VMs that shared a server remain
    // adjacent, so the refill can rebuild (or beat) the released packings.
    // Sorting here by descending demand interleaves RAM-heavy VMs from
    // different servers and measurably worsens the refill.
    const Placement refill = greedy_allocate(pool, inst.ps_types, std::move(remaining_budget));
    merged.servers.insert(merged.servers.end(), refill.servers.begin(), refill.servers.end());
    return merged;
}

}  // namespace vmplace

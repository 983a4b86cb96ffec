#include "vmplace/allocation.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

namespace vmplace {

bool server_has_surplus(const Resources& load, const Resources& capacity) {
    return load.cpu < capacity.cpu && load.ram < capacity.ram && load.disk < capacity.disk;
}

namespace {

struct Trial {
    double util = -1.0;
    CostCenti cost = 0;
    int type_id = 0;
    int ps = -1;
    std::vector<std::size_t> positions;  // ascending indices into pending
};

bool better(const Trial& a, const Trial& b) {
    if (a.util != b.util) return a.util > b.util;
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.type_id < b.type_id;
}

}  // namespace

Placement greedy_allocate(const std::vector<AllocItem>& items,
                          const std::vector<PsType>& ps_types,
                          std::vector<std::int64_t> budget) {
    const std::size_t L = ps_types.size();
    if (budget.size() != L) throw AllocationError("budget size does not match ps types");

    std::vector<AllocItem> pending = items;
    Placement placement;

    // suffix minima of pending demands let a trial fill stop scanning once
    // nothing further can fit; the committed result is identical to a full
    // scan
    std::vector<Resources> suffix_min;
    Trial best, current;

    while (!pending.empty()) {
        const std::size_t n = pending.size();
        suffix_min.assign(n + 1, Resources{INT32_MAX, INT32_MAX, INT32_MAX});
        for (std::size_t j = n; j-- > 0;) {
            const Resources& d = pending[j].demand;
            suffix_min[j] = {std::min(suffix_min[j + 1].cpu, d.cpu),
                             std::min(suffix_min[j + 1].ram, d.ram),
                             std::min(suffix_min[j + 1].disk, d.disk)};
        }

        best = Trial{};
        bool any_budget = false;
        for (std::size_t l = 0; l < L; ++l) {
            if (budget[l] <= 0) continue;
            any_budget = true;

            const Resources& cap = ps_types[l].capacity;
            Resources residual = cap;
            current.positions.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (suffix_min[j].cpu > residual.cpu || suffix_min[j].ram > residual.ram ||
                    suffix_min[j].disk > residual.disk) {
                    break;
                }
                if (pending[j].demand.fits_within(residual)) {
                    residual -= pending[j].demand;
                    current.positions.push_back(j);
                }
            }
            current.util = server_utilization(cap - residual, cap);
            current.cost = ps_types[l].cost;
            current.type_id = ps_types[l].type_id;
            current.ps = static_cast<int>(l);
            if (best.ps < 0 || better(current, best)) std::swap(best, current);
        }

        if (!any_budget) {
            throw AllocationError("PS budget exhausted with " + std::to_string(n) +
                                  " items unplaced");
        }
        if (best.positions.empty()) {
            throw AllocationError("unplaceable item " + std::to_string(pending[0].id) +
                                  ": fits no affordable server type");
        }

        ActivatedPs server;
        server.ps_type = best.ps;
        server.loaded.reserve(best.positions.size());
        for (const std::size_t j : best.positions) server.loaded.push_back(pending[j].id);
        placement.servers.push_back(std::move(server));
        --budget[best.ps];

        std::size_t w = 0, pi = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (pi < best.positions.size() && best.positions[pi] == r) {
                ++pi;
                continue;
            }
            pending[w++] = pending[r];
        }
        pending.resize(w);
    }
    return placement;
}

}  // namespace vmplace

#pragma once

#include <cstdint>
#include <vector>

#include "vmplace/instance.hpp"
#include "vmplace/placement.hpp"

namespace vmplace {

// Cross-task consolidation pass. Servers that are exactly full in at least
// one resource are kept untouched; every other server is released and its
// VMs pooled in release order, then re-packed with the greedy allocator.
// Released servers return to the budget.
//
// `remaining_budget` must reflect per-type server supply not consumed by
// the input placements (aligned with inst.ps_types).
Placement remigrate_and_merge(const std::vector<Placement>& per_task,
                              const Instance& inst,
                              std::vector<std::int64_t> remaining_budget);

}  // namespace vmplace

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vmplace/placement.hpp"
#include "vmplace/types.hpp"

namespace vmplace {

struct AllocationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An item to place: a caller-scoped id plus its demand. Whole-instance
// solvers pass VM indices; the evolutionary engine passes unified slot ids.
struct AllocItem {
    int id = 0;
    Resources demand;
};

// Greedy utilization-first packing. Each round trial-fills one fresh
// server per type with remaining budget (first-fit over the pending list,
// in order), commits the trial with the highest comprehensive
// utilization, removes its items, and spends one unit of that type's
// budget. Ties go to the cheaper type, then the lower type_id.
//
// Throws AllocationError when items remain but no affordable server can
// take any of them.
Placement greedy_allocate(const std::vector<AllocItem>& items,
                          const std::vector<PsType>& ps_types,
                          std::vector<std::int64_t> budget);

// True when every resource has strictly positive residual, i.e. the server
// is not exactly full in any dimension.
bool server_has_surplus(const Resources& load, const Resources& capacity);

}  // namespace vmplace

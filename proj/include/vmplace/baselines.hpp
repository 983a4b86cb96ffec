#pragma once

#include <cstdint>
#include <vector>

#include "vmplace/instance.hpp"
#include "vmplace/mfea.hpp"
#include "vmplace/placement.hpp"

namespace vmplace {

// First-fit decreasing: VMs sorted descending by (cpu, ram, disk), each
// placed on the first open server (creation order) with room; a VM that
// fits nowhere opens the cheapest server type that can take it.
Placement ffd_solve(const Instance& inst);

struct SfeaResult {
    Placement placement;
    RunTrace trace;
};

// Single-factorial ablation: the same engine run on one task covering the
// whole instance. No decomposition, no unified space, no merge step.
SfeaResult run_sfea(const Instance& inst, const MfeaConfig& cfg);

struct ExactResult {
    CostCenti cost = 0;
    Placement placement;
};

// Branch-and-bound over all feasible assignments; only for instances of up
// to 10 VMs. Same-type servers are opened in ascending first-VM order to
// cut symmetric branches.
ExactResult exact_solve(const Instance& inst);

// Per resource, no placement can be cheaper than total demand times the
// best cost-per-unit any server type offers; the bound is the max over the
// three resources.
double lower_bound(const Instance& inst);

}  // namespace vmplace

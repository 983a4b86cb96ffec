#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vmplace/instance.hpp"
#include "vmplace/types.hpp"

namespace vmplace {

// One activated physical server and the VMs placed on it. `loaded` holds
// indices into Instance::vm_requests (solvers' internal stages may reuse
// the struct with their own id space before binding).
struct ActivatedPs {
    int ps_type = 0;  // index into Instance::ps_types
    std::vector<int> loaded;
};

struct Placement {
    std::vector<ActivatedPs> servers;

    int num_servers() const { return static_cast<int>(servers.size()); }
};

CostCenti placement_cost(const Placement& p, const std::vector<PsType>& ps_types);

struct Utilization {
    double cpu = 0.0;
    double ram = 0.0;
    double disk = 0.0;
    double comprehensive = 0.0;
    bool empty = true;
};

// Aggregate demand over aggregate capacity of the activated servers, per
// resource; the comprehensive figure is their equal-weight mean. An empty
// placement reports zeros with the empty flag set.
Utilization cluster_utilization(const Instance& inst, const Placement& p);

// Equal-weight mean of the three fill ratios of a single server.
double server_utilization(const Resources& load, const Resources& capacity);

Resources server_load(const Instance& inst, const ActivatedPs& server);

// Structural and capacity checks. With complete=true additionally requires
// every instance VM to appear exactly once. Returns human-readable
// violations; empty means the placement is sound.
std::vector<std::string> check_placement(const Instance& inst, const Placement& p,
                                         bool complete);

struct PlacementFile {
    std::uint64_t instance_hash = 0;
    std::string solver;
    std::uint64_t seed = 0;
    Placement placement;
};

std::string serialize_placement(const PlacementFile& pf, const Instance& inst);
void save_placement(const PlacementFile& pf, const Instance& inst, const std::string& path);
// Server type ids in the file are resolved against inst.ps_types.
PlacementFile parse_placement(std::istream& in, const Instance& inst);
PlacementFile load_placement(const std::string& path, const Instance& inst);

}  // namespace vmplace

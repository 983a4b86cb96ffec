#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vmplace/types.hpp"

namespace vmplace {

// One VM to place: the catalog type it was drawn from plus its concrete
// demand. Demands are carried per request so instances loaded from files
// are self-contained.
struct VmRequest {
    int type_id = 0;
    Resources demand;
};

struct Instance {
    std::vector<VmRequest> vm_requests;
    std::vector<PsType> ps_types;
    std::vector<std::int64_t> ps_availability;  // aligned with ps_types

    int num_vms() const { return static_cast<int>(vm_requests.size()); }
    int num_ps_types() const { return static_cast<int>(ps_types.size()); }

    Resources total_demand() const;

    // FNV-1a over the canonical serialization; ties placement files to the
    // instance they were produced from.
    std::uint64_t content_hash() const;
};

// The three production server shapes.
std::vector<PsType> builtin_ps_types();

// The fixed 100-entry VM catalog: twenty (cpu, ram) shapes, each offered
// with disks of 100..500 GB.
const std::vector<VmType>& builtin_vm_catalog();

inline constexpr std::int64_t kUnboundedPs = -1;

// Draws num_vms types i.i.d. uniformly from the catalog. ps_per_type < 0
// means effectively unbounded server supply (num_vms of each type, enough
// for any placement).
Instance generate_instance(int num_vms, std::uint64_t seed,
                           std::int64_t ps_per_type = kUnboundedPs);

std::string serialize_instance(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);
Instance parse_instance(std::istream& in);
Instance load_instance(const std::string& path);

std::string hash_hex(std::uint64_t hash);

}  // namespace vmplace

#include <algorithm>
#include <set>

#include "doctest.h"
#include "vmplace/allocation.hpp"
#include "vmplace/consolidation.hpp"
#include "vmplace/decomposition.hpp"
#include "vmplace/instance.hpp"
#include "vmplace/placement.hpp"
#include "vmplace/rng.hpp"

using namespace vmplace;

namespace {

Instance make_instance(std::vector<Resources> demands, std::int64_t per_type = 100) {
    Instance inst;
    inst.ps_types = builtin_ps_types();
    inst.ps_availability.assign(3, per_type);
    for (std::size_t i = 0; i < demands.size(); ++i)
        inst.vm_requests.push_back({static_cast<int>(i) + 1, demands[i]});
    return inst;
}

std::multiset<int> placed_vms(const Placement& p) {
    std::multiset<int> vms;
    for (const auto& server : p.servers)
        for (const int vm : server.loaded) vms.insert(vm);
    return vms;
}

}  // namespace

TEST_CASE("under-filled servers are released and their VMs re-migrated") {
    // server A is exactly full and survives untouched; B and C have slack
    // on every axis, so their three VMs pool up and repack into one General
    const Instance inst = make_instance({
        {28, 64, 600},   // 0: A
        {28, 64, 600},   // 1: A
        {1, 1, 100},     // 2: B
        {55, 127, 1100}, // 3: C
    });

    std::vector<Placement> per_task(2);
    per_task[0].servers = {{0, {0, 1}}, {0, {2}}};
    per_task[1].servers = {{0, {3}}};

    // every activation already counted against supply; releases hand it back
    const Placement merged = remigrate_and_merge(per_task, inst, {0, 0, 0});

    REQUIRE(merged.num_servers() == 2);
    CHECK(merged.servers[0].ps_type == 0);
    CHECK(merged.servers[0].loaded == std::vector<int>{0, 1});  // kept verbatim
    CHECK(merged.servers[1].ps_type == 0);
    // pool keeps release order: VM 2 (task 0) enters before VM 3 (task 1)
    CHECK(merged.servers[1].loaded == std::vector<int>{2, 3});
    CHECK(placement_cost(merged, inst.ps_types) == 698);
    CHECK(check_placement(inst, merged, true).empty());
}

TEST_CASE("a placement of full servers merges to itself") {
    const Instance inst = make_instance({
        {56, 128, 1200},
        {84, 256, 2400},
    });
    std::vector<Placement> per_task(2);
    per_task[0].servers = {{0, {0}}};
    per_task[1].servers = {{1, {1}}};

    const Placement merged = remigrate_and_merge(per_task, inst, {0, 0, 0});
    REQUIRE(merged.num_servers() == 2);
    CHECK(merged.servers[0].ps_type == 0);
    CHECK(merged.servers[0].loaded == std::vector<int>{0});
    CHECK(merged.servers[1].ps_type == 1);
    CHECK(merged.servers[1].loaded == std::vector<int>{1});
}

TEST_CASE("a server full on one axis only is still kept") {
    // disk exactly at capacity, cpu and ram far below: no strict surplus
    const Instance inst = make_instance({{1, 1, 1200}});
    std::vector<Placement> per_task(1);
    per_task[0].servers = {{0, {0}}};

    const Placement merged = remigrate_and_merge(per_task, inst, {0, 0, 0});
    REQUIRE(merged.num_servers() == 1);
    CHECK(merged.servers[0].loaded == std::vector<int>{0});
}

TEST_CASE("released supply is reusable even with nothing else remaining") {
    const Instance inst = make_instance({{1, 1, 100}}, 1);
    std::vector<Placement> per_task(1);
    per_task[0].servers = {{0, {0}}};  // consumes the only General

    const Placement merged = remigrate_and_merge(per_task, inst, {0, 1, 1});
    REQUIRE(merged.num_servers() == 1);
    CHECK(merged.servers[0].ps_type == 0);  // the released General, not a LargeRAM
    CHECK(check_placement(inst, merged, true).empty());
}

TEST_CASE("the re-migration pool keeps VMs in release order") {
    const Instance inst = make_instance({
        {1, 1, 100},  // 0
        {2, 1, 100},  // 1
        {2, 4, 100},  // 2
        {2, 4, 100},  // 3
        {2, 4, 300},  // 4
    });
    std::vector<Placement> per_task(1);
    per_task[0].servers = {{0, {0}}, {0, {1}}, {0, {2}}, {0, {3}}, {0, {4}}};

    const Placement merged = remigrate_and_merge(per_task, inst, {0, 0, 0});
    // everything fits one General; commit order follows the pool, which is
    // the order the servers were released in, not sorted by demand
    REQUIRE(merged.num_servers() == 1);
    CHECK(merged.servers[0].loaded == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("merging conserves the VM multiset and stays feasible") {
    Rng rng(0x4E57u);
    for (int trial = 0; trial < 100; ++trial) {
        const int v = 4 + static_cast<int>(rng.index(60));
        const Instance inst = generate_instance(v, 3000 + trial);
        const int per = 2 + static_cast<int>(rng.index(static_cast<std::size_t>(v / 2)));
        const auto tasks = split(inst, std::min(per, v), trial);

        std::vector<std::int64_t> budget = inst.ps_availability;
        std::vector<Placement> per_task;
        std::multiset<int> before;
        for (const auto& task : tasks) {
            std::vector<AllocItem> items;
            for (const int vm : task.vm_indices) {
                items.push_back({vm, inst.vm_requests[vm].demand});
                before.insert(vm);
            }
            per_task.push_back(greedy_allocate(items, inst.ps_types, task.ps_budget));
            for (const auto& server : per_task.back().servers) --budget[server.ps_type];
        }

        const Placement merged = remigrate_and_merge(per_task, inst, budget);
        CHECK(placed_vms(merged) == before);
        CHECK(check_placement(inst, merged, false).empty());
        for (const auto& server : merged.servers) CHECK(!server.loaded.empty());
    }
}

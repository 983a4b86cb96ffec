#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include "doctest.h"
#include "vmplace/allocation.hpp"
#include "vmplace/baselines.hpp"
#include "vmplace/instance.hpp"
#include "vmplace/placement.hpp"
#include "vmplace/rng.hpp"

using namespace vmplace;

namespace {

Instance make_instance(std::vector<Resources> demands, std::vector<std::int64_t> avail) {
    Instance inst;
    inst.ps_types = builtin_ps_types();
    inst.ps_availability = std::move(avail);
    for (std::size_t i = 0; i < demands.size(); ++i)
        inst.vm_requests.push_back({static_cast<int>(i) + 1, demands[i]});
    return inst;
}

// independent optimum for tiny instances: enumerate every set partition of
// the VMs (restricted growth strings) and every server-type choice per
// block, with no pruning at all
std::optional<CostCenti> brute_force_optimum(const Instance& inst) {
    const int V = inst.num_vms();
    const int L = inst.num_ps_types();
    std::vector<int> assign(V, 0);
    std::optional<CostCenti> best;

    const auto price_partition = [&](int blocks) {
        std::vector<Resources> load(blocks, Resources{0, 0, 0});
        for (int v = 0; v < V; ++v) load[assign[v]] += inst.vm_requests[v].demand;

        std::vector<std::int64_t> budget = inst.ps_availability;
        const std::function<void(int, CostCenti)> pick = [&](int b, CostCenti cost) {
            if (b == blocks) {
                if (!best || cost < *best) best = cost;
                return;
            }
            for (int l = 0; l < L; ++l) {
                if (budget[l] <= 0 || !load[b].fits_within(inst.ps_types[l].capacity)) continue;
                --budget[l];
                pick(b + 1, cost + inst.ps_types[l].cost);
                ++budget[l];
            }
        };
        pick(0, 0);
    };

    const std::function<void(int, int)> walk = [&](int i, int blocks) {
        if (i == V) {
            price_partition(blocks);
            return;
        }
        for (int b = 0; b <= blocks; ++b) {
            assign[i] = b;
            walk(i + 1, std::max(blocks, b + 1));
        }
    };
    walk(0, 0);
    return best;
}

}  // namespace

TEST_CASE("ffd sorts by descending demand and first-fits in creation order") {
    // sorted: the RAM-filling VM, the medium, the tiny; the medium cannot
    // join the first General (no RAM left) and opens the second, which the
    // tiny one then joins
    const Instance inst =
        make_instance({{1, 1, 100}, {16, 128, 500}, {8, 8, 300}}, {100, 100, 100});
    const Placement p = ffd_solve(inst);

    REQUIRE(p.num_servers() == 2);
    CHECK(p.servers[0].ps_type == 0);
    CHECK(p.servers[0].loaded == std::vector<int>{1});
    CHECK(p.servers[1].ps_type == 0);
    CHECK(p.servers[1].loaded == std::vector<int>{2, 0});
    CHECK(placement_cost(p, inst.ps_types) == 698);
    CHECK(check_placement(inst, p, true).empty());
}

TEST_CASE("ffd opens the cheapest shape that fits the triggering VM") {
    SUBCASE("RAM beyond General forces a LargeRAM") {
        const Instance inst = make_instance({{1, 200, 100}}, {100, 100, 100});
        const Placement p = ffd_solve(inst);
        REQUIRE(p.num_servers() == 1);
        CHECK(p.servers[0].ps_type == 1);
    }
    SUBCASE("CPU beyond LargeRAM forces a HighPerformance") {
        const Instance inst = make_instance({{100, 1, 100}}, {100, 100, 100});
        const Placement p = ffd_solve(inst);
        REQUIRE(p.num_servers() == 1);
        CHECK(p.servers[0].ps_type == 2);
    }
    SUBCASE("equal price breaks toward the lower type id") {
        Instance inst;
        inst.ps_types = {{4, "A", {10, 10, 100}, 100}, {2, "B", {20, 20, 200}, 100}};
        inst.ps_availability = {5, 5};
        inst.vm_requests = {{1, {5, 5, 50}}};
        const Placement p = ffd_solve(inst);
        REQUIRE(p.num_servers() == 1);
        CHECK(p.servers[0].ps_type == 1);  // type id 2 beats type id 4
    }
}

TEST_CASE("ffd places equal VMs in index order") {
    const Instance inst =
        make_instance({{8, 8, 300}, {8, 8, 300}, {8, 8, 300}}, {100, 100, 100});
    const Placement p = ffd_solve(inst);
    REQUIRE(p.num_servers() == 1);
    CHECK(p.servers[0].loaded == std::vector<int>{0, 1, 2});
}

TEST_CASE("ffd respects and exhausts supply") {
    SUBCASE("falls over to a pricier shape when the cheap one runs out") {
        const Instance inst = make_instance(
            {{28, 64, 600}, {28, 64, 600}, {28, 64, 600}}, {1, 1, 0});
        const Placement p = ffd_solve(inst);
        REQUIRE(p.num_servers() == 2);
        CHECK(p.servers[0].ps_type == 0);
        CHECK(p.servers[0].loaded == std::vector<int>{0, 1});
        CHECK(p.servers[1].ps_type == 1);
    }
    SUBCASE("reports the VM that ran out of room") {
        const Instance inst = make_instance(
            {{28, 64, 600}, {28, 64, 600}, {28, 64, 600}}, {1, 0, 0});
        CHECK_THROWS_WITH_AS(ffd_solve(inst), doctest::Contains("fits no server type"),
                             AllocationError);
    }
}

TEST_CASE("ffd solutions are valid and deterministic on generated instances") {
    for (const int v : {1, 17, 230}) {
        const Instance inst = generate_instance(v, 7000 + v);
        const Placement p = ffd_solve(inst);
        CHECK(check_placement(inst, p, true).empty());
        const Placement q = ffd_solve(inst);
        REQUIRE(p.num_servers() == q.num_servers());
        for (int s = 0; s < p.num_servers(); ++s) CHECK(p.servers[s].loaded == q.servers[s].loaded);
    }
}

TEST_CASE("the single-factorial search improves monotonically and stays valid") {
    const Instance inst = generate_instance(40, 12);
    MfeaConfig cfg;
    cfg.individuals_per_task = 5;
    cfg.max_iterations = 4;
    cfg.seed = 3;

    const SfeaResult result = run_sfea(inst, cfg);
    CHECK(check_placement(inst, result.placement, true).empty());
    CHECK(result.trace.refill_events == 0);
    REQUIRE(result.trace.rows.size() == 5);

    CostCenti last = -1;
    for (const auto& row : result.trace.rows) {
        CHECK(row.task_index == 1);
        if (last >= 0) CHECK(row.best_cost <= last);
        last = row.best_cost;
    }
    CHECK(result.trace.rows.back().best_cost == placement_cost(result.placement, inst.ps_types));

    SUBCASE("same seed, same answer") {
        const SfeaResult again = run_sfea(inst, cfg);
        REQUIRE(again.placement.num_servers() == result.placement.num_servers());
        for (int s = 0; s < result.placement.num_servers(); ++s)
            CHECK(again.placement.servers[s].loaded == result.placement.servers[s].loaded);
    }
}

TEST_CASE("exact placement of hand-solvable instances") {
    SUBCASE("one small VM buys one General") {
        const auto r = exact_solve(make_instance({{1, 1, 100}}, {5, 5, 5}));
        CHECK(r.cost == 349);
        REQUIRE(r.placement.num_servers() == 1);
        CHECK(r.placement.servers[0].ps_type == 0);
    }
    SUBCASE("a RAM-heavy VM buys a LargeRAM") {
        const auto r = exact_solve(make_instance({{1, 200, 100}}, {5, 5, 5}));
        CHECK(r.cost == 436);
        CHECK(r.placement.servers[0].ps_type == 1);
    }
    SUBCASE("two half Generals share one server") {
        const auto r = exact_solve(make_instance({{28, 64, 600}, {28, 64, 600}}, {5, 5, 5}));
        CHECK(r.cost == 349);
        REQUIRE(r.placement.num_servers() == 1);
    }
    SUBCASE("a LargeRAM undercuts the two Generals greed would buy") {
        const Instance inst =
            make_instance({{16, 128, 500}, {1, 1, 100}, {8, 8, 300}}, {5, 5, 5});
        const auto r = exact_solve(inst);
        CHECK(r.cost == 436);
        CHECK(check_placement(inst, r.placement, true).empty());
    }
    SUBCASE("tight supply forces the pricier second server") {
        const std::vector<Resources> two_full = {{56, 128, 1200}, {56, 128, 1200}};
        CHECK(exact_solve(make_instance(two_full, {2, 5, 5})).cost == 698);
        CHECK(exact_solve(make_instance(two_full, {1, 5, 5})).cost == 785);
    }
}

TEST_CASE("exact placement rejects what it cannot solve") {
    CHECK_THROWS_WITH_AS(exact_solve(make_instance({{999, 1, 1}}, {5, 5, 5})),
                         doctest::Contains("no feasible placement"), std::runtime_error);
    CHECK_THROWS_WITH_AS(exact_solve(make_instance({{1, 1, 100}}, {0, 0, 0})),
                         doctest::Contains("no feasible placement"), std::runtime_error);

    std::vector<Resources> eleven(11, Resources{1, 1, 100});
    CHECK_THROWS_WITH_AS(exact_solve(make_instance(eleven, {99, 99, 99})),
                         doctest::Contains("at most 10"), std::runtime_error);

    CHECK_THROWS_WITH_AS(exact_solve(make_instance({}, {5, 5, 5})),
                         doctest::Contains("no VMs"), std::runtime_error);
}

TEST_CASE("branch and bound agrees with exhaustive enumeration") {
    const auto& cat = builtin_vm_catalog();
    Rng rng(0xE4AC7u);
    int solved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int v = 1 + static_cast<int>(rng.index(5));
        std::vector<Resources> demands;
        for (int i = 0; i < v; ++i) demands.push_back(cat[rng.index(100)].demand);
        // occasionally strangle supply to exercise infeasibility and forced
        // second choices
        const std::int64_t cap = rng.index(4) == 0 ? static_cast<std::int64_t>(rng.index(2)) : 5;
        const Instance inst = make_instance(std::move(demands), {cap, cap, cap});

        const auto want = brute_force_optimum(inst);
        if (!want) {
            CHECK_THROWS_AS(exact_solve(inst), std::runtime_error);
            continue;
        }
        const auto got = exact_solve(inst);
        CHECK(got.cost == *want);
        CHECK(check_placement(inst, got.placement, true).empty());
        ++solved;
    }
    CHECK(solved >= 30);  // the suite must mostly exercise the feasible path
}

TEST_CASE("exact never beats its own relaxation nor loses to the heuristics") {
    Rng rng(0xB0B0u);
    for (int trial = 0; trial < 40; ++trial) {
        const int v = 1 + static_cast<int>(rng.index(6));
        const Instance inst = generate_instance(v, 5000 + trial);
        const auto exact = exact_solve(inst);

        CHECK(static_cast<double>(exact.cost) / 100.0 >=
              lower_bound(inst) - 1e-9);
        CHECK(placement_cost(ffd_solve(inst), inst.ps_types) >= exact.cost);

        std::vector<AllocItem> items;
        for (int i = 0; i < v; ++i) items.push_back({i, inst.vm_requests[i].demand});
        const Placement greedy = greedy_allocate(items, inst.ps_types, inst.ps_availability);
        CHECK(placement_cost(greedy, inst.ps_types) >= exact.cost);
    }
}

TEST_CASE("the demand relaxation prices known loads exactly") {
    SUBCASE("one tiny VM is disk-bound") {
        // cheapest disk rate is 5.45 / 3600 per GB: 100 GB cost 0.1513888...,
        // above the cpu (0.0487) and ram (0.0170) terms
        const Instance inst = make_instance({{1, 1, 100}}, {5, 5, 5});
        CHECK(lower_bound(inst) == doctest::Approx(0.15138888888889).epsilon(1e-9));
    }
    SUBCASE("a full General is cpu-bound at the HighPerformance rate") {
        const Instance inst = make_instance({{56, 128, 1200}}, {5, 5, 5});
        CHECK(lower_bound(inst) == doctest::Approx(2.725).epsilon(1e-12));
    }
    SUBCASE("twelve disk-heavy VMs") {
        std::vector<Resources> demands(12, Resources{1, 1, 500});
        const Instance inst = make_instance(std::move(demands), {50, 50, 50});
        CHECK(lower_bound(inst) == doctest::Approx(9.08333333333333).epsilon(1e-9));
    }
    SUBCASE("no VMs, no cost") {
        CHECK(lower_bound(make_instance({}, {5, 5, 5})) == 0.0);
    }
}

#include "vmplace/placement.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace vmplace {

CostCenti placement_cost(const Placement& p, const std::vector<PsType>& ps_types) {
    CostCenti total = 0;
    for (const auto& server : p.servers) total += ps_types.at(server.ps_type).cost;
    return total;
}

Resources server_load(const Instance& inst, const ActivatedPs& server) {
    Resources load;
    for (const int vm : server.loaded) load += inst.vm_requests.at(vm).demand;
    return load;
}

double server_utilization(const Resources& load, const Resources& capacity) {
    return (static_cast<double>(load.cpu) / capacity.cpu +
            static_cast<double>(load.ram) / capacity.ram +
            static_cast<double>(load.disk) / capacity.disk) /
           3.0;
}

Utilization cluster_utilization(const Instance& inst, const Placement& p) {
    Utilization u;
    if (p.servers.empty()) return u;

    Resources demand, capacity;
    for (const auto& server : p.servers) {
        demand += server_load(inst, server);
        capacity += inst.ps_types.at(server.ps_type).capacity;
    }
    u.cpu = static_cast<double>(demand.cpu) / capacity.cpu;
    u.ram = static_cast<double>(demand.ram) / capacity.ram;
    u.disk = static_cast<double>(demand.disk) / capacity.disk;
    u.comprehensive = (u.cpu + u.ram + u.disk) / 3.0;
    u.empty = false;
    return u;
}

std::vector<std::string> check_placement(const Instance& inst, const Placement& p,
                                         bool complete) {
    std::vector<std::string> issues;
    std::vector<int> placed(inst.num_vms(), 0);

    for (std::size_t s = 0; s < p.servers.size(); ++s) {
        const auto& server = p.servers[s];
        const std::string where = "server " + std::to_string(s);
        if (server.ps_type < 0 || server.ps_type >= inst.num_ps_types()) {
            issues.push_back(where + ": bad ps type index");
            continue;
        }
        if (server.loaded.empty()) issues.push_back(where + ": no VMs loaded");

        Resources load;
        for (const int vm : server.loaded) {
            if (vm < 0 || vm >= inst.num_vms()) {
                issues.push_back(where + ": bad vm index " + std::to_string(vm));
                continue;
            }
            if (++placed[vm] == 2) {
                issues.push_back("vm " + std::to_string(vm) + " placed more than once");
            }
            load += inst.vm_requests[vm].demand;
        }
        if (!load.fits_within(inst.ps_types[server.ps_type].capacity)) {
            issues.push_back(where + ": capacity exceeded");
        }
    }

    // each activated server draws one unit of that type's supply
    std::vector<std::int64_t> used(inst.num_ps_types(), 0);
    for (const auto& server : p.servers) {
        if (server.ps_type >= 0 && server.ps_type < inst.num_ps_types()) ++used[server.ps_type];
    }
    for (int t = 0; t < inst.num_ps_types(); ++t) {
        if (used[t] > inst.ps_availability[t]) {
            issues.push_back("ps type " + inst.ps_types[t].name + " oversubscribed");
        }
    }

    if (complete) {
        for (int vm = 0; vm < inst.num_vms(); ++vm) {
            if (placed[vm] == 0) issues.push_back("vm " + std::to_string(vm) + " not placed");
        }
    }
    return issues;
}

std::string serialize_placement(const PlacementFile& pf, const Instance& inst) {
    std::ostringstream out;
    out << hash_hex(pf.instance_hash) << ',' << pf.solver << ',' << pf.seed << '\n';
    for (std::size_t s = 0; s < pf.placement.servers.size(); ++s) {
        const auto& server = pf.placement.servers[s];
        out << s << ',' << inst.ps_types.at(server.ps_type).type_id << ',';
        for (std::size_t i = 0; i < server.loaded.size(); ++i) {
            if (i > 0) out << ';';
            out << server.loaded[i];
        }
        out << '\n';
    }
    return out.str();
}

void save_placement(const PlacementFile& pf, const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << serialize_placement(pf, inst);
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

int parse_int(const std::string& s, const char* what) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::runtime_error(std::string("placement parse error: bad ") + what + ": " + s);
    }
    return v;
}

}  // namespace

PlacementFile parse_placement(std::istream& in, const Instance& inst) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("placement parse error: empty input");

    PlacementFile pf;
    {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw std::runtime_error("placement parse error: bad header: " + line);
        }
        const std::string hash = line.substr(0, c1);
        pf.solver = line.substr(c1 + 1, c2 - c1 - 1);
        const std::string seed = line.substr(c2 + 1);
        if (hash.size() != 16) throw std::runtime_error("placement parse error: bad hash: " + hash);
        pf.instance_hash = std::stoull(hash, nullptr, 16);
        pf.seed = std::stoull(seed);
    }

    int expected_idx = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw std::runtime_error("placement parse error: bad server line: " + line);
        }
        if (parse_int(line.substr(0, c1), "server index") != expected_idx++) {
            throw std::runtime_error("placement parse error: server indices must ascend from 0");
        }
        ActivatedPs server;
        const int type_id = parse_int(line.substr(c1 + 1, c2 - c1 - 1), "ps type_id");
        server.ps_type = -1;
        for (int t = 0; t < inst.num_ps_types(); ++t) {
            if (inst.ps_types[t].type_id == type_id) {
                server.ps_type = t;
                break;
            }
        }
        if (server.ps_type < 0) {
            throw std::runtime_error("placement parse error: unknown ps type_id " +
                                     std::to_string(type_id));
        }
        std::size_t start = c2 + 1;
        while (start <= line.size()) {
            const auto semi = line.find(';', start);
            const std::string tok =
                semi == std::string::npos ? line.substr(start) : line.substr(start, semi - start);
            server.loaded.push_back(parse_int(tok, "vm index"));
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
        pf.placement.servers.push_back(std::move(server));
    }
    return pf;
}

PlacementFile load_placement(const std::string& path, const Instance& inst) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open placement file: " + path);
    return parse_placement(in, inst);
}

}  // namespace vmplace

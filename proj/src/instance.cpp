#include "vmplace/instance.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "vmplace/rng.hpp"

namespace vmplace {

std::string format_centi(CostCenti value) {
    const bool neg = value < 0;
    CostCenti v = neg ? -value : value;
    std::string s = std::to_string(v / 100);
    const CostCenti frac = v % 100;
    s += '.';
    s += static_cast<char>('0' + frac / 10);
    s += static_cast<char>('0' + frac % 10);
    return neg ? "-" + s : s;
}

CostCenti parse_centi(const std::string& text) {
    const auto dot = text.find('.');
    const std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
    if (frac.size() > 2) throw std::runtime_error("cost has more than two decimals: " + text);
    while (frac.size() < 2) frac += '0';
    const bool neg = !whole.empty() && whole[0] == '-';
    const CostCenti w = std::stoll(whole.empty() || whole == "-" ? "0" : whole);
    const CostCenti f = std::stoll(frac);
    const CostCenti v = (neg ? -w : w) * 100 + f;
    return neg ? -v : v;
}

Resources Instance::total_demand() const {
    Resources sum;
    for (const auto& vm : vm_requests) sum += vm.demand;
    return sum;
}

std::vector<PsType> builtin_ps_types() {
    return {
        {1, "General", {56, 128, 1200}, 349},
        {2, "LargeRAM", {84, 256, 2400}, 436},
        {3, "HighPerformance", {112, 192, 3600}, 545},
    };
}

const std::vector<VmType>& builtin_vm_catalog() {
    static const std::vector<VmType> catalog = [] {
        std::vector<VmType> types;
        types.reserve(100);
        // Twenty (cpu, ram) shapes: cpu in {1,2,4,8,16}, ram = cpu * {1,2,4,8};
        // each shape comes with disks of 100..500 GB.
        for (int t = 1; t <= 100; ++t) {
            const int group = (t - 1) / 5;
            const int cpu = 1 << (group / 4);
            const int ram = cpu * (1 << (group % 4));
            const int disk = 100 * ((t - 1) % 5 + 1);
            types.push_back({t, {cpu, ram, disk}});
        }
        return types;
    }();
    return catalog;
}

Instance generate_instance(int num_vms, std::uint64_t seed, std::int64_t ps_per_type) {
    if (num_vms < 1) throw std::runtime_error("generate_instance: num_vms must be >= 1");
    const auto& catalog = builtin_vm_catalog();

    Instance inst;
    inst.ps_types = builtin_ps_types();
    const std::int64_t avail = ps_per_type < 0 ? num_vms : ps_per_type;
    inst.ps_availability.assign(inst.ps_types.size(), avail);

    Rng rng(derive_seed(seed, Stream::Generator));
    inst.vm_requests.reserve(num_vms);
    for (int i = 0; i < num_vms; ++i) {
        const auto& t = catalog[rng.index(catalog.size())];
        inst.vm_requests.push_back({t.type_id, t.demand});
    }
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << inst.num_vms() << ' ' << inst.num_ps_types() << '\n';
    for (const auto& ps : inst.ps_types) {
        out << "ps," << ps.type_id << ',' << ps.name << ',' << ps.capacity.cpu << ','
            << ps.capacity.ram << ',' << ps.capacity.disk << ',' << format_centi(ps.cost)
            << '\n';
    }
    for (std::size_t i = 0; i < inst.ps_types.size(); ++i) {
        out << "avail," << inst.ps_types[i].type_id << ',' << inst.ps_availability[i] << '\n';
    }
    for (int i = 0; i < inst.num_vms(); ++i) {
        const auto& vm = inst.vm_requests[i];
        out << i << ',' << vm.type_id << ',' << vm.demand.cpu << ',' << vm.demand.ram << ','
            << vm.demand.disk << '\n';
    }
    return out.str();
}

std::uint64_t Instance::content_hash() const {
    const std::string text = serialize_instance(*this);
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t hash) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[hash & 0xf];
        hash >>= 4;
    }
    return s;
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << serialize_instance(inst);
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

int to_int(const std::string& s, const char* what) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::runtime_error(std::string("instance parse error: bad ") + what + ": " + s);
    }
    return v;
}

std::int64_t to_int64(const std::string& s, const char* what) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::runtime_error(std::string("instance parse error: bad ") + what + ": " + s);
    }
    return v;
}

}  // namespace

Instance parse_instance(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("instance parse error: empty input");
    std::istringstream header(line);
    int num_vms = 0, num_ps = 0;
    if (!(header >> num_vms >> num_ps)) {
        throw std::runtime_error("instance parse error: bad header: " + line);
    }
    if (num_vms < 1 || num_ps < 1) {
        throw std::runtime_error("instance parse error: header counts must be >= 1");
    }

    Instance inst;
    inst.ps_types.reserve(num_ps);
    for (int i = 0; i < num_ps; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("instance parse error: truncated ps section");
        const auto f = split_fields(line);
        if (f.size() != 7 || f[0] != "ps") {
            throw std::runtime_error("instance parse error: bad ps line: " + line);
        }
        PsType ps;
        ps.type_id = to_int(f[1], "ps type_id");
        ps.name = f[2];
        ps.capacity = {to_int(f[3], "ps cpu"), to_int(f[4], "ps ram"), to_int(f[5], "ps disk")};
        ps.cost = parse_centi(f[6]);
        if (ps.capacity.cpu <= 0 || ps.capacity.ram <= 0 || ps.capacity.disk <= 0 || ps.cost <= 0) {
            throw std::runtime_error("instance parse error: ps capacity and cost must be positive");
        }
        inst.ps_types.push_back(std::move(ps));
    }

    inst.ps_availability.assign(num_ps, 0);
    for (int i = 0; i < num_ps; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("instance parse error: truncated avail section");
        const auto f = split_fields(line);
        if (f.size() != 3 || f[0] != "avail") {
            throw std::runtime_error("instance parse error: bad avail line: " + line);
        }
        const int type_id = to_int(f[1], "avail type_id");
        if (type_id != inst.ps_types[i].type_id) {
            throw std::runtime_error("instance parse error: avail order must match ps order");
        }
        const std::int64_t count = to_int64(f[2], "avail count");
        if (count < 0) throw std::runtime_error("instance parse error: negative availability");
        inst.ps_availability[i] = count;
    }

    inst.vm_requests.reserve(num_vms);
    for (int i = 0; i < num_vms; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("instance parse error: truncated vm section");
        const auto f = split_fields(line);
        if (f.size() != 5) throw std::runtime_error("instance parse error: bad vm line: " + line);
        if (to_int(f[0], "vm index") != i) {
            throw std::runtime_error("instance parse error: vm indices must be 0-based and ascending");
        }
        VmRequest vm;
        vm.type_id = to_int(f[1], "vm type_id");
        vm.demand = {to_int(f[2], "vm cpu"), to_int(f[3], "vm ram"), to_int(f[4], "vm disk")};
        if (vm.demand.cpu <= 0 || vm.demand.ram <= 0 || vm.demand.disk <= 0) {
            throw std::runtime_error("instance parse error: vm demand must be positive");
        }
        inst.vm_requests.push_back(vm);
    }

    // A type id names one demand shape; placements would silently corrupt
    // if two requests disagreed.
    std::map<int, Resources> seen;
    for (const auto& vm : inst.vm_requests) {
        const auto [it, inserted] = seen.emplace(vm.type_id, vm.demand);
        if (!inserted && !(it->second == vm.demand)) {
            throw std::runtime_error("instance parse error: conflicting demands for vm type " +
                                     std::to_string(vm.type_id));
        }
    }
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return parse_instance(in);
}

}  // namespace vmplace

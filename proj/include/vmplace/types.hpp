#pragma once

#include <cstdint>
#include <string>

namespace vmplace {

// Server deployment costs are exact two-decimal prices. They are kept as
// integer hundredths so sums and comparisons never drift.
using CostCenti = std::int64_t;

// "3.49" <-> 349
std::string format_centi(CostCenti value);
CostCenti parse_centi(const std::string& text);

struct Resources {
    int cpu = 0;   // cores
    int ram = 0;   // GB
    int disk = 0;  // GB

    constexpr bool fits_within(const Resources& cap) const {
        return cpu <= cap.cpu && ram <= cap.ram && disk <= cap.disk;
    }

    constexpr Resources& operator+=(const Resources& o) {
        cpu += o.cpu;
        ram += o.ram;
        disk += o.disk;
        return *this;
    }
    constexpr Resources& operator-=(const Resources& o) {
        cpu -= o.cpu;
        ram -= o.ram;
        disk -= o.disk;
        return *this;
    }
    friend constexpr Resources operator+(Resources a, const Resources& b) { return a += b; }
    friend constexpr Resources operator-(Resources a, const Resources& b) { return a -= b; }
    friend constexpr bool operator==(const Resources&, const Resources&) = default;
};

struct VmType {
    int type_id = 0;
    Resources demand;
};

struct PsType {
    int type_id = 0;
    std::string name;
    Resources capacity;
    CostCenti cost = 0;
};

}  // namespace vmplace

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace vmplace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Every randomized stage draws from its own stream derived from the one
// master seed, so stages can be reordered or parallelized without
// perturbing each other's sequences.
enum class Stream : std::uint64_t {
    Split = 1,
    Init = 2,
    Mating = 3,
    Mutation = 4,
    Generator = 5,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    return splitmix64(h ^ index);
}

// mt19937_64 with hand-rolled draws. std::uniform_int_distribution and
// std::shuffle are implementation-defined, which would break the
// bit-identical-across-platforms reproducibility contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, n), unbiased via rejection
    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(index(i))]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace vmplace

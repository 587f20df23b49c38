#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gpvec {

using Rng = std::mt19937_64;

// splitmix64, the usual seed-spreading step (Steele et al., "Fast splittable
// pseudorandom number generators").
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed and a purpose tag.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose) noexcept
{
    std::uint64_t h = master;
    for (char c : purpose)
        h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    return splitmix64(h);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose, std::uint64_t index) noexcept
{
    return splitmix64(derive_seed(master, purpose) ^ splitmix64(index));
}

// Per-purpose substreams of one master seed. Selection, operator application
// and tree generation each draw from their own stream, so unrelated code
// (logging, display) cannot perturb the evolution sequence.
struct RngSet {
    Rng generation;
    Rng selection;
    Rng operators;

    explicit RngSet(std::uint64_t master)
        : generation(derive_seed(master, "generation"))
        , selection(derive_seed(master, "selection"))
        , operators(derive_seed(master, "operators"))
    {
    }
};

inline std::uint64_t random_master_seed()
{
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

} // namespace gpvec

// Counter-based random streams. Every draw is a pure function of
// (seed, indices...), so simulations are bit-reproducible regardless of
// evaluation order or thread count.
#pragma once

#include <cstdint>

namespace epiconf::rng {

// splitmix64 finalizer; the workhorse bit mixer.
std::uint64_t mix64(std::uint64_t x);

// Key derivation for nested indices (seed -> theta cell -> replicate -> draw).
std::uint64_t derive(std::uint64_t key, std::uint64_t index);
std::uint64_t derive(std::uint64_t key, std::uint64_t i, std::uint64_t j);
std::uint64_t derive(std::uint64_t key, std::uint64_t i, std::uint64_t j,
                     std::uint64_t k);

// Maps a 64-bit word to (0,1), never returning an exact endpoint.
double to_unit(std::uint64_t word);

// A keyed counter stream: the j-th uniform of the stream is
// to_unit(mix64(key + j * odd_constant)). Cheap to copy, no shared state.
class Stream {
public:
    explicit Stream(std::uint64_t key) : key_(key) {}

    double next_u01();
    double next_normal();                 // inverse-CDF transform
    double next_gamma(double shape);      // Marsaglia-Tsang, unit scale
    std::uint64_t next_word();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace epiconf::rng

#include "rng.h"

#include <cmath>

#include "numerics.h"

namespace epiconf::rng {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;  // 2^64 / golden ratio
constexpr std::uint64_t kMul1 = 0xbf58476d1ce4e5b9ull;
constexpr std::uint64_t kMul2 = 0x94d049bb133111ebull;
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x += kGamma;
    x = (x ^ (x >> 30)) * kMul1;
    x = (x ^ (x >> 27)) * kMul2;
    return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t key, std::uint64_t index) {
    return mix64(key ^ mix64(index + kGamma));
}

std::uint64_t derive(std::uint64_t key, std::uint64_t i, std::uint64_t j) {
    return derive(derive(key, i), j);
}

std::uint64_t derive(std::uint64_t key, std::uint64_t i, std::uint64_t j,
                     std::uint64_t k) {
    return derive(derive(key, i, j), k);
}

double to_unit(std::uint64_t word) {
    // 53 mantissa bits, then nudge off the endpoints.
    double u = static_cast<double>(word >> 11) * 0x1.0p-53;
    if (u <= 0.0) return 0x1.0p-53;
    if (u >= 1.0) return 1.0 - 0x1.0p-53;
    return u;
}

std::uint64_t Stream::next_word() { return mix64(key_ + (counter_++) * kGamma); }

double Stream::next_u01() { return to_unit(next_word()); }

double Stream::next_normal() { return numerics::normal_quantile(next_u01()); }

double Stream::next_gamma(double shape) {
    // Marsaglia-Tsang squeeze; for shape < 1 boost via U^(1/shape).
    if (shape < 1.0) {
        double u = next_u01();
        return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = next_normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = next_u01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace epiconf::rng

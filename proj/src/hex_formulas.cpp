#include "circpack/hex_formulas.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace circpack {

static void require_k(int k) {
    if (k < 1) throw std::invalid_argument("layer count k must be >= 1, got " + std::to_string(k));
}

std::int64_t hex_number(int k) {
    require_k(k);
    std::int64_t kk = k;
    return 3 * kk * (kk + 1) + 1;
}

std::uint64_t variant_count(int k) {
    require_k(k);
    if (k > 21) throw std::overflow_error("variant_count overflows 64 bits for k > 21");
    if (k <= 2) return 1;
    // (k-1)!/2 = 3*4*...*(k-1); empty product (=1) for k=3
    std::uint64_t m = 1;
    for (int i = 3; i < k; ++i) m *= static_cast<std::uint64_t>(i);
    return m;
}

double curved_hex_alpha(int k) {
    require_k(k);
    return std::numbers::pi / (3.0 * k);
}

double path_radius(int k) {
    require_k(k);
    return 0.5 / std::sin(std::numbers::pi / (6.0 * k));
}

double curved_hex_ratio(int k) {
    require_k(k);
    return 1.0 + 1.0 / std::sin(std::numbers::pi / (6.0 * k));
}

double curved_hex_density(int k) {
    double r = curved_hex_ratio(k);
    return static_cast<double>(hex_number(k)) / (r * r);
}

double curved_hex_density_limit() {
    return std::numbers::pi * std::numbers::pi / 12.0;
}

}  // namespace circpack

#include "artifact/rng.hpp"

#include <cmath>
#include <numbers>

namespace artifact::rng {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double Stream::gaussian(double sigma) {
    if (sigma == 0.0)
        return 0.0;
    if (has_spare_) {
        has_spare_ = false;
        return sigma * spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1], keeps log() finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return sigma * radius * std::cos(angle);
}

std::uint64_t master_seed(std::uint64_t corpus_seed, int sample) {
    return corpus_seed ^ static_cast<std::uint64_t>(sample);
}

std::uint64_t measurement_seed(std::uint64_t model_seed, int measurement_index) {
    return mix(mix(model_seed) + static_cast<std::uint64_t>(measurement_index));
}

} // namespace artifact::rng

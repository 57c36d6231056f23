#ifndef ARTIFACT_RNG_HPP
#define ARTIFACT_RNG_HPP

#include <cstdint>
#include <random>

namespace artifact::rng {

/// splitmix64 finalizer; used to derive well-separated stream seeds.
std::uint64_t mix(std::uint64_t x);

/// Seedable random stream with fully specified samplers. std::mt19937_64 is
/// bit-exact across standard libraries, but std::*_distribution is not, so
/// the samplers below are spelled out: corpora regenerate identically on any
/// conforming platform.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1), 53-bit resolution: (next() >> 11) * 2^-53.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [lo, hi], both inclusive.
    int uniform_int(int lo, int hi) {
        const int span = hi - lo + 1;
        int v = lo + static_cast<int>(uniform() * span);
        return v > hi ? hi : v; // uniform() < 1 makes this unreachable; guard anyway
    }

    /// Gaussian(0, sigma) via Box-Muller; the second deviate of each pair is
    /// cached, so draws come in a fixed, documented order.
    double gaussian(double sigma);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Stream-derivation rules shared by synthesis and tests.
/// Master pattern for sample s: corpus_seed XOR s.
std::uint64_t master_seed(std::uint64_t corpus_seed, int sample);
/// Measurement m of a sample whose model seed is model_seed:
/// mix(mix(model_seed) + m).
std::uint64_t measurement_seed(std::uint64_t model_seed, int measurement_index);

} // namespace artifact::rng

#endif

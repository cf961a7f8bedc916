#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace oimp {

/// SplitMix64 finalizer; used for seed derivation only.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the independent stream `index` under `base`.
///
/// derive_seed(base, index) = splitmix64(splitmix64(base) ^ splitmix64(index + 0x9E3779B97F4A7C15)).
/// Run r of an experiment uses derive_seed(base_seed, r), so adding runs never
/// perturbs the streams of earlier ones.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Random stream used by every stochastic operation.
///
/// The engine is mt19937_64; the derived draws are implemented here rather
/// than through <random> distributions so sequences are identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability p; p <= 0 never, p >= 1 always.
    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer on [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Independent child stream; consumes one draw from this stream.
    Rng split() { return Rng(splitmix64(engine_())); }

private:
    std::mt19937_64 engine_;
};

}  // namespace oimp

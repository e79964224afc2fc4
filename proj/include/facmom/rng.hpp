#pragma once

#include <cstdint>
#include <stdexcept>

namespace facmom {

/// Deterministic random stream built on the SplitMix64 mixing function
/// (Steele, Lea and Flood, 2014; fixed increment 0x9E3779B97F4A7C15).
///
/// The standard library engines are portable but the standard
/// distributions are not, so the uniform, normal and Poisson transforms
/// are pinned here as well.  Identical (seed, stream) pairs yield
/// identical draws on every platform; substreams derived from distinct
/// stream ids are non-overlapping for all practical lengths.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

    /// Child stream keyed by (seed, id).  Used for per-event and
    /// per-resample streams so parallel draws stay reproducible.
    [[nodiscard]] static RandomStream substream(std::uint64_t seed, std::uint64_t id) noexcept {
        RandomStream r(seed ^ mix(id + 0x5851F42D4C957F2DULL));
        r.next_u64();
        return r;
    }

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1).
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) noexcept {
        return next_u64() % n;
    }

    /// Standard normal via Box-Muller; second value of each pair is cached.
    double next_normal() noexcept;

    /// Poisson draw, exact for any mean up to 1e7.
    long next_poisson(double mean);

private:
    [[nodiscard]] static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace facmom

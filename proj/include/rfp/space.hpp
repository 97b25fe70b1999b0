#ifndef RFP_SPACE_HPP
#define RFP_SPACE_HPP

#include <cstdint>

#include "rfp/errors.hpp"

namespace rfp {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit
/// words, used as the seed mixer so outcome enumeration is identical on
/// every platform and thread schedule.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index * 0xd1342543de82ef95ULL + 1));
}

/// One outcome omega: everything random downstream is a pure function of
/// derived_seed.
struct OmegaSample {
    std::uint64_t index = 0;
    std::uint64_t derived_seed = 0;

    friend bool operator==(const OmegaSample&, const OmegaSample&) = default;
};

/// Sampled stand-in for the probability space: outcome i is the pure
/// function mix_seed(master_seed, i).
struct ProbabilitySpace {
    std::uint64_t master_seed = 0;
    std::uint64_t n_samples = 1;

    ProbabilitySpace(std::uint64_t seed, std::uint64_t n) : master_seed(seed), n_samples(n) {
        if (n == 0) throw ValidationError("ProbabilitySpace: n_samples must be positive");
    }
};

inline OmegaSample sample_omega(const ProbabilitySpace& space, std::uint64_t index) {
    if (index >= space.n_samples) throw RangeError("sample_omega: index out of range");
    return OmegaSample{index, mix_seed(space.master_seed, index)};
}

/// Deterministic per-outcome stream of uniforms; a SplitMix64 sequence
/// seeded by the outcome's derived seed.
class OmegaStream {
  public:
    explicit OmegaStream(const OmegaSample& omega) : state_(omega.derived_seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  private:
    std::uint64_t state_;
};

/// Independent substream for one outcome, e.g. to keep kernel draws and
/// free-term draws decorrelated.
inline OmegaStream tagged_stream(const OmegaSample& omega, std::uint64_t tag) {
    return OmegaStream(OmegaSample{omega.index, splitmix64(omega.derived_seed ^ splitmix64(tag))});
}

}  // namespace rfp

#endif

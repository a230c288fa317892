#pragma once

#include <cstdint>

#include "quadrep/forms.hpp"

namespace quadrep {

// SplitMix64; the fixed generator for reproducible form families
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // value in [0, bound); bound > 0 (plain modulo, documented)
    uint64_t below(uint64_t bound) { return next() % bound; }
    long long in_range(long long lo, long long hi) {  // inclusive
        return lo + static_cast<long long>(below(static_cast<uint64_t>(hi - lo + 1)));
    }
};

struct FamilySpec {
    uint64_t seed = 1;
    int k_min = 4;
    int k_max = 6;
    int count = 20;
    long long height = 5;  // entries of M in [-H, H], diagonal bump in [0, H]
    Int det_max = Int("100000000000000");
    // forms must stay scannable by the box oracle at this target
    long long oracle_xmax = 200;
    Int oracle_volume_max = Int("120000000");
};

// A = 2 M^T M + 2 diag(r), rejection-sampled for validity, primitivity, the
// determinant bound and the oracle box volume; deterministic in the seed
std::vector<QuadraticForm> generate_family(const FamilySpec& spec);

// box volume the oracle would scan for Q <= xmax
Int oracle_box_volume(const QuadraticForm& f, long long xmax);

}  // namespace quadrep

#pragma once

#include <cstdint>
#include <map>

#include "quadrep/enumeration.hpp"
#include "quadrep/interval.hpp"

namespace quadrep {

// E_d(n): integer points on the sphere |x|^2 = n, lex ascending, flattened
struct SpherePointSet {
    int d = 0;
    long long n = 0;
    std::vector<int32_t> pts;
    std::vector<uint64_t> keys;  // byte-packed coords, ascending; empty if not packable
    size_t size() const { return d > 0 ? pts.size() / d : 0; }
    const int32_t* point(size_t i) const { return pts.data() + i * d; }
};

SpherePointSet sphere_points(int d, long long n, const EnumOptions& opts = {});

// canonical orbit representatives under signed coordinate permutations:
// nonincreasing nonnegative tuples, with the orbit size as weight
struct OrbitRep {
    std::vector<int32_t> rep;
    long long weight;
};
std::vector<OrbitRep> sphere_orbit_reps(int d, long long n);

// number of other lattice points in the closed cap |x - y| <= Y around x;
// Y enters as the exact rational Y^2
long long mu_point(const SpherePointSet& e, const std::vector<int32_t>& x, const Rat& ysq);
long long mu_point(int d, long long n, const std::vector<int32_t>& x, const Rat& ysq,
                   const EnumOptions& opts = {});

struct CapStats {
    int d = 0;
    long long n = 0;
    Rat ysq;
    long long threshold = 0;
    std::vector<uint32_t> mu;                 // aligned with the point set
    std::map<long long, long long> histogram;
    Rat mean;                                 // exact (sum mu) / |E(n)|
    Rat prob_gt_threshold;                    // #{mu > threshold} / |E(n)|
};

CapStats cap_stats(int d, long long n, const Rat& ysq, long long threshold,
                   const EnumOptions& opts = {});

// ordered pairs of distinct points with <p,q> = t, for every t in [-n, n]
struct PairTable {
    int d = 0;
    long long n = 0;
    long long esize = 0;
    std::vector<long long> counts;  // index t + n
    long long at(long long t) const { return counts[t + n]; }
};

PairTable pair_table(int d, long long n, const EnumOptions& opts = {});
PairTable pair_table_naive(int d, long long n);  // plain double loop (oracle)

// A_d(n,t) through the orthogonal-lattice construction: choose v = p - q in
// E_d(2(n-t)), then count w = p + q in Z^d ∩ v^⊥ with |w|^2 = 2(n+t) and
// w ≡ v (mod 2Z^d); exact match with pair_table
Int pair_count_via_ortho(int d, long long n, long long t, const EnumOptions& opts = {});

// both sides of <mu> = (1/|E|) sum_{t >= n - Y^2/2, t < n} A_d(n,t), computed
// independently (cap scan vs pair table)
std::pair<Rat, Rat> mean_mu_identity(int d, long long n, const Rat& ysq,
                                     const EnumOptions& opts = {});

// batch variant: one point set, one offset scan and one pair table for a
// whole list of cap sizes
std::vector<std::pair<Rat, Rat>> mean_mu_identity_multi(int d, long long n,
                                                        const std::vector<Rat>& ysqs,
                                                        const EnumOptions& opts = {});

struct CoveringReport {
    int d = 0;
    long long n = 0;
    Rat ysq;
    long long threshold;   // mu > threshold, default floor(log n)
    long long esize = 0;
    Rat prob;
    bool above_half = false;
};

CoveringReport covering_check(int d, long long n, const Rat& ysq, long long threshold = -1,
                              const EnumOptions& opts = {});

// #{v in E_d(m) : content(v) = l}, nonzero only when l^2 | m
std::map<long long, long long> content_histogram(int d, long long m);

}  // namespace quadrep

#pragma once

#include <cstdint>
#include <vector>

#include "quadrep/forms.hpp"

namespace quadrep {

struct EnumOptions {
    long long node_budget = 1000000000;  // visited tree nodes
    bool parallel = true;                // OpenMP split of the outer coordinate
    bool progress = false;               // stderr note every 1e7 nodes
};

struct Solution {
    IVec x;
    Int value;
};

// exact r(Q, n): recursive interval pruning from the exact rational LDL^T of
// A/2; branch intervals are computed in exact rationals, never floats.
// Diagonal forms take a dedicated integer path.
Int count_representations(const QuadraticForm& f, const Int& n, const EnumOptions& opts = {});
Int count_representations_serial(const QuadraticForm& f, const Int& n,
                                 const EnumOptions& opts = {});

// all solutions of Q(x) = n, lexicographically sorted
std::vector<IVec> list_representations(const QuadraticForm& f, const Int& n,
                                       const EnumOptions& opts = {});

// all x with Q(x) <= bound, with values (used by successive minima)
std::vector<Solution> list_up_to(const QuadraticForm& f, const Int& bound,
                                 const EnumOptions& opts = {});

// r(Q, n) for every 0 <= n <= xmax in one pruned pass
std::vector<Int> bucket_counts(const QuadraticForm& f, long long xmax,
                               const EnumOptions& opts = {});
std::vector<Int> bucket_counts_serial(const QuadraticForm& f, long long xmax,
                                      const EnumOptions& opts = {});

// independent oracle: full box scan, no pruning.  The box uses the rigorous
// per-coordinate bound x_i^2 <= 2*xmax*(A^{-1})_ii (the spec's mu_1 box is not
// sound for skew forms); it contains every solution of Q <= xmax.
std::vector<Int> box_bucket_counts(const QuadraticForm& f, long long xmax,
                                   const EnumOptions& opts = {});

struct CumulativeSums {
    Int sum_r;   // sum_{n <= x} r(Q, n)
    Int sum_r2;  // sum_{n <= x} r(Q, n)^2
};
CumulativeSums cumulative_counts(const QuadraticForm& f, long long x,
                                 const EnumOptions& opts = {});

// # { z in Z^r : (z + mu)^T G (z + mu) = m } for rational symmetric positive
// definite G; exact, serial (callers parallelize above this)
using QMat = std::vector<std::vector<Rat>>;
Int count_shifted(const QMat& g, const std::vector<Rat>& mu, const Rat& m,
                  const EnumOptions& opts = {});

// integer points with |x|^2 = n in Z^d, flattened row-major, lex ascending;
// int32 coordinates (desk scale)
std::vector<int32_t> sphere_points_raw(int d, long long n, const EnumOptions& opts = {});

}  // namespace quadrep

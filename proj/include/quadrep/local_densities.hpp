#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "quadrep/forms.hpp"
#include "quadrep/interval.hpp"

namespace quadrep {

// quadratic Gauss sum G(h,m) = sum_{x mod m} e(h x^2 / m), stored exactly as
// (a + b*i) * sqrt(m)
struct GaussSumValue {
    Int a, b, m;
    bool exact = true;
    std::complex<long double> approx() const;
};

// closed form; requires gcd(h, m) = 1 (NotCoprime otherwise)
GaussSumValue gauss_sum(const Int& h, const Int& m);
// literal summation oracle, >= 60 bits of working precision
std::complex<long double> gauss_sum_direct(const Int& h, const Int& m);

// Ramanujan sum c_{p^t}(n), closed form and literal oracle
Int ramanujan_sum(const Int& n, long long p, int t);
long double ramanujan_sum_direct(const Int& n, long long p, int t);

// One Jordan constituent of Q over Z_p.
//   odd p:  kind == Scalar, Q-part = unit * p^alpha * x^2   (alpha = v_p of pivot)
//   p == 2: Scalar: pivot of the even Gram matrix is unit*2^alpha (alpha >= 1),
//              so the Q-part is unit * 2^(alpha-1) * x^2;
//           Hyperbolic / Elliptic: Q-part = 2^alpha * q1/q2 with
//              q1 = x1 x2,  q2 = x1^2 + x1 x2 + x2^2.
struct JordanBlock {
    enum Kind { Scalar = 0, Hyperbolic = 1, Elliptic = 2 };
    Kind kind = Scalar;
    int alpha = 0;
    Int unit;  // Scalar only

    int rank() const { return kind == Scalar ? 1 : 2; }
    // valuation of the block's Q-coefficient
    int q_exponent(long long p) const {
        return (p == 2 && kind == Scalar) ? alpha - 1 : alpha;
    }
};

// block list unimodularly congruent to Q over Z/p^precision;
// PrecisionTooLow when a pivot's valuation reaches the working precision
std::vector<JordanBlock> jordan_decompose(const QuadraticForm& f, long long p, int precision);

// N_t = #{x mod p^t : Q(x) == n (mod p^t)}; direct scan when p^(t k) fits the
// budget, exact Jordan-block value-type convolution otherwise
Int local_count(const QuadraticForm& f, const Int& n, long long p, int t,
                long long scan_budget = 40000000);
// scan-only oracle
Int local_count_direct(const QuadraticForm& f, const Int& n, long long p, int t,
                       long long scan_budget = 40000000);

namespace detail {
// force the convolution path regardless of size (tests)
Int local_count_types(const QuadraticForm& f, const Int& n, long long p, int t);
}

// exact local density: stabilized N_t / p^(t(k-1)) at t* = v_p(4nD)+2,
// verified at t*, t*+1, t*+2 (StabilizationFailure on mismatch).
// Good primes p not dividing 2nD evaluate by the closed quadric-count form.
Rat sigma_p(const QuadraticForm& f, const Int& n, long long p);

// formula-assisted route of the same density via exact Gauss/Ramanujan sums
// over the Jordan splitting (odd p; p = 2 falls back to counting)
Rat sigma_p_formula(const QuadraticForm& f, const Int& n, long long p);

struct SPtValue {
    Rat value;
    bool sign_determined = true;  // Jordan units pin every sign here
    Rat magnitude;                // |S(p^t)|
};
// exact S(p^t) for odd p through the Gauss-sum factorization
SPtValue S_pt_formula(const QuadraticForm& f, const Int& n, long long p, int t);

// magnitude bound on sigma_2 assembled from the 2-adic Gauss-sum table;
// tracks sizes up to absolute constants, so it is a reported check only
Interval sigma2_upper_bound(const QuadraticForm& f, const Int& n);

// archimedean density: shell limit (k/2) vol(B^k) 2^(k/2) / sqrt(D)
Interval sigma_infinity(const QuadraticForm& f);

// rho(n,Q) = n^((k-2)/2) sigma_inf prod_p sigma_p as a rigorous interval;
// primes above the cutoff enter through the tail enclosure
Interval rho(const QuadraticForm& f, const Int& n, long long cutoff);

struct DensityProfile {
    Int n;
    long long cutoff = 0;
    Interval sigma_inf;
    std::vector<std::pair<long long, Rat>> bad_primes;  // p | 2nD
    Interval finite_product;                            // prod_{p <= cutoff} sigma_p
    Interval tail;
    Interval rho_interval;
};
DensityProfile density_profile(const QuadraticForm& f, const Int& n, long long cutoff);

}  // namespace quadrep

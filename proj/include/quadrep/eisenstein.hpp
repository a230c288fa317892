#pragma once

#include "quadrep/enumeration.hpp"
#include "quadrep/local_densities.hpp"

namespace quadrep {

// r(Q,n) = rho(n,Q) + tau(n,Q): exact count against the Hardy-Littlewood
// main-term enclosure; tau is bookkept so that r is contained exactly
struct EisensteinSplit {
    Int r;
    Interval rho_iv;
    Interval tau;  // tau.lo = r - rho.hi, tau.hi = r - rho.lo
};

EisensteinSplit split(const QuadraticForm& f, const Int& n, long long cutoff,
                      const EnumOptions& opts = {});

// r sqrt(D) / (n^((k-2)/2) gcd(D,n)^(1/2) n^eps)
Interval theorem14_ratio(const QuadraticForm& f, const Int& n, const Rat& eps,
                         const Int* r_precomputed = nullptr);
// applicability D <= n^((k-3)/(2(k-2))), implied constant 1
bool theorem14_condition(const QuadraticForm& f, const Int& n);

// |tau| / (D^((k-3)/2) n^((k-1)/4) gcd(n,D)^(1/4) n^eps)
Interval lemma33_ratio(const QuadraticForm& f, const Int& n, const Rat& eps,
                       long long cutoff, const EisensteinSplit* pre = nullptr);

// r / ((1 + sum_j n^((j-2)/2)/(mu_3...mu_j)^(1/2)) n^eps)
Interval lemma41_ratio(const QuadraticForm& f, const Int& n, const Rat& eps,
                       const MinimaProfile& minima, const Int* r_precomputed = nullptr);

// (sum_{n<=x} r^2) / (x^eps (x^(k-2) + x^(k-3/2)/D^(1/2) + x^(k-1)/D^(1-1/k)))
Interval cor42_ratio(const QuadraticForm& f, long long x, const Rat& eps,
                     const Int* sum_r2_precomputed = nullptr,
                     const EnumOptions& opts = {});

// product of bad-prime densities against (nN)^eps gcd(n,N)^(1/2); the same
// bound also circulates with D in place of N, so both variants are exposed
Interval gcd_bound_ratio(const QuadraticForm& f, const Int& n, const Rat& eps,
                         bool use_level);

}  // namespace quadrep

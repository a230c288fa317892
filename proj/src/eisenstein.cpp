#include "quadrep/eisenstein.hpp"

#include "quadrep/errors.hpp"

namespace quadrep {

EisensteinSplit split(const QuadraticForm& f, const Int& n, long long cutoff,
                      const EnumOptions& opts) {
    if (f.dim < 4) fail(Err::Usage, "split needs k >= 4");
    if (n < 1) fail(Err::Usage, "split needs n >= 1");
    EisensteinSplit s;
    s.r = count_representations(f, n, opts);
    s.rho_iv = rho(f, n, cutoff);
    s.tau = Interval(Rat(s.r) - s.rho_iv.hi, Rat(s.r) - s.rho_iv.lo);
    return s;
}

namespace {

// n^(e/2) as an interval (exact for even e)
Interval half_power(const Int& n, int e) {
    if (e % 2 == 0) return Interval(Rat(pow_int(n, e / 2)));
    return sqrt_interval(Rat(pow_int(n, e)));
}

Interval quarter_power(const Int& n, int e) {
    if (e % 4 == 0) return Interval(Rat(pow_int(n, e / 4)));
    return root_interval(Rat(pow_int(n, e)), 4);
}

Interval eps_power(const Int& n, const Rat& eps) { return rational_power_interval(Rat(n), eps); }

}  // namespace

bool theorem14_condition(const QuadraticForm& f, const Int& n) {
    // D <= n^((k-3)/(2(k-2)))  <=>  D^(2(k-2)) <= n^(k-3)
    int k = f.dim;
    return pow_int(f.disc, 2 * (k - 2)) <= pow_int(n, k - 3);
}

Interval theorem14_ratio(const QuadraticForm& f, const Int& n, const Rat& eps,
                         const Int* r_precomputed) {
    Int r = r_precomputed ? *r_precomputed : count_representations(f, n);
    if (r == 0) return Interval(Rat(0));
    int k = f.dim;
    Interval denom = half_power(n, k - 2) * half_power(gcd(f.disc, n), 1) * eps_power(n, eps);
    return Interval(Rat(r)) * sqrt_interval(Rat(f.disc)) / denom;
}

Interval lemma33_ratio(const QuadraticForm& f, const Int& n, const Rat& eps, long long cutoff,
                       const EisensteinSplit* pre) {
    EisensteinSplit s = pre ? *pre : split(f, n, cutoff);
    int k = f.dim;
    Interval denom = half_power(f.disc, k - 3) * quarter_power(n, k - 1) *
                     quarter_power(gcd(n, f.disc), 1) * eps_power(n, eps);
    return interval_abs(s.tau) / denom;
}

Interval lemma41_ratio(const QuadraticForm& f, const Int& n, const Rat& eps,
                       const MinimaProfile& minima, const Int* r_precomputed) {
    Int r = r_precomputed ? *r_precomputed : count_representations(f, n);
    if (r == 0) return Interval(Rat(0));
    int k = f.dim;
    Interval denom(Rat(1));
    Int mu_prod = 1;
    for (int j = 3; j <= k; ++j) {
        mu_prod *= minima.minima[j - 1];
        denom = denom + half_power(n, j - 2) / sqrt_interval(Rat(mu_prod));
    }
    denom = denom * eps_power(n, eps);
    return Interval(Rat(r)) / denom;
}

Interval cor42_ratio(const QuadraticForm& f, long long x, const Rat& eps,
                     const Int* sum_r2_precomputed, const EnumOptions& opts) {
    if (x < 1) fail(Err::Usage, "cor42_ratio needs x >= 1");
    Int m2 = sum_r2_precomputed ? *sum_r2_precomputed : cumulative_counts(f, x, opts).sum_r2;
    int k = f.dim;
    Int xi = to_int(x);
    Interval bound = Interval(Rat(pow_int(xi, k - 2))) +
                     half_power(xi, 2 * k - 3) / sqrt_interval(Rat(f.disc)) +
                     Interval(Rat(pow_int(xi, k - 1))) /
                         (Interval(Rat(f.disc)) / root_interval(Rat(f.disc), k));
    bound = bound * eps_power(xi, eps);
    return Interval(Rat(m2)) / bound;
}

Interval gcd_bound_ratio(const QuadraticForm& f, const Int& n, const Rat& eps, bool use_level) {
    const Int& m = use_level ? f.level : f.disc;
    Rat prod(1);
    std::map<Int, int> fac = factor(n * m);
    for (const auto& [pz, e] : fac) {
        if (!pz.fits_slong_p()) fail(Err::BudgetExceeded, "gcd_bound_ratio: prime too large");
        prod *= sigma_p(f, n, pz.get_si());
    }
    prod.canonicalize();
    Interval denom = eps_power(n * m, eps) * sqrt_interval(Rat(gcd(n, m)));
    return Interval(prod) / denom;
}

}  // namespace quadrep

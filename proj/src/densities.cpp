#include <algorithm>

#include "quadrep/errors.hpp"
#include "quadrep/local_densities.hpp"

namespace quadrep {

namespace {

// sigma_p for p not dividing 2nD, from the exact point count of a
// nondegenerate quadric over F_p (all solutions are nonsingular, so
// N_t = p^((k-1)(t-1)) N_1 and the density is N_1 / p^(k-1)):
//   k even: 1 - chi((-1)^(k/2) det(A/2)) / p^(k/2)
//   k odd:  1 + chi((-1)^((k-1)/2) n det(A/2)) / p^((k-1)/2)
Rat sigma_good(const QuadraticForm& f, const Int& n, long long p) {
    int k = f.dim;
    Int pm = to_int(p);
    // chi(det(A/2)) = chi(D) * chi(2)^k since det(A/2) = D / 2^k
    int chi = jacobi(f.disc, pm) * jacobi(pow_int(Int(2), k), pm);
    if (k % 2 == 0) {
        int s = (k / 2) % 2 == 0 ? 1 : jacobi(Int(-1), pm);
        Rat out = Rat(1) - Rat(chi * s, pow_int(to_int(p), k / 2));
        out.canonicalize();
        return out;
    }
    int s = ((k - 1) / 2) % 2 == 0 ? 1 : jacobi(Int(-1), pm);
    int cn = jacobi(n, pm);
    Rat out = Rat(1) + Rat(chi * s * cn, pow_int(to_int(p), (k - 1) / 2));
    out.canonicalize();
    return out;
}

int t_star(const QuadraticForm& f, const Int& n, long long p) {
    return valuation(4 * n * f.disc, to_int(p)) + 2;
}

}  // namespace

Rat sigma_p(const QuadraticForm& f, const Int& n, long long p) {
    if (n < 1) fail(Err::Usage, "sigma_p needs n >= 1");
    if (!f.primitive) fail(Err::Usage, "sigma_p needs a primitive form");
    if ((2 * n * f.disc) % to_int(p) != 0) return sigma_good(f, n, p);
    int ts = t_star(f, n, p);
    int k = f.dim;
    Rat vals[3];
    for (int j = 0; j < 3; ++j) {
        int t = ts + j;
        Int nt = local_count(f, n, p, t);
        vals[j] = Rat(nt, pow_int(to_int(p), static_cast<unsigned long>(t) * (k - 1)));
        vals[j].canonicalize();
    }
    if (vals[0] != vals[1] || vals[1] != vals[2])
        fail(Err::StabilizationFailure, "sigma_p: counts did not stabilize at t*=" +
                                            std::to_string(ts));
    return vals[0];
}

SPtValue S_pt_formula(const QuadraticForm& f, const Int& n, long long p, int t) {
    if (p == 2) fail(Err::Usage, "S_pt_formula is the odd-p route");
    if (t == 0) return {Rat(1), true, Rat(1)};
    int k = f.dim;
    Int pm = to_int(p);
    int vd = valuation(2 * f.disc, pm);
    std::vector<JordanBlock> blocks = jordan_decompose(f, p, t + vd + 4);
    int beta = (n == 0) ? t + 2 : valuation(n, pm);
    // S(p^t) = 0 unless t <= beta+1: both inner-sum cases need v_p(n) >= t-1
    if (t > beta + 1) return {Rat(0), true, Rat(0)};

    // S(p^t) = p^(sum min(a_i,t) - tk) * prod_{a_i < t} G(a a_i, p^(t-a_i))
    // against the twisted sum over units a; everything collapses to
    //   p^E * chi(-1)^ceil(k'/2) * J * inner
    long long sum_min = 0, half_powers = 0;
    int kprime = 0;
    int jac = 1;
    for (const JordanBlock& b : blocks) {
        long long alpha = b.alpha;
        sum_min += std::min<long long>(alpha, t);
        if (alpha < t) {
            long long m = t - alpha;
            half_powers += m;
            if (m % 2 == 1) ++kprime;
            if (jacobi(b.unit, pm) < 0 && m % 2 == 1) jac = -jac;
        }
    }
    int chim1 = jacobi(Int(-1), pm);
    Int inner;
    long long inner_half = 0;
    if (kprime % 2 == 0) {
        inner = ramanujan_sum(n, p, t);
    } else {
        if (beta != t - 1) {
            inner = 0;
        } else {
            Int nprime = n / pow_int(to_int(p), t - 1);
            inner = pow_int(to_int(p), t - 1) * jacobi(-nprime, pm);
            inner_half = 1;  // one extra sqrt(p), pairs with eps_p
        }
    }
    if (inner == 0) return {Rat(0), true, Rat(0)};
    if ((half_powers + inner_half) % 2 != 0)
        fail(Err::Internal, "S_pt_formula: non-rational sqrt(p) power");
    long long eps_pairs = (kprime + (kprime % 2)) / 2;  // ceil(k'/2)
    int sign = (chim1 < 0 && eps_pairs % 2 == 1) ? -1 : 1;
    Rat val = Rat(inner * sign * jac) * Rat(pow_int(to_int(p), (half_powers + inner_half) / 2), 1);
    val *= Rat(1, pow_int(to_int(p), static_cast<unsigned long>(t) * k - sum_min));
    val.canonicalize();
    SPtValue out;
    out.value = val;
    out.sign_determined = true;
    out.magnitude = val >= 0 ? val : Rat(-val);
    return out;
}

Rat sigma_p_formula(const QuadraticForm& f, const Int& n, long long p) {
    if (n < 1) fail(Err::Usage, "sigma_p_formula needs n >= 1");
    if (p == 2) return sigma_p(f, n, 2);  // counting only at p = 2
    if ((2 * n * f.disc) % to_int(p) != 0) {
        // one nontrivial term; same closed form as the good-prime count
        Rat s = Rat(1) + S_pt_formula(f, n, p, 1).value;
        Rat g = sigma_good(f, n, p);
        if (s != g) fail(Err::Internal, "sigma_p_formula: good-prime routes disagree");
        return s;
    }
    int beta = valuation(n, to_int(p));
    Rat acc(1);
    for (int t = 1; t <= beta + 1; ++t) acc += S_pt_formula(f, n, p, t).value;
    acc.canonicalize();
    return acc;
}

Interval sigma2_upper_bound(const QuadraticForm& f, const Int& n) {
    // magnitude bound via the 2-adic Gauss-sum table: sum_{t=0}^{beta+1} 2^(t/2) prod_{i=2}^k
    // 2^min((a_i+t)/2, t) * 2^min(t, (t+beta)/2) / 2^(tk), with a_i the sorted
    // Q-exponents of the 2-adic Jordan splitting
    int k = f.dim;
    int vd = valuation(2 * f.disc, Int(2));
    int beta = valuation(n, Int(2));
    std::vector<JordanBlock> blocks = jordan_decompose(f, 2, beta + vd + 8);
    std::vector<long long> alphas;
    for (const JordanBlock& b : blocks)
        for (int r = 0; r < b.rank(); ++r) alphas.push_back(b.q_exponent(2));
    std::sort(alphas.begin(), alphas.end());
    Interval sqrt2 = sqrt_interval(Rat(2));
    Interval acc(Rat(0));
    for (int t = 0; t <= beta + 1; ++t) {
        // exponent in halves
        long long halves = t;  // 2^(t/2)
        for (int i = 1; i < k; ++i)
            halves += std::min<long long>(alphas[i] + t, 2 * t);  // (a_i+t)/2 vs t
        halves += std::min<long long>(2 * t, t + beta);
        halves -= 2LL * t * k;
        long long whole = halves >= 0 ? halves / 2 : -((-halves + 1) / 2);
        long long rem = halves - 2 * whole;  // 0 or 1
        Rat base = whole >= 0 ? Rat(pow_int(Int(2), whole)) : Rat(1, pow_int(Int(2), -whole));
        Interval term = Interval(base);
        if (rem) term = term * sqrt2;
        acc = acc + term;
    }
    return acc;
}

Interval sigma_infinity(const QuadraticForm& f) {
    // shell limit: (k/2) vol(B^k) 2^(k/2) / sqrt(D)
    int k = f.dim;
    Interval pi = pi_interval();
    Interval pipow(Rat(1));
    for (int i = 0; i < k / 2; ++i) pipow = pipow * pi;
    Rat rational_part;
    bool needs_sqrt2 = (k % 2 == 1);
    if (k % 2 == 0) {
        // (k/2) * pi^(k/2)/(k/2)! * 2^(k/2)
        Int fact = 1;
        for (int i = 2; i <= k / 2; ++i) fact *= i;
        rational_part = Rat(Int(k) * pow_int(Int(2), k / 2), 2 * fact);
    } else {
        // vol(B^k) = 2^((k+1)/2) pi^((k-1)/2) / k!!; 2^(k/2) contributes
        // 2^((k-1)/2) * sqrt(2), so the rational part is (k/2) 2^k / k!!
        Int dfact = 1;
        for (int i = k; i >= 1; i -= 2) dfact *= i;
        rational_part = Rat(Int(k) * pow_int(Int(2), k), 2 * dfact);
    }
    rational_part.canonicalize();
    Interval out = pipow * rational_part;
    Rat under = needs_sqrt2 ? Rat(2, f.disc) : Rat(1, f.disc);  // sqrt(2)/sqrt(D) folded
    under.canonicalize();
    return out * sqrt_interval(under, 128);
}

namespace {

Interval tail_interval(int k, long long cutoff) {
    // sum_{m > C} m^(-(k-1)/2) <= 2 C^((3-k)/2) / (k-3)
    if (k <= 3) fail(Err::Usage, "tail bound needs k >= 4");
    Interval cpow = (k % 2 == 1) ? Interval(Rat(pow_int(to_int(cutoff), (k - 3) / 2)))
                                 : sqrt_interval(Rat(pow_int(to_int(cutoff), k - 3)));
    Interval t = Interval(Rat(2, k - 3)) / cpow;
    if (t.hi >= 1)
        fail(Err::CutoffTooSmall, "cutoff too small for a finite tail enclosure");
    // prod(1 - x) >= 1 - sum x,  prod(1 + x) <= 1/(1 - sum x)
    return {Rat(1) - t.hi, Rat(1) / (Rat(1) - t.hi)};
}

}  // namespace

DensityProfile density_profile(const QuadraticForm& f, const Int& n, long long cutoff) {
    if (n < 1) fail(Err::Usage, "density needs n >= 1");
    if (f.dim < 4) fail(Err::Usage, "density needs k >= 4");
    DensityProfile prof;
    prof.n = n;
    prof.cutoff = cutoff;
    Int bad = 2 * n * f.disc;
    std::map<Int, int> fac = factor(bad);
    for (const auto& [pz, e] : fac) {
        if (!pz.fits_slong_p() || pz.get_si() > cutoff)
            fail(Err::CutoffTooSmall,
                 "cutoff misses prime " + pz.get_str() + " dividing 2nD");
    }
    prof.sigma_inf = sigma_infinity(f);
    Interval prod(Rat(1));
    for (long long p : primes_up_to(cutoff)) {
        Rat s = (bad % to_int(p) == 0) ? sigma_p(f, n, p) : sigma_good(f, n, p);
        if (bad % to_int(p) == 0) prof.bad_primes.emplace_back(p, s);
        prod = compress(prod * Interval(s), 256);
    }
    prof.finite_product = prod;
    prof.tail = tail_interval(f.dim, cutoff);
    Interval npow = (f.dim % 2 == 0)
                        ? Interval(Rat(pow_int(n, (f.dim - 2) / 2)))
                        : sqrt_interval(Rat(pow_int(n, f.dim - 2)));
    prof.rho_interval = npow * prof.sigma_inf * prof.finite_product * prof.tail;
    return prof;
}

Interval rho(const QuadraticForm& f, const Int& n, long long cutoff) {
    return density_profile(f, n, cutoff).rho_interval;
}

}  // namespace quadrep

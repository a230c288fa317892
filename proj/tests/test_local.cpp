#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "quadrep/errors.hpp"
#include "quadrep/family.hpp"
#include "quadrep/local_densities.hpp"

using namespace quadrep;

namespace {

IMat scaled_identity(int k, long s) {
    IMat m = imat_identity(k);
    for (int i = 0; i < k; ++i) m[i][i] = s;
    return m;
}

IMat diag(std::vector<long> d) {
    IMat m = imat_zero(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m[i][i] = d[i];
    return m;
}

IMat random_unimodular(int k, SplitMix64& rng, int steps = 8) {
    IMat u = imat_identity(k);
    for (int s = 0; s < steps; ++s) {
        int i = rng.below(k), j = rng.below(k);
        if (i == j) continue;
        long c = static_cast<long>(rng.in_range(-2, 2));
        for (int r = 0; r < k; ++r) u[r][j] += c * u[r][i];
    }
    return u;
}

// value histogram of Q mod m over (Z/m)^k -- independent oracle for the
// Jordan block congruence
std::vector<long long> value_histogram(const IMat& gram, long long m) {
    int k = static_cast<int>(gram.size());
    std::vector<long long> hist(m, 0);
    std::vector<long long> x(k, 0);
    long long total = 1;
    for (int i = 0; i < k; ++i) total *= m;
    for (long long idx = 0; idx < total; ++idx) {
        long long rest = idx;
        for (int i = 0; i < k; ++i) {
            x[i] = rest % m;
            rest /= m;
        }
        long long q = 0;
        for (int i = 0; i < k; ++i) {
            q += (gram[i][i].get_si() / 2) * x[i] % m * x[i];
            for (int j = i + 1; j < k; ++j) q += gram[i][j].get_si() * x[i] % m * x[j];
        }
        hist[((q % m) + m) % m] += 1;
    }
    return hist;
}

// synthetic Gram matrix realizing a block list (for congruence checks)
IMat blocks_to_gram(const std::vector<JordanBlock>& blocks, long long p) {
    int dim = 0;
    for (const JordanBlock& b : blocks) dim += b.rank();
    IMat g = imat_zero(dim, dim);
    int at = 0;
    for (const JordanBlock& b : blocks) {
        Int pa = pow_int(to_int(p), b.alpha);
        if (b.kind == JordanBlock::Scalar) {
            g[at][at] = (p == 2) ? Int(b.unit * pa) : Int(2 * b.unit * pa);
            at += 1;
        } else if (b.kind == JordanBlock::Hyperbolic) {
            g[at][at + 1] = g[at + 1][at] = pa;
            at += 2;
        } else {
            g[at][at] = g[at + 1][at + 1] = 2 * pa;
            g[at][at + 1] = g[at + 1][at] = pa;
            at += 2;
        }
    }
    return g;
}

}  // namespace

TEST_CASE("gauss sums: closed form examples and direct oracle") {
    GaussSumValue g13 = gauss_sum(1, 3);  // i sqrt(3)
    CHECK(g13.a == 0);
    CHECK(g13.b == 1);
    GaussSumValue g23 = gauss_sum(2, 3);  // -i sqrt(3)
    CHECK(g23.a == 0);
    CHECK(g23.b == -1);
    GaussSumValue g71 = gauss_sum(7, 1);
    CHECK(g71.a == 1);
    CHECK(g71.b == 0);
    GaussSumValue g14 = gauss_sum(1, 4);  // 2 + 2i
    CHECK(g14.a == 1);
    CHECK(g14.b == 1);
    CHECK(g14.m == 4);

    CHECK(std::abs(gauss_sum_direct(1, 1).real() - 1.0L) < 1e-12L);
    CHECK(std::abs(gauss_sum_direct(1, 2).real()) < 1e-12L);
    CHECK(std::abs(gauss_sum_direct(1, 2).imag()) < 1e-12L);

    CHECK_THROWS_AS(gauss_sum(3, 9), Error);

    for (long m = 1; m <= 99; ++m) {
        for (long h = 1; h <= m; ++h) {
            if (gcd(h, m) != 1) continue;
            GaussSumValue g = gauss_sum(h, m);
            if (m % 2 == 1) CHECK(g.a * g.a + g.b * g.b == 1);  // |G|^2 = m
            auto direct = gauss_sum_direct(h, m);
            auto closed = g.approx();
            CHECK(std::abs(direct.real() - closed.real()) < 1e-9L);
            CHECK(std::abs(direct.imag() - closed.imag()) < 1e-9L);
        }
    }
}

TEST_CASE("ramanujan sums: case table and literal oracle") {
    CHECK(ramanujan_sum(3, 3, 2) == -3);
    CHECK(ramanujan_sum(9, 3, 2) == 6);
    CHECK(ramanujan_sum(1, 3, 2) == 0);
    for (long p : {2L, 3L, 5L, 7L}) {
        for (int t = 1; t <= 3; ++t) {
            if (std::pow(p, t) > 400) continue;
            for (long n = 0; n <= 30; ++n) {
                long double lit = ramanujan_sum_direct(n, p, t);
                Int closed = ramanujan_sum(n, p, t);
                CHECK(std::abs(lit - static_cast<long double>(closed.get_d())) < 0.4L);
            }
        }
    }
}

TEST_CASE("jordan decomposition examples") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    std::vector<JordanBlock> b3 = jordan_decompose(i4, 3, 8);
    REQUIRE(b3.size() == 4);
    for (const JordanBlock& b : b3) {
        CHECK(b.kind == JordanBlock::Scalar);
        CHECK(b.alpha == 0);
        CHECK(b.unit % 3 == 1);
    }

    QuadraticForm f = validate(diag({2, 6, 6, 18}));  // 2*diag(1,3,3,9)
    std::vector<JordanBlock> bf = jordan_decompose(f, 3, 10);
    std::vector<int> exps;
    for (const JordanBlock& b : bf) exps.push_back(b.alpha);
    std::sort(exps.begin(), exps.end());
    CHECK(exps == std::vector<int>{0, 1, 1, 2});

    // 2I4 at p=2: four scalar blocks with even-Gram pivot valuation 1, unit 1
    std::vector<JordanBlock> b2 = jordan_decompose(i4, 2, 10);
    REQUIRE(b2.size() == 4);
    for (const JordanBlock& b : b2) {
        CHECK(b.kind == JordanBlock::Scalar);
        CHECK(b.alpha == 1);
        CHECK(b.unit % 8 == 1);
    }
}

TEST_CASE("jordan blocks reproduce value counts mod p^j (congruence oracle)") {
    SplitMix64 rng(17);
    FamilySpec spec;
    spec.seed = 23;
    spec.count = 4;
    spec.k_min = 3;
    spec.k_max = 4;
    spec.height = 3;
    std::vector<QuadraticForm> fam = generate_family(spec);
    fam.push_back(validate(scaled_identity(4, 2)));
    fam.push_back(validate(diag({2, 4, 12})));
    for (const QuadraticForm& f : fam) {
        for (long p : {2L, 3L}) {
            std::vector<JordanBlock> blocks = jordan_decompose(f, p, 12);
            IMat bg = blocks_to_gram(blocks, p);
            long long mod = p == 2 ? 8 : 9;
            CHECK(value_histogram(f.gram, mod) == value_histogram(bg, mod));
        }
    }
}

TEST_CASE("precision guard") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    CHECK_THROWS_AS(jordan_decompose(i4, 2, 2), Error);
}

TEST_CASE("local_count examples") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    CHECK(local_count(i4, 1, 3, 1) == 24);
    CHECK(local_count(i4, 1, 3, 0) == 1);
    CHECK(local_count(i4, 1, 2, 1) == 8);
}

TEST_CASE("type-convolution counting equals the direct scan") {
    FamilySpec spec;
    spec.seed = 31;
    spec.count = 4;
    spec.k_min = 3;
    spec.k_max = 4;
    spec.height = 3;
    std::vector<QuadraticForm> fam = generate_family(spec);
    fam.push_back(validate(scaled_identity(4, 2)));
    fam.push_back(validate(diag({2, 2, 4, 24})));
    for (const QuadraticForm& f : fam) {
        for (long p : {2L, 3L, 5L}) {
            for (int t = 1; t <= 5; ++t) {
                if (std::pow(static_cast<double>(p), t * f.dim) > 2e7) continue;
                for (long n : {0L, 1L, 2L, 3L, 6L, 12L, 18L, 48L}) {
                    Int scan = local_count_direct(f, n, p, t, 200000000);
                    Int conv = detail::local_count_types(f, n, p, t);
                    CHECK(scan == conv);
                }
            }
        }
    }
}

TEST_CASE("sigma_p examples and stabilization") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    CHECK(sigma_p(i4, 1, 3) == Rat(8, 9));
    // good primes sit inside the tail window |sigma_p - 1| <= p^-(k-1)/2
    for (long p : {3L, 5L, 7L, 11L, 13L, 17L}) {
        if ((2 * 1 * i4.disc) % p == 0) continue;
        Rat s = sigma_p(i4, 1, p);
        Rat dev = s - 1;
        if (dev < 0) dev = -dev;
        // k = 4: p^(-3/2) bound, compare squares: dev^2 <= p^-3
        CHECK(dev * dev <= Rat(1, pow_int(p, 3)));
    }
}

TEST_CASE("sigma_p equals direct stabilized ratio (small oracle)") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    for (long n : {1L, 2L, 4L, 6L}) {
        for (long p : {2L, 3L}) {
            Rat s = sigma_p(i4, n, p);
            // direct scan at a provably stabilized level
            int t = valuation(4 * Int(n) * i4.disc, to_int(p)) + 2;
            if (std::pow(static_cast<double>(p), t * 4) < 2e8) {
                Int nt = local_count_direct(i4, n, p, t, 200000000);
                Rat ratio(nt, pow_int(to_int(p), static_cast<unsigned long>(t) * 3));
                ratio.canonicalize();
                CHECK(s == ratio);
            }
        }
    }
}

TEST_CASE("sigma_p equals the Gauss-sum formula route at odd p (two routes)") {
    FamilySpec spec;
    spec.seed = 47;
    spec.count = 4;
    spec.height = 3;
    std::vector<QuadraticForm> fam = generate_family(spec);
    fam.push_back(validate(scaled_identity(4, 2)));
    for (const QuadraticForm& f : fam) {
        for (long n : {1L, 3L, 9L, 12L, 25L}) {
            for (long p : {3L, 5L, 7L, 13L}) {
                CHECK(sigma_p(f, n, p) == sigma_p_formula(f, n, p));
            }
        }
    }
}

TEST_CASE("S_pt examples") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    CHECK(S_pt_formula(i4, 1, 3, 1).value == Rat(-1, 9));
    CHECK(S_pt_formula(i4, 1, 3, 0).value == 1);
    CHECK(S_pt_formula(i4, 1, 3, 3).value == 0);  // beta < t-1
}

TEST_CASE("sigma_p invariance under unimodular change of basis") {
    SplitMix64 rng(3);
    QuadraticForm f = validate(diag({2, 4, 6, 10}));
    for (int trial = 0; trial < 3; ++trial) {
        QuadraticForm g = transform(f, random_unimodular(4, rng));
        for (long p : {2L, 3L, 5L}) CHECK(sigma_p(f, 6, p) == sigma_p(g, 6, p));
    }
}

TEST_CASE("sigma_2 against the 2-adic magnitude expression") {
    // The expression tracks magnitudes with absolute constants dropped: the
    // literal display is exceeded by real densities (observed up to ~1.6x),
    // so only a generous envelope is asserted; the precise ratio is reported
    // by verify-all.
    FamilySpec spec;
    spec.seed = 5;
    spec.count = 4;
    spec.height = 3;
    std::vector<QuadraticForm> fam = generate_family(spec);
    fam.push_back(validate(scaled_identity(4, 2)));
    fam.push_back(validate(scaled_identity(8, 2)));
    for (const QuadraticForm& f : fam)
        for (long n : {1L, 2L, 8L, 24L}) {
            Rat s2 = sigma_p(f, n, 2);
            Interval bound = sigma2_upper_bound(f, n);
            CHECK(bound.lo >= 1);  // t = 0 term
            CHECK(s2 <= bound.hi * Rat(pow_int(2, f.dim)));
        }
    // for the unscaled identity forms the display itself holds
    CHECK(sigma_p(validate(scaled_identity(4, 2)), 1, 2) <=
          sigma2_upper_bound(validate(scaled_identity(4, 2)), 1).hi);
}

TEST_CASE("sigma_infinity enclosures") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    Interval s4 = sigma_infinity(i4);  // pi^2
    Interval pi2 = pi_interval() * pi_interval();
    CHECK(s4.lo <= pi2.hi);
    CHECK(s4.hi >= pi2.lo);
    CHECK(Rat(s4.width() / s4.lo) < Rat(1, Int("1000000000000")));
    CHECK(s4.lo > 0);

    QuadraticForm i8 = validate(scaled_identity(8, 2));
    Interval s8 = sigma_infinity(i8);  // pi^4 / 6
    Interval pi4 = pi2 * pi2;
    CHECK(s8.lo <= pi4.hi / 6);
    CHECK(s8.hi >= pi4.lo / 6);

    QuadraticForm i5 = validate(scaled_identity(5, 2));
    Interval s5 = sigma_infinity(i5);  // 4 pi^2 / 3
    CHECK(s5.lo <= pi2.hi * Rat(4, 3));
    CHECK(s5.hi >= pi2.lo * Rat(4, 3));
}

TEST_CASE("rho: interval contains the exact count for I4 and I8") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    Interval r4 = rho(i4, 1, 2000);
    CHECK(r4.contains(Rat(8)));

    QuadraticForm i8 = validate(scaled_identity(8, 2));
    Interval r8 = rho(i8, 1, 2000);
    CHECK(r8.contains(Rat(16)));
}

TEST_CASE("rho: widths shrink with the cutoff; small cutoffs rejected") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    Rat w100 = rho(i4, 1, 100).width();
    Rat w1000 = rho(i4, 1, 1000).width();
    Rat w10000 = rho(i4, 1, 10000).width();
    CHECK(w1000 < w100);
    CHECK(w10000 < w1000);
    CHECK_THROWS_AS(rho(i4, 9, 2), Error);  // 3 | 2nD but cutoff = 2
}

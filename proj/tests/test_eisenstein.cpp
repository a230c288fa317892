#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadrep/eisenstein.hpp"
#include "quadrep/errors.hpp"
#include "quadrep/family.hpp"

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

}  // namespace

TEST_CASE("split: cusp part straddles zero for I8 and I4") {
    QuadraticForm i8 = validate(scaled_identity(8, 2));
    EisensteinSplit s8 = split(i8, 1, 10000);
    CHECK(s8.r == 16);
    CHECK(s8.tau.straddles_zero());
    CHECK(s8.tau.width() < Rat(1, 10));

    QuadraticForm i4 = validate(scaled_identity(4, 2));
    EisensteinSplit s4 = split(i4, 1, 10000);
    CHECK(s4.r == 8);
    CHECK(s4.tau.straddles_zero());

    // exact bookkeeping: r inside rho + tau at interval level
    CHECK(Rat(s4.r) >= s4.rho_iv.lo + s4.tau.lo);
    CHECK(Rat(s4.r) <= s4.rho_iv.hi + s4.tau.hi);
}

TEST_CASE("theorem14_ratio examples") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    Interval r = theorem14_ratio(i4, 1, Rat(1, 10));
    CHECK(r.contains(Rat(32)));  // 8 * sqrt(16) / 1
    CHECK_FALSE(theorem14_condition(i4, 1));
    CHECK(theorem14_condition(i4, 1000000 + 3));

    QuadraticForm even = validate(diag({4, 4, 4, 4}));
    CHECK(theorem14_ratio(even, 7, Rat(1, 10)).hi == 0);  // r = 0
}

TEST_CASE("lemma33_ratio: near zero when the cusp part vanishes") {
    QuadraticForm i8 = validate(scaled_identity(8, 2));
    for (long n : {1L, 10L, 50L}) {
        Interval r = lemma33_ratio(i8, n, Rat(1, 10), 10000);
        CHECK(r.lo >= 0);
        CHECK(r.hi < Rat(1, 100));
    }
}

TEST_CASE("lemma41_ratio stays finite") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    MinimaProfile m = successive_minima(i4);
    Interval r = lemma41_ratio(i4, 25, Rat(1, 10), m);
    CHECK(r.lo > 0);
    CHECK(r.hi < 1000);
    QuadraticForm even = validate(diag({4, 4, 4, 4}));
    MinimaProfile m2 = successive_minima(even);
    CHECK(lemma41_ratio(even, 7, Rat(1, 10), m2).hi == 0);
}

TEST_CASE("cor42_ratio: frozen small case") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    // sum_{n<=1} r^2 = 65; bound(1) = 1 + 1/4 + 1/8 = 11/8; ratio 520/11
    Interval r1 = cor42_ratio(i4, 1, Rat(0));
    CHECK(r1.contains(Rat(520, 11)));
    Interval r50 = cor42_ratio(i4, 50, Rat(1, 10));
    CHECK(r50.lo > 0);
    CHECK(r50.hi < 1000);
}

TEST_CASE("gcd bound ratios stay finite on a family (both N and D variants)") {
    FamilySpec spec;
    spec.seed = 9;
    spec.count = 4;
    spec.height = 3;
    std::vector<QuadraticForm> fam = generate_family(spec);
    Rat max_n(0), max_d(0);
    for (const QuadraticForm& f : fam)
        for (long n : {4L, 9L, 15L}) {
            Interval a = gcd_bound_ratio(f, n, Rat(1, 10), true);
            Interval b = gcd_bound_ratio(f, n, Rat(1, 10), false);
            CHECK(a.hi > 0);
            CHECK(b.hi > 0);
            max_n = std::max(max_n, a.hi);
            max_d = std::max(max_d, b.hi);
        }
    CHECK(max_n < 1000);
    CHECK(max_d < 1000);
}

TEST_CASE("rho width decreases in the cutoff (split level)") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    EisensteinSplit a = split(i4, 5, 100);
    EisensteinSplit b = split(i4, 5, 1000);
    CHECK(b.tau.width() < a.tau.width());
}

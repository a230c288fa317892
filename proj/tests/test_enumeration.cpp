#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "quadrep/enumeration.hpp"
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

}  // namespace

TEST_CASE("count_representations examples") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    CHECK(count_representations(i4, 0) == 1);
    CHECK(count_representations(i4, 1) == 8);
    CHECK(count_representations(i4, 2) == 24);
    QuadraticForm i8 = validate(scaled_identity(8, 2));
    CHECK(count_representations(i8, 1) == 16);
}

TEST_CASE("list_representations examples") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    std::vector<IVec> l = list_representations(i4, 1);
    REQUIRE(l.size() == 8);
    CHECK(std::is_sorted(l.begin(), l.end()));
    for (const IVec& x : l) CHECK(eval_form(i4, x) == 1);

    // all-even diagonal form takes no odd value
    QuadraticForm even = validate(diag({4, 4, 4, 4}));
    CHECK(list_representations(even, 7).empty());
    CHECK(count_representations(even, 7) == 0);

    // E_5(4): 10 of shape (+-2, 0^4), 80 of shape (+-1^4, 0)
    QuadraticForm i5 = validate(scaled_identity(5, 2));
    std::vector<IVec> e54 = list_representations(i5, 4);
    CHECK(e54.size() == 90);
    int twos = 0, ones = 0;
    for (const IVec& x : e54) {
        Int mx = 0;
        for (const Int& c : x) mx = std::max(mx, Int(abs(c)));
        (mx == 2 ? twos : ones) += 1;
    }
    CHECK(twos == 10);
    CHECK(ones == 80);
}

TEST_CASE("cumulative_counts examples") {
    QuadraticForm i4 = validate(scaled_identity(4, 2));
    CumulativeSums s1 = cumulative_counts(i4, 1);
    CHECK(s1.sum_r == 9);
    CHECK(s1.sum_r2 == 65);
    CumulativeSums s2 = cumulative_counts(i4, 2);
    CHECK(s2.sum_r == 33);
    CHECK(s2.sum_r2 == 641);
    CumulativeSums s0 = cumulative_counts(i4, 0);
    CHECK(s0.sum_r == 1);
    CHECK(s0.sum_r2 == 1);
}

TEST_CASE("pruned counting equals the box oracle on a seeded family") {
    FamilySpec spec;
    spec.seed = 11;
    spec.count = 6;
    spec.height = 3;
    std::vector<QuadraticForm> fam = generate_family(spec);
    for (const QuadraticForm& f : fam) {
        const long long xmax = 40;
        std::vector<Int> pruned = bucket_counts(f, xmax);
        std::vector<Int> box = box_bucket_counts(f, xmax);
        REQUIRE(pruned.size() == box.size());
        for (long long n = 0; n <= xmax; ++n) CHECK(pruned[n] == box[n]);
        // bucketing consistency: sum r(n) equals the count of points in {Q <= x}
        Int total = 0;
        for (const Int& c : pruned) total += c;
        CHECK(total == cumulative_counts(f, xmax).sum_r);
        // spot per-n equality with the one-shot counter
        for (long n : {0L, 1L, 7L, (long)xmax}) CHECK(count_representations(f, n) == pruned[n]);
    }
}

TEST_CASE("diagonal fast path equals general rational path") {
    QuadraticForm f = validate(diag({2, 4, 6, 8}));
    // force the general engine through an equivalent non-diagonal gram
    IMat u = imat_identity(4);
    u[0][1] = 1;  // shear
    QuadraticForm g = transform(f, u);
    for (long n = 0; n <= 30; ++n)
        CHECK(count_representations(f, n) == count_representations(g, n));
}

TEST_CASE("r(Q,n) invariant under unimodular change of basis") {
    SplitMix64 rng(5);
    QuadraticForm f = validate(diag({2, 2, 4, 6}));
    for (int trial = 0; trial < 3; ++trial) {
        QuadraticForm g = transform(f, random_unimodular(4, rng));
        for (long n : {1L, 5L, 12L, 20L})
            CHECK(count_representations(f, n) == count_representations(g, n));
    }
}

TEST_CASE("solutions come in +- pairs; coordinate permutations preserve lists") {
    QuadraticForm i5 = validate(scaled_identity(5, 2));
    for (long n : {1L, 3L, 4L, 9L}) {
        std::vector<IVec> l = list_representations(i5, n);
        CHECK(l.size() % 2 == 0);
        std::set<std::vector<Int>> seen(l.begin(), l.end());
        for (const IVec& x : l) {
            IVec neg(x.size());
            for (size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
            CHECK(seen.count(neg) == 1);
            IVec perm(x.rbegin(), x.rend());
            CHECK(seen.count(perm) == 1);
        }
    }
}

TEST_CASE("serial and parallel paths agree") {
    QuadraticForm i6 = validate(scaled_identity(6, 2));
    CHECK(count_representations_serial(i6, 20) == count_representations(i6, 20));
    std::vector<Int> a = bucket_counts_serial(i6, 25);
    std::vector<Int> b = bucket_counts(i6, 25);
    CHECK(a == b);
}

TEST_CASE("node budget fires") {
    QuadraticForm i6 = validate(scaled_identity(6, 2));
    EnumOptions opts;
    opts.node_budget = 10;
    CHECK_THROWS_AS(bucket_counts(i6, 50, opts), Error);
}

TEST_CASE("shifted counting: centered ellipsoid vs plain count") {
    // (z + 0)^T G (z + 0) with G = A/2 must reproduce r(Q, n)
    QuadraticForm f = validate(diag({2, 4, 6}));
    QMat g(3, std::vector<Rat>(3, Rat(0)));
    for (int i = 0; i < 3; ++i) g[i][i] = Rat(f.gram[i][i], 2);
    std::vector<Rat> mu(3, Rat(0));
    for (long n : {0L, 1L, 6L, 11L})
        CHECK(count_shifted(g, mu, Rat(n)) == count_representations(f, n));
    // half-integer shift: z in Z^1, (z - 1/2)^2 = 1/4 has solutions 0 and 1
    QMat one(1, std::vector<Rat>(1, Rat(1)));
    CHECK(count_shifted(one, {Rat(1, 2)}, Rat(1, 4)) == 2);
}

TEST_CASE("sphere_points_raw lex order and sizes") {
    std::vector<int32_t> pts = sphere_points_raw(5, 1);
    CHECK(pts.size() == 10 * 5);
    std::vector<int32_t> p0(pts.begin(), pts.begin() + 5);
    CHECK(p0 == std::vector<int32_t>{-1, 0, 0, 0, 0});
    CHECK(sphere_points_raw(5, 0).size() == 5);
    CHECK(sphere_points_raw(5, 4).size() == 90 * 5);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadrep/enumeration.hpp"
#include "quadrep/errors.hpp"
#include "quadrep/family.hpp"
#include "quadrep/forms.hpp"

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

// random small unimodular matrix: product of elementary shears and swaps
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

TEST_CASE("validate basic examples") {
    QuadraticForm f = validate(scaled_identity(4, 2));
    CHECK(f.disc == 16);
    CHECK(f.level == 4);
    CHECK(f.primitive);

    QuadraticForm g = validate(diag({2, 2, 2, 4}));
    CHECK(g.disc == 32);
    CHECK(g.level == 8);

    CHECK_THROWS_WITH_AS(validate(diag({1, 2, 2, 2})), doctest::Contains("diagonal entry 0"),
                         Error);

    IMat asym = scaled_identity(3, 2);
    asym[0][1] = 1;
    CHECK_THROWS_AS(validate(asym), Error);

    IMat indef = diag({2, -2, 2});
    CHECK_THROWS_WITH_AS(validate(indef), doctest::Contains("minor 2"), Error);
}

TEST_CASE("level: N | 2D and minimality over divisors") {
    CHECK(validate(scaled_identity(8, 2)).level == 4);
    FamilySpec spec;
    spec.count = 6;
    spec.height = 3;
    std::vector<QuadraticForm> fam = generate_family(spec);
    for (const QuadraticForm& f : fam) {
        Int d2 = 2 * f.disc;
        CHECK(d2 % f.level == 0);
        // N*A^{-1} even integral, and no proper divisor of N works
        IMat adj = adjugate(f.gram);
        auto even_integral = [&](const Int& n) {
            for (int i = 0; i < f.dim; ++i)
                for (int j = 0; j < f.dim; ++j) {
                    Int num = n * adj[i][j];
                    if (num % f.disc != 0) return false;
                    if (i == j && (num / f.disc) % 2 != 0) return false;
                }
            return true;
        };
        CHECK(even_integral(f.level));
        for (Int d = 1; d < f.level; ++d)
            if (f.level % d == 0 && d < f.level) CHECK_FALSE(even_integral(d));
    }
}

TEST_CASE("successive minima examples") {
    MinimaProfile p1 = successive_minima(validate(scaled_identity(4, 2)));
    CHECK(p1.minima == std::vector<Int>{1, 1, 1, 1});

    MinimaProfile p2 = successive_minima(validate(diag({2, 4, 10, 12})));
    CHECK(p2.minima == std::vector<Int>{1, 2, 5, 6});

    MinimaProfile p3 = successive_minima(validate(diag({6, 8, 14, 18})));
    CHECK(p3.minima[0] == 3);

    // witnesses achieve the minima
    QuadraticForm f = validate(diag({2, 4, 10, 12}));
    for (size_t j = 0; j < p2.minima.size(); ++j)
        CHECK(eval_form(f, p2.witnesses[j]) == p2.minima[j]);
}

TEST_CASE("minima invariant under unimodular change of basis") {
    SplitMix64 rng(7);
    QuadraticForm f = validate(diag({2, 4, 6, 10}));
    MinimaProfile base = successive_minima(f);
    for (int trial = 0; trial < 4; ++trial) {
        IMat u = random_unimodular(4, rng);
        QuadraticForm g = transform(f, u);
        CHECK(successive_minima(g).minima == base.minima);
        CHECK(g.disc == f.disc);
        CHECK(g.level == f.level);
    }
}

TEST_CASE("diagonal forms: minima equal half the diagonal") {
    QuadraticForm f = validate(diag({2, 2, 6, 8, 10}));
    MinimaProfile p = successive_minima(f);
    CHECK(p.minima == std::vector<Int>{1, 1, 3, 4, 5});
}

TEST_CASE("ortho_lattice examples") {
    OrthoLattice l1 = ortho_lattice({2, 0, 0, 0, 0});
    CHECK(l1.disc == 1);
    CHECK(l1.basis.size() == 5);
    CHECK(l1.basis[0].size() == 4);

    CHECK(ortho_lattice({1, 1, 0, 0, 0}).disc == 2);
    CHECK(ortho_lattice({1, 1, 1, 1, 0}).disc == 4);
}

TEST_CASE("ortho_lattice: scaling invariance and membership") {
    IVec v = {3, -1, 2, 5};
    OrthoLattice a = ortho_lattice(v);
    IVec v2 = {6, -2, 4, 10};
    OrthoLattice b = ortho_lattice(v2);
    CHECK(a.basis == b.basis);
    CHECK(a.disc == b.disc);
    CHECK(a.disc == dot(a.v_primitive, a.v_primitive));

    // every basis vector is orthogonal to v
    for (size_t c = 0; c < a.basis[0].size(); ++c) {
        Int s = 0;
        for (int r = 0; r < 4; ++r) s += a.basis[r][c] * v[r];
        CHECK(s == 0);
    }

    // any integer vector orthogonal to v has integral coordinates in the basis
    SplitMix64 rng(3);
    Int nv = dot(a.v_primitive, a.v_primitive);
    for (int trial = 0; trial < 8; ++trial) {
        IVec u(4);
        for (auto& x : u) x = to_int(rng.in_range(-9, 9));
        Int uv = dot(u, a.v_primitive);
        IVec w(4);
        for (int i = 0; i < 4; ++i) w[i] = nv * u[i] - uv * a.v_primitive[i];
        CHECK(dot(w, v) == 0);
        IVec coords;
        CHECK(solve_integral(a.basis, w, coords));
    }
}

TEST_CASE("family generation: deterministic, valid, primitive") {
    FamilySpec spec;
    spec.seed = 42;
    spec.count = 6;
    std::vector<QuadraticForm> a = generate_family(spec);
    std::vector<QuadraticForm> b = generate_family(spec);
    REQUIRE(a.size() == 6);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].gram == b[i].gram);
        CHECK(a[i].primitive);
        CHECK(a[i].disc > 0);
    }
    CHECK(a[0].dim == 4);
    CHECK(a[1].dim == 5);
    CHECK(a[2].dim == 6);
}

TEST_CASE("family generation exhausts on impossible constraints") {
    FamilySpec spec;
    spec.det_max = 1;  // no primitive positive definite form this small
    spec.count = 1;
    CHECK_THROWS_AS(generate_family(spec), Error);
}

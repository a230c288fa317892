#include "quadrep/forms.hpp"

#include <algorithm>

#include "quadrep/enumeration.hpp"
#include "quadrep/errors.hpp"

namespace quadrep {

bool QuadraticForm::diagonal() const {
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (i != j && gram[i][j] != 0) return false;
    return true;
}

Int level_of(const IMat& gram, const Int& disc) {
    // N*A^{-1} = N*adj(A)/D even integral:
    //   off-diagonal: N*adj_ij ≡ 0 (mod D)
    //   diagonal:     N*adj_ii ≡ 0 (mod 2D)
    int k = static_cast<int>(gram.size());
    IMat adj = adjugate(gram);
    Int d2 = 2 * disc;
    Int n = 1;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i == j)
                n = lcm(n, d2 / gcd(d2, adj[i][i]));
            else if (adj[i][j] != 0)
                n = lcm(n, disc / gcd(disc, adj[i][j]));
        }
    return n;
}

QuadraticForm validate(const IMat& raw, const std::string& id) {
    int k = static_cast<int>(raw.size());
    if (k < 1) fail(Err::NotPositiveDefinite, "empty matrix");
    for (int i = 0; i < k; ++i)
        if (static_cast<int>(raw[i].size()) != k) fail(Err::NotSymmetric, "matrix not square");
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (raw[i][j] != raw[j][i])
                fail(Err::NotSymmetric, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                            ") != (" + std::to_string(j) + "," +
                                            std::to_string(i) + ")");
    for (int i = 0; i < k; ++i)
        if (raw[i][i] % 2 != 0)
            fail(Err::OddDiagonal, "diagonal entry " + std::to_string(i) + " is odd");
    std::vector<Int> minors = leading_minors(raw);
    for (int i = 0; i < k; ++i)
        if (minors[i] <= 0)
            fail(Err::NotPositiveDefinite,
                 "leading minor " + std::to_string(i + 1) + " is " + minors[i].get_str());

    QuadraticForm f;
    f.dim = k;
    f.gram = raw;
    f.disc = minors[k - 1];
    f.level = level_of(raw, f.disc);
    Int g = 0;
    for (int i = 0; i < k; ++i) {
        g = gcd(g, raw[i][i] / 2);
        for (int j = i + 1; j < k; ++j) g = gcd(g, raw[i][j]);
    }
    f.primitive = (g == 1);
    f.id = id;
    return f;
}

Int eval_gram(const IMat& gram, const IVec& x) {
    int k = static_cast<int>(gram.size());
    Int s = 0;
    for (int i = 0; i < k; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < k; ++j) s += gram[i][j] * x[i] * x[j];
    }
    return s;
}

Int eval_form(const QuadraticForm& f, const IVec& x) { return eval_gram(f.gram, x) / 2; }

QuadraticForm transform(const QuadraticForm& f, const IMat& u) {
    IMat ut = imat_transpose(u);
    return validate(imat_mul(imat_mul(ut, f.gram), u), f.id);
}

namespace {

// rank of a set of integer vectors via rational elimination
int rank_of(const std::vector<IVec>& rows) {
    if (rows.empty()) return 0;
    int n = static_cast<int>(rows[0].size());
    std::vector<std::vector<Rat>> m;
    for (const auto& r : rows) {
        std::vector<Rat> rr(n);
        for (int j = 0; j < n; ++j) rr[j] = Rat(r[j]);
        m.push_back(std::move(rr));
    }
    int rank = 0;
    for (int c = 0; c < n && rank < static_cast<int>(m.size()); ++c) {
        int piv = -1;
        for (int i = rank; i < static_cast<int>(m.size()); ++i)
            if (m[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[piv], m[rank]);
        for (int i = 0; i < static_cast<int>(m.size()); ++i) {
            if (i == rank || m[i][c] == 0) continue;
            Rat f = m[i][c] / m[rank][c];
            for (int j = c; j < n; ++j) m[i][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

MinimaProfile successive_minima(const QuadraticForm& f, long long node_budget) {
    Int bound = 0;
    for (int i = 0; i < f.dim; ++i) bound = std::max(bound, Int(f.gram[i][i] / 2));
    // Q(e_i) = A_ii/2, so k independent witnesses always exist at this bound;
    // the doubling loop only fires if the budget forced an early cut
    for (;;) {
        EnumOptions opts;
        opts.node_budget = node_budget;
        std::vector<Solution> sols = list_up_to(f, bound, opts);
        std::stable_sort(sols.begin(), sols.end(),
                         [](const Solution& a, const Solution& b) { return a.value < b.value; });
        MinimaProfile prof;
        std::vector<IVec> picked;
        for (const Solution& s : sols) {
            if (s.value == 0) continue;
            picked.push_back(s.x);
            if (rank_of(picked) < static_cast<int>(picked.size())) {
                picked.pop_back();
                continue;
            }
            prof.minima.push_back(s.value);
            if (static_cast<int>(picked.size()) == f.dim) {
                prof.witnesses = picked;
                return prof;
            }
        }
        bound *= 2;
    }
}

OrthoLattice ortho_lattice(const IVec& v) {
    OrthoLattice lat;
    lat.ambient_dim = static_cast<int>(v.size());
    lat.v = v;
    Int c = content(v);
    if (c == 0) fail(Err::Internal, "ortho_lattice of zero vector");
    lat.v_primitive.resize(v.size());
    for (size_t i = 0; i < v.size(); ++i) lat.v_primitive[i] = v[i] / c;
    lat.basis = kernel_basis(lat.v_primitive);
    int r = lat.ambient_dim - 1;
    lat.gram = imat_zero(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Int s = 0;
            for (int row = 0; row < lat.ambient_dim; ++row)
                s += lat.basis[row][i] * lat.basis[row][j];
            lat.gram[i][j] = s;
        }
    lat.disc = det_bareiss(lat.gram);
    Int vnorm = dot(lat.v_primitive, lat.v_primitive);
    if (lat.disc != vnorm)
        fail(Err::Internal, "ortho_lattice: disc " + lat.disc.get_str() + " != |v'|^2 " +
                                vnorm.get_str());
    return lat;
}

}  // namespace quadrep

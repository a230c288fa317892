#include "quadrep/sphere.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "quadrep/errors.hpp"
#include "quadrep/forms.hpp"

namespace quadrep {

namespace {

// 8-bit byte packing keeps keys below 2^56, so signed key deltas are safe
bool packable(int d, long long maxcoord) { return d <= 7 && maxcoord <= 127; }

uint64_t pack_point(const int32_t* x, int d) {
    uint64_t key = 0;
    for (int i = 0; i < d; ++i) key = (key << 8) | static_cast<uint64_t>(x[i] + 128);
    return key;
}

long long isqrt_ll(long long n) {
    if (n < 0) return -1;
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// lexicographic binary search in the flattened point list
bool contains_point(const SpherePointSet& e, const int32_t* x) {
    if (!e.keys.empty()) {
        uint64_t key = pack_point(x, e.d);
        return std::binary_search(e.keys.begin(), e.keys.end(), key);
    }
    size_t lo = 0, hi = e.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        const int32_t* p = e.point(mid);
        if (std::lexicographical_compare(p, p + e.d, x, x + e.d))
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo < e.size() && std::equal(e.point(lo), e.point(lo) + e.d, x);
}

}  // namespace

SpherePointSet sphere_points(int d, long long n, const EnumOptions& opts) {
    if (d < 1) fail(Err::Usage, "sphere_points needs d >= 1");
    if (n < 0) fail(Err::Usage, "sphere_points needs n >= 0");
    SpherePointSet e;
    e.d = d;
    e.n = n;
    e.pts = sphere_points_raw(d, n, opts);
    if (packable(d, isqrt_ll(n))) {
        size_t m = e.pts.size() / d;
        e.keys.resize(m);
        for (size_t i = 0; i < m; ++i) e.keys[i] = pack_point(e.pts.data() + i * d, d);
        if (!std::is_sorted(e.keys.begin(), e.keys.end()))
            fail(Err::Internal, "sphere_points: enumeration order not lexicographic");
    }
    return e;
}

std::vector<OrbitRep> sphere_orbit_reps(int d, long long n) {
    std::vector<OrbitRep> out;
    std::vector<int32_t> cur(d);
    long long dfact = 1;
    for (int i = 2; i <= d; ++i) dfact *= i;
    std::function<void(int, long long, long long)> rec = [&](int idx, long long rem,
                                                             long long maxv) {
        if (idx == d) {
            if (rem != 0) return;
            OrbitRep r;
            r.rep.assign(cur.begin(), cur.end());
            long long w = dfact;
            int run = 1, nonzero = 0;
            for (int i = 0; i < d; ++i) {
                if (cur[i] != 0) ++nonzero;
                if (i > 0 && cur[i] == cur[i - 1]) {
                    ++run;
                } else {
                    run = 1;
                }
                w /= run;  // divides by mult! incrementally: 1,2,3,... per run
            }
            r.weight = w << nonzero;
            out.push_back(std::move(r));
            return;
        }
        long long top = std::min(maxv, isqrt_ll(rem));
        for (long long v = top; v >= 0; --v) {
            cur[idx] = static_cast<int32_t>(v);
            rec(idx + 1, rem - v * v, v);
        }
    };
    rec(0, n, isqrt_ll(n));
    return out;
}

long long mu_point(const SpherePointSet& e, const std::vector<int32_t>& x, const Rat& ysq) {
    if (static_cast<int>(x.size()) != e.d) fail(Err::Usage, "mu: dimension mismatch");
    long long nx = 0;
    for (int32_t c : x) nx += static_cast<long long>(c) * c;
    if (nx != e.n) fail(Err::PointNotOnSphere, "mu: |x|^2 != n");
    long long count = 0;
    size_t m = e.size();
    for (size_t i = 0; i < m; ++i) {
        const int32_t* y = e.point(i);
        long long dist = 0;
        for (int j = 0; j < e.d; ++j) {
            long long dd = static_cast<long long>(x[j]) - y[j];
            dist += dd * dd;
        }
        if (dist > 0 && Rat(to_int(dist)) <= ysq) ++count;
    }
    return count;
}

long long mu_point(int d, long long n, const std::vector<int32_t>& x, const Rat& ysq,
                   const EnumOptions& opts) {
    SpherePointSet e = sphere_points(d, n, opts);
    return mu_point(e, x, ysq);
}

namespace {

// all nonzero offsets v with |v|^2 <= ysq and |v|^2 even (odd norms cannot
// join two points of one sphere: |p-q|^2 = 2(n - <p,q>))
std::vector<std::vector<int32_t>> cap_offsets(int d, const Rat& ysq, const EnumOptions& opts) {
    std::vector<std::vector<int32_t>> offsets;
    long long ymax = 0;
    {
        Rat y = ysq;
        y.canonicalize();
        Int fl = y.get_num() / y.get_den();
        if (!fl.fits_slong_p()) fail(Err::BudgetExceeded, "cap radius too large");
        ymax = fl.get_si();
    }
    for (long long m = 2; m <= ymax; m += 2) {
        std::vector<int32_t> raw = sphere_points_raw(d, m, opts);
        for (size_t i = 0; i + d <= raw.size(); i += d)
            offsets.emplace_back(raw.begin() + i, raw.begin() + i + d);
    }
    return offsets;
}

// per-point cap counts via sorted-key offset walks
std::vector<uint32_t> mu_all(const SpherePointSet& e, const Rat& ysq, const EnumOptions& opts) {
    size_t m = e.size();
    std::vector<uint32_t> mu(m, 0);
    if (m == 0) return mu;
    std::vector<std::vector<int32_t>> offsets = cap_offsets(e.d, ysq, opts);
    if (offsets.empty()) return mu;
    long long maxoff = 0;
    for (const auto& v : offsets)
        for (int32_t c : v) maxoff = std::max(maxoff, static_cast<long long>(std::abs(c)));
    bool fast = !e.keys.empty() && packable(e.d, isqrt_ll(e.n) + maxoff);
    int nthreads = opts.parallel ? omp_get_max_threads() : 1;
    std::vector<std::vector<uint32_t>> per(nthreads);
    #pragma omp parallel num_threads(nthreads)
    {
        int tid = omp_get_thread_num();
        per[tid].assign(m, 0);
        #pragma omp for schedule(dynamic)
        for (size_t oi = 0; oi < offsets.size(); ++oi) {
            const auto& v = offsets[oi];
            if (fast) {
                // keys strictly increase and key(x + v) = key(x) + delta when
                // no byte overflows (guaranteed by the packable() guard), so
                // one monotone merge finds all matches of this offset
                int64_t delta = 0;
                for (int j = 0; j < e.d; ++j) delta = (delta << 8) + v[j];
                size_t jp = 0;
                for (size_t i = 0; i < m; ++i) {
                    int64_t want = static_cast<int64_t>(e.keys[i]) + delta;
                    if (want < 0) continue;
                    uint64_t w = static_cast<uint64_t>(want);
                    while (jp < m && e.keys[jp] < w) ++jp;
                    if (jp == m) break;
                    if (e.keys[jp] == w) per[tid][i] += 1;
                }
            } else {
                std::vector<int32_t> y(e.d);
                for (size_t i = 0; i < m; ++i) {
                    const int32_t* x = e.point(i);
                    for (int j = 0; j < e.d; ++j) y[j] = x[j] + v[j];
                    if (contains_point(e, y.data())) per[tid][i] += 1;
                }
            }
        }
    }
    for (int t = 0; t < nthreads; ++t)
        if (!per[t].empty())
            for (size_t i = 0; i < m; ++i) mu[i] += per[t][i];
    return mu;
}

}  // namespace

CapStats cap_stats(int d, long long n, const Rat& ysq, long long threshold,
                   const EnumOptions& opts) {
    if (n < 1) fail(Err::Usage, "cap_stats needs n >= 1");
    if (ysq <= 0) fail(Err::Usage, "cap_stats needs Y^2 > 0");
    SpherePointSet e = sphere_points(d, n, opts);
    CapStats c;
    c.d = d;
    c.n = n;
    c.ysq = ysq;
    c.threshold = threshold;
    c.mu = mu_all(e, ysq, opts);
    unsigned long long total = 0, above = 0;
    for (uint32_t v : c.mu) {
        total += v;
        c.histogram[v] += 1;
        if (static_cast<long long>(v) > threshold) ++above;
    }
    size_t m = e.size();
    if (m == 0) fail(Err::Internal, "cap_stats: empty sphere");
    c.mean = Rat(to_int(total), to_int((unsigned long long)m));
    c.mean.canonicalize();
    c.prob_gt_threshold = Rat(to_int(above), to_int((unsigned long long)m));
    c.prob_gt_threshold.canonicalize();
    return c;
}

PairTable pair_table(int d, long long n, const EnumOptions& opts) {
    SpherePointSet e = sphere_points(d, n, opts);
    std::vector<OrbitRep> reps = sphere_orbit_reps(d, n);
    PairTable tab;
    tab.d = d;
    tab.n = n;
    tab.esize = static_cast<long long>(e.size());
    tab.counts.assign(2 * n + 1, 0);
    size_t m = e.size();
    int nthreads = opts.parallel ? omp_get_max_threads() : 1;
    std::vector<std::vector<long long>> per(nthreads);
    #pragma omp parallel num_threads(nthreads)
    {
        int tid = omp_get_thread_num();
        per[tid].assign(2 * n + 1, 0);
        #pragma omp for schedule(dynamic)
        for (size_t ri = 0; ri < reps.size(); ++ri) {
            const OrbitRep& r = reps[ri];
            for (size_t i = 0; i < m; ++i) {
                const int32_t* q = e.point(i);
                long long t = 0;
                bool same = true;
                for (int j = 0; j < d; ++j) {
                    t += static_cast<long long>(r.rep[j]) * q[j];
                    same = same && (r.rep[j] == q[j]);
                }
                if (!same) per[tid][t + n] += r.weight;
            }
        }
    }
    for (int t = 0; t < nthreads; ++t)
        if (!per[t].empty())
            for (size_t i = 0; i < tab.counts.size(); ++i) tab.counts[i] += per[t][i];
    return tab;
}

PairTable pair_table_naive(int d, long long n) {
    EnumOptions opts;
    opts.parallel = false;
    SpherePointSet e = sphere_points(d, n, opts);
    PairTable tab;
    tab.d = d;
    tab.n = n;
    tab.esize = static_cast<long long>(e.size());
    tab.counts.assign(2 * n + 1, 0);
    size_t m = e.size();
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            long long t = 0;
            for (int c = 0; c < d; ++c)
                t += static_cast<long long>(e.point(i)[c]) * e.point(j)[c];
            tab.counts[t + n] += 1;
        }
    return tab;
}

namespace {

// exact Lagrange-style reduction of an integer Gram matrix; Vinv accumulates
// the inverse basis change so coordinates can be mapped into the new basis.
// Balanced bases keep the LDL denominators single-limb and the enumeration
// tree narrow; soundness only needs Vinv to stay the exact inverse.
void reduce_gram(IMat& g, IMat& vinv) {
    int r = static_cast<int>(g.size());
    vinv = imat_identity(r);
    bool changed = true;
    int guard = 0;
    while (changed && ++guard < 1000) {
        changed = false;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                if (i == j) continue;
                // m = nearest integer to G_ij / G_jj
                Int m, rem;
                mpz_fdiv_qr(m.get_mpz_t(), rem.get_mpz_t(), g[i][j].get_mpz_t(),
                            g[j][j].get_mpz_t());
                if (2 * rem > g[j][j]) m += 1;
                if (m == 0) continue;
                Int new_ii = g[i][i] - 2 * m * g[i][j] + m * m * g[j][j];
                if (new_ii >= g[i][i]) continue;  // only strict descent
                // basis op b_i <- b_i - m b_j; coordinates z_j <- z_j + m z_i
                for (int c = 0; c < r; ++c) g[i][c] -= m * g[j][c];
                for (int c = 0; c < r; ++c) g[c][i] -= m * g[c][j];
                for (int c = 0; c < r; ++c) vinv[j][c] += m * vinv[i][c];
                changed = true;
            }
    }
    // sort by diagonal ascending: the enumeration fixes the last index first
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            if (g[j][j] < g[i][i]) {
                std::swap(g[i], g[j]);
                for (int c = 0; c < r; ++c) std::swap(g[c][i], g[c][j]);
                std::swap(vinv[i], vinv[j]);
            }
}

// integer vector with <bezout, v> = content(v)
IVec bezout_for(const std::vector<int32_t>& v) {
    int d = static_cast<int>(v.size());
    IVec out(d, Int(0));
    Int g = 0;
    for (int i = 0; i < d; ++i) {
        if (v[i] == 0) continue;
        if (g == 0) {
            g = abs(Int(v[i]));
            out[i] = v[i] > 0 ? 1 : -1;
            continue;
        }
        Int gg, s, t;
        mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(),
                   Int(v[i]).get_mpz_t());
        for (int j = 0; j < i; ++j) out[j] *= s;
        out[i] = t;
        g = gg;
    }
    if (g == 0) fail(Err::Internal, "bezout_for zero vector");
    return out;
}

}  // namespace

Int pair_count_via_ortho(int d, long long n, long long t, const EnumOptions& opts) {
    if (t < -n || t >= n) fail(Err::Usage, "pair_count_via_ortho needs -n <= t < n");
    long long s = n - t;
    std::vector<OrbitRep> reps = sphere_orbit_reps(d, 2 * s);
    if (reps.empty()) return 0;
    std::vector<Int> contrib(reps.size(), Int(0));
    std::string worker_error;
    #pragma omp parallel for schedule(dynamic) if (opts.parallel)
    for (size_t ri = 0; ri < reps.size(); ++ri) {
      try {
        const std::vector<int32_t>& v = reps[ri].rep;
        IVec vz(d);
        for (int i = 0; i < d; ++i) vz[i] = v[i];
        Int g = content(vz);
        if (to_int(s) % g != 0) continue;  // <u, v> = -(n-t) unsolvable
        IVec u0 = bezout_for(v);
        Int scale = -to_int(s) / g;
        IVec w0(d);
        for (int i = 0; i < d; ++i) w0[i] = vz[i] + 2 * scale * u0[i];
        OrthoLattice lat = ortho_lattice(vz);
        IVec c;
        if (!solve_integral(lat.basis, w0, c))
            fail(Err::Internal, "ortho pair count: w0 outside the lattice");
        int r = d - 1;
        // HNF bases are skew; reduce before enumerating
        IMat gred = lat.gram, vinv;
        reduce_gram(gred, vinv);
        IVec cred(r, Int(0));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) cred[i] += vinv[i][j] * c[j];
        QMat gq(r, std::vector<Rat>(r));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) gq[i][j] = Rat(gred[i][j]);
        std::vector<Rat> mu(r);
        for (int i = 0; i < r; ++i) {
            mu[i] = Rat(-cred[i], 2);
            mu[i].canonicalize();
        }
        Rat target(to_int(n + t), 2);
        target.canonicalize();
        contrib[ri] = to_int(reps[ri].weight) * count_shifted(gq, mu, target, opts);
      } catch (const std::exception& e) {
        #pragma omp critical(quadrep_ortho_error)
        worker_error = e.what();
      }
    }
    if (!worker_error.empty()) fail(Err::BudgetExceeded, worker_error);
    Int total = 0;
    for (const Int& c : contrib) total += c;
    return total;
}

std::pair<Rat, Rat> mean_mu_identity(int d, long long n, const Rat& ysq,
                                     const EnumOptions& opts) {
    if (n < 1) fail(Err::Usage, "mean_mu_identity needs n >= 1");
    SpherePointSet e = sphere_points(d, n, opts);
    std::vector<uint32_t> mu = mu_all(e, ysq, opts);
    unsigned long long total = 0;
    for (uint32_t v : mu) total += v;
    Rat lhs(to_int(total), to_int((unsigned long long)e.size()));
    lhs.canonicalize();
    // rhs: (1/|E|) sum_{t >= n - Y^2/2, -n <= t < n} A_d(n,t)
    PairTable tab = pair_table(d, n, opts);
    Rat tmin_rat = Rat(to_int(n)) - ysq / 2;
    Int tmin;
    mpz_cdiv_q(tmin.get_mpz_t(), tmin_rat.get_num().get_mpz_t(), tmin_rat.get_den().get_mpz_t());
    long long lo = std::max(-n, tmin.fits_slong_p() ? tmin.get_si() : -n);
    Int rsum = 0;
    for (long long t = lo; t < n; ++t) rsum += to_int(tab.at(t));
    Rat rhs(rsum, to_int((unsigned long long)e.size()));
    rhs.canonicalize();
    return {lhs, rhs};
}

std::vector<std::pair<Rat, Rat>> mean_mu_identity_multi(int d, long long n,
                                                        const std::vector<Rat>& ysqs,
                                                        const EnumOptions& opts) {
    if (n < 1) fail(Err::Usage, "mean_mu_identity needs n >= 1");
    Rat maxy(0);
    for (const Rat& y : ysqs) maxy = std::max(maxy, y);
    SpherePointSet e = sphere_points(d, n, opts);
    size_t m = e.size();
    // ordered pairs at each even squared distance, via one offset scan
    std::vector<std::vector<int32_t>> offsets = cap_offsets(d, maxy, opts);
    long long maxoff = 0;
    for (const auto& v : offsets)
        for (int32_t c : v) maxoff = std::max(maxoff, static_cast<long long>(std::abs(c)));
    bool fast = !e.keys.empty() && packable(d, isqrt_ll(n) + maxoff);
    std::map<long long, unsigned long long> matches;  // |v|^2 -> ordered pairs
    int nthreads = opts.parallel ? omp_get_max_threads() : 1;
    std::vector<std::map<long long, unsigned long long>> per(nthreads);
    #pragma omp parallel num_threads(nthreads)
    {
        int tid = omp_get_thread_num();
        #pragma omp for schedule(dynamic)
        for (size_t oi = 0; oi < offsets.size(); ++oi) {
            const auto& v = offsets[oi];
            long long norm = 0;
            for (int32_t c : v) norm += static_cast<long long>(c) * c;
            unsigned long long hits = 0;
            if (fast) {
                int64_t delta = 0;
                for (int j = 0; j < d; ++j) delta = (delta << 8) + v[j];
                size_t jp = 0;
                for (size_t i = 0; i < m; ++i) {
                    int64_t want = static_cast<int64_t>(e.keys[i]) + delta;
                    if (want < 0) continue;
                    uint64_t w = static_cast<uint64_t>(want);
                    while (jp < m && e.keys[jp] < w) ++jp;
                    if (jp == m) break;
                    if (e.keys[jp] == w) ++hits;
                }
            } else {
                std::vector<int32_t> y(d);
                for (size_t i = 0; i < m; ++i) {
                    const int32_t* x = e.point(i);
                    for (int j = 0; j < d; ++j) y[j] = x[j] + v[j];
                    if (contains_point(e, y.data())) ++hits;
                }
            }
            per[tid][norm] += hits;
        }
    }
    for (const auto& pm : per)
        for (const auto& [norm, hits] : pm) matches[norm] += hits;

    PairTable tab = pair_table(d, n, opts);
    std::vector<std::pair<Rat, Rat>> out;
    for (const Rat& ysq : ysqs) {
        unsigned long long total = 0;
        for (const auto& [norm, hits] : matches)
            if (Rat(to_int(norm)) <= ysq) total += hits;
        Rat lhs(to_int(total), to_int((unsigned long long)m));
        lhs.canonicalize();
        Rat tmin_rat = Rat(to_int(n)) - ysq / 2;
        Int tmin;
        mpz_cdiv_q(tmin.get_mpz_t(), tmin_rat.get_num().get_mpz_t(),
                   tmin_rat.get_den().get_mpz_t());
        long long lo = std::max(-n, tmin.fits_slong_p() ? tmin.get_si() : -n);
        Int rsum = 0;
        for (long long t = lo; t < n; ++t) rsum += to_int(tab.at(t));
        Rat rhs(rsum, to_int((unsigned long long)m));
        rhs.canonicalize();
        out.emplace_back(lhs, rhs);
    }
    return out;
}

CoveringReport covering_check(int d, long long n, const Rat& ysq, long long threshold,
                              const EnumOptions& opts) {
    CoveringReport rep;
    rep.d = d;
    rep.n = n;
    rep.ysq = ysq;
    rep.threshold = threshold >= 0
                        ? threshold
                        : static_cast<long long>(std::floor(std::log(static_cast<double>(n))));
    if (ysq < 2) {
        // caps below the minimal pair distance sqrt(2) are empty
        SpherePointSet e = sphere_points(d, n, opts);
        rep.esize = static_cast<long long>(e.size());
        rep.prob = (rep.threshold < 0) ? Rat(1) : Rat(0);
        rep.above_half = rep.prob > Rat(1, 2);
        return rep;
    }
    CapStats c = cap_stats(d, n, ysq, rep.threshold, opts);
    rep.esize = static_cast<long long>(c.mu.size());
    rep.prob = c.prob_gt_threshold;
    rep.above_half = rep.prob > Rat(1, 2);
    return rep;
}

std::map<long long, long long> content_histogram(int d, long long m) {
    std::map<long long, long long> out;
    for (const OrbitRep& r : sphere_orbit_reps(d, m)) {
        IVec v(d);
        for (int i = 0; i < d; ++i) v[i] = r.rep[i];
        Int c = content(v);
        out[c.get_si()] += r.weight;
    }
    return out;
}

}  // namespace quadrep

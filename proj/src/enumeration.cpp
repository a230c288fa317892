#include "quadrep/enumeration.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cmath>
#include <functional>

#include "quadrep/errors.hpp"

namespace quadrep {

namespace {

// floor(c + sqrt(r)) for rationals, r >= 0, exact.  A double seeds the
// candidate; the boundary is pinned by exact comparisons, so precision of the
// seed never affects the result.
Int floor_c_plus_sqrt(const Rat& c, const Rat& r) {
    double cd = mpq_get_d(c.get_mpq_t());
    double rd = mpq_get_d(r.get_mpq_t());
    Int cand;
    if (std::isfinite(cd) && std::isfinite(rd) && std::abs(cd) < 9e14 && rd < 9e14) {
        cand = Int(std::floor(cd + std::sqrt(std::max(rd, 0.0))));
    } else {
        Int p = r.get_num(), q = r.get_den();
        Int a = c.get_num(), b = c.get_den();
        Int t = isqrt_floor(p * q * b * b);
        mpz_fdiv_q(cand.get_mpz_t(), Int(a * q + t).get_mpz_t(), Int(b * q).get_mpz_t());
    }
    auto le = [&](const Int& y) {
        Rat w = Rat(y) - c;
        return w <= 0 || Rat(w * w) <= r;
    };
    while (le(cand + 1)) cand += 1;
    while (!le(cand)) cand -= 1;
    return cand;
}

// integer range [lo, hi] with d*(y-c)^2 <= T; empty when T < 0
bool level_range(const Rat& d, const Rat& c, const Rat& t, Int& lo, Int& hi) {
    if (t < 0) return false;
    Rat r = t / d;
    hi = floor_c_plus_sqrt(c, r);
    lo = -floor_c_plus_sqrt(Rat(-c), r);
    return lo <= hi;
}

struct Ldl {
    int k = 0;
    std::vector<Rat> d;            // d[i] > 0
    std::vector<std::vector<Rat>> c;  // c[i][j], j > i
};

Ldl ldl_decompose(const QMat& g) {
    int k = static_cast<int>(g.size());
    Ldl out;
    out.k = k;
    out.d.assign(k, Rat(0));
    out.c.assign(k, std::vector<Rat>(k, Rat(0)));
    QMat m = g;
    for (auto& row : m)
        for (Rat& x : row) x.canonicalize();  // callers may pass raw num/den pairs
    for (int i = 0; i < k; ++i) {
        out.d[i] = m[i][i];
        if (out.d[i] <= 0) fail(Err::NotPositiveDefinite, "LDL pivot <= 0");
        for (int j = i + 1; j < k; ++j) out.c[i][j] = m[i][j] / out.d[i];
        for (int r = i + 1; r < k; ++r)
            for (int s = r; s < k; ++s) {
                m[r][s] -= out.d[i] * out.c[i][r] * out.c[i][s];
                if (s != r) m[s][r] = m[r][s];
            }
    }
    return out;
}

QMat half_gram(const QuadraticForm& f) {
    QMat g(f.dim, std::vector<Rat>(f.dim));
    for (int i = 0; i < f.dim; ++i)
        for (int j = 0; j < f.dim; ++j) {
            g[i][j] = Rat(f.gram[i][j], 2);
            g[i][j].canonicalize();
        }
    return g;
}

enum class Mode { CountEq, ListEq, ListLeq, BucketLeq };

// Exact Fincke-Pohst over Q(y) = sum_i d_i (w_i + sum_{j>i} c_ij w_j)^2 with
// w = y - mu, enumerating level k-1 downward.
void progress_note(long long nodes) {
    std::fprintf(stderr, "[enum] %lld nodes\n", nodes);
}

struct MpqEngine {
    Ldl ldl;
    std::vector<Rat> mu;
    Mode mode;
    Rat target;                  // CountEq/ListEq: m; ListLeq/BucketLeq: bound
    long long node_budget = 0;
    // state
    std::vector<std::vector<Rat>> ssum;  // ssum[l][i] = sum_{j>=l} c_ij w_j (j>i)
    std::vector<Rat> wlev;               // w at each level
    IVec y;                              // current coordinates
    long long nodes = 0;
    Int count = 0;
    std::vector<Solution>* sols = nullptr;
    std::vector<unsigned long long>* buckets = nullptr;
    std::atomic<bool>* abort_flag = nullptr;
    bool progress = false;

    void init(int k) {
        ssum.assign(k + 1, std::vector<Rat>(k, Rat(0)));
        wlev.assign(k, Rat(0));
        y.assign(k, Int(0));
    }

    bool tick() {
        if (++nodes > node_budget) {
            if (abort_flag) {
                abort_flag->store(true);
                return false;
            }
            fail(Err::BudgetExceeded, "enumeration exceeded node budget");
        }
        if (progress && nodes % 10000000 == 0) progress_note(nodes);
        if (abort_flag && (nodes & 0xfff) == 0 && abort_flag->load()) return false;
        return true;
    }

    void set_level(int level, const Int& yval, const Rat& t, Rat& t_next) {
        y[level] = yval;
        Rat wplain = Rat(yval) - mu[level];          // w_j = y_j - mu_j
        Rat v = wplain + ssum[level + 1][level];     // w_j + sum_{i>j} c_ji w_i
        wlev[level] = v;
        t_next = t - ldl.d[level] * v * v;
        for (int i = 0; i < level; ++i)
            ssum[level][i] = ssum[level + 1][i] + ldl.c[i][level] * wplain;
    }

    void emit_solution(const Rat& value) {
        if (mode == Mode::CountEq) {
            count += 1;
        } else if (mode == Mode::ListEq || mode == Mode::ListLeq) {
            Solution s;
            s.x = y;
            if (value.get_den() != 1) fail(Err::Internal, "non-integral form value");
            s.value = value.get_num();
            sols->push_back(std::move(s));
        } else {
            if (value.get_den() != 1) fail(Err::Internal, "non-integral form value");
            Int v = value.get_num();
            (*buckets)[v.get_ui()] += 1;
        }
    }

    // leaf for exact-equality modes: solve d0*(y0 - c0)^2 = T exactly
    void leaf_eq(const Rat& t) {
        const Rat& d0 = ldl.d[0];
        if (t < 0) return;
        if (t == 0) {
            Rat c0 = mu[0] - ssum[1][0];
            if (c0.get_den() == 1) {
                if (!tick()) return;
                y[0] = c0.get_num();
                emit_solution(target);
            }
            return;
        }
        // r = T/d0 is a rational square iff (T.num*d.den)*(T.den*d.num) is a
        // perfect square -- one multiply rejects almost every leaf
        Int x = t.get_num() * d0.get_den();
        Int z = t.get_den() * d0.get_num();
        if (!is_square(x * z)) return;
        Rat r = t / d0;
        Int num = r.get_num(), den = r.get_den();
        if (!is_square(num) || !is_square(den)) return;
        Rat c0 = mu[0] - ssum[1][0];
        Rat s(isqrt_floor(num), isqrt_floor(den));
        s.canonicalize();
        for (int sign : {-1, +1}) {
            Rat root = c0 + (sign > 0 ? s : Rat(-s));
            if (root.get_den() == 1) {
                if (!tick()) return;
                y[0] = root.get_num();
                emit_solution(target);
            }
        }
    }

    void leaf_range(const Rat& t, const Rat& used) {
        const Rat& d0 = ldl.d[0];
        Rat c0 = mu[0] - ssum[1][0];
        Int lo, hi;
        if (!level_range(d0, c0, t, lo, hi)) return;
        for (Int v = lo; v <= hi; ++v) {
            if (!tick()) return;
            Rat w = Rat(v) - c0;
            Rat val = used + d0 * w * w;
            y[0] = v;
            emit_solution(val);
        }
    }

    void rec(int level, const Rat& t, const Rat& used) {
        if (level == 0) {
            if (mode == Mode::CountEq || mode == Mode::ListEq)
                leaf_eq(t);
            else
                leaf_range(t, used);
            return;
        }
        Rat c = mu[level] - ssum[level + 1][level];
        Int lo, hi;
        if (!level_range(ldl.d[level], c, t, lo, hi)) return;
        Rat t_next;
        for (Int v = lo; v <= hi; ++v) {
            if (!tick()) return;
            set_level(level, v, t, t_next);
            rec(level - 1, t_next, used + ldl.d[level] * wlev[level] * wlev[level]);
        }
    }

    void run() {
        int k = ldl.k;
        if (k == 1) {
            if (mode == Mode::CountEq || mode == Mode::ListEq)
                leaf_eq(target);
            else
                leaf_range(target, Rat(0));
            return;
        }
        rec(k - 1, target, Rat(0));
    }
};

// ---------------------------------------------------------------------------
// diagonal fast path: Q = sum a_i x_i^2, all arithmetic in int64
// ---------------------------------------------------------------------------

struct DiagSpec {
    int k = 0;
    std::vector<long long> a;
};

bool diag_spec(const QuadraticForm& f, long long value_cap, DiagSpec& out) {
    if (!f.diagonal()) return false;
    out.k = f.dim;
    out.a.resize(f.dim);
    for (int i = 0; i < f.dim; ++i) {
        if (!f.gram[i][i].fits_slong_p()) return false;
        out.a[i] = f.gram[i][i].get_si() / 2;
    }
    return value_cap <= (1LL << 56);
}

long long isqrt_ll(long long n) {
    if (n < 0) return -1;
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

struct DiagCounter {
    const DiagSpec& spec;
    long long budget;
    long long nodes = 0;
    std::atomic<bool>* abort_flag = nullptr;
    bool progress = false;
    unsigned long long count = 0;
    std::vector<unsigned long long>* buckets = nullptr;  // bucket mode if set
    long long base_value = 0;

    bool tick() {
        if (++nodes > budget) {
            if (abort_flag) {
                abort_flag->store(true);
                return false;
            }
            fail(Err::BudgetExceeded, "enumeration exceeded node budget");
        }
        if (progress && nodes % 10000000 == 0) progress_note(nodes);
        if (abort_flag && (nodes & 0xffff) == 0 && abort_flag->load()) return false;
        return true;
    }

    // nonnegative-orthant recursion; mult = 2^{# nonzero coords so far}
    void rec_count(int level, long long rem, unsigned long long mult) {
        long long a = spec.a[level];
        if (level == 0) {
            if (!tick()) return;
            if (rem % a == 0) {
                long long s = rem / a;
                long long r = isqrt_ll(s);
                if (r >= 0 && r * r == s) count += mult * (r > 0 ? 2 : 1);
            }
            return;
        }
        long long xmax = isqrt_ll(rem / a);
        for (long long x = 0; x <= xmax; ++x) {
            if (!tick()) return;
            rec_count(level - 1, rem - a * x * x, mult * (x > 0 ? 2 : 1));
        }
    }

    void rec_bucket(int level, long long rem, long long val, unsigned long long mult) {
        long long a = spec.a[level];
        if (level == 0) {
            long long xmax = isqrt_ll(rem / a);
            for (long long x = 0; x <= xmax; ++x) {
                if (!tick()) return;
                (*buckets)[val + a * x * x] += mult * (x > 0 ? 2 : 1);
            }
            return;
        }
        long long xmax = isqrt_ll(rem / a);
        for (long long x = 0; x <= xmax; ++x) {
            if (!tick()) return;
            long long q = a * x * x;
            rec_bucket(level - 1, rem - q, val + q, mult * (x > 0 ? 2 : 1));
        }
    }
};

// signed lexicographic listing for diagonal forms (level 0 outermost)
void diag_list_rec(const DiagSpec& spec, int level, long long rem, std::vector<long long>& x,
                   std::vector<IVec>& out) {
    long long a = spec.a[level];
    if (level == spec.k - 1) {
        if (rem % a == 0) {
            long long s = rem / a;
            long long r = isqrt_ll(s);
            if (r >= 0 && r * r == s) {
                for (long long sign : {-1LL, 1LL}) {
                    if (r == 0 && sign > 0) continue;
                    x[level] = sign * r;
                    IVec v(spec.k);
                    for (int i = 0; i < spec.k; ++i) v[i] = to_int(x[i]);
                    out.push_back(std::move(v));
                }
            }
        }
        return;
    }
    long long m = isqrt_ll(rem / a);
    for (long long v = -m; v <= m; ++v) {
        x[level] = v;
        diag_list_rec(spec, level + 1, rem - a * v * v, x, out);
    }
}

Int diag_count(const DiagSpec& spec, long long n, const EnumOptions& opts) {
    if (n < 0) return 0;
    int k = spec.k;
    long long top = isqrt_ll(n / spec.a[k - 1]);
    if (!opts.parallel || k == 1 || top < 8) {
        DiagCounter ctr{spec, opts.node_budget};
        ctr.rec_count(k - 1, n, 1);
        return to_int(ctr.count);
    }
    std::atomic<bool> abort_flag{false};
    unsigned long long total = 0;
    long long used_nodes = 0;
    #pragma omp parallel for schedule(dynamic) reduction(+ : total, used_nodes)
    for (long long x = 0; x <= top; ++x) {
        if (abort_flag.load()) continue;
        DiagCounter ctr{spec, opts.node_budget, 0, &abort_flag};
        ctr.rec_count(k - 2, n - spec.a[k - 1] * x * x, x > 0 ? 2 : 1);
        total += ctr.count;
        used_nodes += ctr.nodes;
    }
    if (abort_flag.load() || used_nodes > opts.node_budget)
        fail(Err::BudgetExceeded, "enumeration exceeded node budget");
    return to_int(total);
}

std::vector<Int> diag_buckets(const DiagSpec& spec, long long xmax, const EnumOptions& opts,
                              bool parallel) {
    int k = spec.k;
    std::vector<Int> out(xmax + 1, Int(0));
    if (xmax < 0) return out;
    long long top = isqrt_ll(xmax / spec.a[k - 1]);
    if (!parallel || k == 1 || top < 8) {
        std::vector<unsigned long long> b(xmax + 1, 0);
        DiagCounter ctr{spec, opts.node_budget};
        ctr.buckets = &b;
        if (k == 1)
            ctr.rec_bucket(0, xmax, 0, 1);
        else
            ctr.rec_bucket(k - 1, xmax, 0, 1);
        for (long long i = 0; i <= xmax; ++i) out[i] = to_int(b[i]);
        return out;
    }
    std::atomic<bool> abort_flag{false};
    long long used_nodes = 0;
    int nthreads = omp_get_max_threads();
    std::vector<std::vector<unsigned long long>> per(nthreads);
    #pragma omp parallel reduction(+ : used_nodes)
    {
        int tid = omp_get_thread_num();
        per[tid].assign(xmax + 1, 0);
        #pragma omp for schedule(dynamic)
        for (long long x = 0; x <= top; ++x) {
            if (abort_flag.load()) continue;
            long long q = spec.a[k - 1] * x * x;
            DiagCounter ctr{spec, opts.node_budget, 0, &abort_flag};
            ctr.buckets = &per[tid];
            ctr.rec_bucket(k - 2, xmax - q, q, x > 0 ? 2 : 1);
            used_nodes += ctr.nodes;
        }
    }
    if (abort_flag.load() || used_nodes > opts.node_budget)
        fail(Err::BudgetExceeded, "enumeration exceeded node budget");
    for (int t = 0; t < nthreads; ++t)
        if (!per[t].empty())
            for (long long i = 0; i <= xmax; ++i) out[i] += to_int(per[t][i]);
    return out;
}

// general-path driver: runs the mpq engine, optionally splitting the top level
template <typename Setup, typename Merge>
void run_parallel_top(const Ldl& ldl, const std::vector<Rat>& mu, const Rat& target,
                      const EnumOptions& opts, Setup setup, Merge merge) {
    int k = ldl.k;
    Rat c = mu[k - 1];
    Int lo, hi;
    if (k == 1 || !level_range(ldl.d[k - 1], c, target, lo, hi) || hi - lo < 8 ||
        !opts.parallel) {
        MpqEngine eng;
        eng.ldl = ldl;
        eng.mu = mu;
        eng.target = target;
        eng.node_budget = opts.node_budget;
        eng.progress = opts.progress;
        eng.init(k);
        setup(eng);
        eng.run();
        merge(eng, 0);
        return;
    }
    if (!Int(hi - lo).fits_slong_p()) fail(Err::BudgetExceeded, "outer range too large");
    long long span = to_ll(Int(hi - lo)) + 1;
    std::atomic<bool> abort_flag{false};
    std::atomic<long long> used_nodes{0};
    std::atomic<bool> worker_error{false};
    std::string error_message;
    #pragma omp parallel for schedule(dynamic)
    for (long long off = 0; off < span; ++off) {
        if (abort_flag.load() || worker_error.load()) continue;
        try {
            MpqEngine eng;
            eng.ldl = ldl;
            eng.mu = mu;
            eng.target = target;
            eng.node_budget = opts.node_budget;
            eng.progress = opts.progress;
            eng.abort_flag = &abort_flag;
            eng.init(k);
            setup(eng);
            Rat t_next;
            eng.set_level(k - 1, Int(lo + to_int(off)), target, t_next);
            if (t_next >= 0)
                eng.rec(k - 2, t_next, eng.ldl.d[k - 1] * eng.wlev[k - 1] * eng.wlev[k - 1]);
            used_nodes += eng.nodes;
            #pragma omp critical(quadrep_enum_merge)
            merge(eng, off + 1);
        } catch (const std::exception& e) {
            #pragma omp critical(quadrep_enum_merge)
            error_message = e.what();
            worker_error.store(true);
        }
    }
    if (worker_error.load()) fail(Err::Internal, "enumeration worker: " + error_message);
    if (abort_flag.load() || used_nodes.load() > opts.node_budget)
        fail(Err::BudgetExceeded, "enumeration exceeded node budget");
}

std::vector<Rat> zero_mu(int k) { return std::vector<Rat>(k, Rat(0)); }

}  // namespace

Int count_representations_serial(const QuadraticForm& f, const Int& n, const EnumOptions& opts) {
    EnumOptions o = opts;
    o.parallel = false;
    return count_representations(f, n, o);
}

Int count_representations(const QuadraticForm& f, const Int& n, const EnumOptions& opts) {
    if (n < 0) return 0;
    if (n == 0) return 1;
    DiagSpec spec;
    if (n.fits_slong_p() && diag_spec(f, n.get_si(), spec)) return diag_count(spec, n.get_si(), opts);
    Ldl ldl = ldl_decompose(half_gram(f));
    Int total = 0;
    run_parallel_top(
        ldl, zero_mu(f.dim), Rat(n), opts, [](MpqEngine& e) { e.mode = Mode::CountEq; },
        [&](MpqEngine& e, long long) { total += e.count; });
    return total;
}

std::vector<IVec> list_representations(const QuadraticForm& f, const Int& n,
                                       const EnumOptions& opts) {
    std::vector<IVec> out;
    if (n < 0) return out;
    if (n == 0) {
        out.emplace_back(f.dim, Int(0));
        return out;
    }
    DiagSpec spec;
    if (n.fits_slong_p() && diag_spec(f, n.get_si(), spec)) {
        std::vector<long long> x(f.dim, 0);
        diag_list_rec(spec, 0, n.get_si(), x, out);
        return out;  // generated in lex order
    }
    Ldl ldl = ldl_decompose(half_gram(f));
    std::vector<Solution> sols;
    run_parallel_top(
        ldl, zero_mu(f.dim), Rat(n), opts,
        [&](MpqEngine& e) {
            e.mode = Mode::ListEq;
            e.sols = new std::vector<Solution>();
        },
        [&](MpqEngine& e, long long) {
            for (auto& s : *e.sols) sols.push_back(std::move(s));
            delete e.sols;
        });
    for (auto& s : sols) out.push_back(std::move(s.x));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Solution> list_up_to(const QuadraticForm& f, const Int& bound,
                                 const EnumOptions& opts) {
    std::vector<Solution> out;
    if (bound < 0) return out;
    Ldl ldl = ldl_decompose(half_gram(f));
    run_parallel_top(
        ldl, zero_mu(f.dim), Rat(bound), opts,
        [&](MpqEngine& e) {
            e.mode = Mode::ListLeq;
            e.sols = new std::vector<Solution>();
        },
        [&](MpqEngine& e, long long) {
            for (auto& s : *e.sols) out.push_back(std::move(s));
            delete e.sols;
        });
    std::sort(out.begin(), out.end(), [](const Solution& a, const Solution& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.x < b.x;
    });
    return out;
}

std::vector<Int> bucket_counts_serial(const QuadraticForm& f, long long xmax,
                                      const EnumOptions& opts) {
    EnumOptions o = opts;
    o.parallel = false;
    return bucket_counts(f, xmax, o);
}

std::vector<Int> bucket_counts(const QuadraticForm& f, long long xmax, const EnumOptions& opts) {
    DiagSpec spec;
    if (diag_spec(f, xmax, spec)) return diag_buckets(spec, xmax, opts, opts.parallel);
    std::vector<Int> out(xmax + 1, Int(0));
    if (xmax < 0) return out;
    Ldl ldl = ldl_decompose(half_gram(f));
    run_parallel_top(
        ldl, zero_mu(f.dim), Rat(to_int(xmax)), opts,
        [&](MpqEngine& e) {
            e.mode = Mode::BucketLeq;
            e.buckets = new std::vector<unsigned long long>(xmax + 1, 0);
        },
        [&](MpqEngine& e, long long) {
            for (long long i = 0; i <= xmax; ++i) out[i] += to_int((*e.buckets)[i]);
            delete e.buckets;
        });
    return out;
}

std::vector<Int> box_bucket_counts(const QuadraticForm& f, long long xmax,
                                   const EnumOptions& opts) {
    int k = f.dim;
    std::vector<Int> out(xmax + 1, Int(0));
    if (xmax < 0) return out;
    // per-coordinate bound: x_i^2 <= 2*xmax*adj_ii/D
    IMat adj = adjugate(f.gram);
    std::vector<long long> bnd(k);
    Int volume = 1;
    for (int i = 0; i < k; ++i) {
        Int num = 2 * to_int(xmax) * adj[i][i];
        Int b = isqrt_floor(num / f.disc + 1) + 1;
        if (!b.fits_slong_p()) fail(Err::BudgetExceeded, "box oracle bound overflow");
        bnd[i] = b.get_si();
        volume *= 2 * b + 1;
    }
    if (volume > to_int(opts.node_budget))
        fail(Err::BudgetExceeded, "box oracle volume exceeds budget");
    // int64 magnitude guard for partial values
    Int mag = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) mag += abs(f.gram[i][j]) * to_int(bnd[i] * bnd[j]);
    if (mag > Int(1) << 60) fail(Err::BudgetExceeded, "box oracle magnitude overflow");

    std::vector<long long> a2(k);      // A_ii / 2
    std::vector<std::vector<long long>> gij(k, std::vector<long long>(k));
    for (int i = 0; i < k; ++i) {
        a2[i] = f.gram[i][i].get_si() / 2;
        for (int j = 0; j < k; ++j) gij[i][j] = f.gram[i][j].get_si();
    }

    int nthreads = opts.parallel ? omp_get_max_threads() : 1;
    std::vector<std::vector<unsigned long long>> per(nthreads);
    long long top = bnd[k - 1];
    #pragma omp parallel num_threads(nthreads)
    {
        int tid = omp_get_thread_num();
        per[tid].assign(xmax + 1, 0);
        std::vector<long long> x(k, 0), cross(k, 0);
        // cross[i] = sum_{j > i} A_ij x_j for the currently fixed suffix
        std::function<void(int, long long)> rec = [&](int level, long long val) {
            if (level == 0) {
                long long c0 = cross[0];
                for (long long v = -bnd[0]; v <= bnd[0]; ++v) {
                    long long q = val + a2[0] * v * v + c0 * v;
                    if (q >= 0 && q <= xmax) per[tid][q] += 1;
                }
                return;
            }
            for (long long v = -bnd[level]; v <= bnd[level]; ++v) {
                x[level] = v;
                long long q = val + a2[level] * v * v + cross[level] * v;
                std::vector<long long> saved(level);
                for (int i = 0; i < level; ++i) {
                    saved[i] = cross[i];
                    cross[i] += gij[i][level] * v;
                }
                rec(level - 1, q);
                for (int i = 0; i < level; ++i) cross[i] = saved[i];
            }
        };
        if (k == 1) {
            rec(0, 0);
        } else {
            #pragma omp for schedule(dynamic)
            for (long long v = -top; v <= top; ++v) {
                x[k - 1] = v;
                long long q = a2[k - 1] * v * v;
                for (int i = 0; i < k - 1; ++i) cross[i] = gij[i][k - 1] * v;
                rec(k - 2, q);
                for (int i = 0; i < k - 1; ++i) cross[i] = 0;
            }
        }
    }
    for (int t = 0; t < nthreads; ++t)
        if (!per[t].empty())
            for (long long i = 0; i <= xmax; ++i) out[i] += to_int(per[t][i]);
    return out;
}

CumulativeSums cumulative_counts(const QuadraticForm& f, long long x, const EnumOptions& opts) {
    if (x < 0) fail(Err::Usage, "cumulative_counts needs x >= 0");
    std::vector<Int> b = bucket_counts(f, x, opts);
    CumulativeSums s{0, 0};
    for (const Int& r : b) {
        s.sum_r += r;
        s.sum_r2 += r * r;
    }
    return s;
}

Int count_shifted(const QMat& g, const std::vector<Rat>& mu, const Rat& m,
                  const EnumOptions& opts) {
    Rat mm = m;
    mm.canonicalize();
    if (mm < 0) return 0;
    Ldl ldl = ldl_decompose(g);
    std::vector<Rat> center = mu;
    for (Rat& x : center) x.canonicalize();
    EnumOptions o = opts;
    o.parallel = false;
    Int total = 0;
    run_parallel_top(
        ldl, center, mm, o, [](MpqEngine& e) { e.mode = Mode::CountEq; },
        [&](MpqEngine& e, long long) { total += e.count; });
    return total;
}

std::vector<int32_t> sphere_points_raw(int d, long long n, const EnumOptions& opts) {
    if (n < 0) return {};
    std::vector<int32_t> out;
    if (n == 0) {
        out.assign(d, 0);
        return out;
    }
    long long root = isqrt_ll(n);
    if (root > (1 << 30)) fail(Err::BudgetExceeded, "sphere radius too large");
    // lex order: x_0 outermost ascending; parallel over x_0 with ordered merge
    int nthreads = opts.parallel && d > 1 ? omp_get_max_threads() : 1;
    long long span = 2 * root + 1;
    std::vector<std::vector<int32_t>> chunks(span);
    std::atomic<long long> nodes{0};
    #pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (long long off = 0; off < span; ++off) {
        long long x0 = -root + off;
        long long rem0 = n - x0 * x0;
        std::vector<int32_t>& loc = chunks[off];
        std::vector<int32_t> x(d, 0);
        x[0] = static_cast<int32_t>(x0);
        long long local_nodes = 0;
        std::function<void(int, long long)> rec = [&](int level, long long rem) {
            ++local_nodes;
            if (level == d - 1) {
                long long r = isqrt_ll(rem);
                if (r >= 0 && r * r == rem) {
                    for (int sign : {-1, 1}) {
                        if (r == 0 && sign > 0) continue;
                        x[level] = static_cast<int32_t>(sign * r);
                        loc.insert(loc.end(), x.begin(), x.end());
                    }
                }
                return;
            }
            long long mx = isqrt_ll(rem);
            for (long long v = -mx; v <= mx; ++v) {
                x[level] = static_cast<int32_t>(v);
                rec(level + 1, rem - v * v);
            }
        };
        if (d == 1) {
            if (x0 * x0 == n) loc.insert(loc.end(), x.begin(), x.end());
        } else {
            rec(1, rem0);
        }
        nodes += local_nodes;
    }
    if (nodes.load() > opts.node_budget)
        fail(Err::BudgetExceeded, "sphere enumeration exceeded node budget");
    size_t total = 0;
    for (const auto& c : chunks) total += c.size();
    out.reserve(total);
    for (const auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
    return out;
}

}  // namespace quadrep

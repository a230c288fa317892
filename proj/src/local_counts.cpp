#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>

#include "quadrep/errors.hpp"
#include "quadrep/local_densities.hpp"

// Exact N_t = #{x mod p^t : Q(x) = n} for moduli far beyond direct scans.
//
// The count vector c -> #{x : Q(x) = c (mod p^t)} of any integral quadratic
// form is constant on "value types": the orbits of (Z/p^t)+ under
// multiplication by unit squares.  A type is (e, s) with e = v_p(c) and s the
// square class of the unit part (Legendre class for odd p, class mod 8 for
// p = 2), plus the zero type.  Only O(t) types exist, so count vectors are
// tiny, and the additive convolution of two type functions is again a type
// function.  Jordan blocks have closed-form type vectors, and the structure
// constants R(tau_c; tau_1, tau_2) = #{a of type tau_1 : c - a of type tau_2}
// reduce an exponential-size convolution to an O(t^3) table contraction.

namespace quadrep {
namespace {

struct TypeInfo {
    int e;            // valuation; e == t encodes the zero type
    long long uclass;  // odd p: +1/-1; p = 2: unit rep mod min(8, 2^(t-e))
};

struct LocalTypes {
    long long p = 0;
    int t = 0;
    bool p2 = false;
    std::vector<TypeInfo> info;              // index 0 is the zero type
    std::vector<std::vector<int>> idx;       // [e][class-slot] -> type index
    std::vector<unsigned long long> r_u64;   // flat R when p^t fits comfortably
    std::vector<Int> r_big;                  // otherwise (large odd p)
    bool big = false;

    int ntypes() const { return static_cast<int>(info.size()); }

    int class_slot(long long uclass, int e) const {
        if (!p2) return uclass > 0 ? 0 : 1;
        int m = std::min(3, t - e);
        long long rep = uclass & ((1 << m) - 1);
        return static_cast<int>(rep >> 1);  // 1,3,5,7 -> 0..3
    }

    int type_index(int e, long long uclass) const {
        if (e >= t) return 0;
        return idx[e][class_slot(uclass, e)];
    }

    Int rep(int tau) const {
        if (tau == 0) return Int(0);
        return pow_int(to_int(p), info[tau].e) * to_int(info[tau].uclass);
    }

    // residues of this type mod p^t
    Int type_size(int tau) const {
        if (tau == 0) return Int(1);
        int e = info[tau].e;
        if (!p2) return to_int((p - 1) / 2) * pow_int(to_int(p), t - e - 1);
        int m = std::min(3, t - e);
        return pow_int(Int(2), t - e - m);
    }

    const Int R(int tc, int t1, int t2) const {
        size_t n = info.size();
        size_t at = (static_cast<size_t>(tc) * n + t1) * n + t2;
        return big ? r_big[at] : to_int(r_u64[at]);
    }
};

int type_of_small(const LocalTypes& lt, long long c, long long pt) {
    c %= pt;
    if (c < 0) c += pt;
    if (c == 0) return 0;
    int e = 0;
    while (c % lt.p == 0) {
        c /= lt.p;
        ++e;
    }
    if (!lt.p2) {
        // Legendre class of the unit part
        long long r = c % lt.p;
        return lt.idx[e][jacobi(to_int(r), to_int(lt.p)) > 0 ? 0 : 1];
    }
    return lt.idx[e][lt.class_slot(c, e)];
}

int type_of_big(const LocalTypes& lt, const Int& c_in, const Int& pt) {
    Int c = ((c_in % pt) + pt) % pt;
    if (c == 0) return 0;
    Int u;
    int e = valuation(c, to_int(lt.p), &u);
    if (!lt.p2) return lt.idx[e][jacobi(u, to_int(lt.p)) > 0 ? 0 : 1];
    return lt.idx[e][lt.class_slot(Int(u % 8).get_si(), e)];
}

// closed-form structure constants for odd p (scan-checked in the tests)
void build_r_closed_odd(LocalTypes& lt) {
    long long p = lt.p;
    int t = lt.t;
    int n = lt.ntypes();
    bool fits = (t * static_cast<double>(std::log2(static_cast<double>(p))) < 49.0);
    lt.big = !fits;
    std::vector<Int> table(static_cast<size_t>(n) * n * n, Int(0));
    auto at = [&](int tc, int t1, int t2) -> Int& {
        return table[(static_cast<size_t>(tc) * n + t1) * n + t2];
    };
    Int chi_m1 = jacobi(Int(-1), to_int(p));
    for (int tc = 0; tc < n; ++tc) {
        // a = 0 contributes c - 0 of type tc
        at(tc, 0, tc) += 1;
        if (tc == 0) {
            // c = 0: -a has type (e1, chi(-1) s1)
            for (int t1 = 1; t1 < n; ++t1) {
                int e1 = lt.info[t1].e;
                long long s1 = lt.info[t1].uclass;
                long long s2 = chi_m1 > 0 ? s1 : -s1;
                at(0, t1, lt.type_index(e1, s2)) += lt.type_size(t1);
            }
            continue;
        }
        int ec = lt.info[tc].e;
        long long sc = lt.info[tc].uclass;
        for (int t1 = 1; t1 < n; ++t1) {
            int e1 = lt.info[t1].e;
            long long s1 = lt.info[t1].uclass;
            if (e1 < ec) {
                long long s2 = chi_m1 > 0 ? s1 : -s1;
                at(tc, t1, lt.type_index(e1, s2)) += lt.type_size(t1);
            } else if (e1 > ec) {
                at(tc, t1, lt.type_index(ec, sc)) += lt.type_size(t1);
            } else {
                int e = e1;
                // u_a != u_c mod p: Jacobsthal-type counts
                for (long long s2 : {+1LL, -1LL}) {
                    Int cnt = to_int(p - 2) - to_int(s1 + s2) * to_int(sc) - to_int(s1 * s2) * chi_m1;
                    if (cnt % 4 != 0) fail(Err::Internal, "type table: N(s1,s2) not integral");
                    cnt /= 4;
                    at(tc, t1, lt.type_index(e, s2)) += cnt * pow_int(to_int(p), t - e - 1);
                }
                // u_a = u_c mod p^j, j >= 1: class of u_a is forced to sc
                if (s1 == sc) {
                    for (int j = 1; j <= t - e - 1; ++j) {
                        Int per = to_int((p - 1) / 2) * pow_int(to_int(p), t - e - j - 1);
                        long long sm = chi_m1 > 0 ? 1 : -1;
                        at(tc, t1, lt.type_index(e + j, sm)) += per;
                        at(tc, t1, lt.type_index(e + j, -sm)) += per;
                    }
                    at(tc, t1, 0) += 1;  // a == c
                }
            }
        }
    }
    if (lt.big) {
        lt.r_big = std::move(table);
    } else {
        lt.r_u64.resize(table.size());
        for (size_t i = 0; i < table.size(); ++i) lt.r_u64[i] = table[i].get_ui();
    }
}

// scanned structure constants; p^t must fit the scan budget (always true at
// p = 2 for the precisions this library accepts)
void build_r_scan(LocalTypes& lt) {
    long long p = lt.p;
    int t = lt.t;
    long long pt = 1;
    for (int i = 0; i < t; ++i) pt *= p;
    int n = lt.ntypes();
    std::vector<uint8_t> ta(static_cast<size_t>(pt));
    for (long long a = 0; a < pt; ++a) ta[a] = static_cast<uint8_t>(type_of_small(lt, a, pt));
    lt.big = false;
    lt.r_u64.assign(static_cast<size_t>(n) * n * n, 0);
    #pragma omp parallel for schedule(dynamic)
    for (int tc = 0; tc < n; ++tc) {
        long long c = lt.rep(tc).get_si();
        auto* row = &lt.r_u64[static_cast<size_t>(tc) * n * n];
        for (long long a = 0; a < pt; ++a) {
            long long d = c - a;
            if (d < 0) d += pt;
            row[static_cast<size_t>(ta[a]) * n + ta[d]] += 1;
        }
    }
}

LocalTypes build_types(long long p, int t, bool force_scan) {
    LocalTypes lt;
    lt.p = p;
    lt.t = t;
    lt.p2 = (p == 2);
    lt.info.push_back({t, 0});
    lt.idx.assign(t, {});
    for (int e = 0; e < t; ++e) {
        if (!lt.p2) {
            lt.idx[e] = {static_cast<int>(lt.info.size()), static_cast<int>(lt.info.size()) + 1};
            lt.info.push_back({e, +1});
            lt.info.push_back({e, -1});
        } else {
            int m = std::min(3, t - e);
            int cnt = 1 << (m - 1);
            for (int s = 0; s < cnt; ++s) {
                lt.idx[e].push_back(static_cast<int>(lt.info.size()));
                lt.info.push_back({e, 2 * s + 1});
            }
        }
    }
    if (p == 2 || force_scan) {
        if (t * std::log2(static_cast<double>(p)) > 26.5)
            fail(Err::BudgetExceeded, "local type table: p^t too large to scan");
        build_r_scan(lt);
    } else {
        build_r_closed_odd(lt);
    }
    return lt;
}

const LocalTypes& cached_types(long long p, int t) {
    static std::map<std::pair<long long, int>, LocalTypes> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, t);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_types(p, t, false)).first;
    return it->second;
}

// Closed-form type vector of one Jordan block mod p^t.  Entries are counts
// PER RESIDUE of the given type.
//   scalar, odd p:  q = u p^a x^2, per-residue 2 p^(a+mu) at e = a+2mu,
//                   class chi(u); zero type p^(t - ceil((t-a)/2)).
//   scalar, p = 2:  per-residue 2^(min(3,t-e)-1) * 2^(a+mu), class u mod 8.
//   hyperbolic:     q = 2^a xy, per-residue (e-a+1) 2^(t+a-1) for a<=e<t,
//                   all classes; zero 4^a ((t-a) 2^(t-a-1) + 2^(t-a)).
//   elliptic:       q = 2^a (x^2+xy+y^2), per-residue 3*2^(t+a-1) for
//                   e-a even, all classes; zero 4^a * 4^floor((t-a)/2).
std::vector<Int> block_type_vector(const LocalTypes& lt, const JordanBlock& b) {
    long long p = lt.p;
    int t = lt.t;
    std::vector<Int> v(lt.ntypes(), Int(0));
    int a = b.q_exponent(p);
    if (b.kind == JordanBlock::Scalar) {
        for (int mu = 0; a + 2 * mu < t; ++mu) {
            int e = a + 2 * mu;
            if (!lt.p2) {
                v[lt.type_index(e, jacobi(b.unit, to_int(p)))] = 2 * pow_int(to_int(p), a + mu);
            } else {
                int m = std::min(3, t - e);
                v[lt.type_index(e, Int(b.unit % 8).get_si())] =
                    pow_int(Int(2), (m - 1) + a + mu);
            }
        }
        v[0] = (a >= t) ? pow_int(to_int(p), t) : pow_int(to_int(p), t - (t - a + 1) / 2);
        return v;
    }
    if (b.kind == JordanBlock::Hyperbolic) {
        for (int e = a; e < t && e >= 0; ++e)
            for (int slot : lt.idx[e]) v[slot] = Int(e - a + 1) * pow_int(Int(2), t + a - 1);
        if (a >= t) {
            v[0] = pow_int(Int(2), 2 * t);
        } else {
            int m = t - a;
            v[0] = pow_int(Int(4), a) * (Int(m) * pow_int(Int(2), m - 1) + pow_int(Int(2), m));
        }
        return v;
    }
    for (int mu = 0; a + 2 * mu < t; ++mu) {
        int e = a + 2 * mu;
        for (int slot : lt.idx[e]) v[slot] = Int(3) * pow_int(Int(2), t + a - 1);
    }
    v[0] = (a >= t) ? pow_int(Int(4), t) : pow_int(Int(4), a) * pow_int(Int(4), (t - a) / 2);
    return v;
}

std::vector<Int> convolve(const LocalTypes& lt, const std::vector<Int>& f,
                          const std::vector<Int>& g) {
    int n = lt.ntypes();
    std::vector<Int> out(n, Int(0));
    for (int tc = 0; tc < n; ++tc) {
        Int acc = 0;
        for (int t1 = 0; t1 < n; ++t1) {
            if (f[t1] == 0) continue;
            Int inner = 0;
            for (int t2 = 0; t2 < n; ++t2) {
                if (g[t2] == 0) continue;
                inner += lt.R(tc, t1, t2) * g[t2];
            }
            acc += f[t1] * inner;
        }
        out[tc] = acc;
    }
    return out;
}

// Full count vector (indexed by value type) for Q mod p^t.  The result does
// not depend on n, so it is cached: stabilization checks and dense n-grids
// reuse one convolution per (form, p, t).
const std::vector<Int>& count_vector(const QuadraticForm& f, long long p, int t) {
    static std::map<std::string, std::vector<Int>> cache;
    static std::mutex mu;
    std::string key = std::to_string(p) + "|" + std::to_string(t) + "|" +
                      std::to_string(f.dim);
    for (int i = 0; i < f.dim; ++i)
        for (int j = i; j < f.dim; ++j) key += "," + f.gram[i][j].get_str();
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    int vd = valuation(2 * f.disc, to_int(p));
    std::vector<JordanBlock> blocks = jordan_decompose(f, p, t + vd + 4);
    const LocalTypes& lt = cached_types(p, t);
    std::vector<Int> acc(lt.ntypes(), Int(0));
    acc[0] = 1;  // empty form: counts 1 at residue 0
    for (const JordanBlock& b : blocks) acc = convolve(lt, acc, block_type_vector(lt, b));
    // sanity: total over residues is p^(t*k)
    Int total = 0;
    for (int tau = 0; tau < lt.ntypes(); ++tau) total += acc[tau] * lt.type_size(tau);
    if (total != pow_int(to_int(p), static_cast<unsigned long>(t) * f.dim))
        fail(Err::Internal, "local count: type vector mass mismatch");
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(std::move(key), std::move(acc)).first->second;
}

Int count_via_types(const QuadraticForm& f, const Int& n, long long p, int t) {
    if (t == 0) return 1;
    const std::vector<Int>& acc = count_vector(f, p, t);
    const LocalTypes& lt = cached_types(p, t);
    Int pt = pow_int(to_int(p), t);
    return acc[type_of_big(lt, n, pt)];
}

}  // namespace

namespace detail {
Int local_count_types(const QuadraticForm& f, const Int& n, long long p, int t) {
    return count_via_types(f, n, p, t);
}
}  // namespace detail

Int local_count_direct(const QuadraticForm& f, const Int& n, long long p, int t,
                       long long scan_budget) {
    if (t == 0) return 1;
    int k = f.dim;
    double cost = k * t * std::log2(static_cast<double>(p));
    if (cost > 62 || std::pow(static_cast<double>(p), t * k) > static_cast<double>(scan_budget))
        fail(Err::BudgetExceeded, "local_count_direct: p^(t k) exceeds budget");
    long long pt = 1;
    for (int i = 0; i < t; ++i) pt *= p;
    long long target = to_ll(Int((n % to_int(pt) + to_int(pt)) % to_int(pt)));
    std::vector<std::vector<long long>> g(k, std::vector<long long>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            g[i][j] = to_ll(Int((f.gram[i][j] % to_int(pt) + to_int(pt)) % to_int(pt)));
    // recursive partial evaluation: Q = sum a_i x_i^2 + sum_{i<j} A_ij x_i x_j
    std::vector<long long> a2(k);  // Q-coefficients A_ii/2 mod pt
    for (int i = 0; i < k; ++i)
        a2[i] = to_ll(Int((Int(f.gram[i][i] / 2) % to_int(pt) + to_int(pt)) % to_int(pt)));
    long long count = 0;
    // cross[i] = sum_{j < i fixed} A_ij x_j mod pt, kept nonnegative
    std::vector<long long> cross(k, 0);
    std::function<void(int, long long)> rec = [&](int level, long long val) {
        if (level == k) {
            if (val == target) ++count;
            return;
        }
        for (long long v = 0; v < pt; ++v) {
            long long q = (val + ((a2[level] * v) % pt) * v + cross[level] * v) % pt;
            for (int j = level + 1; j < k; ++j)
                cross[j] = (cross[j] + g[level][j] * v) % pt;
            rec(level + 1, q);
            for (int j = level + 1; j < k; ++j)
                cross[j] = ((cross[j] - g[level][j] * v) % pt + pt) % pt;
        }
    };
    rec(0, 0);
    return to_int(count);
}

Int local_count(const QuadraticForm& f, const Int& n, long long p, int t,
                long long scan_budget) {
    if (t == 0) return 1;
    double cost = f.dim * t * std::log2(static_cast<double>(p));
    if (cost <= 24 && std::pow(static_cast<double>(p), t * f.dim) <= static_cast<double>(scan_budget))
        return local_count_direct(f, n, p, t, scan_budget);
    return count_via_types(f, n, p, t);
}

}  // namespace quadrep

#include <cmath>

#include "quadrep/errors.hpp"
#include "quadrep/local_densities.hpp"

namespace quadrep {

std::complex<long double> GaussSumValue::approx() const {
    long double s = std::sqrt(static_cast<long double>(m.get_d()));
    return {static_cast<long double>(a.get_d()) * s, static_cast<long double>(b.get_d()) * s};
}

GaussSumValue gauss_sum(const Int& h_in, const Int& m) {
    if (m < 1) fail(Err::Usage, "gauss_sum needs m >= 1");
    if (gcd(h_in, m) != 1) fail(Err::NotCoprime, "gauss_sum closed form needs gcd(h,m)=1");
    Int h = ((h_in % m) + m) % m;  // G depends on h mod m only
    GaussSumValue g;
    g.m = m;
    if (m == 1) {
        g.a = 1;
        g.b = 0;
        return g;
    }
    if (m % 2 == 1) {
        // eps_m (h/m) sqrt(m); eps_m = 1 for m = 1 (4), i for m = 3 (4)
        int j = jacobi(h, m);
        if (m % 4 == 1) {
            g.a = j;
            g.b = 0;
        } else {
            g.a = 0;
            g.b = j;
        }
        return g;
    }
    if (m % 4 == 2) {
        g.a = 0;
        g.b = 0;
        return g;
    }
    // 4 | m, h odd: (1+i) eps_h^{-1} (m/h) sqrt(m)
    int j = jacobi(m, h);
    Int h4 = ((h % 4) + 4) % 4;
    if (h4 == 1) {
        g.a = j;
        g.b = j;
    } else {
        g.a = j;
        g.b = -j;
    }
    return g;
}

std::complex<long double> gauss_sum_direct(const Int& h, const Int& m) {
    if (m < 1) fail(Err::Usage, "gauss_sum_direct needs m >= 1");
    const long double tau = 6.283185307179586476925286766559005768L;
    long double re = 0, im = 0;
    Int hm = ((h % m) + m) % m;
    for (Int x = 0; x < m; ++x) {
        Int ph = (hm * x * x) % m;
        long double t = tau * static_cast<long double>(ph.get_d()) /
                        static_cast<long double>(m.get_d());
        re += std::cos(t);
        im += std::sin(t);
    }
    return {re, im};
}

Int ramanujan_sum(const Int& n, long long p, int t) {
    if (t < 1) fail(Err::Usage, "ramanujan_sum needs t >= 1");
    Int pt = pow_int(to_int(p), t);
    Int pt1 = pow_int(to_int(p), t - 1);
    if (n % pt == 0) return pt - pt1;  // phi(p^t)
    if (n % pt1 == 0) return -pt1;     // v_p(n) = t-1
    return 0;
}

long double ramanujan_sum_direct(const Int& n, long long p, int t) {
    Int pt = pow_int(to_int(p), t);
    const long double tau = 6.283185307179586476925286766559005768L;
    long double re = 0;
    Int nm = ((-n) % pt + pt) % pt;
    for (Int a = 1; a < pt; ++a) {
        if (a % to_int(p) == 0) continue;
        Int ph = (a * nm) % pt;
        re += std::cos(tau * static_cast<long double>(ph.get_d()) /
                       static_cast<long double>(pt.get_d()));
    }
    return re;
}

}  // namespace quadrep

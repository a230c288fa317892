#include "quadrep/numbers.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "quadrep/errors.hpp"

namespace quadrep {

Int isqrt_floor(const Int& n) {
    if (n < 0) fail(Err::Internal, "isqrt of negative");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const Int& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

Int iroot_floor(const Int& n, unsigned long r) {
    if (n < 0) fail(Err::Internal, "iroot of negative");
    Int out;
    mpz_root(out.get_mpz_t(), n.get_mpz_t(), r);
    return out;
}

int jacobi(const Int& a, const Int& n) { return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t()); }

Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

int valuation(const Int& n, const Int& p, Int* unit) {
    if (n == 0) fail(Err::Internal, "valuation of zero");
    Int u = n;
    int v = 0;
    Int q, r;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        u = q;
        ++v;
    }
    if (unit) *unit = u;
    return v;
}

Int pow_int(const Int& base, unsigned long e) {
    Int out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

std::vector<long> primes_up_to(long n) {
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<bool> sieve(static_cast<size_t>(n) + 1, true);
    sieve[0] = sieve[1] = false;
    for (long i = 2; i * i <= n; ++i)
        if (sieve[static_cast<size_t>(i)])
            for (long j = i * i; j <= n; j += i) sieve[static_cast<size_t>(j)] = false;
    for (long i = 2; i <= n; ++i)
        if (sieve[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace {

Int pollard_rho(const Int& n) {
    // n odd composite, not a prime power of interest; Brent variant
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xb5297a4dul);
    for (;;) {
        Int x = rng.get_z_range(n - 2) + 1;
        Int c = rng.get_z_range(n - 2) + 1;
        Int y = x, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Int diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_rec(const Int& n, std::map<Int, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    Int d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

std::map<Int, int> factor(const Int& n) {
    std::map<Int, int> out;
    if (n == 0) fail(Err::Internal, "factor of zero");
    Int m = abs(n);
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L}) {
        while (m % p == 0) {
            out[Int(p)] += 1;
            m /= p;
        }
    }
    if (m > 1) factor_rec(m, out);
    return out;
}

std::string decimal_string(const Rat& x, int digits, Round mode) {
    Rat v = x;
    v.canonicalize();
    bool neg = v < 0;
    Int num = abs(v.get_num());
    Int den = v.get_den();
    Int scale = pow_int(10, static_cast<unsigned long>(digits));
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), Int(num * scale).get_mpz_t(), den.get_mpz_t());
    // q = floor(|x|*10^d); adjust per requested rounding of the signed value
    bool bump = false;
    if (r != 0) {
        switch (mode) {
            case Round::Down: bump = neg; break;
            case Round::Up: bump = !neg; break;
            case Round::Nearest: bump = 2 * r >= den; break;
        }
    }
    if (bump) q += 1;
    Int ip = q / scale, fp = q % scale;
    std::string frac = fp.get_str();
    frac.insert(frac.begin(), static_cast<size_t>(digits) - frac.size(), '0');
    std::string s = (neg && (ip != 0 || fp != 0) ? "-" : "") + ip.get_str();
    if (digits > 0) s += "." + frac;
    return s;
}

Rat parse_rational(const std::string& s) {
    if (s.empty()) fail(Err::Usage, "empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) fail(Err::Usage, "zero denominator: " + s);
        Rat q(num, den);
        q.canonicalize();
        return q;
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(Int(s));
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() || ip == "-" || ip == "+") ip += "0";
    for (char c : fp)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail(Err::Usage, "bad rational: " + s);
    bool neg = !ip.empty() && ip[0] == '-';
    Rat q = Rat(Int(ip));
    if (!fp.empty()) {
        Rat f(Int(fp), pow_int(10, fp.size()));
        f.canonicalize();
        q += neg ? -f : f;
    }
    return q;
}

}  // namespace quadrep

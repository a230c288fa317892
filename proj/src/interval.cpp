#include "quadrep/interval.hpp"

#include <algorithm>

#include "quadrep/errors.hpp"

namespace quadrep {

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
    Rat c1 = a.lo * b.lo, c2 = a.lo * b.hi, c3 = a.hi * b.lo, c4 = a.hi * b.hi;
    return {std::min(std::min(c1, c2), std::min(c3, c4)),
            std::max(std::max(c1, c2), std::max(c3, c4))};
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.straddles_zero()) fail(Err::Internal, "interval division by zero");
    Rat c1 = a.lo / b.lo, c2 = a.lo / b.hi, c3 = a.hi / b.lo, c4 = a.hi / b.hi;
    return {std::min(std::min(c1, c2), std::min(c3, c4)),
            std::max(std::max(c1, c2), std::max(c3, c4))};
}

Interval operator*(const Interval& a, const Rat& c) {
    if (c >= 0) return {a.lo * c, a.hi * c};
    return {a.hi * c, a.lo * c};
}

Interval operator+(const Interval& a, const Rat& c) { return {a.lo + c, a.hi + c}; }
Interval operator-(const Rat& c, const Interval& a) { return {c - a.hi, c - a.lo}; }

Interval interval_abs(const Interval& a) {
    if (a.lo >= 0) return a;
    if (a.hi <= 0) return {-a.hi, -a.lo};
    return {Rat(0), std::max(Rat(-a.lo), a.hi)};
}

Interval interval_max(const Interval& a, const Interval& b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval sqrt_interval(const Rat& x, int prec_bits) {
    if (x < 0) fail(Err::Internal, "sqrt of negative rational");
    if (x == 0) return Interval(Rat(0));
    // sqrt(num/den) bracketed by isqrt of num*den scaled by 2^(2*prec_bits)
    Int num = x.get_num(), den = x.get_den();
    Int scale = Int(1) << static_cast<unsigned>(prec_bits);
    Int t = num * den * scale * scale;
    Int s = isqrt_floor(t);  // s <= sqrt(num*den)*2^prec < s+1
    Rat lo(s, den * scale), hi(s + 1, den * scale);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

Interval sqrt_interval(const Interval& x, int prec_bits) {
    if (x.lo < 0) fail(Err::Internal, "sqrt of interval with negative part");
    return {sqrt_interval(x.lo, prec_bits).lo, sqrt_interval(x.hi, prec_bits).hi};
}

Interval root_interval(const Rat& x, unsigned long r, int prec_bits) {
    if (x < 0) fail(Err::Internal, "root of negative rational");
    if (r == 1) return Interval(x);
    if (x == 0) return Interval(Rat(0));
    // x^(1/r) = iroot(num * den^(r-1) * 2^(r*B)) / (den * 2^B)
    Int num = x.get_num(), den = x.get_den();
    Int scale = Int(1) << static_cast<unsigned>(prec_bits);
    Int t = num * pow_int(den, r - 1) * pow_int(scale, r);
    Int s = iroot_floor(t, r);
    Rat lo(s, den * scale), hi(s + 1, den * scale);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

Interval rational_power_interval(const Rat& x, const Rat& e, int prec_bits) {
    if (x <= 0) fail(Err::Internal, "rational_power_interval needs x > 0");
    if (e < 0) fail(Err::Internal, "rational_power_interval needs e >= 0");
    unsigned long p = e.get_num().get_ui();
    unsigned long q = e.get_den().get_ui();
    Rat xp(pow_int(x.get_num(), p), pow_int(x.get_den(), p));
    xp.canonicalize();
    return root_interval(xp, q, prec_bits);
}

Interval pi_interval() {
    // 40 significant digits; hi = lo + 1 ulp
    static const Rat lo = parse_rational("3.141592653589793238462643383279502884197");
    static const Rat hi = lo + Rat(Int(1), pow_int(10, 39));
    return {lo, hi};
}

namespace {

Rat round_down_bits(const Rat& x, int bits) {
    Int scale = Int(1) << static_cast<unsigned>(bits);
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), Int(x.get_num() * scale).get_mpz_t(), x.get_den().get_mpz_t());
    Rat r(q, scale);
    r.canonicalize();
    return r;
}

Rat round_up_bits(const Rat& x, int bits) {
    Int scale = Int(1) << static_cast<unsigned>(bits);
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), Int(x.get_num() * scale).get_mpz_t(), x.get_den().get_mpz_t());
    Rat r(q, scale);
    r.canonicalize();
    return r;
}

}  // namespace

Interval compress(const Interval& a, int bits) {
    size_t sz = std::max({mpz_sizeinbase(a.lo.get_num().get_mpz_t(), 2),
                          mpz_sizeinbase(a.lo.get_den().get_mpz_t(), 2),
                          mpz_sizeinbase(a.hi.get_num().get_mpz_t(), 2),
                          mpz_sizeinbase(a.hi.get_den().get_mpz_t(), 2)});
    if (sz <= static_cast<size_t>(2 * bits)) return a;
    return {round_down_bits(a.lo, bits), round_up_bits(a.hi, bits)};
}

std::string to_string(const Interval& a, int digits) {
    return "[" + decimal_string(a.lo, digits, Round::Down) + ", " +
           decimal_string(a.hi, digits, Round::Up) + "]";
}

}  // namespace quadrep

#pragma once

#include <string>

#include "quadrep/numbers.hpp"

namespace quadrep {

// Closed interval with exact rational endpoints.  All operations round
// outward; endpoints themselves are exact, so the only width sources are
// explicit enclosures (pi, square roots, r-th roots) and compress().
struct Interval {
    Rat lo, hi;

    Interval() : lo(0), hi(0) {}
    explicit Interval(const Rat& x) : lo(x), hi(x) {}
    Interval(const Rat& a, const Rat& b) : lo(a), hi(b) {}
    static Interval point(const Rat& x) { return Interval(x); }

    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool straddles_zero() const { return lo <= 0 && 0 <= hi; }
    bool positive() const { return lo > 0; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);  // 0 not in b
Interval operator*(const Interval& a, const Rat& c);
Interval operator+(const Interval& a, const Rat& c);
Interval operator-(const Rat& c, const Interval& a);

Interval interval_abs(const Interval& a);
Interval interval_max(const Interval& a, const Interval& b);

// enclosure of sqrt(x), x >= 0, with relative width ~ 2^-prec_bits
Interval sqrt_interval(const Rat& x, int prec_bits = 96);
Interval sqrt_interval(const Interval& x, int prec_bits = 96);

// enclosure of x^(1/r)
Interval root_interval(const Rat& x, unsigned long r, int prec_bits = 96);

// enclosure of x^(p/q) for x > 0 rational, exponent p/q >= 0
Interval rational_power_interval(const Rat& x, const Rat& exponent, int prec_bits = 96);

// pi to ~126 correct bits, exact rational endpoints
Interval pi_interval();

// round endpoints outward so that numerator/denominator stay ~bits wide;
// keeps containment, used to stop exact rational blowup in long products
Interval compress(const Interval& a, int bits = 192);

std::string to_string(const Interval& a, int digits = 12);

}  // namespace quadrep

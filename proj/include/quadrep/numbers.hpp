#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace quadrep {

using Int = mpz_class;
using Rat = mpq_class;

// gmpxx lacks long long constructors; every 64-bit literal goes through here
inline Int to_int(long long v) { return Int(static_cast<long>(v)); }
inline Int to_int(unsigned long long v) { return Int(static_cast<unsigned long>(v)); }
inline Int to_int(long v) { return Int(v); }
inline Int to_int(int v) { return Int(v); }
inline long long to_ll(const Int& v) { return static_cast<long long>(v.get_si()); }

// floor(sqrt(n)), n >= 0
Int isqrt_floor(const Int& n);
inline long isqrt_floor(long n) { return isqrt_floor(Int(n)).get_si(); }
bool is_square(const Int& n);

// floor(n^(1/r)), n >= 0, r >= 1
Int iroot_floor(const Int& n, unsigned long r);

// Jacobi symbol (a/n) for odd positive n
int jacobi(const Int& a, const Int& n);
inline int legendre(const Int& a, long p) { return jacobi(a, Int(p)); }

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

// largest e with p^e | n (n != 0), and the cofactor n / p^e
int valuation(const Int& n, const Int& p, Int* unit = nullptr);

Int pow_int(const Int& base, unsigned long e);
inline Int pow_int(long base, unsigned long e) { return pow_int(Int(base), e); }

std::vector<long> primes_up_to(long n);
bool is_prime(const Int& n);

// full factorization; trial division + Pollard rho for the tail
std::map<Int, int> factor(const Int& n);

// exact decimal rendering of a rational, rounding toward -inf / +inf / nearest
enum class Round { Down, Up, Nearest };
std::string decimal_string(const Rat& x, int digits, Round mode = Round::Nearest);

// parse "a/b", integer, or decimal literal into an exact rational
Rat parse_rational(const std::string& s);

}  // namespace quadrep

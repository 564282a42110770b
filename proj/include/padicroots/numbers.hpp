#pragma once

// Arbitrary-precision scalars and the handful of elementary number-theoretic
// routines the rest of the library leans on.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace padicroots {

using BigInt = mpz_class;
using BigRat = mpq_class;

// mpq_class(a, b) does not canonicalize on its own.
inline BigRat make_rat(const BigInt& num, const BigInt& den) {
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

inline BigInt pow_int(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// base^e for signed e; negative exponents require base != 0.
inline BigRat pow_rat(const BigRat& base, long e) {
    if (e == 0) return BigRat(1);
    if (base == 0 && e < 0) throw std::domain_error("pow_rat: zero base with negative exponent");
    BigRat b = e > 0 ? base : BigRat(1) / base;
    unsigned long k = static_cast<unsigned long>(e > 0 ? e : -e);
    BigRat acc(1);
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

inline bool is_prime(const BigInt& n) {
    if (n < 2) return false;
    for (BigInt d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<long> divisors(long n) {
    if (n <= 0) throw std::invalid_argument("divisors: n must be positive");
    std::vector<long> small, large;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) large.push_back(n / d);
        }
    }
    for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
    return small;
}

// Number-theoretic Möbius function by trial factorization.
inline int mobius(long n) {
    if (n <= 0) throw std::invalid_argument("mobius: n must be positive");
    int sign = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            sign = -sign;
        }
    }
    if (n > 1) sign = -sign;
    return sign;
}

inline std::string rat_to_string(const BigRat& q) {
    std::string s = q.get_num().get_str();
    if (q.get_den() != 1) s += "/" + q.get_den().get_str();
    return s;
}

}  // namespace padicroots

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "anticyc/errors.hpp"

namespace anticyc {

using Int = mpz_class;
using Rat = mpq_class;

inline Int ipow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int imod(const Int& a, const Int& m) {
    // Canonical representative in [0, m).
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int igcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int ilcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// g = gcd(a, b) >= 0 with g = u*a + v*b.
inline Int xgcd(const Int& a, const Int& b, Int& u, Int& v) {
    Int g;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

// Inverse of a modulo m; throws when gcd(a, m) != 1.
inline Int inv_mod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw InputError("no inverse of " + a.get_str() + " modulo " + m.get_str());
    return r;
}

inline Int pow_mod(const Int& a, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool is_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline long to_long(const Int& n) {
    if (!n.fits_slong_p()) throw ResourceLimit("integer does not fit machine word: " + n.get_str());
    return n.get_si();
}

inline Int factorial(unsigned long n) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

// p-adic valuation together with the cofactor u = n / p^v.
inline long ival(const Int& n, const Int& p, Int* unit = nullptr) {
    if (n == 0) throw InputError("valuation of zero");
    Int u = n;
    long v = 0;
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

inline std::vector<std::pair<Int, unsigned long>> factorize(Int n) {
    // Trial division; operands at desk scale stay far below the crossover
    // where anything cleverer would matter.
    if (n <= 0) throw InputError("factorize expects a positive integer");
    std::vector<std::pair<Int, unsigned long>> out;
    auto strip = [&](const Int& p) {
        unsigned long e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (e) out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (Int p = 5; p * p <= n;) {
        strip(p);
        p += 2;
        if (p * p > n) break;
        strip(p);
        p += 4;
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline Rat rat(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace anticyc

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "anticyc/arith.hpp"
#include "anticyc/bigint.hpp"
#include "anticyc/errors.hpp"

namespace anticyc::interp {

using arith::PadicInt;

// q * pi^e with exact rational q.
struct PiPowerValue {
    Rat q;
    long e = 0;

    PiPowerValue mul(const PiPowerValue& o) const;
    bool operator==(const PiPowerValue& o) const { return q == o.q && e == o.e; }
    bool operator!=(const PiPowerValue& o) const { return !(*this == o); }
    std::string str() const;
    nlohmann::json to_json() const;
};

// Gamma_C(s) = 2 (2 pi)^{-s} (s-1)! for an integer s >= 1; PoleError names
// the offending argument otherwise.
PiPowerValue gamma_C(long s);

// Gamma_C(c) Gamma_C(c+2-k1-k2) Gamma_C(c+1-k1) Gamma_C(c+1-k2) with
// c = (k0+k1+k2-2)/2: the central Gamma-factor in the dominant-first-weight
// normalization.  Weights must have even sum.
PiPowerValue gamma_triple(long k0, long k1, long k2);

// The same product reassembled from the split L-value parameterization
// (arguments (k1+k2)/2 + r - 1, (k1-k2)/2 - r + 1, (k1+k2)/2 - r,
// (k1-k2)/2 + r with k0 = 2r, the middle two entering through the reflection
// s -> 1-s).  Cross-check oracle for gamma_triple.
PiPowerValue gamma_triple_split_form(long k0, long k1, long k2);

// Sparse Laurent polynomial in named formal symbols with exact rational
// coefficients.  Quantities whose exponent is a weight variable are carried
// as atomic symbols ("p^r"); everything else uses integer Laurent exponents.
class Formal {
public:
    using Monomial = std::map<std::string, long>;

    Formal() = default;  // zero
    static Formal constant(const Rat& c);
    static Formal from_int(long c);
    static Formal sym(const std::string& name, long e = 1);

    Formal operator+(const Formal& o) const;
    Formal operator-(const Formal& o) const;
    Formal operator-() const;
    Formal operator*(const Formal& o) const;
    Formal pow(long n) const;  // n >= 0
    Formal rename(const std::string& from, const std::string& to) const;

    bool operator==(const Formal& o) const { return terms_ == o.terms_; }
    bool operator!=(const Formal& o) const { return !(*this == o); }
    bool is_zero() const { return terms_.empty(); }

    // Total substitution: every symbol present must be bound (InputError);
    // a negative power of a symbol bound to zero raises PoleError.
    Rat eval(const std::map<std::string, Rat>& bind) const;

    std::vector<std::string> symbols() const;
    const std::map<Monomial, Rat>& terms() const { return terms_; }
    std::string str() const;
    nlohmann::json to_json() const;

private:
    std::map<Monomial, Rat> terms_;
    void add_term(Monomial m, const Rat& c);
};

// A local interpolation factor: an exact symbolic expression, or an opaque
// marker for the ramified branch whose factor is defined only by citation.
struct InterpFactor {
    enum class Kind { Exact, Ramified };

    Kind kind = Kind::Exact;
    Formal expr;            // meaningful when kind == Exact
    long n = 0;             // conductor exponent of the branch
    std::string carried;    // local datum the ramified marker keeps (symbol name)
    std::string note;

    bool is_ramified_marker() const { return kind == Kind::Ramified; }
    Rat eval(const std::map<std::string, Rat>& bind) const;  // PreconditionFailed on Ramified
    nlohmann::json to_json() const;
};

// Definite-side Euler factor in the symbols alpha, chi_p, chi_pbar, p, p^r:
//   n = 0: (1 - alpha^{-1} p^{r-1} chi_p)(1 - alpha p^{r-1} chi_pbar)
//   n > 0: 1
// The alpha-exponent asymmetry between the two factors reproduces the source
// display as printed (possibly a slip against the work it cites); pass
// symmetric = true for the alpha^{-1}/alpha^{-1} variant.
InterpFactor calE_BD(long n, bool symmetric = false);

// Companion interpolation prefactor p^{(2r-1)n} alpha^{-2n} Gamma(r)^2 at
// concrete (r, n), in the symbols p, alpha.
Formal calE_BD_prefactor(long r, long n);

// Indefinite-side local factor in the symbols a_p, chi_pbar, p, p^r:
//   n = 0: (1 - a_p chi_pbar p^{-r} + chi_pbar^2 p^{-1})^2
//   n > 0: opaque Ramified marker carrying (n, chi_p)
InterpFactor e_BDP(long n);

// Katz-measure Euler factor in the symbols xi_p, xi_pbar, p:
//   (1 - xi_p^{-1} p^{-1})(1 - xi_pbar)
InterpFactor katz_factor();

// Infinity type plus opaque local data labels at the two primes above p.
struct CharParams {
    long k = 0;
    long j = 0;
    std::string at_p, at_pbar;

    bool operator==(const CharParams& o) const {
        return k == o.k && j == o.j && at_p == o.at_p && at_pbar == o.at_pbar;
    }
    nlohmann::json to_json() const;
};

// The functional-equation substitution xi -> xi^{-c} N^{-1}: infinity type
// (k, j) -> (-j-1, -k-1), local data at the two primes swapped.  An exact
// involution (the norm shift is part of both applications).
CharParams katz_fe_transform(const CharParams& x);

// Interpolation range k > -j >= 0.
bool katz_in_range(const CharParams& x);

struct FactorizationReport {
    bool formal_ok = false;
    bool mutation_detected = false;
    bool numeric_ok = false;
    bool pass = false;
    std::string detail;
    nlohmann::json to_json() const;
};

// Verifies, as an exact polynomial identity in independent symbols chi1 and
// chi2, that the two displayed squares of the decomposed Euler factor equal
// e_BDP(chi1) * e_BDP(chi2); includes an exponent-mutation control and an
// exact rational spot evaluation at (a_p, chi1, chi2, r, p) = (1, 2, 3, 1, 5).
// The two sides are assembled through disjoint code paths (multinomial
// expansion vs. the e_BDP constructor).
FactorizationReport triple_Ep_factorization_check();

struct WeightSubstitutionReport {
    bool pass = false;
    Int v;       // the root used, mod p^N
    Int w1, w2;  // 1+W_1 and 1+W_2 mod p^N
    long e1 = 0, e2 = 0;  // verified exponents (k1+k2-2)/2 and (k1-k2)/2
    std::string detail;
    nlohmann::json to_json() const;
};

// With S_i = v (1+p)^{k_i-1} - 1 and v^{p^b} = 1+p, verifies mod p^N that
//   v^{-1} (1+S_1)^{1/2} (1+S_2)^{1/2} = (1+p)^{(k1+k2-2)/2}  and
//   (1+S_1)^{1/2} (1+S_2)^{-1/2}      = (1+p)^{(k1-k2)/2},
// principal square-root branches throughout.  b = 0 computes v = 1+p; for
// b > 0 no root exists in Z_p (NoRoot) unless a valid v is supplied, which is
// verified (NoRoot on failure).  Requires k1 = k2 mod 2 and odd p.
WeightSubstitutionReport weight_substitution_check(const Int& p, long b, long k1, long k2, int N,
                                                   std::optional<Int> supplied_v = std::nullopt);

struct InfinityType {
    long a = 0;
    long b = 0;
    bool operator==(const InfinityType& o) const { return a == o.a && b == o.b; }
    nlohmann::json to_json() const;
};

// Infinity types of the two anticyclotomic twists attached to a weight pair:
// ((k1+k2)/2 - 1, -(k1+k2)/2 + 1) and ((k1-k2)/2, (k2-k1)/2).  Requires
// k1 = k2 mod 2; both results satisfy a + b = 0.
std::pair<InfinityType, InfinityType> infinity_type_of_twists(long k1, long k2);

struct KappaAc {
    PadicInt value;  // (1+p)^t mod p^N
    Int exponent;    // the group-like exponent t
    nlohmann::json to_json() const;
};

// Evaluation of the anticyclotomic coordinate character on the t-th power of
// the chosen topological generator: (1+p)^t to precision N, p odd.
KappaAc kappa_ac_eval(const Int& t, const Int& p, int N);

}  // namespace anticyc::interp

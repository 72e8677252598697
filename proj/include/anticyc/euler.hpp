#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "anticyc/bigint.hpp"
#include "anticyc/classfield.hpp"
#include "anticyc/errors.hpp"
#include "anticyc/heckechar.hpp"
#include "anticyc/iqfield.hpp"
#include "anticyc/valuering.hpp"

namespace anticyc::euler {

using arith::RElt;
using arith::ValueRing;
using heckechar::HeckeCharacter;
using iqfield::IQField;
using iqfield::Ideal;

// Weierstrass coefficients of an elliptic curve over Q.
struct Curve {
    Int a1, a2, a3, a4, a6;
};

// Eigenvalue data of a weight-k newform with trivial or declared nebentypus.
// a_ell comes from one of two providers: an elliptic curve (weight 2, counted
// over F_ell) or a user-supplied table.  Table entries are held to the
// eigenvalue bound a^2 <= 4 ell^{k-1} unless the caller opts out; point
// counts satisfy it unconditionally.
class FormData {
public:
    static FormData from_curve(long level, const Curve& E);
    static FormData from_table(long weight, long level, std::map<long, Int> table,
                               bool trivial_nebentypus = true, bool check_bound = true);

    long weight() const { return k_; }
    long level() const { return N_; }
    bool trivial_nebentypus() const { return trivial_neb_; }
    bool curve_backed() const { return curve_.has_value(); }

    // Hecke eigenvalue at a prime.  Curve provider: InputError at primes
    // dividing the level (no good-reduction count there).
    Int a_ell(const Int& ell) const;

    nlohmann::json to_json() const;

private:
    FormData(long k, long N, bool trivial_neb) : k_(k), N_(N), trivial_neb_(trivial_neb) {}
    long k_, N_;
    bool trivial_neb_;
    std::optional<Curve> curve_;
    std::map<long, Int> table_;
};

// Polynomial 1 + c_1 X + ... over the fraction layer of a ValueRing, attached
// to a residue prime ell: constant term one, degree at most four, and every
// coordinate denominator a power of ell.  The ring is shared so elements
// survive copies of the polynomial.
struct EulerPolynomial {
    std::shared_ptr<const ValueRing> ring;
    Int ell;
    std::vector<RElt> coef;  // ascending powers of X

    static EulerPolynomial make(std::shared_ptr<const ValueRing> ring, Int ell, std::vector<RElt> coef);

    std::size_t degree() const { return coef.size() - 1; }
    RElt eval(const RElt& x) const;
    nlohmann::json to_json() const;
};

// P(X) = 1 - a_ell w ell^{-c} X + ell^{k-1} w^2 ell^{-2c} X^2 for a split
// prime l of norm ell, with w the product-character value at l and
// c = (k + k1 + k2 - 2)/2 the central shift of the triple weight; k1, k2 are
// the theta weights of psi1, psi2.  Requires trivial nebentypus and matching
// weight parity.
EulerPolynomial P_poly(const FormData& fd, const HeckeCharacter& psi1, const HeckeCharacter& psi2,
                       const Ideal& l);

// Element of R[H_frak^(p) x H_frakbar^(p)] keyed by coordinate pairs in the
// two p-part groups; only nonzero coefficients are held, so map equality is
// element equality.
struct QElement {
    using Key = std::pair<arith::Vec, arith::Vec>;

    std::shared_ptr<const ValueRing> ring;
    std::map<Key, RElt> terms;

    std::size_t support_size() const { return terms.size(); }
    RElt augmentation() const;
    nlohmann::json to_json() const;
};

// The four-term norm-relation operator at a split prime l of norm ell:
//   a_ell(f) - (psi1 psi2(l)/ell) [l]x[l] - (psi1 psi2(lbar)/ell) [lbar]x[lbar]
//            + (1-ell) (psi1(l) psi2(lbar)/ell^2) [l]x[lbar],
// the classes taken in the p-parts of the ray class groups mod frak_m and
// mod frak_m_bar.  Requires (ell, mp) = 1 and l coprime to both conductors.
QElement Q_element(const FormData& fd, const HeckeCharacter& psi1, const HeckeCharacter& psi2,
                   const Ideal& l, const classfield::SplitDecomposition& dec, const Int& p);
QElement Q_element(const FormData& fd, const HeckeCharacter& psi1, const HeckeCharacter& psi2,
                   const Ideal& l, long m, const Int& p);

// One tame congruence verification: both sides reduced mod ell - 1 and
// serialized over the ring class p-part group.  pass means the reduced
// serializations agree.
struct TameReport {
    bool pass;
    Int ell;
    Int modulus;  // ell - 1
    std::string lhs, rhs;
    std::string detail;
    nlohmann::json to_json() const;
};

// Verifier for the tame norm-relation congruence
//   -psi1 psi2(l) pi_Delta([l]x[l]) pi_Delta(Q_l)  =  P_l(Frob_l)
// in (R/(ell-1))[H[m]^(p)].  The left side goes through the norm-relation
// element and the CRT projection; the right side evaluates the determinant
// polynomial at the ring-class Frobenius, so the two sides share no
// intermediate arithmetic.  Construction checks self-duality of the central
// characters and the ring-class decomposition hypotheses for (m, p).
class TameVerifier {
public:
    TameVerifier(const FormData& fd, const HeckeCharacter& psi1, const HeckeCharacter& psi2, long m,
                 const Int& p, long cap = 1000000);

    const classfield::PiDelta& projection() const { return pi_; }
    const HeckeCharacter& product_character() const { return psi12_; }

    TameReport check(const Int& ell) const;        // designated prime above split ell
    TameReport check_prime(const Ideal& l) const;  // caller-chosen split prime
    // Every split ell <= ell_max coprime to m, p, the level, and the
    // conductors.
    std::vector<TameReport> sweep(const Int& ell_max) const;

private:
    FormData fd_;
    HeckeCharacter psi1_, psi2_, psi12_;
    long m_;
    Int p_;
    classfield::PiDelta pi_;
    std::shared_ptr<const ValueRing> ring_;
    classfield::GroupRing<RElt> gr_;
};

TameReport tame_check(const FormData& fd, const HeckeCharacter& psi1, const HeckeCharacter& psi2,
                      const Ideal& l, long m, const Int& p);

// Inert-prime congruence, verified symbolically in the formal eigenvalue a:
//   -(a^2 - (ell+1) - 2(ell+1) ell^{-1} + (ell+1))  =  2 + 2 ell - a^2
// in Z/(ell^2 - 1), with the inverse taken modularly, plus the twist identity
// psi1 psi2((ell)) = ell^{k1+k2-2} in the value ring.  Both sides are kept as
// (constant, a^2-coefficient) residue pairs; the numeric fields evaluate them
// at the form's own eigenvalue.
struct InertReport {
    bool pass;
    Int ell;
    Int modulus;  // ell^2 - 1
    Int lhs_const, lhs_quad;
    Int rhs_const, rhs_quad;
    Int numeric_lhs, numeric_rhs;
    bool twist_ok;
    std::string detail;
    nlohmann::json to_json() const;
};

InertReport inert_check(const FormData& fd, const HeckeCharacter& psi1, const HeckeCharacter& psi2,
                        const Int& ell);

// Global root numbers from the count nu of primes inert in K dividing the
// auxiliary level factor, and the twist region: eps(f/K) = -(-1)^nu,
// eps(f,chi) flips sign once j reaches k/2, and the (sign, region) pair names
// a quadrant.
struct RootNumber {
    int eps_fK;
    int eps_fchi;
    std::string quadrant;  // "1st".."4th"
    nlohmann::json to_json() const;
};

RootNumber root_number(long nu, long j, long k);

// Which Greenberg-type local condition the Bloch-Kato Selmer group matches:
// relaxed-at-p/strict-at-pbar once j >= k/2, ordinary at both below it.
enum class SelmerCondition { RelaxedStrict, OrdinaryOrdinary };

struct SelmerResult {
    SelmerCondition condition;
    // Hodge-Tate weights of the ordinary filtration piece and its quotient at
    // the two primes above p, evaluated at (j, k).  The four entries are
    // fixed reference data recorded as stated, not derived here; the
    // quotient entry at the first prime is sign-inconsistent with the case
    // split above (consistency would need -j-1+k/2), and the selector
    // follows the case split.
    Int ht_p_plus, ht_p_minus;
    Int ht_pbar_plus, ht_pbar_minus;
    std::string note;
    nlohmann::json to_json() const;
};

SelmerResult selmer_selector(long j, long k);

}  // namespace anticyc::euler

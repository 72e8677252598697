#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "anticyc/classfield.hpp"
#include "anticyc/heckechar.hpp"

namespace anticyc::theta {

using arith::PadicInt;
using arith::RElt;
using arith::ValueRing;
using heckechar::HeckeCharacter;
using iqfield::IQField;
using iqfield::Ideal;

// Dirichlet character record: one value per residue class, zero off units.
struct Nebentypus {
    Int modulus;
    std::vector<RElt> values;  // index imod(n, modulus)

    const RElt& at(const Int& n) const { return values[static_cast<std::size_t>(to_long(imod(n, modulus)))]; }
    bool is_trivial() const;
};

// q-expansion with exact coefficients; c[0] is kept as zero so c[n] is the
// coefficient of q^n.  The ring is shared so copies of the expansion keep the
// coefficients' ring pointers valid.
struct QExpansion {
    std::shared_ptr<const ValueRing> ring;
    long weight;
    Int level;
    Nebentypus chi;
    long B;
    std::vector<RElt> c;  // size B + 1, all bound to *ring

    nlohmann::json to_json() const;
};

struct ModularParams {
    long weight;
    Int level;
    Nebentypus chi;
};

// Weight 1 - a, level N(f) |D|, nebentypus = central character times the
// quadratic character of the field.  Requires infinity type (1-k, 0), k >= 1.
// The nebentypus values are elements of psi's value ring.
ModularParams modular_params(const HeckeCharacter& psi);

// c_n = sum of psi(a) over ideals a coprime to the modulus with norm n, by
// direct ideal enumeration.  Honors ANTICYC_THREADS for the evaluation stage;
// the merge is by index, so the result is deterministic.
QExpansion theta_qexp(const HeckeCharacter& psi, long B);

struct CheckReport {
    bool pass;
    std::string detail;
};

// Eigenform identities on the coefficients: c_1 = 1, c_{mn} = c_m c_n for
// coprime m, n, and the prime-power relation
//   c_{l^{r+1}} = c_l c_{l^r} - chi(l) l^{k-1} c_{l^{r-1}}
// for primes l not dividing the level (imprimitive levels are not asserted).
// Reports the first violation with its indices.
CheckReport hecke_recursion_check(const QExpansion& q);

// Hecke-algebra homomorphism into the group ring of the p-part of the ring
// class group of conductor m: T(l) maps to the sum of [l_i] psi(l_i) over the
// degree-one primes above l not dividing (m), and the diamond operator at d
// maps to chi_psi(d) eps_K(d) [(d)].  For weight-two characters whose modulus
// meets p the ordinariness condition is enforced at construction.
class PhiN {
public:
    using Ring = classfield::GroupRing<RElt>;
    using Elt = Ring::Elt;

    PhiN(const HeckeCharacter& psi, long m, const Int& p, long cap = 1000000);
    // The group ring's constants reference the stored character, so the
    // context stays where it was built.
    PhiN(const PhiN&) = delete;
    PhiN& operator=(const PhiN&) = delete;

    const HeckeCharacter& character() const { return psi_; }
    const classfield::RingClassGroup& level() const { return H_; }
    const classfield::PPart& part() const { return part_; }
    const Ring& ring() const { return ring_; }

    Elt T(const Int& ell) const;        // InputError unless ell is prime
    Elt diamond(const Int& d) const;    // NotCoprime off the level

private:
    HeckeCharacter psi_;
    classfield::RingClassGroup H_;
    classfield::PPart part_;
    Ring ring_;
};

// Ordinary p-stabilization of a q-expansion, coefficients reduced mod p^prec.
struct StabilizedExpansion {
    Int p;
    int prec;
    long weight;
    Int level;
    long B;
    Int alpha;           // unit root of X^2 - c_p X + chi(p) p^{k-1}
    Int beta;            // the complementary root; zero when p divides the level
    std::vector<Int> c;  // a_n - beta a_{n/p}, size B + 1

    nlohmann::json to_json() const;
};

// Unit root alpha and the stabilized expansion.  When p divides the level the
// quadratic degenerates to X(X - c_p) and the expansion is returned unchanged
// (it is already an eigenvector for the p-th Hecke operator).  NotOrdinary
// when no unit root exists, or the unit root is a double root (weight one).
std::pair<PadicInt, StabilizedExpansion> p_stabilize(const QExpansion& q, const Int& p, int prec);

// Coefficients of the CM family built on the distinguished weight-two
// character of p-power conductor, specialized at weight k: the q^n
// coefficient is the sum of xi(a) kappa(a)^{k-1} over ideals a of norm n
// coprime to the product of p and the conductor of xi, where kappa is the
// principal-unit projection of the distinguished character's avatar.
class CMFamily {
public:
    // xi: finite order, conductor prime to p.  The wild index b must be 0.
    CMFamily(const HeckeCharacter& xi, const Int& p, long b = 0);

    const HeckeCharacter& xi() const { return xi_; }
    const HeckeCharacter& base() const { return base_; }
    const Int& p() const { return p_; }

    // One coefficient mod p^N at weight k.  ResourceLimit when N < 1.
    PadicInt coefficient(long n, long k, int N) const;
    // Residues of c_1..c_B mod p^N (index 0 unused) in one enumeration pass.
    std::vector<Int> coefficients(long B, long k, int N) const;

private:
    HeckeCharacter xi_;
    HeckeCharacter base_;
    Int p_;
    Ideal restrict_;  // ideals are enumerated coprime to this
};

PadicInt cm_family_coefficient(const HeckeCharacter& xi, const Int& p, long b, long k, long n, int N);

struct SpecializationReport {
    bool pass;
    long B;
    int precision;        // working precision N
    int min_agreement;    // least p-adic agreement over all coefficients
    long first_drop;      // smallest n realizing min_agreement (0 if exact)
    std::string detail;
};

// Compares the family coefficients at weight k against the ordinary
// p-stabilization of the theta series of xi psi0^{k-1}, coefficient by
// coefficient mod p^N; passes when at most one digit of precision is lost.
SpecializationReport specialization_compare(const HeckeCharacter& xi, const Int& p, long k, long B,
                                            int N, long b = 0);

}  // namespace anticyc::theta

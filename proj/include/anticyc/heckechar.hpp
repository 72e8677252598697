#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "anticyc/arith.hpp"
#include "anticyc/bigint.hpp"
#include "anticyc/classfield.hpp"
#include "anticyc/errors.hpp"
#include "anticyc/iqfield.hpp"
#include "anticyc/valuering.hpp"

namespace anticyc::heckechar {

using arith::RElt;
using arith::ValueRing;
using classfield::UnitResidueGroup;
using iqfield::IQField;
using iqfield::Ideal;
using iqfield::QuadInt;

// i_p(omega): the root of x^2 - s x - t mod p^prec congruent to omega's
// residue at the designated prime above split p (Hensel lift).
Int omega_root_at(const IQField& K, const Int& p, int prec);

// i_p(psi(a)) split into Teichmueller and principal-unit parts.
struct AvatarValue {
    arith::PadicInt value;  // mod p^N
    Int teich_power;        // omega(value) mod p^N
    Int gamma_exponent;     // t mod p^{N-1} with <value> = (1+p)^t
    bool factors_through_gamma() const { return teich_power == 1; }
};

// Hecke character of infinity type (a, b): psi((alpha)) =
// eps(alpha) alpha^{-a} conj(alpha)^{-b} on ideals coprime to the modulus,
// so that type (-1, 0) gives psi((n)) = n eps(n) (weight-2 normalization).
// The finite part eps is a character of (O/f)^x pinned by exponents on the
// canonical generators: the generator of order d_i maps to
// zeta_M^{e_i M / d_i}, with M the group exponent.  Exact evaluation tracks
// principal generators, so construction requires h_K = 1.
class HeckeCharacter {
public:
    HeckeCharacter(const IQField& K, const Ideal& f, long a, long b, std::vector<Int> eps_exponents,
                   long cap = 1000000);

    const IQField& field() const { return K_; }
    const Ideal& modulus() const { return f_; }
    long type_a() const { return a_; }
    long type_b() const { return b_; }
    const UnitResidueGroup& residues() const { return urg_; }
    const ValueRing& values() const { return ring_; }
    long zeta_order() const { return M_; }
    const std::vector<Int>& eps_exponents() const { return eps_; }
    bool finite_order() const { return a_ == 0 && b_ == 0; }

    Int eps_exponent(const QuadInt& x) const;  // exponent of zeta_M; NotCoprime off units
    RElt eps(const QuadInt& x) const;
    RElt evaluate_principal(const QuadInt& alpha) const;
    RElt evaluate(const Ideal& a) const;  // NotCoprime / NotPrincipal

    // Central Dirichlet character mod norm(f): n -> eps(n), zero off units.
    RElt central_character(const Int& n) const;
    Int central_modulus() const { return f_.norm(); }

    HeckeCharacter conjugate() const;                        // psi^c(a) = psi(conj(a))
    HeckeCharacter mul(const HeckeCharacter& other) const;   // product on the lcm of the moduli
    HeckeCharacter pow(long n) const;

    // i_p(psi(a)) at the designated prime above split p, to precision N.
    AvatarValue padic_avatar(const Ideal& a, const Int& p, int N) const;
    AvatarValue avatar_of_principal(const QuadInt& alpha, const Int& p, int N) const;

    nlohmann::json to_json() const;
    static HeckeCharacter from_json(const nlohmann::json& j, long cap = 1000000);

    bool operator==(const HeckeCharacter& o) const;
    bool operator!=(const HeckeCharacter& o) const { return !(*this == o); }

private:
    IQField K_;
    Ideal f_;
    long a_, b_;
    long cap_;
    UnitResidueGroup urg_;
    long M_;          // exponent of (O/f)^x, 1 when the group is trivial
    ValueRing ring_;  // ValueRing(D, M)
    std::vector<Int> eps_;
    void check_units() const;  // UnitIncompatible naming the offending unit
};

struct SpadeResult {
    bool holds;
    std::string reason;
};

// Ordinariness condition for a type (-1, 0) character at split p: holds when
// p is coprime to the modulus, or when the designated prime divides it, its
// conjugate does not, and the unit restriction differs from the Teichmueller
// character modulo the designated prime.
SpadeResult condition_spade(const HeckeCharacter& psi, const Int& p);

// The unique character of infinity type (-1, 0), conductor the designated
// prime above split p, whose avatar factors through Gamma_p (lands in
// 1 + pZ_p); requires p coprime to h_K.  Exhaustive search over the finite
// parts, which doubles as the uniqueness proof at this level.
HeckeCharacter psi0(const IQField& K, const Int& p, long cap = 1000000);

}  // namespace anticyc::heckechar

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "anticyc/arith.hpp"
#include "anticyc/bigint.hpp"
#include "anticyc/errors.hpp"
#include "anticyc/iqfield.hpp"

namespace anticyc::classfield {

using iqfield::IQField;
using iqfield::Ideal;
using iqfield::QuadInt;

// (u, v) with u + v = 1, u in A, v in B; A, B must be coprime.
std::pair<QuadInt, QuadInt> coprime_idempotents(const Ideal& A, const Ideal& B);

// Multiplicative group (O_K/n)^x: built component-wise over the prime-power
// factors of n, each component closed by residue enumeration; discrete logs
// are table lookups against the closure.  norm(n) must stay within `cap`.
class UnitResidueGroup {
public:
    UnitResidueGroup(const IQField& K, const Ideal& n, long cap = 1000000);

    const IQField& field() const { return K_; }
    const Ideal& modulus() const { return n_; }
    const arith::FiniteAbelianGroup& abstract() const { return grp_; }
    Int order() const { return grp_.order(); }

    bool is_unit(const QuadInt& x) const;
    arith::Vec dlog(const QuadInt& x) const;       // NotCoprime unless x is a unit mod n
    QuadInt from_coords(const arith::Vec& v) const;  // canonical coords -> residue

    // Residues mod n of the canonical generators.
    const std::vector<QuadInt>& generators() const { return gens_; }
    // Every unit residue mod n (product over components; refuses beyond cap).
    std::vector<QuadInt> unit_residues(long cap = 200000) const;

private:
    struct Component {
        Ideal Q;  // P^e
        Ideal P;
        std::vector<QuadInt> units;  // residues mod Q
        std::map<std::pair<Int, Int>, std::size_t> index;
        arith::FiniteAbelianGroup grp;
        std::vector<arith::Vec> coords;  // per unit index
        QuadInt idem;                    // 1 mod Q, 0 mod every other component
    };
    IQField K_;
    Ideal n_;
    std::vector<Component> comps_;
    arith::FiniteAbelianGroup grp_;
    arith::Mat tocanon_;          // concatenated component coords -> canonical
    std::vector<QuadInt> gens_;   // canonical generator residues
};

// Ray class group H_n = I(n)/P_n.  Realized through the exact sequence
// O^x -> (O/n)^x -> H_n -> H_1 -> 1: the full presentation and the ideal map
// require h_K = 1 (ideals are tracked through principal generators); for
// h_K > 1 only the order survives and presentation calls raise
// NotPrincipalField.
class RayClassGroup {
public:
    RayClassGroup(const IQField& K, const Ideal& n, long cap = 1000000);

    const IQField& field() const { return K_; }
    const Ideal& conductor() const { return n_; }
    const UnitResidueGroup& residues() const { return urg_; }
    long class_number() const { return h_; }
    Int order() const { return order_; }
    Int unit_image_order() const { return unit_image_order_; }

    const arith::FiniteAbelianGroup& abstract() const;        // h_K = 1 only
    arith::Vec class_of_residue(const QuadInt& x) const;      // x a unit mod n
    arith::Vec class_of_ideal(const Ideal& I) const;          // I coprime to n
    QuadInt lift(const arith::Vec& cls) const;                // some residue in the class

    // For each canonical generator, the smallest prime ideal coprime to the
    // conductor that represents it (norm search capped).
    std::vector<Ideal> generator_ideals(long norm_cap = 5000) const;
    nlohmann::json to_json() const;

private:
    IQField K_;
    Ideal n_;
    UnitResidueGroup urg_;
    long h_;
    bool presentable_;
    Int unit_image_order_;
    Int order_;
    arith::FiniteAbelianGroup grp_;
    arith::Mat proj_;  // URG canonical -> H_n
    void require_presentable() const;
};

// Ring class group H[m] = (O/m)^x / ((Z/m)^x . O^x image), glued with Cl(K)
// by the analogous exact sequence; same h_K = 1 proviso as RayClassGroup.
// m must be coprime to the discriminant.
class RingClassGroup {
public:
    RingClassGroup(const IQField& K, long m, long cap = 1000000);

    const IQField& field() const { return K_; }
    long conductor() const { return m_; }
    const UnitResidueGroup& residues() const { return urg_; }
    Int order() const { return order_; }
    // h . m . prod_{l | m} (1 - (D|l)/l) / [O^x : O_m^x]
    Int formula_order() const;

    const arith::FiniteAbelianGroup& abstract() const;
    arith::Vec class_of_residue(const QuadInt& x) const;
    arith::Vec class_of_ideal(const Ideal& I) const;
    QuadInt lift(const arith::Vec& cls) const;

    std::vector<Ideal> generator_ideals(long norm_cap = 5000) const;
    nlohmann::json to_json() const;

private:
    IQField K_;
    long m_;
    UnitResidueGroup urg_;
    long h_;
    bool presentable_;
    Int order_;
    arith::FiniteAbelianGroup grp_;
    arith::Mat proj_;
    void require_presentable() const;
};

// Maximal p-power quotient with its canonical surjection (coordinate-wise
// reduction mod the p-part of each invariant factor).
struct PPart {
    arith::FiniteAbelianGroup group;
    std::vector<Int> powers;        // p^{v_p(d_i)} per source invariant
    std::vector<std::size_t> slots; // source coordinates kept (power > 1)
    arith::Vec apply(const arith::Vec& v) const;
    // A source vector mapping to q (zeros elsewhere).
    arith::Vec lift(const arith::Vec& q, std::size_t source_rank) const;
};

PPart p_part(const arith::FiniteAbelianGroup& G, const Int& p);

// Homomorphism between finite abelian groups in canonical coordinates;
// columns of M are the images of the source generators.  Construction
// verifies well-definedness (each column is killed by its generator order).
struct GroupHom {
    arith::FiniteAbelianGroup src, dst;
    arith::Mat M;
    GroupHom(arith::FiniteAbelianGroup s, arith::FiniteAbelianGroup d, arith::Mat m);
    arith::Vec apply(const arith::Vec& v) const { return dst.reduce(arith::mat_apply(M, v)); }
    bool surjective() const;
    static GroupHom compose(const GroupHom& f, const GroupHom& g);  // f after g
};

// The split-levels decomposition H_m^(p) ~ H_frak^(p) x H_frakbar^(p) by
// restriction, for m a product of split primes, p coprime to 6 h_K m.
struct SplitDecomposition {
    Ideal frak_m, frak_m_bar;
    RayClassGroup H_m, H_frak, H_frak_bar;
    PPart pm, pf, pfb;
    GroupHom to_frak, to_frak_bar;  // H_m^(p) -> factor p-parts
    std::pair<arith::Vec, arith::Vec> apply(const arith::Vec& g) const {
        return {to_frak.apply(g), to_frak_bar.apply(g)};
    }
};

SplitDecomposition decompose_Hm(const IQField& K, long m, const Int& p, long cap = 1000000);

// pi_Delta: H_frak^(p) x H_frakbar^(p) ->> H[m]^(p), realized by the CRT
// gluing x = v a + u b of residue representatives; kernel Delta((Z/m)^x p-part).
struct PiDelta {
    SplitDecomposition dec;
    RingClassGroup ring;
    PPart pring;
    QuadInt u, v;  // u in frak_m, v in frak_m_bar, u + v = 1
    arith::Mat M1, M2;

    // pi(g1 x g2); the c-variant conjugates the second factor, which acts on
    // the split quotient as inversion.
    arith::Vec apply(const arith::Vec& g1, const arith::Vec& g2) const;
    arith::Vec apply_c(const arith::Vec& g1, const arith::Vec& g2) const;
    arith::Vec frobenius(const Int& ell) const;  // class of the designated prime above split ell
};

PiDelta pi_delta(const IQField& K, long m, const Int& p, long cap = 1000000);

// Group ring R[G] with sparse elements; coefficients R need +, -, *, ==.
// Elements keep only nonzero coefficients over reduced group coordinates, so
// map equality is element equality.
template <class R>
class GroupRing {
public:
    using Elt = std::map<arith::Vec, R>;

    GroupRing(arith::FiniteAbelianGroup G, R zero, R one)
        : G_(std::move(G)), zero_(std::move(zero)), one_(std::move(one)) {}

    const arith::FiniteAbelianGroup& group() const { return G_; }
    const R& coeff_zero() const { return zero_; }
    const R& coeff_one() const { return one_; }

    Elt zero() const { return {}; }
    Elt basis(const arith::Vec& g) const { return Elt{{G_.reduce(g), one_}}; }
    Elt one() const { return basis(G_.id()); }
    Elt scalar(const R& c) const {
        Elt e;
        accumulate(e, G_.id(), c);
        return e;
    }

    Elt add(const Elt& a, const Elt& b) const {
        Elt out = a;
        for (const auto& [g, c] : b) accumulate(out, g, c);
        return out;
    }
    Elt neg(const Elt& a) const {
        Elt out;
        for (const auto& [g, c] : a) accumulate(out, g, zero_ - c);
        return out;
    }
    Elt sub(const Elt& a, const Elt& b) const { return add(a, neg(b)); }
    Elt scale(const R& s, const Elt& a) const {
        Elt out;
        for (const auto& [g, c] : a) accumulate(out, g, s * c);
        return out;
    }
    Elt mul(const Elt& a, const Elt& b) const {
        Elt out;
        for (const auto& [g, c] : a)
            for (const auto& [h, d] : b) accumulate(out, G_.op(g, h), c * d);
        return out;
    }
    R augmentation(const Elt& a) const {
        R s = zero_;
        for (const auto& [g, c] : a) s = s + c;
        return s;
    }

    // Pushforward along a group homomorphism (coefficient-preserving).
    Elt pushforward(const GroupHom& hom, const Elt& a) const {
        if (!(hom.dst == G_)) throw InputError("pushforward: target group mismatch");
        Elt out;
        for (const auto& [g, c] : a) accumulate(out, hom.apply(g), c);
        return out;
    }

    void accumulate(Elt& e, const arith::Vec& g, const R& c) const {
        arith::Vec k = G_.reduce(g);
        auto it = e.find(k);
        if (it == e.end()) {
            if (!(c == zero_)) e.emplace(k, c);
            return;
        }
        R s = it->second + c;
        if (s == zero_)
            e.erase(it);
        else
            it->second = s;
    }

private:
    arith::FiniteAbelianGroup G_;
    R zero_, one_;
};

// xi_Delta: bilinear map R[H_frak^(p)] x R[H_frakbar^(p)] -> R[H[m]^(p)],
// sending g1 x g2 to pi_Delta(g1 x g2); the c-variant uses the conjugated
// (inverted) second factor.
template <class R>
typename GroupRing<R>::Elt xi_delta(const PiDelta& pi, const GroupRing<R>& src1, const GroupRing<R>& src2,
                                    const GroupRing<R>& dst, const typename GroupRing<R>::Elt& f1,
                                    const typename GroupRing<R>::Elt& f2, bool conjugate_second = false) {
    if (!(src1.group() == pi.dec.pf.group) || !(src2.group() == pi.dec.pfb.group) || !(dst.group() == pi.pring.group))
        throw InputError("xi_delta: group ring does not match the projection data");
    typename GroupRing<R>::Elt out;
    for (const auto& [g1, c1] : f1)
        for (const auto& [g2, c2] : f2) {
            arith::Vec img = conjugate_second ? pi.apply_c(g1, g2) : pi.apply(g1, g2);
            dst.accumulate(out, img, c1 * c2);
        }
    return out;
}

template <class R>
typename GroupRing<R>::Elt xi_delta_c(const PiDelta& pi, const GroupRing<R>& src1, const GroupRing<R>& src2,
                                      const GroupRing<R>& dst, const typename GroupRing<R>::Elt& f1,
                                      const typename GroupRing<R>::Elt& f2) {
    return xi_delta(pi, src1, src2, dst, f1, f2, true);
}

// Norm (pushforward) homomorphisms between levels, on p-parts.
GroupHom ray_norm(const RayClassGroup& src, const RayClassGroup& dst, const Int& p);
GroupHom ring_norm(const RingClassGroup& src, const RingClassGroup& dst, const Int& p);

// Exhaustive basis check of the commutative square
//   Norm^{ml}_m ( xi_Delta(g1 x g2) ) = xi_Delta( Norm g1 x Norm g2 )
// for split ell coprime to m.  Returns the number of pairs checked.
std::size_t keydiagram_check(const IQField& K, long m, long ell, const Int& p, long cap = 1000000);

}  // namespace anticyc::classfield

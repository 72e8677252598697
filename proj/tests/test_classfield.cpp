#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "anticyc/classfield.hpp"

using namespace anticyc;
using namespace anticyc::classfield;
using anticyc::iqfield::ClassGroup;
using anticyc::iqfield::Splitting;
using anticyc::iqfield::splitting_type;

namespace {

Ideal rational_ideal(const IQField& K, long m) { return Ideal::principal(K, QuadInt{Int(m), 0}); }

// |(O/n)^x| by the multiplicative formula N(n) prod_{P | n} (1 - 1/N(P)).
Int euler_phi_ideal(const IQField& K, const Ideal& n) {
    Rat r(n.norm());
    for (const auto& [ell, e] : factorize(n.norm())) {
        (void)e;
        auto [P, Pb] = iqfield::primes_above(K, ell);
        std::vector<Ideal> cands{P};
        if (!(Pb == P)) cands.push_back(Pb);
        for (const Ideal& Pr : cands)
            if (Pr.divides(n)) r *= rat(Pr.norm() - 1, Pr.norm());
    }
    if (r.get_den() != 1) throw std::logic_error("phi not integral");
    return r.get_num();
}

// Order of the subgroup of G generated by the given vectors (BFS closure).
std::size_t subgroup_order(const arith::FiniteAbelianGroup& G, const std::vector<arith::Vec>& gens) {
    std::set<arith::Vec> seen{G.id()};
    std::vector<arith::Vec> frontier{G.id()};
    while (!frontier.empty()) {
        std::vector<arith::Vec> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                arith::Vec y = G.op(x, g);
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return seen.size();
}

}  // namespace

TEST_CASE("coprime idempotents") {
    IQField K(-4);
    auto [P13, P13b] = iqfield::primes_above(K, 13);
    auto [u, v] = coprime_idempotents(P13, P13b);
    CHECK(P13.contains(u));
    CHECK(P13b.contains(v));
    CHECK(K.add(u, v) == QuadInt{1, 0});
    // idempotent identities modulo the product
    Ideal n = P13.mul(P13b);
    CHECK(n.reduce(K.mul(u, v)) == n.reduce({0, 0}));
    CHECK(n.reduce(K.mul(u, u)) == n.reduce(u));
    CHECK(n.reduce(K.mul(v, v)) == n.reduce(v));

    // non-coprime pair refuses
    CHECK_THROWS_AS(coprime_idempotents(P13, P13), NotCoprime);
    CHECK_THROWS_AS(coprime_idempotents(P13.mul(P13b), P13b), NotCoprime);

    // whole ring is coprime to everything
    auto [u2, v2] = coprime_idempotents(Ideal::whole_ring(K), P13);
    CHECK(K.add(u2, v2) == QuadInt{1, 0});
}

TEST_CASE("unit residue groups: orders and structure") {
    IQField K(-4);

    UnitResidueGroup u3(K, rational_ideal(K, 3));
    CHECK(u3.order() == 8);
    CHECK(u3.abstract().invariants() == std::vector<Int>{8});

    UnitResidueGroup u2(K, rational_ideal(K, 2));
    CHECK(u2.order() == 2);

    UnitResidueGroup u5(K, rational_ideal(K, 5));
    CHECK(u5.order() == 16);
    CHECK(u5.abstract().invariants() == std::vector<Int>{4, 4});

    auto [P5, P5b] = iqfield::primes_above(K, 5);
    (void)P5b;
    UnitResidueGroup uP5(K, P5);
    CHECK(uP5.abstract().invariants() == std::vector<Int>{4});

    IQField K7(-7);
    auto [P11, P11b] = iqfield::primes_above(K7, 11);
    (void)P11b;
    UnitResidueGroup u11(K7, P11);
    CHECK(u11.order() == 10);

    // multiplicative formula across several composite moduli
    for (long m : {3, 5, 6, 15, 41}) {
        UnitResidueGroup u(K, rational_ideal(K, m));
        CHECK(u.order() == euler_phi_ideal(K, rational_ideal(K, m)));
    }
    for (long m : {11, 22, 53}) {
        UnitResidueGroup u(K7, rational_ideal(K7, m));
        CHECK(u.order() == euler_phi_ideal(K7, rational_ideal(K7, m)));
    }

    // trivial modulus
    UnitResidueGroup u1(K, Ideal::whole_ring(K));
    CHECK(u1.order() == 1);
    CHECK(u1.dlog({7, 3}).empty());

    // cap refusal
    CHECK_THROWS_AS(UnitResidueGroup(K, rational_ideal(K, 101), 100), ResourceLimit);
}

TEST_CASE("unit residue groups: dlog and from_coords") {
    IQField K(-4);
    Ideal n = rational_ideal(K, 15);
    UnitResidueGroup u(K, n);

    auto elems = u.unit_residues();
    CHECK(Int(static_cast<long>(elems.size())) == u.order());

    // round trips and the homomorphism law
    std::set<std::pair<Int, Int>> distinct;
    for (const auto& x : elems) {
        arith::Vec v = u.dlog(x);
        CHECK(u.from_coords(v) == x);
        distinct.insert({x.x, x.y});
    }
    CHECK(Int(static_cast<long>(distinct.size())) == u.order());
    for (std::size_t i = 0; i < elems.size(); i += 7)
        for (std::size_t j = 0; j < elems.size(); j += 11) {
            arith::Vec sum = u.abstract().op(u.dlog(elems[i]), u.dlog(elems[j]));
            CHECK(sum == u.dlog(n.reduce(K.mul(elems[i], elems[j]))));
        }

    // non-units refuse
    CHECK_THROWS_AS(u.dlog({3, 0}), NotCoprime);
    CHECK_THROWS_AS(u.dlog({5, 0}), NotCoprime);
    CHECK(u.is_unit({1, 1}));
    CHECK_FALSE(u.is_unit({2, 1}));  // norm 5
    CHECK_FALSE(u.is_unit({0, 5}));

    // generators have the advertised orders
    for (std::size_t i = 0; i < u.generators().size(); ++i) {
        arith::Vec e = u.abstract().id();
        e[i] = 1;
        CHECK(u.dlog(u.generators()[i]) == e);
    }
}

TEST_CASE("ray class groups: orders") {
    IQField K(-4);

    RayClassGroup r3(K, rational_ideal(K, 3));
    CHECK(r3.order() == 2);
    CHECK(r3.class_number() == 1);

    RayClassGroup r1(K, Ideal::whole_ring(K));
    CHECK(r1.order() == 1);  // = h for trivial conductor

    IQField K7(-7);
    auto [P11, P11b] = iqfield::primes_above(K7, 11);
    (void)P11b;
    RayClassGroup r11(K7, P11);
    CHECK(r11.order() == 5);

    // exact sequence bookkeeping: |H_n| * |unit image| = h * |(O/n)^x|
    for (long m : {3, 5, 15, 41}) {
        RayClassGroup r(K, rational_ideal(K, m));
        CHECK(r.order() * r.unit_image_order() == Int(r.class_number()) * r.residues().order());
    }

    // the unit image order really is the order of the subgroup the units generate
    {
        RayClassGroup r(K, rational_ideal(K, 5));
        std::vector<arith::Vec> unit_dlogs;
        for (const QuadInt& w : K.units()) unit_dlogs.push_back(r.residues().dlog(w));
        CHECK(r.unit_image_order() == Int(static_cast<long>(subgroup_order(r.residues().abstract(), unit_dlogs))));
    }

    // class-number-three field: order works, presentation refuses
    IQField K23(-23);
    RayClassGroup r23(K23, Ideal::whole_ring(K23));
    CHECK(r23.order() == 3);
    CHECK_THROWS_AS(r23.abstract(), NotPrincipalField);
    CHECK_THROWS_AS(r23.class_of_ideal(rational_ideal(K23, 5)), NotPrincipalField);

    CHECK_THROWS_AS(RayClassGroup(K, rational_ideal(K, 101), 100), ResourceLimit);
}

TEST_CASE("ray class groups: ideal classes") {
    IQField K(-4);
    Ideal n = rational_ideal(K, 41);
    RayClassGroup r(K, n);
    CHECK(r.order() == 400);

    // the map is multiplicative and kills principal ideals generated by 1 mod n
    auto [P13, P13b] = iqfield::primes_above(K, 13);
    auto [P3, P3b] = iqfield::primes_above(K, 3);
    (void)P3b;
    arith::Vec c1 = r.class_of_ideal(P13);
    arith::Vec c2 = r.class_of_ideal(P13b);
    arith::Vec c3 = r.class_of_ideal(P3);
    CHECK(r.abstract().op(c1, c3) == r.class_of_ideal(P13.mul(P3)));
    CHECK(r.abstract().op(c1, c2) == r.class_of_ideal(rational_ideal(K, 13)));

    // alpha = 1 + 41 beta generates a trivial-class ideal
    QuadInt alpha = K.add({1, 0}, K.mul({41, 0}, {2, 1}));
    CHECK(r.abstract().is_id(r.class_of_ideal(Ideal::principal(K, alpha))));

    // class_of_ideal of a principal ideal agrees with class_of_residue of a generator
    QuadInt beta{5, 2};  // coprime to 41
    CHECK(r.class_of_ideal(Ideal::principal(K, beta)) == r.class_of_residue(beta));

    // lift is a section
    auto all = r.abstract().elements();
    for (const auto& cls : all) CHECK(r.class_of_residue(r.lift(cls)) == cls);

    // coprimality is enforced
    CHECK_THROWS_AS(r.class_of_ideal(rational_ideal(K, 41)), NotCoprime);

    // generator ideals represent the canonical generators
    auto gens = r.generator_ideals();
    CHECK(gens.size() == r.abstract().rank());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        arith::Vec e = r.abstract().id();
        e[i] = 1;
        CHECK(r.class_of_ideal(gens[i]) == e);
    }

    // serialized form carries the headline facts
    nlohmann::json j = r.to_json();
    CHECK(j["order"] == 400);
    CHECK(j["presentable"] == true);
    CHECK(j["conductor"].size() == 3);
    CHECK(j["invariants"].size() == r.abstract().rank());
    CHECK(j["generator_ideals"].size() == gens.size());
}

TEST_CASE("ring class groups") {
    IQField K(-4);

    RingClassGroup g3(K, 3);
    CHECK(g3.order() == 2);

    RingClassGroup g1(K, 1);
    CHECK(g1.order() == 1);

    RingClassGroup g41(K, 41);
    CHECK(g41.order() == 20);

    IQField K7(-7);
    for (long m : {3, 5, 11, 41, 53}) {
        RingClassGroup g(K7, m);
        CHECK(g.order() == g.formula_order());
    }
    for (long m : {3, 5, 7, 41}) {
        RingClassGroup g(K, m);
        CHECK(g.order() == g.formula_order());
    }
    CHECK(RingClassGroup(K7, 3).order() == 4);
    CHECK(RingClassGroup(K7, 41).order() == 42);
    CHECK(RingClassGroup(K, 7).order() == 4);

    // conductor must be coprime to the discriminant
    CHECK_THROWS_AS(RingClassGroup(K, 2), InputError);
    CHECK_THROWS_AS(RingClassGroup(K7, 7), InputError);
    CHECK_THROWS_AS(RingClassGroup(K, 0), InputError);

    // rational residues die in the ring class group
    RingClassGroup g(K, 41);
    for (long a = 1; a < 41; ++a)
        CHECK(g.abstract().is_id(g.class_of_residue({Int(a), 0})));

    // complex conjugation inverts: [P] + [Pbar] = [(ell)] = 0, split ell up to 100
    for (const auto& [field, m] : {std::pair<const IQField&, long>{K, 41}, {K7, 5}}) {
        RingClassGroup rg(field, m);
        for (long ell = 2; ell <= 100; ++ell) {
            if (!is_prime(Int(ell)) || m % ell == 0) continue;
            if (splitting_type(field, Int(ell)) != Splitting::Split) continue;
            auto [P, Pb] = iqfield::primes_above(field, Int(ell));
            arith::Vec sum = rg.abstract().op(rg.class_of_ideal(P), rg.class_of_ideal(Pb));
            CHECK(rg.abstract().is_id(sum));
            CHECK(rg.class_of_ideal(Pb) == rg.abstract().inverse(rg.class_of_ideal(P)));
        }
    }

    nlohmann::json j = g.to_json();
    CHECK(j["conductor"] == 41);
    CHECK(j["order"] == 20);
}

TEST_CASE("p-part extraction") {
    using arith::FiniteAbelianGroup;

    PPart a = p_part(FiniteAbelianGroup({12}), 2);
    CHECK(a.group.invariants() == std::vector<Int>{4});

    PPart b = p_part(FiniteAbelianGroup({12}), 7);
    CHECK(b.group.order() == 1);

    PPart c = p_part(FiniteAbelianGroup({5, 25}), 5);
    CHECK(c.group.invariants() == std::vector<Int>{5, 25});

    // projection is a homomorphism and kills the coprime part
    FiniteAbelianGroup G({6, 12});
    PPart q = p_part(G, 2);
    CHECK(q.group.invariants() == std::vector<Int>{2, 4});
    for (const auto& x : G.elements())
        for (const auto& y : G.elements())
            CHECK(q.apply(G.op(x, y)) == q.group.op(q.apply(x), q.apply(y)));
    CHECK(q.group.is_id(q.apply({Int(2), Int(4)})));  // order-3 element maps to the identity

    // lift is a section of apply
    for (const auto& z : q.group.elements()) CHECK(q.apply(q.lift(z, G.rank())) == z);

    CHECK_THROWS_AS(p_part(G, 4), InputError);
}

TEST_CASE("group homomorphisms") {
    using arith::FiniteAbelianGroup;
    FiniteAbelianGroup Z6({6}), Z3({3}), Z4({4});

    GroupHom q(Z6, Z3, {{1}});
    CHECK(q.surjective());
    CHECK(q.apply({Int(5)}) == arith::Vec{2});

    // not well defined: 1 has order 6 in the source but image order 4
    CHECK_THROWS_AS(GroupHom(Z6, Z4, {{1}}), InputError);

    GroupHom dbl(Z6, Z6, {{2}});
    CHECK_FALSE(dbl.surjective());

    GroupHom comp = GroupHom::compose(q, dbl);
    CHECK(comp.apply({Int(1)}) == q.apply(dbl.apply({Int(1)})));
}

TEST_CASE("split decomposition at the reference level") {
    IQField K(-4);
    SplitDecomposition dec = decompose_Hm(K, 41, 5);

    CHECK(dec.H_m.order() == 400);
    CHECK(dec.pm.group.invariants() == std::vector<Int>{5, 5});
    CHECK(dec.pf.group.invariants() == std::vector<Int>{5});
    CHECK(dec.pfb.group.invariants() == std::vector<Int>{5});
    CHECK(dec.frak_m.norm() == 41);
    CHECK(dec.frak_m_bar.norm() == 41);
    CHECK(dec.frak_m.mul(dec.frak_m_bar) == rational_ideal(K, 41));

    // restriction is bijective onto the product: component maps are surjective
    CHECK(dec.to_frak.surjective());
    CHECK(dec.to_frak_bar.surjective());
    std::set<std::pair<arith::Vec, arith::Vec>> images;
    for (const auto& g : dec.pm.group.elements()) images.insert(dec.apply(g));
    CHECK(images.size() == 25);

    // violated preconditions name their clause
    CHECK_THROWS_AS(decompose_Hm(K, 3, 5), PreconditionFailed);   // 3 inert
    CHECK_THROWS_AS(decompose_Hm(K, 10, 5), PreconditionFailed);  // 2 ramified
    CHECK_THROWS_AS(decompose_Hm(K, 41, 3), PreconditionFailed);  // p | 6
    CHECK_THROWS_AS(decompose_Hm(K, 55, 5), PreconditionFailed);  // p | m
    try {
        decompose_Hm(K, 3, 5);
        CHECK(false);
    } catch (const PreconditionFailed& e) {
        CHECK(std::string(e.what()).find("split") != std::string::npos);
    }
    try {
        decompose_Hm(K, 41, 3);
        CHECK(false);
    } catch (const PreconditionFailed& e) {
        CHECK(std::string(e.what()).find("6 h_K") != std::string::npos);
    }
    try {
        decompose_Hm(K, 55, 5);
        CHECK(false);
    } catch (const PreconditionFailed& e) {
        CHECK(std::string(e.what()).find("coprime") != std::string::npos);
    }

    IQField K23(-23);
    CHECK_THROWS_AS(decompose_Hm(K23, 2, 5), NotPrincipalField);
}

TEST_CASE("pi_delta: diagonal kernel and Frobenius") {
    IQField K(-4);
    PiDelta pi = pi_delta(K, 41, 5);
    CHECK(pi.pring.group.invariants() == std::vector<Int>{5});

    // the diagonal image of every rational residue is killed
    for (long a = 1; a < 41; ++a) {
        arith::Vec g1 = pi.dec.pf.apply(pi.dec.H_frak.class_of_residue({Int(a), 0}));
        arith::Vec g2 = pi.dec.pfb.apply(pi.dec.H_frak_bar.class_of_residue({Int(a), 0}));
        CHECK(pi.pring.group.is_id(pi.apply(g1, g2)));
    }

    // exactness: kernel has order |src| / |dst|, and the map is onto
    std::set<arith::Vec> image;
    std::vector<std::pair<arith::Vec, arith::Vec>> kernel;
    for (const auto& g1 : pi.dec.pf.group.elements())
        for (const auto& g2 : pi.dec.pfb.group.elements()) {
            arith::Vec w = pi.apply(g1, g2);
            image.insert(w);
            if (pi.pring.group.is_id(w)) kernel.push_back({g1, g2});
        }
    CHECK(image.size() == 5);
    CHECK(kernel.size() == 5);

    // the kernel is exactly the diagonal p-part of the rational residues
    std::set<std::pair<arith::Vec, arith::Vec>> diag;
    for (long a = 1; a < 41; ++a) {
        arith::Vec g1 = pi.dec.pf.apply(pi.dec.H_frak.class_of_residue({Int(a), 0}));
        arith::Vec g2 = pi.dec.pfb.apply(pi.dec.H_frak_bar.class_of_residue({Int(a), 0}));
        diag.insert({g1, g2});
    }
    CHECK(diag.size() == 5);
    for (const auto& k : kernel) CHECK(diag.count(k) == 1);

    // [l] x [l] lands on Frob_l, checked against the independent ideal dlog
    for (long ell : {13, 29, 37, 53}) {
        auto [P, Pb] = iqfield::primes_above(K, Int(ell));
        (void)Pb;
        arith::Vec g1 = pi.dec.pf.apply(pi.dec.H_frak.class_of_ideal(P));
        arith::Vec g2 = pi.dec.pfb.apply(pi.dec.H_frak_bar.class_of_ideal(P));
        arith::Vec frob = pi.pring.apply(pi.ring.class_of_ideal(P));
        CHECK(pi.apply(g1, g2) == frob);
        CHECK(pi.frobenius(Int(ell)) == frob);
        // the conjugated variant pairs [l] with the inverse class
        CHECK(pi.apply_c(g1, pi.dec.pfb.group.inverse(g2)) == frob);
    }
    CHECK_THROWS_AS(pi.frobenius(Int(3)), InputError);  // inert
}

TEST_CASE("group ring axioms") {
    using arith::FiniteAbelianGroup;
    FiniteAbelianGroup G({2, 6});
    GroupRing<Rat> R(G, Rat(0), Rat(1));
    using Elt = GroupRing<Rat>::Elt;

    auto all = G.elements();
    REQUIRE(all.size() == 12);

    // scalar embedding and identity
    CHECK(R.mul(R.one(), R.basis(all[3])) == R.basis(all[3]));
    CHECK(R.mul(R.scalar(Rat(2)), R.scalar(rat(3, 2))) == R.scalar(Rat(3)));

    // a couple of dense elements with fractional coefficients
    Elt a, b, c;
    long k = 0;
    for (const auto& g : all) {
        R.accumulate(a, g, rat(k + 1, 3));
        R.accumulate(b, g, rat(2 * k - 5, 7));
        R.accumulate(c, g, rat(k * k - 4, 5));
        ++k;
    }

    CHECK(R.add(a, b) == R.add(b, a));
    CHECK(R.mul(a, b) == R.mul(b, a));  // the group is abelian
    CHECK(R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c)));
    CHECK(R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c)));
    CHECK(R.sub(a, a) == R.zero());
    CHECK(R.add(a, R.neg(a)).empty());
    CHECK(R.scale(Rat(3), a) == R.mul(R.scalar(Rat(3)), a));

    // augmentation is a ring homomorphism
    CHECK(R.augmentation(R.mul(a, b)) == R.augmentation(a) * R.augmentation(b));
    CHECK(R.augmentation(R.add(a, b)) == R.augmentation(a) + R.augmentation(b));
    CHECK(R.augmentation(R.one()) == 1);

    // exhaustive basis associativity and the regular representation
    for (const auto& g : all)
        for (const auto& h : all) {
            CHECK(R.mul(R.basis(g), R.basis(h)) == R.basis(G.op(g, h)));
            for (const auto& l : all)
                CHECK(R.mul(R.mul(R.basis(g), R.basis(h)), R.basis(l)) ==
                      R.mul(R.basis(g), R.mul(R.basis(h), R.basis(l))));
        }

    // pushforward along a quotient is a coefficient-preserving ring map
    FiniteAbelianGroup Q({3});
    GroupHom hom(G, Q, {{0, 1}});
    GroupRing<Rat> RQ(Q, Rat(0), Rat(1));
    CHECK(RQ.pushforward(hom, R.mul(a, b)) == RQ.mul(RQ.pushforward(hom, a), RQ.pushforward(hom, b)));
    CHECK(RQ.augmentation(RQ.pushforward(hom, a)) == R.augmentation(a));
    CHECK_THROWS_AS(R.pushforward(hom, a), InputError);  // target group mismatch
}

TEST_CASE("xi_delta is the bilinear extension of pi_delta") {
    IQField K(-4);
    PiDelta pi = pi_delta(K, 41, 5);
    GroupRing<Rat> S1(pi.dec.pf.group, Rat(0), Rat(1));
    GroupRing<Rat> S2(pi.dec.pfb.group, Rat(0), Rat(1));
    GroupRing<Rat> D(pi.pring.group, Rat(0), Rat(1));
    using Elt = GroupRing<Rat>::Elt;

    // on basis vectors xi is pi, and the c-variant is pi with the inverted second slot
    for (const auto& g1 : pi.dec.pf.group.elements())
        for (const auto& g2 : pi.dec.pfb.group.elements()) {
            CHECK(xi_delta(pi, S1, S2, D, S1.basis(g1), S2.basis(g2)) == D.basis(pi.apply(g1, g2)));
            CHECK(xi_delta_c(pi, S1, S2, D, S1.basis(g1), S2.basis(g2)) == D.basis(pi.apply_c(g1, g2)));
        }

    // 1 (x) 1 -> 1
    CHECK(xi_delta(pi, S1, S2, D, S1.one(), S2.one()) == D.one());
    CHECK(xi_delta_c(pi, S1, S2, D, S1.one(), S2.one()) == D.one());

    // bilinearity against the brute-force expansion
    auto e1 = pi.dec.pf.group.elements();
    auto e2 = pi.dec.pfb.group.elements();
    Elt f1 = S1.add(S1.scale(Rat(2), S1.basis(e1[1])), S1.scale(rat(-3, 2), S1.basis(e1[3])));
    Elt f2 = S2.add(S2.basis(e2[2]), S2.scale(rat(7, 5), S2.basis(e2[4])));
    Elt expect;
    for (const auto& [g1, c1] : f1)
        for (const auto& [g2, c2] : f2) D.accumulate(expect, pi.apply(g1, g2), c1 * c2);
    CHECK(xi_delta(pi, S1, S2, D, f1, f2) == expect);
    Elt g2part = xi_delta(pi, S1, S2, D, S1.basis(e1[1]), f2);
    Elt g2part2 = xi_delta(pi, S1, S2, D, S1.basis(e1[3]), f2);
    CHECK(xi_delta(pi, S1, S2, D, f1, f2) ==
          D.add(D.scale(Rat(2), g2part), D.scale(rat(-3, 2), g2part2)));

    // augmentation respects the product
    CHECK(D.augmentation(xi_delta(pi, S1, S2, D, f1, f2)) == S1.augmentation(f1) * S2.augmentation(f2));

    // mismatched group rings refuse
    GroupRing<Rat> wrong(pi.dec.pm.group, Rat(0), Rat(1));
    CHECK_THROWS_AS(xi_delta(pi, S1, S2, wrong, f1, f2), InputError);
    CHECK_THROWS_AS(xi_delta(pi, wrong, S2, D, f1, f2), InputError);
}

TEST_CASE("norm maps and transitivity") {
    IQField K(-4);
    Int p(5);
    auto [P41, P41b] = iqfield::primes_above(K, 41);
    (void)P41b;
    auto [P13, P13b] = iqfield::primes_above(K, 13);
    (void)P13b;

    RayClassGroup top(K, rational_ideal(K, 41).mul(P13));
    RayClassGroup mid(K, rational_ideal(K, 41));
    RayClassGroup bot(K, P41);

    GroupHom n_tm = ray_norm(top, mid, p);
    GroupHom n_mb = ray_norm(mid, bot, p);
    GroupHom n_tb = ray_norm(top, bot, p);
    for (const auto& g : p_part(top.abstract(), p).group.elements())
        CHECK(n_tb.apply(g) == n_mb.apply(n_tm.apply(g)));

    // norms are surjective between these levels
    CHECK(n_tm.surjective());
    CHECK(n_mb.surjective());

    // norms respect the ideal-class maps: [I] upstairs restricts to [I] downstairs
    PPart pt = p_part(top.abstract(), p), pb = p_part(bot.abstract(), p);
    for (long ell : {7, 29, 37}) {
        auto [P, Pb] = iqfield::primes_above(K, Int(ell));
        (void)Pb;
        CHECK(n_tb.apply(pt.apply(top.class_of_ideal(P))) == pb.apply(bot.class_of_ideal(P)));
    }

    // conductor divisibility is enforced
    CHECK_THROWS_AS(ray_norm(mid, top, p), InputError);

    RingClassGroup rtop(K, 41 * 13), rbot(K, 41);
    GroupHom rn = ring_norm(rtop, rbot, p);
    CHECK(rn.surjective());
    for (long ell : {7, 29, 37}) {
        auto [P, Pb] = iqfield::primes_above(K, Int(ell));
        (void)Pb;
        PPart prt = p_part(rtop.abstract(), p), prb = p_part(rbot.abstract(), p);
        CHECK(rn.apply(prt.apply(rtop.class_of_ideal(P))) == prb.apply(rbot.class_of_ideal(P)));
    }
    CHECK_THROWS_AS(ring_norm(rbot, rtop, p), InputError);
}

TEST_CASE("norm square over the reference configurations") {
    IQField K(-4);
    CHECK(keydiagram_check(K, 41, 13, Int(5)) == 25);

    IQField K7(-7);
    CHECK(keydiagram_check(K7, 53, 11, Int(13)) == 169);

    CHECK_THROWS_AS(keydiagram_check(K, 41, 3, Int(5)), PreconditionFailed);   // inert ell
    CHECK_THROWS_AS(keydiagram_check(K, 41, 41, Int(5)), PreconditionFailed);  // ell | m
}

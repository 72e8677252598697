#include "anticyc/classfield.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace anticyc::classfield {

namespace {

QuadInt pow_mod_ideal(const IQField& K, const Ideal& n, const QuadInt& base, const Int& e_in) {
    QuadInt acc{1, 0};
    QuadInt b = n.reduce(base);
    Int e = e_in;
    if (e < 0) throw InputError("pow_mod_ideal: negative exponent");
    while (e > 0) {
        if (imod(e, 2) == 1) acc = n.reduce(K.mul(acc, b));
        b = n.reduce(K.mul(b, b));
        e /= 2;
    }
    return n.reduce(acc);
}

// Section of the surjection P (mod out_inv): x with P x = target (mod out_inv).
arith::Vec section_solve(const arith::Mat& P, std::size_t rin, const std::vector<Int>& out_inv,
                         const arith::Vec& target) {
    std::size_t rout = P.size();
    if (rout == 0) return arith::Vec(rin, 0);
    arith::Mat M(rout, arith::Vec(rin + rout, 0));
    for (std::size_t i = 0; i < rout; ++i) {
        for (std::size_t j = 0; j < rin; ++j) M[i][j] = P[i][j];
        M[i][rin + i] = out_inv[i];
    }
    arith::Vec z = arith::solve_linear(M, target);
    return arith::Vec(z.begin(), z.begin() + static_cast<long>(rin));
}

nlohmann::json ideal_json(const Ideal& I) {
    return nlohmann::json::array({to_long(I.a()), to_long(I.b()), to_long(I.c())});
}

nlohmann::json vec_json(const arith::Vec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const Int& x : v) a.push_back(to_long(x));
    return a;
}

template <class ClassFn>
std::vector<Ideal> search_generator_ideals(const IQField& K, const Ideal& cond,
                                           const arith::FiniteAbelianGroup& G, ClassFn cls, long norm_cap) {
    std::vector<Ideal> out;
    for (std::size_t i = 0; i < G.rank(); ++i) {
        arith::Vec target = G.id();
        target[i] = 1;
        bool found = false;
        for (long q = 2; q <= norm_cap && !found; ++q) {
            if (!is_prime(Int(q))) continue;
            auto [P, Pb] = iqfield::primes_above(K, Int(q));
            std::vector<Ideal> cands{P};
            if (!(Pb == P)) cands.push_back(Pb);
            for (const Ideal& cand : cands) {
                if (!cand.is_coprime_to(cond)) continue;
                if (cls(cand) == target) {
                    out.push_back(cand);
                    found = true;
                    break;
                }
            }
        }
        if (!found) throw ResourceLimit("no prime ideal found representing a group generator within the norm cap");
    }
    return out;
}

template <class ClassFn>
nlohmann::json sample_class_json(const IQField& K, const Ideal& cond, ClassFn cls) {
    nlohmann::json samples = nlohmann::json::array();
    for (long q = 2; q <= 50; ++q) {
        if (!is_prime(Int(q))) continue;
        auto [P, Pb] = iqfield::primes_above(K, Int(q));
        std::vector<Ideal> cands{P};
        if (!(Pb == P)) cands.push_back(Pb);
        for (const Ideal& cand : cands) {
            if (!cand.is_coprime_to(cond)) continue;
            samples.push_back({{"ideal", ideal_json(cand)}, {"class", vec_json(cls(cand))}});
        }
    }
    return samples;
}

}  // namespace

std::pair<QuadInt, QuadInt> coprime_idempotents(const Ideal& A, const Ideal& B) {
    const IQField& K = A.field();
    if (!(K == B.field())) throw InputError("idempotents: ideals live in different fields");
    // u = t0 a_A + t1 (b_A + c_A w) and v from B's generators, u + v = 1.
    arith::Mat M = {{A.a(), A.b(), B.a(), B.b()}, {Int(0), A.c(), Int(0), B.c()}};
    arith::Vec t;
    try {
        t = arith::solve_linear(M, {Int(1), Int(0)});
    } catch (const PreconditionFailed&) {
        throw NotCoprime("ideals are not coprime");
    }
    QuadInt u{t[0] * A.a() + t[1] * A.b(), t[1] * A.c()};
    QuadInt v = K.sub({1, 0}, u);
    if (!A.contains(u) || !B.contains(v)) throw PreconditionFailed("idempotent construction failed");
    return {u, v};
}

UnitResidueGroup::UnitResidueGroup(const IQField& K, const Ideal& n, long cap)
    : K_(K), n_(n), grp_(arith::FiniteAbelianGroup::trivial()) {
    if (!(n.field() == K)) throw InputError("unit residue group: modulus field mismatch");
    if (n.norm() > cap) throw ResourceLimit("unit residue group: modulus norm exceeds the enumeration cap");
    if (n.is_whole_ring()) return;

    for (const auto& [ell, e0] : factorize(n.norm())) {
        (void)e0;
        auto [P, Pb] = iqfield::primes_above(K, ell);
        std::vector<Ideal> cands{P};
        if (!(Pb == P)) cands.push_back(Pb);
        for (const Ideal& Pr : cands) {
            unsigned long v = 0;
            while (Pr.pow(v + 1).divides(n)) ++v;
            if (v == 0) continue;
            Ideal Q = Pr.pow(v);
            std::vector<QuadInt> units;
            std::map<std::pair<Int, Int>, std::size_t> index;
            for (Int x = 0; x < Q.a(); ++x)
                for (Int y = 0; y < Q.c(); ++y) {
                    QuadInt r{x, y};
                    if (!Pr.contains(r)) {
                        index[{x, y}] = units.size();
                        units.push_back(r);
                    }
                }
            auto op = [&](std::size_t i, std::size_t j) {
                QuadInt z = Q.reduce(K.mul(units[i], units[j]));
                return index.at({z.x, z.y});
            };
            auto [g, coords] = arith::abelian_structure(units.size(), op, index.at({Int(1), Int(0)}));
            comps_.push_back(Component{Q, Pr, std::move(units), std::move(index), g, std::move(coords), QuadInt{1, 0}});
        }
    }

    Int prod = 1;
    for (const auto& c : comps_) prod *= c.Q.norm();
    if (prod != n.norm()) throw PreconditionFailed("prime power factorization does not cover the modulus");

    // CRT idempotents: comps_[j].idem = 1 mod Q_j, 0 mod every other component.
    if (comps_.size() == 1) {
        comps_[0].idem = n.reduce({1, 0});
    } else {
        for (std::size_t j = 0; j < comps_.size(); ++j) {
            Ideal rest = Ideal::whole_ring(K);
            for (std::size_t k = 0; k < comps_.size(); ++k)
                if (k != j) rest = rest.mul(comps_[k].Q);
            auto [u, v] = coprime_idempotents(comps_[j].Q, rest);
            (void)u;
            comps_[j].idem = n.reduce(v);
        }
    }

    // Combined canonical presentation.
    std::size_t nold = 0;
    for (const auto& c : comps_) nold += c.grp.rank();
    if (nold == 0) return;  // e.g. the prime above 2 with trivial residue group
    arith::Mat rels;
    {
        std::size_t off = 0;
        for (const auto& c : comps_) {
            for (std::size_t i = 0; i < c.grp.rank(); ++i) {
                arith::Vec row(nold, 0);
                row[off + i] = c.grp.invariants()[i];
                rels.push_back(row);
            }
            off += c.grp.rank();
        }
    }
    auto [grp, tocanon] = arith::FiniteAbelianGroup::from_relations(nold, rels);
    grp_ = grp;
    tocanon_ = tocanon;

    // CRT-lifted residues for the concatenated component generators.
    std::vector<QuadInt> oldgens;
    std::vector<Int> oldord;
    for (const auto& c : comps_) {
        QuadInt rest = K.sub({1, 0}, c.idem);
        for (std::size_t i = 0; i < c.grp.rank(); ++i) {
            arith::Vec want = c.grp.id();
            want[i] = 1;
            std::size_t idx = 0;
            while (!(c.coords[idx] == want)) ++idx;
            oldgens.push_back(n.reduce(K.add(K.mul(c.idem, c.units[idx]), rest)));
            oldord.push_back(c.grp.invariants()[i]);
        }
    }
    for (std::size_t i = 0; i < grp_.rank(); ++i) {
        arith::Vec e = grp_.id();
        e[i] = 1;
        arith::Vec z = section_solve(tocanon_, nold, grp_.invariants(), e);
        QuadInt g{1, 0};
        for (std::size_t j = 0; j < nold; ++j)
            g = n.reduce(K.mul(g, pow_mod_ideal(K, n, oldgens[j], imod(z[j], oldord[j]))));
        gens_.push_back(g);
    }
}

bool UnitResidueGroup::is_unit(const QuadInt& x) const {
    for (const auto& c : comps_)
        if (c.P.contains(x)) return false;
    return true;
}

arith::Vec UnitResidueGroup::dlog(const QuadInt& x) const {
    if (!is_unit(x)) throw NotCoprime("residue shares a prime factor with the modulus");
    arith::Vec concat;
    for (const auto& c : comps_) {
        QuadInt z = c.Q.reduce(x);
        const arith::Vec& v = c.coords[c.index.at({z.x, z.y})];
        concat.insert(concat.end(), v.begin(), v.end());
    }
    return grp_.reduce(arith::mat_apply(tocanon_, concat));
}

QuadInt UnitResidueGroup::from_coords(const arith::Vec& v) const {
    arith::Vec w = grp_.reduce(v);
    QuadInt g = n_.reduce({1, 0});
    for (std::size_t i = 0; i < gens_.size(); ++i) g = n_.reduce(K_.mul(g, pow_mod_ideal(K_, n_, gens_[i], w[i])));
    return g;
}

std::vector<QuadInt> UnitResidueGroup::unit_residues(long cap) const {
    if (order() > cap) throw ResourceLimit("unit residue enumeration exceeds the cap");
    std::vector<QuadInt> out{n_.reduce({1, 0})};
    for (const auto& c : comps_) {
        QuadInt rest = K_.sub({1, 0}, c.idem);
        std::vector<QuadInt> next;
        next.reserve(out.size() * c.units.size());
        for (const auto& base : out)
            for (const auto& uu : c.units)
                next.push_back(n_.reduce(K_.add(K_.mul(base, rest), K_.mul(uu, c.idem))));
        out = std::move(next);
    }
    return out;
}

RayClassGroup::RayClassGroup(const IQField& K, const Ideal& n, long cap)
    : K_(K), n_(n), urg_(K, n, cap), grp_(arith::FiniteAbelianGroup::trivial()) {
    iqfield::ClassGroup C(K);
    h_ = C.h();
    presentable_ = (h_ == 1);
    std::size_t r = urg_.abstract().rank();
    if (r == 0) {
        grp_ = arith::FiniteAbelianGroup::trivial();
    } else {
        arith::Mat rels;
        for (std::size_t i = 0; i < r; ++i) {
            arith::Vec row(r, 0);
            row[i] = urg_.abstract().invariants()[i];
            rels.push_back(row);
        }
        for (const QuadInt& w : K.units()) rels.push_back(urg_.dlog(w));
        auto [g, m] = arith::FiniteAbelianGroup::from_relations(r, rels);
        grp_ = g;
        proj_ = m;
    }
    unit_image_order_ = urg_.order() / grp_.order();
    if (unit_image_order_ * grp_.order() != urg_.order())
        throw PreconditionFailed("unit image order does not divide the residue group order");
    order_ = Int(h_) * grp_.order();
}

void RayClassGroup::require_presentable() const {
    if (!presentable_)
        throw NotPrincipalField("ray class presentation requires class number one; only the order is available");
}

const arith::FiniteAbelianGroup& RayClassGroup::abstract() const {
    require_presentable();
    return grp_;
}

arith::Vec RayClassGroup::class_of_residue(const QuadInt& x) const {
    require_presentable();
    return grp_.reduce(arith::mat_apply(proj_, urg_.dlog(x)));
}

arith::Vec RayClassGroup::class_of_ideal(const Ideal& I) const {
    require_presentable();
    if (!I.is_coprime_to(n_)) throw NotCoprime("ideal shares a prime factor with the conductor");
    return class_of_residue(iqfield::principal_generator(I));
}

QuadInt RayClassGroup::lift(const arith::Vec& cls) const {
    require_presentable();
    arith::Vec z = section_solve(proj_, urg_.abstract().rank(), grp_.invariants(), grp_.reduce(cls));
    return urg_.from_coords(urg_.abstract().reduce(z));
}

std::vector<Ideal> RayClassGroup::generator_ideals(long norm_cap) const {
    require_presentable();
    return search_generator_ideals(K_, n_, grp_, [this](const Ideal& I) { return class_of_ideal(I); }, norm_cap);
}

nlohmann::json RayClassGroup::to_json() const {
    nlohmann::json j;
    j["conductor"] = ideal_json(n_);
    j["order"] = to_long(order_);
    j["class_number"] = h_;
    j["residue_group_order"] = to_long(urg_.order());
    j["unit_image_order"] = to_long(unit_image_order_);
    j["presentable"] = presentable_;
    if (presentable_) {
        nlohmann::json inv = nlohmann::json::array();
        for (const Int& d : grp_.invariants()) inv.push_back(to_long(d));
        j["invariants"] = inv;
        nlohmann::json gens = nlohmann::json::array();
        for (const Ideal& I : generator_ideals()) gens.push_back(ideal_json(I));
        j["generator_ideals"] = gens;
        j["sample_classes"] = sample_class_json(K_, n_, [this](const Ideal& I) { return class_of_ideal(I); });
    }
    return j;
}

namespace {

Ideal ring_modulus(const IQField& K, long m) {
    if (m < 1) throw InputError("ring class conductor must be at least 1");
    if (igcd(Int(m), Int(K.absD())) != 1) throw InputError("ring class conductor must be coprime to the discriminant");
    return Ideal::principal(K, QuadInt{Int(m), 0});
}

}  // namespace

RingClassGroup::RingClassGroup(const IQField& K, long m, long cap)
    : K_(K), m_(m), urg_(K, ring_modulus(K, m), cap), grp_(arith::FiniteAbelianGroup::trivial()) {
    iqfield::ClassGroup C(K);
    h_ = C.h();
    presentable_ = (h_ == 1);
    std::size_t r = urg_.abstract().rank();
    if (r > 0) {
        arith::Mat rels;
        for (std::size_t i = 0; i < r; ++i) {
            arith::Vec row(r, 0);
            row[i] = urg_.abstract().invariants()[i];
            rels.push_back(row);
        }
        for (const QuadInt& w : K.units()) rels.push_back(urg_.dlog(w));
        for (long a = 1; a < m; ++a)
            if (std::gcd(a, m) == 1) rels.push_back(urg_.dlog({Int(a), 0}));
        auto [g, mm] = arith::FiniteAbelianGroup::from_relations(r, rels);
        grp_ = g;
        proj_ = mm;
    }
    order_ = Int(h_) * grp_.order();
    if (order_ != formula_order())
        throw PreconditionFailed("ring class group order does not match the class number formula");
}

Int RingClassGroup::formula_order() const {
    Rat r(h_);
    if (m_ > 1) {
        r *= m_;
        for (const auto& [ell, e] : factorize(Int(m_))) {
            (void)e;
            r *= rat(ell - arith::kronecker_symbol(Int(K_.D()), ell), ell);
        }
        r /= K_.unit_count() / 2;
    }
    if (r.get_den() != 1) throw PreconditionFailed("ring class number formula is not integral");
    return r.get_num();
}

void RingClassGroup::require_presentable() const {
    if (!presentable_)
        throw NotPrincipalField("ring class presentation requires class number one; only the order is available");
}

const arith::FiniteAbelianGroup& RingClassGroup::abstract() const {
    require_presentable();
    return grp_;
}

arith::Vec RingClassGroup::class_of_residue(const QuadInt& x) const {
    require_presentable();
    return grp_.reduce(arith::mat_apply(proj_, urg_.dlog(x)));
}

arith::Vec RingClassGroup::class_of_ideal(const Ideal& I) const {
    require_presentable();
    if (!I.is_coprime_to(urg_.modulus())) throw NotCoprime("ideal shares a prime factor with the conductor");
    return class_of_residue(iqfield::principal_generator(I));
}

QuadInt RingClassGroup::lift(const arith::Vec& cls) const {
    require_presentable();
    arith::Vec z = section_solve(proj_, urg_.abstract().rank(), grp_.invariants(), grp_.reduce(cls));
    return urg_.from_coords(urg_.abstract().reduce(z));
}

std::vector<Ideal> RingClassGroup::generator_ideals(long norm_cap) const {
    require_presentable();
    return search_generator_ideals(K_, urg_.modulus(), grp_, [this](const Ideal& I) { return class_of_ideal(I); },
                                   norm_cap);
}

nlohmann::json RingClassGroup::to_json() const {
    nlohmann::json j;
    j["conductor"] = m_;
    j["order"] = to_long(order_);
    j["class_number"] = h_;
    j["presentable"] = presentable_;
    if (presentable_) {
        nlohmann::json inv = nlohmann::json::array();
        for (const Int& d : grp_.invariants()) inv.push_back(to_long(d));
        j["invariants"] = inv;
        nlohmann::json gens = nlohmann::json::array();
        for (const Ideal& I : generator_ideals()) gens.push_back(ideal_json(I));
        j["generator_ideals"] = gens;
        j["sample_classes"] = sample_class_json(K_, urg_.modulus(), [this](const Ideal& I) { return class_of_ideal(I); });
    }
    return j;
}

PPart p_part(const arith::FiniteAbelianGroup& G, const Int& p) {
    if (!is_prime(p)) throw InputError("p_part: p must be prime");
    std::vector<Int> powers, inv;
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < G.rank(); ++i) {
        Int d = G.invariants()[i], pw = 1;
        while (d % p == 0) {
            pw *= p;
            d /= p;
        }
        powers.push_back(pw);
        if (pw > 1) {
            slots.push_back(i);
            inv.push_back(pw);
        }
    }
    return PPart{arith::FiniteAbelianGroup(inv), powers, slots};
}

arith::Vec PPart::apply(const arith::Vec& v) const {
    if (v.size() != powers.size()) throw InputError("p-part projection: coordinate size mismatch");
    arith::Vec q;
    q.reserve(slots.size());
    for (std::size_t s : slots) q.push_back(imod(v[s], powers[s]));
    return q;
}

arith::Vec PPart::lift(const arith::Vec& q, std::size_t source_rank) const {
    if (q.size() != slots.size()) throw InputError("p-part lift: coordinate size mismatch");
    arith::Vec v(source_rank, 0);
    for (std::size_t k = 0; k < slots.size(); ++k) v[slots[k]] = q[k];
    return v;
}

GroupHom::GroupHom(arith::FiniteAbelianGroup s, arith::FiniteAbelianGroup d, arith::Mat m)
    : src(std::move(s)), dst(std::move(d)), M(std::move(m)) {
    if (M.size() != dst.rank()) throw InputError("homomorphism matrix has wrong number of rows");
    for (const auto& row : M)
        if (row.size() != src.rank()) throw InputError("homomorphism matrix has wrong number of columns");
    for (std::size_t j = 0; j < src.rank(); ++j) {
        arith::Vec col(dst.rank());
        for (std::size_t i = 0; i < dst.rank(); ++i) col[i] = M[i][j] * src.invariants()[j];
        if (!dst.is_id(dst.reduce(col))) throw InputError("homomorphism is not well defined on generator orders");
    }
}

bool GroupHom::surjective() const {
    if (dst.rank() == 0) return true;
    arith::Mat rels;
    for (std::size_t i = 0; i < dst.rank(); ++i) {
        arith::Vec row(dst.rank(), 0);
        row[i] = dst.invariants()[i];
        rels.push_back(row);
    }
    for (std::size_t j = 0; j < src.rank(); ++j) {
        arith::Vec row(dst.rank());
        for (std::size_t i = 0; i < dst.rank(); ++i) row[i] = M[i][j];
        rels.push_back(row);
    }
    auto [coker, m] = arith::FiniteAbelianGroup::from_relations(dst.rank(), rels);
    (void)m;
    return coker.order() == 1;
}

GroupHom GroupHom::compose(const GroupHom& f, const GroupHom& g) {
    if (!(g.dst == f.src)) throw InputError("homomorphism composition: middle groups differ");
    if (f.M.empty() || g.M.empty()) return GroupHom(g.src, f.dst, arith::Mat(f.dst.rank(), arith::Vec(g.src.rank(), 0)));
    return GroupHom(g.src, f.dst, arith::mat_mul(f.M, g.M));
}

SplitDecomposition decompose_Hm(const IQField& K, long m, const Int& p, long cap) {
    if (!is_prime(p)) throw InputError("p must be prime");
    if (m < 1) throw InputError("m must be at least 1");
    iqfield::ClassGroup C(K);
    if (C.h() != 1) throw NotPrincipalField("explicit split decomposition requires class number one");
    if (imod(Int(6) * Int(C.h()), p) == 0) throw PreconditionFailed("p divides 6 h_K");
    if (imod(Int(m), p) == 0) throw PreconditionFailed("m is not coprime to p");
    Ideal frak = Ideal::whole_ring(K), frakbar = Ideal::whole_ring(K);
    for (const auto& [ell, e] : factorize(Int(m))) {
        if (iqfield::splitting_type(K, ell) != iqfield::Splitting::Split)
            throw PreconditionFailed("m has a prime factor that is not split in K");
        auto [P, Pb] = iqfield::primes_above(K, ell);
        frak = frak.mul(P.pow(static_cast<unsigned long>(e)));
        frakbar = frakbar.mul(Pb.pow(static_cast<unsigned long>(e)));
    }
    RayClassGroup Hm(K, Ideal::principal(K, QuadInt{Int(m), 0}), cap);
    RayClassGroup Hf(K, frak, cap);
    RayClassGroup Hfb(K, frakbar, cap);
    PPart pm = p_part(Hm.abstract(), p);
    PPart pf = p_part(Hf.abstract(), p);
    PPart pfb = p_part(Hfb.abstract(), p);

    std::size_t rm = pm.group.rank();
    arith::Mat M1(pf.group.rank(), arith::Vec(rm, 0));
    arith::Mat M2(pfb.group.rank(), arith::Vec(rm, 0));
    for (std::size_t j = 0; j < rm; ++j) {
        arith::Vec e = pm.group.id();
        e[j] = 1;
        QuadInt x = Hm.lift(pm.lift(e, Hm.abstract().rank()));
        arith::Vec c1 = pf.apply(Hf.class_of_residue(x));
        arith::Vec c2 = pfb.apply(Hfb.class_of_residue(x));
        for (std::size_t i = 0; i < c1.size(); ++i) M1[i][j] = c1[i];
        for (std::size_t i = 0; i < c2.size(); ++i) M2[i][j] = c2[i];
    }
    GroupHom t1(pm.group, pf.group, M1);
    GroupHom t2(pm.group, pfb.group, M2);

    if (pm.group.order() != pf.group.order() * pfb.group.order())
        throw PreconditionFailed("split decomposition cardinality mismatch");
    std::set<std::pair<arith::Vec, arith::Vec>> seen;
    auto elems = pm.group.elements(Int(cap));
    for (const auto& g : elems) seen.insert({t1.apply(g), t2.apply(g)});
    if (seen.size() != elems.size()) throw PreconditionFailed("split decomposition restriction map is not injective");

    return SplitDecomposition{frak, frakbar, Hm, Hf, Hfb, pm, pf, pfb, t1, t2};
}

PiDelta pi_delta(const IQField& K, long m, const Int& p, long cap) {
    SplitDecomposition dec = decompose_Hm(K, m, p, cap);
    RingClassGroup ring(K, m, cap);
    PPart pring = p_part(ring.abstract(), p);
    auto [u, v] = coprime_idempotents(dec.frak_m, dec.frak_m_bar);
    Ideal nm = Ideal::principal(K, QuadInt{Int(m), 0});

    std::size_t r1 = dec.pf.group.rank(), r2 = dec.pfb.group.rank(), rr = pring.group.rank();
    arith::Mat M1(rr, arith::Vec(r1, 0)), M2(rr, arith::Vec(r2, 0));
    for (std::size_t j = 0; j < r1; ++j) {
        arith::Vec e = dec.pf.group.id();
        e[j] = 1;
        QuadInt alpha = dec.H_frak.lift(dec.pf.lift(e, dec.H_frak.abstract().rank()));
        QuadInt x = nm.reduce(K.add(K.mul(v, alpha), u));
        arith::Vec col = pring.apply(ring.class_of_residue(x));
        for (std::size_t i = 0; i < rr; ++i) M1[i][j] = col[i];
    }
    for (std::size_t j = 0; j < r2; ++j) {
        arith::Vec e = dec.pfb.group.id();
        e[j] = 1;
        QuadInt beta = dec.H_frak_bar.lift(dec.pfb.lift(e, dec.H_frak_bar.abstract().rank()));
        QuadInt x = nm.reduce(K.add(v, K.mul(u, beta)));
        arith::Vec col = pring.apply(ring.class_of_residue(x));
        for (std::size_t i = 0; i < rr; ++i) M2[i][j] = col[i];
    }
    // validate well-definedness through the GroupHom constructor
    GroupHom h1(dec.pf.group, pring.group, M1);
    GroupHom h2(dec.pfb.group, pring.group, M2);
    (void)h1;
    (void)h2;
    return PiDelta{dec, ring, pring, u, v, M1, M2};
}

arith::Vec PiDelta::apply(const arith::Vec& g1, const arith::Vec& g2) const {
    arith::Vec a = arith::mat_apply(M1, dec.pf.group.reduce(g1));
    arith::Vec b = arith::mat_apply(M2, dec.pfb.group.reduce(g2));
    if (a.empty()) return pring.group.reduce(b);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return pring.group.reduce(a);
}

arith::Vec PiDelta::apply_c(const arith::Vec& g1, const arith::Vec& g2) const {
    return apply(g1, dec.pfb.group.inverse(dec.pfb.group.reduce(g2)));
}

arith::Vec PiDelta::frobenius(const Int& ell) const {
    if (iqfield::splitting_type(dec.frak_m.field(), ell) != iqfield::Splitting::Split)
        throw InputError("frobenius: ell must be split");
    auto [P, Pb] = iqfield::primes_above(dec.frak_m.field(), ell);
    (void)Pb;
    return pring.apply(ring.class_of_ideal(P));
}

GroupHom ray_norm(const RayClassGroup& src, const RayClassGroup& dst, const Int& p) {
    if (!dst.conductor().divides(src.conductor()))
        throw InputError("norm map requires the target conductor to divide the source conductor");
    PPart ps = p_part(src.abstract(), p);
    PPart pd = p_part(dst.abstract(), p);
    arith::Mat M(pd.group.rank(), arith::Vec(ps.group.rank(), 0));
    for (std::size_t j = 0; j < ps.group.rank(); ++j) {
        arith::Vec e = ps.group.id();
        e[j] = 1;
        QuadInt x = src.lift(ps.lift(e, src.abstract().rank()));
        arith::Vec col = pd.apply(dst.class_of_residue(x));
        for (std::size_t i = 0; i < col.size(); ++i) M[i][j] = col[i];
    }
    return GroupHom(ps.group, pd.group, M);
}

GroupHom ring_norm(const RingClassGroup& src, const RingClassGroup& dst, const Int& p) {
    if (src.conductor() % dst.conductor() != 0)
        throw InputError("norm map requires the target conductor to divide the source conductor");
    PPart ps = p_part(src.abstract(), p);
    PPart pd = p_part(dst.abstract(), p);
    arith::Mat M(pd.group.rank(), arith::Vec(ps.group.rank(), 0));
    for (std::size_t j = 0; j < ps.group.rank(); ++j) {
        arith::Vec e = ps.group.id();
        e[j] = 1;
        QuadInt x = src.lift(ps.lift(e, src.abstract().rank()));
        arith::Vec col = pd.apply(dst.class_of_residue(x));
        for (std::size_t i = 0; i < col.size(); ++i) M[i][j] = col[i];
    }
    return GroupHom(ps.group, pd.group, M);
}

std::size_t keydiagram_check(const IQField& K, long m, long ell, const Int& p, long cap) {
    if (iqfield::splitting_type(K, Int(ell)) != iqfield::Splitting::Split)
        throw PreconditionFailed("ell must be split in K");
    if (m % ell == 0) throw PreconditionFailed("ell must be coprime to m");
    PiDelta piM = pi_delta(K, m, p, cap);
    PiDelta piML = pi_delta(K, m * ell, p, cap);
    GroupHom n1 = ray_norm(piML.dec.H_frak, piM.dec.H_frak, p);
    GroupHom n2 = ray_norm(piML.dec.H_frak_bar, piM.dec.H_frak_bar, p);
    GroupHom nr = ring_norm(piML.ring, piM.ring, p);
    std::size_t count = 0;
    for (const auto& g1 : piML.dec.pf.group.elements(Int(cap)))
        for (const auto& g2 : piML.dec.pfb.group.elements(Int(cap))) {
            arith::Vec top = nr.apply(piML.apply(g1, g2));
            arith::Vec bot = piM.apply(n1.apply(g1), n2.apply(g2));
            if (top != bot) throw PreconditionFailed("norm square does not commute at a basis pair");
            arith::Vec topc = nr.apply(piML.apply_c(g1, g2));
            arith::Vec botc = piM.apply_c(n1.apply(g1), n2.apply(g2));
            if (topc != botc) throw PreconditionFailed("conjugated norm square does not commute at a basis pair");
            ++count;
        }
    return count;
}

}  // namespace anticyc::classfield

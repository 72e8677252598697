#include "anticyc/heckechar.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace anticyc::heckechar {

namespace {

std::string quad_str(const QuadInt& a) {
    std::string s = a.x.get_str();
    if (a.y != 0) {
        s += a.y > 0 ? "+" : "-";
        Int ay = a.y > 0 ? a.y : Int(-a.y);
        if (ay != 1) s += ay.get_str() + "*";
        s += "w";
    }
    return s;
}

// Residue of x + y omega in O/P = F_p, with `root` the image of omega.
Int residue_at(const QuadInt& a, const Int& root, const Int& p) { return imod(a.x + a.y * root, p); }

long ideal_val(const Ideal& P, const Ideal& I) {
    long v = 0;
    while (P.pow(static_cast<unsigned long>(v) + 1).divides(I)) ++v;
    return v;
}

Ideal ideal_lcm(const iqfield::IQField& K, const Ideal& A, const Ideal& B) {
    if (A.is_whole_ring() || A == B) return B;
    if (B.is_whole_ring()) return A;
    Ideal out = Ideal::principal(K, {1, 0});
    for (const auto& [ell, mult] : factorize(A.norm() * B.norm())) {
        (void)mult;
        auto pr = iqfield::primes_above(K, ell);
        std::vector<Ideal> ps{pr.first};
        if (!(pr.second == pr.first)) ps.push_back(pr.second);
        for (const Ideal& P : ps) {
            long v = std::max(ideal_val(P, A), ideal_val(P, B));
            if (v > 0) out = out.mul(P.pow(static_cast<unsigned long>(v)));
        }
    }
    return out;
}

}  // namespace

Int omega_root_at(const IQField& K, const Int& p, int prec) {
    if (prec < 1) throw InputError("omega_root_at: precision must be positive");
    if (iqfield::splitting_type(K, p) != iqfield::Splitting::Split)
        throw InputError("omega_root_at: p must split in the field");
    auto pr = iqfield::primes_above(K, p);
    const Int s(K.s()), t(K.t());
    // omega = -b mod the designated prime [p, b + omega]; Newton from there.
    Int r = imod(-pr.first.b(), p);
    Int mod = p;
    for (int k = 1; k < prec; ++k) {
        mod *= p;
        Int fr = imod(r * r - s * r - t, mod);
        Int fp = imod(2 * r - s, mod);  // unit mod p: p odd and unramified
        r = imod(r - fr * inv_mod(fp, mod), mod);
    }
    if (imod(r * r - s * r - t, mod) != 0) throw PreconditionFailed("omega_root_at: lift failed");
    return r;
}

HeckeCharacter::HeckeCharacter(const IQField& K, const Ideal& f, long a, long b,
                               std::vector<Int> eps_exponents, long cap)
    : K_(K),
      f_(f),
      a_(a),
      b_(b),
      cap_(cap),
      urg_(K, f, cap),
      M_(urg_.abstract().rank() == 0 ? 1 : to_long(urg_.abstract().invariants().back())),
      ring_(K.D(), M_),
      eps_(std::move(eps_exponents)) {
    if (iqfield::ClassGroup(K_).h() != 1)
        throw NotPrincipalField("exact character evaluation requires class number one");
    const auto& inv = urg_.abstract().invariants();
    if (eps_.size() != inv.size())
        throw InputError("finite-part exponent count does not match the generator count");
    for (std::size_t i = 0; i < eps_.size(); ++i) eps_[i] = imod(eps_[i], inv[i]);
    check_units();
}

void HeckeCharacter::check_units() const {
    for (const QuadInt& u : K_.units()) {
        RElt v = eps(u);
        RElt em = ring_.embed_quad(u.x, u.y);
        if (a_ != 0) v = v * em.pow(-a_);
        if (b_ != 0) v = v * em.conj().pow(-b_);
        if (!v.is_one())
            throw UnitIncompatible("finite part conflicts with the infinity type on the unit " +
                                   quad_str(u));
    }
}

Int HeckeCharacter::eps_exponent(const QuadInt& x) const {
    arith::Vec v = urg_.dlog(x);
    const auto& inv = urg_.abstract().invariants();
    Int e = 0;
    for (std::size_t i = 0; i < v.size(); ++i) e += v[i] * eps_[i] * (Int(M_) / inv[i]);
    return imod(e, Int(M_));
}

RElt HeckeCharacter::eps(const QuadInt& x) const { return ring_.zeta_pow(to_long(eps_exponent(x))); }

RElt HeckeCharacter::evaluate_principal(const QuadInt& alpha) const {
    RElt v = eps(alpha);
    if (a_ != 0 || b_ != 0) {
        RElt em = ring_.embed_quad(alpha.x, alpha.y);
        if (a_ != 0) v = v * em.pow(-a_);
        if (b_ != 0) v = v * em.conj().pow(-b_);
    }
    return v;
}

RElt HeckeCharacter::evaluate(const Ideal& a) const {
    if (!a.is_coprime_to(f_)) throw NotCoprime("ideal shares a factor with the modulus");
    return evaluate_principal(iqfield::principal_generator(a));
}

RElt HeckeCharacter::central_character(const Int& n) const {
    if (igcd(n, f_.norm()) != 1) return ring_.zero();
    return eps({n, Int(0)});
}

HeckeCharacter HeckeCharacter::conjugate() const {
    Ideal fc = f_.conjugate();
    UnitResidueGroup uc(K_, fc, cap_);
    const auto& inv = uc.abstract().invariants();
    if (inv != urg_.abstract().invariants())
        throw PreconditionFailed("conjugate residue group has a different shape");
    std::vector<Int> ec(inv.size());
    for (std::size_t i = 0; i < inv.size(); ++i) {
        // eps^c(g) = eps(conj g); convert the zeta_M exponent back to the
        // per-generator convention (exactly divisible since g^d_i = 1).
        Int expo = eps_exponent(K_.conj(uc.generators()[i]));
        Int step = Int(M_) / inv[i];
        if (expo % step != 0) throw PreconditionFailed("conjugate exponent not integral");
        ec[i] = imod(expo / step, inv[i]);
    }
    return HeckeCharacter(K_, fc, b_, a_, ec, cap_);
}

HeckeCharacter HeckeCharacter::mul(const HeckeCharacter& other) const {
    if (!(K_ == other.K_)) throw InputError("character product requires a common field");
    Ideal F = ideal_lcm(K_, f_, other.f_);
    std::optional<UnitResidueGroup> fresh;
    const UnitResidueGroup* ug = &urg_;
    if (!(F == f_)) {
        if (F == other.f_) {
            ug = &other.urg_;
        } else {
            fresh.emplace(K_, F, cap_);
            ug = &*fresh;
        }
    }
    const auto& inv = ug->abstract().invariants();
    long MF = inv.empty() ? 1 : to_long(inv.back());
    std::vector<Int> e(inv.size());
    for (std::size_t i = 0; i < inv.size(); ++i) {
        // Generators mod the lcm are units for both factor moduli, and both
        // exponents of (O/f_j)^x divide the exponent of (O/F)^x.
        Int t = eps_exponent(ug->generators()[i]) * (MF / M_) +
                other.eps_exponent(ug->generators()[i]) * (MF / other.M_);
        Int num = imod(t, MF) * inv[i];
        if (num % MF != 0) throw PreconditionFailed("product exponent not integral");
        e[i] = imod(num / MF, inv[i]);
    }
    return HeckeCharacter(K_, F, a_ + other.a_, b_ + other.b_, e, cap_);
}

HeckeCharacter HeckeCharacter::pow(long n) const {
    const auto& inv = urg_.abstract().invariants();
    std::vector<Int> e(eps_.size());
    for (std::size_t i = 0; i < eps_.size(); ++i) e[i] = imod(eps_[i] * n, inv[i]);
    return HeckeCharacter(K_, f_, a_ * n, b_ * n, e, cap_);
}

AvatarValue HeckeCharacter::avatar_of_principal(const QuadInt& alpha, const Int& p, int N) const {
    if (!urg_.is_unit(alpha)) throw NotCoprime("argument shares a factor with the modulus");
    if (imod(K_.norm(alpha), p) == 0) throw NotCoprime("argument shares a factor with p");
    RElt v = evaluate_principal(alpha);
    Int r = ring_.reduce_padic(v, p, N, omega_root_at(K_, p, N));
    arith::KappaValue kv = arith::kappa_eval(1, r, p, N);
    return AvatarValue{arith::PadicInt(p, N, r), kv.teich_power, kv.exponent};
}

AvatarValue HeckeCharacter::padic_avatar(const Ideal& a, const Int& p, int N) const {
    if (!a.is_coprime_to(f_)) throw NotCoprime("ideal shares a factor with the modulus");
    if (imod(a.norm(), p) == 0) throw NotCoprime("ideal shares a factor with p");
    return avatar_of_principal(iqfield::principal_generator(a), p, N);
}

nlohmann::json HeckeCharacter::to_json() const {
    nlohmann::json j;
    j["discriminant"] = K_.D();
    j["conductor"] = {to_long(f_.a()), to_long(f_.b()), to_long(f_.c())};
    j["infinity_type"] = {a_, b_};
    j["zeta_order"] = M_;
    nlohmann::json gens = nlohmann::json::array();
    nlohmann::json orders = nlohmann::json::array();
    const auto& inv = urg_.abstract().invariants();
    for (std::size_t i = 0; i < inv.size(); ++i) {
        const QuadInt& g = urg_.generators()[i];
        gens.push_back({to_long(g.x), to_long(g.y)});
        orders.push_back(to_long(inv[i]));
    }
    j["generators"] = gens;
    j["orders"] = orders;
    nlohmann::json ee = nlohmann::json::array();
    for (const Int& e : eps_) ee.push_back(to_long(e));
    j["eps_exponents"] = ee;
    return j;
}

HeckeCharacter HeckeCharacter::from_json(const nlohmann::json& j, long cap) {
    IQField K(j.at("discriminant").get<long>());
    const auto& c = j.at("conductor");
    Ideal f = Ideal::from_hnf(K, Int(c.at(0).get<long>()), Int(c.at(1).get<long>()),
                              Int(c.at(2).get<long>()));
    std::vector<Int> e;
    for (const auto& x : j.at("eps_exponents")) e.emplace_back(x.get<long>());
    HeckeCharacter psi(K, f, j.at("infinity_type").at(0).get<long>(),
                       j.at("infinity_type").at(1).get<long>(), e, cap);
    // The exponents only mean anything against the same generator list.
    if (j.at("zeta_order").get<long>() != psi.M_)
        throw InputError("character file zeta order does not match the residue group");
    const auto& inv = psi.urg_.abstract().invariants();
    const auto& gens = j.at("generators");
    const auto& orders = j.at("orders");
    if (gens.size() != inv.size() || orders.size() != inv.size())
        throw InputError("character file generator list has the wrong length");
    for (std::size_t i = 0; i < inv.size(); ++i) {
        const QuadInt& g = psi.urg_.generators()[i];
        if (Int(gens.at(i).at(0).get<long>()) != g.x || Int(gens.at(i).at(1).get<long>()) != g.y ||
            Int(orders.at(i).get<long>()) != inv[i])
            throw InputError("character file generators do not match the canonical presentation");
    }
    return psi;
}

bool HeckeCharacter::operator==(const HeckeCharacter& o) const {
    return K_ == o.K_ && f_ == o.f_ && a_ == o.a_ && b_ == o.b_ && eps_ == o.eps_;
}

SpadeResult condition_spade(const HeckeCharacter& psi, const Int& p) {
    if (psi.type_a() != -1 || psi.type_b() != 0)
        throw InputError("ordinariness condition applies to infinity type (-1, 0)");
    if (!is_prime(p) || iqfield::splitting_type(psi.field(), p) != iqfield::Splitting::Split)
        throw InputError("ordinariness condition requires a split prime p");
    const IQField& K = psi.field();
    const Ideal& f = psi.modulus();
    if (f.is_coprime_to(Ideal::principal(K, {p, Int(0)})))
        return {true, "p does not divide the modulus"};
    auto pr = iqfield::primes_above(K, p);
    if (pr.second.divides(f))
        return {false, "the conjugate of the designated prime above p divides the modulus"};
    // Designated prime divides the modulus: compare the unit restriction with
    // the Teichmueller character there.  Unit compatibility for type (-1, 0)
    // forces eps(u) = u^{-1} = conj(u), so its residue is conj(u)'s.
    Int root = omega_root_at(K, p, 1);
    for (const QuadInt& u : K.units()) {
        QuadInt uc = K.conj(u);
        if (residue_at(uc, root, p) != residue_at(u, root, p))
            return {true,
                    "the designated prime above p divides the modulus, its conjugate does not, "
                    "and the unit restriction differs from the Teichmueller character (witness " +
                        quad_str(u) + ")"};
    }
    return {false, "the unit restriction agrees with the Teichmueller character"};
}

namespace {

std::vector<Ideal> prime_ideals_up_to(const IQField& K, long bound) {
    std::vector<Ideal> out;
    for (long q = 2; q <= bound; ++q) {
        if (!is_prime(Int(q))) continue;
        auto sp = iqfield::splitting_type(K, Int(q));
        if (sp == iqfield::Splitting::Inert) {
            if (q <= bound / q) out.push_back(Ideal::principal(K, {Int(q), Int(0)}));
            continue;
        }
        auto pr = iqfield::primes_above(K, Int(q));
        out.push_back(pr.first);
        if (sp == iqfield::Splitting::Split) out.push_back(pr.second);
    }
    return out;
}

}  // namespace

HeckeCharacter psi0(const IQField& K, const Int& p, long cap) {
    if (!is_prime(p)) throw PreconditionFailed("p must be prime");
    if (iqfield::splitting_type(K, p) != iqfield::Splitting::Split)
        throw PreconditionFailed("p must split in the field");
    iqfield::ClassGroup C(K);
    if (C.h() != 1) throw PreconditionFailed("construction requires class number one");
    auto pr = iqfield::primes_above(K, p);
    const Ideal& P = pr.first;
    long M = to_long(p - 1);  // (O/P)^x is cyclic of order p - 1
    std::vector<HeckeCharacter> found;
    for (long e = 0; e < M; ++e) {
        std::optional<HeckeCharacter> cand;
        try {
            cand.emplace(K, P, -1, 0, std::vector<Int>{Int(e)}, cap);
        } catch (const UnitIncompatible&) {
            continue;
        }
        bool in_gamma = true;
        for (const Ideal& Q : prime_ideals_up_to(K, 200)) {
            if (imod(Q.norm(), p) == 0) continue;  // not coprime to P or (p)
            if (!cand->padic_avatar(Q, p, 1).factors_through_gamma()) {
                in_gamma = false;
                break;
            }
        }
        if (in_gamma) found.push_back(*cand);
    }
    if (found.size() != 1)
        throw PreconditionFailed("expected exactly one character with avatar through Gamma, found " +
                                 std::to_string(found.size()));
    // The avatar image must generate 1 + pZ_p (index-0 normalization): some
    // test prime has to land on a unit exponent of 1 + p.
    bool generates = false;
    for (const Ideal& Q : prime_ideals_up_to(K, 200)) {
        if (imod(Q.norm(), p) == 0) continue;
        if (imod(found.front().padic_avatar(Q, p, 2).gamma_exponent, p) != 0) {
            generates = true;
            break;
        }
    }
    if (!generates) throw PreconditionFailed("avatar image fails to generate the principal units");
    return found.front();
}

}  // namespace anticyc::heckechar

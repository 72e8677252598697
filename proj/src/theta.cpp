#include "anticyc/theta.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace anticyc::theta {

namespace {

long thread_count() {
    const char* env = std::getenv("ANTICYC_THREADS");
    if (!env) return 1;
    char* end = nullptr;
    long t = std::strtol(env, &end, 10);
    if (end == env || t < 1) return 1;
    return std::min<long>(t, 64);
}

}  // namespace

bool Nebentypus::is_trivial() const {
    for (const RElt& v : values)
        if (!v.is_zero() && !v.is_one()) return false;
    return true;
}

nlohmann::json QExpansion::to_json() const {
    nlohmann::json j;
    j["field"] = ring->D();
    j["zeta_order"] = ring->M();
    j["weight"] = weight;
    j["level"] = to_long(level);
    j["B"] = B;
    nlohmann::json nv = nlohmann::json::array();
    for (const RElt& v : chi.values) {
        nlohmann::json row = nlohmann::json::array();
        for (const Rat& x : v.coords()) row.push_back(x.get_str());
        nv.push_back(std::move(row));
    }
    j["nebentypus"] = {{"modulus", to_long(chi.modulus)}, {"values", std::move(nv)}};
    nlohmann::json cs = nlohmann::json::array();
    for (long n = 1; n <= B; ++n) {
        nlohmann::json row = nlohmann::json::array();
        for (const Rat& x : c[static_cast<std::size_t>(n)].coords()) row.push_back(x.get_str());
        cs.push_back(std::move(row));
    }
    j["coefficients"] = std::move(cs);
    return j;
}

ModularParams modular_params(const HeckeCharacter& psi) {
    if (psi.type_b() != 0 || psi.type_a() > 0)
        throw InputError("theta series need infinity type (1-k, 0) with k >= 1");
    long k = 1 - psi.type_a();
    Int level = psi.modulus().norm() * psi.field().absD();
    if (level > 1000000) throw ResourceLimit("nebentypus table would exceed the desk scale");
    long L = to_long(level);
    Nebentypus chi{level, {}};
    chi.values.reserve(static_cast<std::size_t>(L));
    for (long r = 0; r < L; ++r) {
        if (igcd(Int(r), level) != 1) {
            chi.values.push_back(psi.values().zero());
            continue;
        }
        RElt v = psi.central_character(Int(r));
        if (arith::kronecker_symbol(Int(psi.field().D()), Int(r)) == -1) v = -v;
        chi.values.push_back(std::move(v));
    }
    return {k, level, std::move(chi)};
}

QExpansion theta_qexp(const HeckeCharacter& psi, long B) {
    if (B < 1) throw InputError("expansion bound must be at least 1");
    ModularParams mp = modular_params(psi);
    auto ring = std::make_shared<const ValueRing>(psi.values());
    for (RElt& v : mp.chi.values) v = ValueRing::coerce(*ring, v);
    QExpansion q{ring,
                 mp.weight,
                 mp.level,
                 std::move(mp.chi),
                 B,
                 std::vector<RElt>(static_cast<std::size_t>(B) + 1, ring->zero())};
    auto by_norm = iqfield::enumerate_ideals(psi.field(), B, psi.modulus());
    std::vector<const std::pair<const long, std::vector<Ideal>>*> tasks;
    tasks.reserve(by_norm.size());
    for (const auto& entry : by_norm) tasks.push_back(&entry);
    std::exception_ptr failure;
    std::mutex failure_mx;
    auto run = [&](std::size_t lo, std::size_t hi) {
        try {
            for (std::size_t i = lo; i < hi; ++i) {
                RElt s = ring->zero();
                for (const Ideal& a : tasks[i]->second) s = s + psi.evaluate(a);
                q.c[static_cast<std::size_t>(tasks[i]->first)] = ValueRing::coerce(*ring, s);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(failure_mx);
            if (!failure) failure = std::current_exception();
        }
    };
    long T = std::min<long>(thread_count(), static_cast<long>(tasks.size()));
    if (T <= 1) {
        run(0, tasks.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t step = (tasks.size() + static_cast<std::size_t>(T) - 1) / static_cast<std::size_t>(T);
        for (long t = 0; t < T; ++t) {
            std::size_t lo = std::min(tasks.size(), static_cast<std::size_t>(t) * step);
            std::size_t hi = std::min(tasks.size(), lo + step);
            if (lo < hi) pool.emplace_back(run, lo, hi);
        }
        for (std::thread& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return q;
}

CheckReport hecke_recursion_check(const QExpansion& q) {
    if (q.B >= 1 && !q.c[1].is_one()) return {false, "c_1 is not 1"};
    for (long m = 2; m * m <= q.B; ++m)
        for (long n = m + 1; m * n <= q.B; ++n) {
            if (std::gcd(m, n) != 1) continue;
            if (!(q.c[static_cast<std::size_t>(m * n)] ==
                  q.c[static_cast<std::size_t>(m)] * q.c[static_cast<std::size_t>(n)]))
                return {false, "multiplicativity fails at (m, n) = (" + std::to_string(m) + ", " +
                                   std::to_string(n) + ")"};
        }
    for (long ell = 2; ell * ell <= q.B; ++ell) {
        if (!is_prime(Int(ell))) continue;
        if (imod(q.level, Int(ell)) == 0) continue;  // eigenvalues at imprimitive levels are not asserted
        RElt tail = q.chi.at(Int(ell)) * Rat(ipow(Int(ell), static_cast<unsigned long>(q.weight - 1)));
        long prev = 1, cur = ell;
        while (cur <= q.B / ell) {
            long next = cur * ell;
            if (!(q.c[static_cast<std::size_t>(next)] ==
                  q.c[static_cast<std::size_t>(cur)] * q.c[static_cast<std::size_t>(ell)] -
                      q.c[static_cast<std::size_t>(prev)] * tail))
                return {false, "prime-power relation fails at l = " + std::to_string(ell) +
                                   ", l^r = " + std::to_string(cur)};
            prev = cur;
            cur = next;
        }
    }
    return {true, "eigenform identities hold up to the bound"};
}

PhiN::PhiN(const HeckeCharacter& psi, long m, const Int& p, long cap)
    : psi_(psi),
      H_(psi.field(), m, cap),
      part_(classfield::p_part(H_.abstract(), p)),
      ring_(part_.group, psi_.values().zero(), psi_.values().one()) {
    if (psi_.type_a() == -1 && psi_.type_b() == 0 &&
        iqfield::splitting_type(psi_.field(), p) == iqfield::Splitting::Split) {
        heckechar::SpadeResult sp = heckechar::condition_spade(psi_, p);
        if (!sp.holds) throw PreconditionFailed("ordinariness fails at " + p.get_str() + ": " + sp.reason);
    }
}

PhiN::Elt PhiN::T(const Int& ell) const {
    if (!is_prime(ell)) throw InputError("Hecke index must be prime");
    Elt out = ring_.zero();
    iqfield::Splitting sp = iqfield::splitting_type(psi_.field(), ell);
    if (sp == iqfield::Splitting::Inert) return out;
    // A degree-one prime above ell divides (m) exactly when ell divides m.
    if (imod(Int(H_.conductor()), ell) == 0) return out;
    auto pr = iqfield::primes_above(psi_.field(), ell);
    std::vector<Ideal> above{pr.first};
    if (sp == iqfield::Splitting::Split) above.push_back(pr.second);
    for (const Ideal& l : above) {
        if (!l.is_coprime_to(psi_.modulus()))
            throw NotCoprime("a prime above " + ell.get_str() + " divides the character modulus");
        ring_.accumulate(out, part_.apply(H_.class_of_ideal(l)), psi_.evaluate(l));
    }
    return out;
}

PhiN::Elt PhiN::diamond(const Int& d) const {
    Int level = psi_.central_modulus() * psi_.field().absD() * H_.conductor();
    if (igcd(d, level) != 1) throw NotCoprime("diamond index shares a factor with the level");
    RElt coeff = psi_.central_character(d);
    if (arith::kronecker_symbol(Int(psi_.field().D()), d) == -1) coeff = -coeff;
    Ideal dd = Ideal::principal(psi_.field(), {d, 0});
    Elt out = ring_.zero();
    ring_.accumulate(out, part_.apply(H_.class_of_ideal(dd)), coeff);
    return out;
}

nlohmann::json StabilizedExpansion::to_json() const {
    nlohmann::json j;
    j["p"] = p.get_str();
    j["precision"] = prec;
    j["weight"] = weight;
    j["level"] = to_long(level);
    j["B"] = B;
    j["alpha"] = alpha.get_str();
    j["beta"] = beta.get_str();
    nlohmann::json cs = nlohmann::json::array();
    for (long n = 1; n <= B; ++n) cs.push_back(c[static_cast<std::size_t>(n)].get_str());
    j["coefficients"] = std::move(cs);
    return j;
}

std::pair<PadicInt, StabilizedExpansion> p_stabilize(const QExpansion& q, const Int& p, int prec) {
    if (prec < 1) throw InputError("positive precision required");
    if (q.B < to_long(p)) throw InputError("bound does not reach the p-th coefficient");
    IQField K(q.ring->D());
    Int root = heckechar::omega_root_at(K, p, prec);
    Int mod = ipow(p, static_cast<unsigned long>(prec));
    std::vector<Int> r(q.c.size(), Int(0));
    for (long n = 1; n <= q.B; ++n)
        r[static_cast<std::size_t>(n)] = q.ring->reduce_padic(q.c[static_cast<std::size_t>(n)], p, prec, root);
    Int cp = r[static_cast<std::size_t>(to_long(p))];
    Int d = imod(q.ring->reduce_padic(q.chi.at(p), p, prec, root) *
                     ipow(p, static_cast<unsigned long>(q.weight - 1)),
                 mod);
    // unit residue roots of X^2 - c_p X + d
    std::vector<Int> unit_roots;
    for (Int x = 1; x < p; ++x)
        if (imod(x * x - cp * x + d, p) == 0) unit_roots.push_back(x);
    if (unit_roots.empty()) throw NotOrdinary("the Hecke polynomial at p has no unit root");
    Int al = unit_roots.front();
    if (imod(2 * al - cp, p) == 0) throw NotOrdinary("the unit root of the Hecke polynomial is a double root");
    for (Int m2 = p; m2 < mod;) {
        m2 *= p;
        Int fr = imod(al * al - cp * al + d, m2);
        Int fp = imod(2 * al - cp, m2);
        al = imod(al - fr * inv_mod(fp, m2), m2);
    }
    Int beta = imod(cp - al, mod);
    StabilizedExpansion st{p, prec, q.weight, q.level, q.B, al, beta, std::vector<Int>(q.c.size(), Int(0))};
    long pl = to_long(p);
    for (long n = 1; n <= q.B; ++n) {
        Int v = r[static_cast<std::size_t>(n)];
        if (n % pl == 0) v -= beta * r[static_cast<std::size_t>(n / pl)];
        st.c[static_cast<std::size_t>(n)] = imod(v, mod);
    }
    return {PadicInt(p, prec, al), std::move(st)};
}

CMFamily::CMFamily(const HeckeCharacter& xi, const Int& p, long b)
    : xi_(xi),
      base_(heckechar::psi0(xi.field(), p)),
      p_(p),
      restrict_(base_.modulus().mul(xi.modulus())) {
    if (b != 0) throw InputError("nonzero wild index is not supported");
    if (!xi_.finite_order()) throw InputError("the family tail character must have finite order");
    if (imod(xi_.modulus().norm(), p_) == 0) throw PreconditionFailed("tail conductor must be prime to p");
}

std::vector<Int> CMFamily::coefficients(long B, long k, int N) const {
    if (B < 1) throw InputError("bound must be at least 1");
    if (k < 1) throw InputError("weight must be at least 1");
    if (N < 1) throw ResourceLimit("precision underflow in the family coefficient");
    const IQField& K = xi_.field();
    Int root = heckechar::omega_root_at(K, p_, N);
    Int mod = ipow(p_, static_cast<unsigned long>(N));
    Int expmod = N >= 2 ? ipow(p_, static_cast<unsigned long>(N - 1)) : Int(1);
    std::vector<Int> out(static_cast<std::size_t>(B) + 1, Int(0));
    for (const auto& [n, ideals] : iqfield::enumerate_ideals(K, B, restrict_)) {
        Int s = 0;
        for (const Ideal& a : ideals) {
            // Generators here may have norm divisible by p (the conjugate of
            // the distinguished prime is allowed); their residues stay units.
            iqfield::QuadInt g = iqfield::principal_generator(a);
            Int xr = xi_.values().reduce_padic(xi_.evaluate_principal(g), p_, N, root);
            Int br = base_.values().reduce_padic(base_.evaluate_principal(g), p_, N, root);
            arith::KappaValue kv = arith::kappa_eval(1, br, p_, N);
            if (kv.teich_power != 1)
                throw PreconditionFailed("the distinguished avatar leaves the principal units");
            Int t = imod(Int(k - 1) * kv.exponent, expmod);
            s += xr * pow_mod(Int(1) + p_, t, mod);
        }
        out[static_cast<std::size_t>(n)] = imod(s, mod);
    }
    return out;
}

PadicInt CMFamily::coefficient(long n, long k, int N) const {
    return PadicInt(p_, N, coefficients(n, k, N)[static_cast<std::size_t>(n)]);
}

PadicInt cm_family_coefficient(const HeckeCharacter& xi, const Int& p, long b, long k, long n, int N) {
    return CMFamily(xi, p, b).coefficient(n, k, N);
}

SpecializationReport specialization_compare(const HeckeCharacter& xi, const Int& p, long k, long B,
                                            int N, long b) {
    CMFamily fam(xi, p, b);
    std::vector<Int> family_side = fam.coefficients(B, k, N);
    HeckeCharacter psi = fam.base().pow(k - 1).mul(xi);
    QExpansion q = theta_qexp(psi, B);
    auto stab = p_stabilize(q, p, N);
    const StabilizedExpansion& st = stab.second;
    Int mod = ipow(p, static_cast<unsigned long>(N));
    int min_ag = N;
    long first = 0;
    for (long n = 1; n <= B; ++n) {
        Int diff = imod(family_side[static_cast<std::size_t>(n)] - st.c[static_cast<std::size_t>(n)], mod);
        int ag = N;
        if (diff != 0) ag = static_cast<int>(std::min<long>(ival(diff, p), N));
        if (ag < min_ag) {
            min_ag = ag;
            first = n;
        }
    }
    SpecializationReport rep;
    rep.pass = min_ag >= N - 1;
    rep.B = B;
    rep.precision = N;
    rep.min_agreement = min_ag;
    rep.first_drop = first;
    rep.detail = rep.pass ? "family specialization matches the stabilized theta series to " +
                                std::to_string(min_ag) + " of " + std::to_string(N) + " digits"
                          : "agreement drops to " + std::to_string(min_ag) + " digits at n = " +
                                std::to_string(first);
    return rep;
}

}  // namespace anticyc::theta

#include "anticyc/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "anticyc/classfield.hpp"
#include "anticyc/euler.hpp"
#include "anticyc/heckechar.hpp"
#include "anticyc/interp.hpp"
#include "anticyc/iqfield.hpp"
#include "anticyc/theta.hpp"

namespace anticyc::acceptance {

using classfield::RayClassGroup;
using classfield::RingClassGroup;
using euler::Curve;
using euler::FormData;
using euler::TameVerifier;
using heckechar::HeckeCharacter;
using iqfield::ClassGroup;
using iqfield::Ideal;
using iqfield::IQField;
using iqfield::QuadInt;
using iqfield::Splitting;
using json = nlohmann::json;

namespace {

struct Bounds {
    long c1_dmin;
    long c2_ray_norm, c2_ring_m;
    long c3_B, c3_mut_B;
    long c4_L, c5_L, c6_L;
    bool c7_all;
    long c8_L;
    long c9_kmax, c9_teich_pmax;
    int c9_units;
    long c11_B;
    int c11_N;
    long c12_kmax, c12_jmax;
};

Bounds bounds(Profile p) {
    if (p == Profile::Full)
        return {-200, 2000, 44, 2000, 120, 200, 200, 200, true, 150, 12, 97, 1000, 500, 10, 12, 12};
    return {-60, 300, 15, 300, 60, 60, 60, 60, false, 50, 8, 37, 100, 120, 8, 8, 8};
}

const Curve kE11{0, -1, 1, -10, -20};
const Curve kE14{1, 0, 1, 4, -6};

// First character of infinity type (a, 0) on the given modulus compatible
// with the units, by odometer over the finite part; optionally nontrivial
// and/or with quadratic central character.
bool central_quadratic(const HeckeCharacter& psi) {
    Int M = psi.central_modulus();
    for (Int n = 2; n < M; ++n) {
        if (igcd(n, M) != 1) continue;
        auto c = psi.central_character(n);
        if (!(c * c).is_one()) return false;
    }
    return true;
}

std::optional<HeckeCharacter> search_char(const IQField& K, const Ideal& f, long type_a,
                                          bool nontrivial, bool quadratic_central) {
    classfield::UnitResidueGroup urg(K, f);
    const auto& inv = urg.abstract().invariants();
    std::vector<Int> e(inv.size(), 0);
    for (;;) {
        bool zero = std::all_of(e.begin(), e.end(), [](const Int& x) { return x == 0; });
        if (!(nontrivial && zero)) {
            try {
                HeckeCharacter psi(K, f, type_a, 0, e);
                if (!quadratic_central || central_quadratic(psi)) return psi;
            } catch (const UnitIncompatible&) {
            }
        }
        std::size_t i = 0;
        while (i < e.size()) {
            e[i] += 1;
            if (e[i] < inv[i]) break;
            e[i] = 0;
            ++i;
        }
        if (i == e.size()) return std::nullopt;
    }
}

HeckeCharacter need_char(std::optional<HeckeCharacter> c, const std::string& what) {
    if (!c) throw PreconditionFailed("no character found: " + what);
    return *c;
}

HeckeCharacter trivial_char(const IQField& K) {
    return HeckeCharacter(K, Ideal::whole_ring(K), 0, 0, {});
}

// --- criterion 1: class numbers against a reduced-form enumeration ---------

long reduced_form_count(long D) {
    long count = 0;
    for (long a = 1; 3 * a * a <= -D; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            if (((b - D) % 2 + 2) % 2 != 0) continue;
            long num = b * b - D;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            ++count;
        }
    return count;
}

bool squarefree(long n) {
    for (const auto& [p, e] : factorize(Int(n)))
        if (e > 1) return false;
    return true;
}

bool fundamental(long D) {
    if (D >= 0) return false;
    long r = ((D % 4) + 4) % 4;
    if (r == 1) return squarefree(-D);
    if (r != 0) return false;
    long m = D / 4;
    long mr = ((m % 4) + 4) % 4;
    return (mr == 2 || mr == 3) && squarefree(-m);
}

void c1(const Bounds& b, unsigned long, CriterionResult& r) {
    const long pins[][2] = {{-7, 1}, {-23, 3}, {-4, 1}};
    for (const auto& pin : pins)
        if (ClassGroup(IQField(pin[0])).h() != pin[1])
            throw PreconditionFailed("pinned class number failed at D = " + std::to_string(pin[0]));
    long checked = 0;
    for (long D = -3; D > b.c1_dmin; --D) {
        if (!fundamental(D)) continue;
        if (ClassGroup(IQField(D)).h() != reduced_form_count(D)) {
            r.witness = "class number mismatch at D = " + std::to_string(D);
            return;
        }
        ++checked;
    }
    r.pass = true;
    r.witness = std::to_string(checked) + " fundamental discriminants vs form enumeration, 3 pins";
    r.detail = json{{"discriminants", checked}};
}

// --- criterion 2: ray/ring class orders -------------------------------------

Int ideal_phi(const IQField& K, const Ideal& n) {
    if (n.is_whole_ring()) return 1;
    Int phi = 1;
    for (const auto& [q, e] : factorize(n.norm())) {
        auto pr = iqfield::primes_above(K, q);
        auto val = [&](const Ideal& P) {
            unsigned long v = 0;
            while (P.pow(v + 1).divides(n)) ++v;
            return v;
        };
        auto loc = [&](const Int& nrm, unsigned long v) {
            return v == 0 ? Int(1) : ipow(nrm, v - 1) * (nrm - 1);
        };
        switch (iqfield::splitting_type(K, q)) {
            case Splitting::Split: {
                unsigned long v1 = val(pr.first), v2 = val(pr.second);
                if (v1 + v2 != e) throw PreconditionFailed("split valuations disagree with the norm");
                phi *= loc(q, v1) * loc(q, v2);
                break;
            }
            case Splitting::Inert: {
                unsigned long v = val(pr.first);
                if (2 * v != e) throw PreconditionFailed("inert valuation disagrees with the norm");
                phi *= loc(q * q, v);
                break;
            }
            case Splitting::Ramified: {
                unsigned long v = val(pr.first);
                if (v != e) throw PreconditionFailed("ramified valuation disagrees with the norm");
                phi *= loc(q, v);
                break;
            }
        }
    }
    return phi;
}

Int unit_image_count(const IQField& K, const Ideal& n) {
    std::set<std::pair<Int, Int>> img;
    for (const QuadInt& u : K.units()) {
        QuadInt red = n.reduce(u);
        img.insert({red.x, red.y});
    }
    return Int(static_cast<long>(img.size()));
}

void c2(const Bounds& b, unsigned long, CriterionResult& r) {
    const long fields[5] = {-4, -7, -8, -11, -23};
    long ray_checked = 0, ring_checked = 0;
    for (long D : fields) {
        IQField K(D);
        Int h(ClassGroup(K).h());
        for (const auto& [nrm, ideals] : iqfield::enumerate_ideals(K, b.c2_ray_norm))
            for (const Ideal& n : ideals) {
                RayClassGroup R(K, n);
                Int phi = ideal_phi(K, n);
                Int img = unit_image_count(K, n);
                if (R.unit_image_order() != img || R.order() * img != h * phi) {
                    r.witness = "exact-sequence identity failed at D = " + std::to_string(D) +
                                ", modulus " + n.str();
                    return;
                }
                ++ray_checked;
            }
        for (long m = 1; m <= b.c2_ring_m; ++m) {
            if (igcd(Int(m), Int(K.absD())) != 1) continue;
            RingClassGroup R(K, m);
            if (R.order() != R.formula_order()) {
                r.witness = "ring-class formula failed at D = " + std::to_string(D) + ", m = " +
                            std::to_string(m);
                return;
            }
            ++ring_checked;
        }
    }
    r.pass = true;
    r.witness = std::to_string(ray_checked) + " ray moduli + " + std::to_string(ring_checked) +
                " ring conductors over 5 fields";
    r.detail = json{{"ray_moduli", ray_checked}, {"ring_conductors", ring_checked}};
}

// --- criterion 3: theta eigenforms and mutation detection --------------------

void c3(const Bounds& b, unsigned long, CriterionResult& r) {
    IQField K4(-4), K7(-7), K11(-11);
    Ideal p5 = iqfield::primes_above(K4, 5).first;
    Ideal p7 = iqfield::primes_above(K7, 7).first;
    Ideal p11 = iqfield::primes_above(K11, 11).first;

    std::vector<std::pair<std::string, HeckeCharacter>> chars;
    chars.emplace_back("Q(i) w1 trivial", trivial_char(K4));
    chars.emplace_back("Q(sqrt-7) w1 trivial", trivial_char(K7));
    chars.emplace_back("Q(sqrt-11) w1 finite", need_char(search_char(K11, p11, 0, true, false), "w1 K11"));
    chars.emplace_back("Q(sqrt-7) w2", need_char(search_char(K7, p7, -1, false, false), "w2 K7"));
    chars.emplace_back("Q(sqrt-11) w2", need_char(search_char(K11, p11, -1, false, false), "w2 K11"));
    chars.emplace_back("Q(i) w3", need_char(search_char(K4, p5, -2, false, false), "w3 K4"));
    chars.emplace_back("Q(sqrt-7) w4", need_char(search_char(K7, p7, -3, false, false), "w4 K7"));

    for (const auto& [name, psi] : chars) {
        auto q = theta::theta_qexp(psi, b.c3_B);
        auto chk = theta::hecke_recursion_check(q);
        if (!chk.pass) {
            r.witness = "eigenform identities failed for " + name + ": " + chk.detail;
            return;
        }
    }

    // Mutation detection.  The recursion identities constrain every index
    // except primes above B/2 (no relation reaches them at this truncation);
    // those are caught by comparing against a rebuilt expansion.
    const HeckeCharacter& probe = chars[3].second;
    auto base = theta::theta_qexp(probe, b.c3_mut_B);
    auto rebuilt = theta::theta_qexp(probe, b.c3_mut_B);
    long by_recursion = 0, by_rebuild = 0;
    for (long n = 1; n <= b.c3_mut_B; ++n) {
        auto mut = base;
        mut.c[static_cast<std::size_t>(n)] =
            mut.c[static_cast<std::size_t>(n)] + mut.ring->one();
        bool recursion_caught = !theta::hecke_recursion_check(mut).pass;
        bool rebuild_caught = !(mut.c[static_cast<std::size_t>(n)] ==
                                rebuilt.c[static_cast<std::size_t>(n)]);
        if (recursion_caught)
            ++by_recursion;
        else if (rebuild_caught)
            ++by_rebuild;
        else {
            r.witness = "mutation missed at coefficient " + std::to_string(n);
            return;
        }
        bool large_prime = is_prime(Int(n)) && 2 * n > b.c3_mut_B;
        if (!recursion_caught && !large_prime) {
            r.witness = "recursion skipped a constrained coefficient: " + std::to_string(n);
            return;
        }
    }
    // Sampled single mutations at the full truncation, all on constrained indices.
    auto big = theta::theta_qexp(probe, b.c3_B);
    const long samples[] = {1, 2, 3, 9, 25, 64, b.c3_B, b.c3_B - 20, 6, 30};
    long sampled = 0;
    for (long n : samples) {
        if (n < 1 || n > b.c3_B) continue;
        if (is_prime(Int(n)) && 2 * n > b.c3_B) continue;
        auto mut = big;
        mut.c[static_cast<std::size_t>(n)] =
            mut.c[static_cast<std::size_t>(n)] + mut.ring->one();
        if (theta::hecke_recursion_check(mut).pass) {
            r.witness = "full-size mutation missed at coefficient " + std::to_string(n);
            return;
        }
        ++sampled;
    }
    r.pass = true;
    std::ostringstream os;
    os << chars.size() << " characters at B = " << b.c3_B << "; exhaustive mutation at B = "
       << b.c3_mut_B << " (" << by_recursion << " by recursion, " << by_rebuild
       << " large primes by rebuild), " << sampled << " full-size samples";
    r.witness = os.str();
    r.detail = json{{"characters", chars.size()},
                    {"mutations_by_recursion", by_recursion},
                    {"mutations_by_rebuild", by_rebuild}};
}

// --- criterion 4: Hecke-homomorphism augmentation ----------------------------

void c4(const Bounds& b, unsigned long, CriterionResult& r) {
    struct Cfg {
        long D;
        long cond_p;
        long m;
        long p;
    };
    const Cfg cfgs[] = {{-7, 7, 11, 5}, {-4, 5, 41, 5}};
    long checked = 0;
    for (const Cfg& cfg : cfgs) {
        IQField K(cfg.D);
        Ideal f = iqfield::primes_above(K, cfg.cond_p).first;
        HeckeCharacter psi =
            need_char(search_char(K, f, -1, false, false), "weight-2 character for the Hecke map");
        theta::PhiN phi(psi, cfg.m, Int(cfg.p));
        auto q = theta::theta_qexp(psi, b.c4_L);
        Int excl = Int(cfg.m) * f.norm();
        for (long ell = 2; ell <= b.c4_L; ++ell) {
            if (!is_prime(Int(ell)) || igcd(Int(ell), excl) != 1) continue;
            auto aug = phi.ring().augmentation(phi.T(Int(ell)));
            if (!(aug == q.c[static_cast<std::size_t>(ell)])) {
                r.witness = "augmentation mismatch at ell = " + std::to_string(ell) + " over D = " +
                            std::to_string(cfg.D);
                return;
            }
            ++checked;
        }
    }
    r.pass = true;
    r.witness = std::to_string(checked) + " admissible primes over 2 configurations";
    r.detail = json{{"primes", checked}};
}

// --- criterion 5: tame norm-relation congruences ------------------------------

void c5(const Bounds& b, unsigned long, CriterionResult& r) {
    struct Cfg {
        const char* name;
        long D;
        long cond_p;
        const Curve* E;
        long level;
        long m;
        long p;
        Int nontrivial_layer;  // expected ring-class p-part order, 0 = no claim
    };
    const Cfg cfgs[] = {
        {"D=-7, m=1, p=5, level 11", -7, 7, &kE11, 11, 1, 5, Int(0)},
        {"D=-4, m=41, p=5, level 11", -4, 3, &kE11, 11, 41, 5, Int(5)},
        {"D=-11, m=1, p=13, level 14", -11, 11, &kE14, 14, 1, 13, Int(0)},
    };
    long total = 0;
    bool saw_nontrivial_layer = false;
    json per_config = json::array();
    for (const Cfg& cfg : cfgs) {
        IQField K(cfg.D);
        Ideal f = cfg.cond_p == 3 ? Ideal::principal(K, QuadInt{Int(3), Int(0)})
                                  : iqfield::primes_above(K, cfg.cond_p).first;
        HeckeCharacter psi = need_char(search_char(K, f, -1, false, true), "self-dual pair");
        TameVerifier verifier(FormData::from_curve(cfg.level, *cfg.E), psi, psi, cfg.m, Int(cfg.p));
        if (cfg.nontrivial_layer != 0) {
            if (verifier.projection().pring.group.order() != cfg.nontrivial_layer)
                throw PreconditionFailed("expected nontrivial ring-class layer missing");
            saw_nontrivial_layer = true;
        }
        auto reports = verifier.sweep(Int(b.c5_L));
        long minimum = b.c5_L >= 200 ? 15 : 4;
        if (static_cast<long>(reports.size()) < minimum)
            throw PreconditionFailed("tame sweep covered too few primes");
        for (const auto& rep : reports)
            if (!rep.pass) {
                r.witness = std::string("congruence failed at ell = ") + rep.ell.get_str() + " (" +
                            cfg.name + ")";
                return;
            }
        total += static_cast<long>(reports.size());
        per_config.push_back(json{{"config", cfg.name}, {"primes", reports.size()}});
    }
    if (!saw_nontrivial_layer) throw PreconditionFailed("no configuration had a nontrivial layer");
    r.pass = true;
    r.witness = std::to_string(total) + " split primes across 3 configurations, one with a Z/5 layer";
    r.detail = per_config;
}

// --- criterion 6: inert congruence -------------------------------------------

void c6(const Bounds& b, unsigned long, CriterionResult& r) {
    IQField K(-7);
    Ideal f = iqfield::primes_above(K, 7).first;
    HeckeCharacter psi = need_char(search_char(K, f, -1, false, true), "self-dual pair");
    FormData fd = FormData::from_curve(11, kE11);
    long checked = 0;
    for (long ell = 2; ell <= b.c6_L; ++ell) {
        if (!is_prime(Int(ell))) continue;
        if (iqfield::splitting_type(K, Int(ell)) != Splitting::Inert) continue;
        if (igcd(Int(ell), Int(11 * 7)) != 1) continue;
        auto rep = euler::inert_check(fd, psi, psi, Int(ell));
        if (!rep.pass) {
            r.witness = "inert identity failed at ell = " + std::to_string(ell);
            return;
        }
        ++checked;
    }
    r.pass = checked >= (b.c6_L >= 200 ? 15 : 5);
    r.witness = std::to_string(checked) + " inert primes, symbolic + twist + numeric";
    r.detail = json{{"primes", checked}};
}

// --- criterion 7: norm-compatibility diagram ----------------------------------

void c7(const Bounds& b, unsigned long, CriterionResult& r) {
    struct Cfg {
        long D, m, ell, p;
    };
    std::vector<Cfg> cfgs = {{-4, 41, 13, 5}, {-7, 11, 2, 5}};
    if (b.c7_all) {
        cfgs.push_back({-4, 41, 17, 5});
        cfgs.push_back({-7, 11, 23, 5});
        cfgs.push_back({-11, 3, 5, 7});
    }
    json rows = json::array();
    for (const Cfg& cfg : cfgs) {
        IQField K(cfg.D);
        auto pi = classfield::pi_delta(K, cfg.m * cfg.ell, Int(cfg.p));
        Int base_order = pi.dec.pf.group.order() * pi.dec.pfb.group.order();
        if (base_order > 200) throw PreconditionFailed("configured base groups exceed order 200");
        std::size_t pairs = classfield::keydiagram_check(K, cfg.m, cfg.ell, Int(cfg.p));
        rows.push_back(json{{"D", cfg.D},
                            {"m", cfg.m},
                            {"ell", cfg.ell},
                            {"p", cfg.p},
                            {"pairs", pairs},
                            {"base_order", to_long(base_order)}});
    }
    r.pass = true;
    r.witness = std::to_string(cfgs.size()) + " (m, ell) configurations, exhaustive on basis pairs";
    r.detail = rows;
}

// --- criterion 8: projection kernel and Frobenius ------------------------------

void c8(const Bounds& b, unsigned long, CriterionResult& r) {
    struct Cfg {
        long D, m, p;
    };
    const Cfg cfgs[] = {{-4, 41, 5}, {-7, 11, 5}};
    long frob_checked = 0;
    for (const Cfg& cfg : cfgs) {
        IQField K(cfg.D);
        auto pi = classfield::pi_delta(K, cfg.m, Int(cfg.p));
        using PairSet = std::set<std::pair<arith::Vec, arith::Vec>>;
        PairSet kernel;
        for (const auto& g1 : pi.dec.pf.group.elements())
            for (const auto& g2 : pi.dec.pfb.group.elements())
                if (pi.pring.group.is_id(pi.apply(g1, g2))) kernel.insert({g1, g2});
        PairSet diagonal;
        for (long x = 1; x < cfg.m; ++x) {
            if (igcd(Int(x), Int(cfg.m)) != 1) continue;
            QuadInt q{Int(x), Int(0)};
            diagonal.insert({pi.dec.pf.apply(pi.dec.H_frak.class_of_residue(q)),
                             pi.dec.pfb.apply(pi.dec.H_frak_bar.class_of_residue(q))});
        }
        if (kernel != diagonal) {
            r.witness = "projection kernel differs from the rational diagonal at D = " +
                        std::to_string(cfg.D);
            return;
        }
        for (long ell = 2; ell <= b.c8_L; ++ell) {
            if (!is_prime(Int(ell))) continue;
            if (igcd(Int(ell), Int(cfg.m) * cfg.p * K.absD()) != 1) continue;
            if (iqfield::splitting_type(K, Int(ell)) != Splitting::Split) continue;
            Ideal l = iqfield::primes_above(K, Int(ell)).first;
            arith::Vec lhs = pi.apply(pi.dec.pf.apply(pi.dec.H_frak.class_of_ideal(l)),
                                      pi.dec.pfb.apply(pi.dec.H_frak_bar.class_of_ideal(l)));
            arith::Vec mid = pi.frobenius(Int(ell));
            arith::Vec rhs = pi.pring.apply(pi.ring.class_of_ideal(l));
            if (lhs != mid || mid != rhs) {
                r.witness = "Frobenius disagreement at ell = " + std::to_string(ell);
                return;
            }
            ++frob_checked;
        }
    }
    r.pass = true;
    r.witness = "kernel = rational diagonal (2 configurations); " + std::to_string(frob_checked) +
                " Frobenius classes against the ideal-class log";
    r.detail = json{{"frobenius_primes", frob_checked}};
}

// --- criterion 9: p-adic identities --------------------------------------------

void c9(const Bounds& b, unsigned long seed, CriterionResult& r) {
    long weight_pairs = 0;
    for (long p : {5L, 13L})
        for (long k1 = 1; k1 <= b.c9_kmax; ++k1)
            for (long k2 = (k1 % 2) ? 1 : 2; k2 <= b.c9_kmax; k2 += 2) {
                auto rep = interp::weight_substitution_check(Int(p), 0, k1, k2, 20);
                if (!rep.pass) {
                    r.witness = "weight substitution failed at (" + std::to_string(k1) + ", " +
                                std::to_string(k2) + "), p = " + std::to_string(p);
                    return;
                }
                ++weight_pairs;
            }

    long teich_values = 0;
    for (long p = 3; p <= b.c9_teich_pmax; ++p) {
        if (!is_prime(Int(p))) continue;
        Int mod = ipow(Int(p), 8);
        for (long a = 1; a < p; ++a) {
            Int t = arith::teichmuller(Int(a), Int(p), 8);
            if (imod(t, Int(p)) != a || pow_mod(t, Int(p - 1), mod) != 1) {
                r.witness = "Teichmueller failure at p = " + std::to_string(p) + ", a = " +
                            std::to_string(a);
                return;
            }
            ++teich_values;
        }
    }

    std::mt19937_64 rng(seed);
    const Int p5(5);
    const unsigned long box = 9765625;  // 5^10
    for (int i = 0; i < b.c9_units; ++i) {
        Int u = 1 + p5 * Int(static_cast<long>(rng() % box));
        arith::PadicInt U(p5, 12, u);
        if (!(arith::padic_root(U * U, 2) == U)) {
            r.witness = "square-root round-trip failed on unit " + u.get_str();
            return;
        }
    }

    r.pass = true;
    r.witness = std::to_string(weight_pairs) + " weight pairs at N = 20; " +
                std::to_string(teich_values) + " Teichmueller values; " + std::to_string(b.c9_units) +
                " square-root round-trips";
    r.detail = json{{"weight_pairs", weight_pairs},
                    {"teichmuller_values", teich_values},
                    {"roundtrips", b.c9_units}};
}

// --- criterion 10: interpolation factors ----------------------------------------

void c10(const Bounds&, unsigned long, CriterionResult& r) {
    if (!(interp::gamma_C(1) == interp::PiPowerValue{Rat(1), -1}))
        throw PreconditionFailed("Gamma_C(1) != pi^{-1}");
    const long triples[][3] = {{2, 1, 1}, {4, 1, 1}, {4, 2, 2}, {4, 1, 3}, {6, 1, 1},
                               {6, 2, 2}, {6, 1, 3}, {6, 3, 3}, {6, 2, 4}, {8, 3, 3}};
    for (const auto& t : triples)
        if (!(interp::gamma_triple(t[0], t[1], t[2]) ==
              interp::gamma_triple_split_form(t[0], t[1], t[2]))) {
            r.witness = "Gamma parameterizations disagree at (" + std::to_string(t[0]) + ", " +
                        std::to_string(t[1]) + ", " + std::to_string(t[2]) + ")";
            return;
        }
    auto rep = interp::triple_Ep_factorization_check();
    if (!rep.pass) {
        r.witness = "factorization check failed: " + rep.detail;
        return;
    }
    r.pass = true;
    r.witness = "Gamma_C(1), 10 weight triples, two-square factorization with mutation control";
    r.detail = rep.to_json();
}

// --- criterion 11: family specialization ------------------------------------------

void c11(const Bounds& b, unsigned long, CriterionResult& r) {
    IQField K(-4);
    HeckeCharacter xi = trivial_char(K);
    json rows = json::array();
    for (long k : {2L, 3L, 4L}) {
        auto rep = theta::specialization_compare(xi, Int(5), k, b.c11_B, b.c11_N);
        rows.push_back(json{{"k", k},
                            {"min_agreement", rep.min_agreement},
                            {"precision", rep.precision},
                            {"first_drop", rep.first_drop}});
        if (!rep.pass) {
            r.witness = "specialization mismatch at k = " + std::to_string(k) + ": " + rep.detail;
            r.detail = rows;
            return;
        }
    }
    r.pass = true;
    std::ostringstream os;
    os << "weights 2,3,4 at B = " << b.c11_B << " mod 5^" << b.c11_N << "; agreement reported per weight";
    r.witness = os.str();
    r.detail = rows;
}

// --- criterion 12: selector and sign tables -----------------------------------------

void c12(const Bounds& b, unsigned long, CriterionResult& r) {
    auto pinned = euler::root_number(1, 2, 2);
    if (pinned.to_json() != json{{"eps_fK", 1}, {"eps_fchi", -1}, {"quadrant", "4th"}})
        throw PreconditionFailed("pinned sign-table row failed");
    long rows = 0;
    std::set<std::string> quadrants;
    for (long k = 2; k <= b.c12_kmax; k += 2)
        for (long j = 0; j <= b.c12_jmax; ++j)
            for (long nu = 0; nu <= 2; ++nu) {
                auto rn = euler::root_number(nu, j, k);
                bool high = j >= k / 2;
                bool ok = (std::abs(rn.eps_fK) == 1) && (std::abs(rn.eps_fchi) == 1) &&
                          (rn.eps_fK == euler::root_number(nu, 0, k).eps_fK) &&
                          (rn.eps_fK == -euler::root_number(nu + 1, j, k).eps_fK) &&
                          ((rn.eps_fchi == rn.eps_fK) == !high) &&
                          (euler::root_number(1, 0, k).eps_fK == 1);
                auto sel = euler::selmer_selector(j, k);
                bool sel_ok =
                    (sel.condition == (high ? euler::SelmerCondition::RelaxedStrict
                                            : euler::SelmerCondition::OrdinaryOrdinary)) &&
                    sel.ht_p_plus == Int(-j - k / 2) && sel.ht_p_minus == Int(-j - 1 - k / 2) &&
                    sel.ht_pbar_plus == Int(j - k / 2) && sel.ht_pbar_minus == Int(j - 1 + k / 2);
                if (!ok || !sel_ok) {
                    r.witness = "table mismatch at (nu, j, k) = (" + std::to_string(nu) + ", " +
                                std::to_string(j) + ", " + std::to_string(k) + ")";
                    return;
                }
                quadrants.insert(rn.quadrant);
                ++rows;
            }
    if (quadrants.size() != 4) {
        r.witness = "grid did not reach all four quadrants";
        return;
    }
    r.pass = true;
    r.witness = std::to_string(rows) + " grid rows, all four quadrants, pinned example";
    r.detail = json{{"rows", rows}};
}

struct Entry {
    const char* name;
    double budget;
    void (*fn)(const Bounds&, unsigned long, CriterionResult&);
};

const Entry kMatrix[12] = {
    {"class-groups", 1.0, c1},
    {"ray-ring-class-orders", 60.0, c2},
    {"theta-eigenforms", 30.0, c3},
    {"hecke-hom-augmentation", 0.0, c4},
    {"tame-congruence", 120.0, c5},
    {"inert-congruence", 0.0, c6},
    {"norm-compatibility-diagram", 0.0, c7},
    {"projection-kernel-frobenius", 0.0, c8},
    {"padic-identities", 0.0, c9},
    {"interpolation-factors", 0.0, c10},
    {"family-specialization", 60.0, c11},
    {"selector-sign-tables", 0.0, c12},
};

}  // namespace

json CriterionResult::to_json() const {
    return json{{"index", index},         {"name", name},       {"pass", pass},
                {"within_budget", within_budget}, {"seconds", seconds}, {"budget", budget},
                {"witness", witness},     {"detail", detail}};
}

CriterionResult run_criterion(int index, Profile profile, unsigned long seed) {
    if (index < 1 || index > 12) throw InputError("criterion index must be 1..12");
    const Entry& e = kMatrix[index - 1];
    CriterionResult r;
    r.index = index;
    r.name = e.name;
    r.budget = e.budget;
    auto t0 = std::chrono::steady_clock::now();
    try {
        e.fn(bounds(profile), seed, r);
    } catch (const std::exception& ex) {
        r.pass = false;
        r.witness = std::string("error: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.within_budget = r.budget == 0.0 || r.seconds < r.budget;
    r.pass = r.pass && r.within_budget;
    return r;
}

std::vector<CriterionResult> run_all(Profile profile, unsigned long seed) {
    std::vector<CriterionResult> out;
    for (int i = 1; i <= 12; ++i) out.push_back(run_criterion(i, profile, seed));
    return out;
}

std::vector<std::string> criterion_names() {
    std::vector<std::string> names;
    for (const Entry& e : kMatrix) names.emplace_back(e.name);
    return names;
}

}  // namespace anticyc::acceptance

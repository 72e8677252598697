#include "anticyc/iqfield.hpp"

#include <algorithm>
#include <sstream>

namespace anticyc::iqfield {

namespace {

bool is_fundamental(long D) {
    if (D >= 0) return false;
    long r = ((D % 4) + 4) % 4;
    if (r == 1) {
        // squarefree
        long n = -D;
        for (long q = 2; q * q <= n; ++q)
            if (n % (q * q) == 0) return false;
        return true;
    }
    if (r != 0) return false;
    long m = D / 4;  // must be 2 or 3 mod 4 and squarefree
    long mr = ((m % 4) + 4) % 4;
    if (mr != 2 && mr != 3) return false;
    long n = -m;
    for (long q = 2; q * q <= n; ++q)
        if (n % (q * q) == 0) return false;
    return true;
}

}  // namespace

IQField::IQField(long D) : D_(D) {
    if (!is_fundamental(D)) throw InputError("not a fundamental imaginary quadratic discriminant: " + std::to_string(D));
    if (D % 4 == 0) {
        s_ = 0;
        t_ = D / 4;
    } else {
        s_ = 1;
        t_ = (D - 1) / 4;
    }
    wK_ = (D == -3) ? 6 : (D == -4) ? 4 : 2;
    // Powers of a generating unit: i for D=-4, omega itself for D=-3.
    units_ = {{1, 0}, {-1, 0}};
    if (D == -4) {
        units_.push_back({0, 1});
        units_.push_back({0, -1});
    } else if (D == -3) {
        units_ = {{1, 0}};
        QuadInt u{0, 1};  // omega, a primitive 6th root of unity
        QuadInt cur = u;
        for (int i = 1; i < 6; ++i) {
            units_.push_back(cur);
            cur = mul(cur, u);
        }
    }
}

QuadInt IQField::mul(const QuadInt& a, const QuadInt& b) const {
    // (x1 + y1 w)(x2 + y2 w) with w^2 = s w + t
    return {a.x * b.x + t_ * a.y * b.y, a.x * b.y + a.y * b.x + s_ * a.y * b.y};
}

QuadInt IQField::pow(const QuadInt& a, unsigned long e) const {
    QuadInt r{1, 0}, base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

Splitting splitting_type(const IQField& K, const Int& ell) {
    int k = arith::kronecker_symbol(Int(K.D()), ell);
    if (k == 0) return Splitting::Ramified;
    return k == 1 ? Splitting::Split : Splitting::Inert;
}

Ideal Ideal::from_hnf(const IQField& K, const Int& a, const Int& b, const Int& c) {
    if (a <= 0 || c <= 0) throw InputError("ideal HNF needs a, c > 0");
    if (a % c != 0 || b % c != 0) throw InputError("ideal HNF needs c | a and c | b");
    if (b < 0 || b >= a) throw InputError("ideal HNF needs 0 <= b < a");
    Int nb = b * b + Int(K.s()) * b * c - Int(K.t()) * c * c;  // N(b + c omega)
    if (nb % (a * c) != 0) throw InputError("lattice [" + a.get_str() + ", " + b.get_str() + "+" + c.get_str() + "w] is not an ideal");
    return Ideal(K, a, b, c);
}

Ideal Ideal::whole_ring(const IQField& K) { return Ideal(K, 1, 0, 1); }

Ideal Ideal::principal(const IQField& K, const QuadInt& g) {
    if (g.x == 0 && g.y == 0) throw InputError("zero ideal");
    return from_generators(K, {g});
}

Ideal Ideal::from_generators(const IQField& K, const std::vector<QuadInt>& gens) {
    // Column-HNF of the lattice spanned by gens and omega*gens.
    std::vector<QuadInt> vecs;
    for (const auto& g : gens) {
        vecs.push_back(g);
        vecs.push_back(K.mul(g, QuadInt{0, 1}));
    }
    Int a = 0, bx = 0, by = 0;
    for (const auto& v : vecs) {
        if (v.y == 0) {
            a = igcd(a, v.x);
            continue;
        }
        if (by == 0) {
            bx = v.x;
            by = v.y;
            continue;
        }
        Int u, w;
        Int g = xgcd(by, v.y, u, w);
        Int nbx = u * bx + w * v.x;
        a = igcd(a, (by / g) * v.x - (v.y / g) * bx);
        bx = nbx;
        by = g;
    }
    if (by < 0) {
        by = -by;
        bx = -bx;
    }
    a = abs(a);
    if (a == 0 || by == 0) throw InputError("generators do not span a full-rank lattice");
    return from_hnf(K, a, imod(bx, a), by);
}

Ideal Ideal::mul(const Ideal& other) const {
    if (!(K_ == other.K_)) throw InputError("ideal product across distinct fields");
    QuadInt g1{a_, 0}, g2{b_, c_};
    QuadInt h1{other.a_, 0}, h2{other.b_, other.c_};
    return from_generators(K_, {K_.mul(g1, h1), K_.mul(g1, h2), K_.mul(g2, h1), K_.mul(g2, h2)});
}

Ideal Ideal::pow(unsigned long e) const {
    Ideal r = whole_ring(K_);
    Ideal base = *this;
    while (e) {
        if (e & 1) r = r.mul(base);
        if (e >>= 1) base = base.mul(base);
    }
    return r;
}

Ideal Ideal::conjugate() const {
    QuadInt cg = K_.conj(QuadInt{b_, c_});
    return from_generators(K_, {QuadInt{a_, 0}, cg});
}

QuadInt Ideal::reduce(const QuadInt& q) const {
    Int y = imod(q.y, c_);
    Int k = (q.y - y) / c_;
    Int x = imod(q.x - k * b_, a_);
    return {x, y};
}

bool Ideal::contains(const QuadInt& q) const {
    QuadInt r = reduce(q);
    return r.x == 0 && r.y == 0;
}

bool Ideal::is_coprime_to(const Ideal& other) const {
    std::vector<QuadInt> gens = {{a_, 0}, {b_, c_}, {other.a_, 0}, {other.b_, other.c_}};
    return Ideal::from_generators(K_, gens).is_whole_ring();
}

bool Ideal::divides(const Ideal& other) const {
    return contains(QuadInt{other.a_, 0}) && contains(QuadInt{other.b_, other.c_});
}

bool Ideal::operator<(const Ideal& o) const {
    Int n = norm(), m = o.norm();
    if (n != m) return n < m;
    if (a_ != o.a_) return a_ < o.a_;
    return b_ < o.b_;
}

std::string Ideal::str() const {
    std::ostringstream os;
    os << "[" << a_.get_str() << ", " << b_.get_str() << " + " << c_.get_str() << "w]";
    return os.str();
}

std::pair<Ideal, Ideal> primes_above(const IQField& K, const Int& ell) {
    if (!is_prime(ell)) throw InputError("primes_above expects a prime");
    Splitting sp = splitting_type(K, ell);
    if (sp == Splitting::Inert) {
        Ideal P = Ideal::from_hnf(K, ell, 0, ell);
        return {P, P};
    }
    // omega = r mod P for a root r of x^2 - s x - t mod ell; P = [ell, -r + omega].
    std::vector<Int> roots;
    for (Int r = 0; r < ell; ++r) {
        if (imod(r * r - Int(K.s()) * r - Int(K.t()), ell) == 0) roots.push_back(r);
    }
    if (roots.empty()) throw PreconditionFailed("splitting type disagrees with root count");
    std::vector<Ideal> ps;
    for (const Int& r : roots) ps.push_back(Ideal::from_hnf(K, ell, imod(-r, ell), 1));
    if (sp == Splitting::Ramified) return {ps[0], ps[0]};
    if (ps.size() != 2) throw PreconditionFailed("split prime without two roots");
    if (ps[1] < ps[0]) std::swap(ps[0], ps[1]);
    return {ps[0], ps[1]};
}

std::map<long, std::vector<Ideal>> enumerate_ideals(const IQField& K, long B, const std::optional<Ideal>& coprime_to) {
    if (B < 1) throw InputError("enumeration bound must be >= 1");
    std::map<long, std::vector<Ideal>> out;
    for (long n = 1; n <= B; ++n) out[n] = {};
    out[1].push_back(Ideal::whole_ring(K));

    // Per rational prime ell <= B, the list of prime-power ideals of norm
    // ell^e by exponent pattern, then combine multiplicatively over n.
    for (long n = 2; n <= B; ++n) {
        auto fac = factorize(Int(n));
        std::vector<Ideal> parts = {Ideal::whole_ring(K)};
        for (const auto& [p, e] : fac) {
            Splitting sp = splitting_type(K, p);
            std::vector<Ideal> local;  // ideals of norm p^e
            auto [P, Q] = primes_above(K, p);
            if (sp == Splitting::Split) {
                for (unsigned long i = 0; i <= e; ++i) local.push_back(P.pow(i).mul(Q.pow(e - i)));
            } else if (sp == Splitting::Ramified) {
                local.push_back(P.pow(e));
            } else {
                if (e % 2 == 0) local.push_back(P.pow(e / 2));
            }
            if (coprime_to) {
                std::vector<Ideal> kept;
                for (auto& I : local)
                    if (I.is_coprime_to(*coprime_to)) kept.push_back(I);
                local = std::move(kept);
            }
            if (local.empty()) {
                parts.clear();
                break;
            }
            std::vector<Ideal> next;
            for (const auto& A : parts)
                for (const auto& L : local) next.push_back(A.mul(L));
            parts = std::move(next);
        }
        for (auto& I : parts) {
            if (I.norm() != n) throw PreconditionFailed("norm bookkeeping failed in enumeration");
            out[n].push_back(I);
        }
        std::sort(out[n].begin(), out[n].end());
    }
    return out;
}

QuadInt principal_generator(const Ideal& I) {
    const IQField& K = I.field();
    Int n = I.norm();
    // N(x + y omega) = (2x + s y)^2/4 + |D| y^2 / 4; search the finite box.
    Int absD = Int(K.absD());
    std::vector<QuadInt> hits;
    Int ymax;
    mpz_sqrt(ymax.get_mpz_t(), Int(4 * n / absD).get_mpz_t());
    ymax += 1;
    for (Int y = -ymax; y <= ymax; ++y) {
        // (2x + s y)^2 = 4n - |D| y^2
        Int rhs = 4 * n - absD * y * y;
        if (rhs < 0) continue;
        Int u;
        mpz_sqrt(u.get_mpz_t(), rhs.get_mpz_t());
        if (u * u != rhs) continue;
        for (Int sgn : {Int(1), Int(-1)}) {
            Int num = sgn * u - Int(K.s()) * y;
            if (num % 2 != 0) continue;
            QuadInt cand{num / 2, y};
            if (K.norm(cand) != n) continue;
            if (!I.contains(cand)) continue;
            if (std::find(hits.begin(), hits.end(), cand) == hits.end()) hits.push_back(cand);
            if (u == 0) break;
        }
    }
    if (hits.empty()) throw NotPrincipal("ideal " + I.str() + " has no generator of norm " + n.get_str());
    // Unit-normalize: the associate with lexicographically greatest (x, y).
    QuadInt best = hits[0];
    bool first = true;
    for (const auto& h : hits) {
        for (const auto& u : K.units()) {
            QuadInt cand = K.mul(h, u);
            if (first || cand.x > best.x || (cand.x == best.x && cand.y > best.y)) {
                best = cand;
                first = false;
            }
        }
    }
    return best;
}

bool QForm::operator<(const QForm& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
}

QForm ClassGroup::reduce(const IQField& K, QForm f) {
    Int D = Int(K.D());
    if (f.b * f.b - 4 * f.a * f.c != D) throw InputError("form discriminant mismatch");
    if (f.a <= 0) throw InputError("positive definite forms only");
    for (;;) {
        // normalize: -a < b <= a
        Int b = f.a - imod(f.a - f.b, 2 * f.a);  // in (-a, a]
        f.c = f.c + ((b * b - f.b * f.b) / (4 * f.a));
        f.b = b;
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        if (f.a == f.c && f.b < 0) f.b = -f.b;
        break;
    }
    return f;
}

ClassGroup::ClassGroup(const IQField& K) : K_(K), group_(arith::FiniteAbelianGroup::trivial()) {
    Int D = Int(K.D());
    // Enumerate reduced forms: |b| <= a <= c, b = D mod 2.
    Int amax;
    mpz_sqrt(amax.get_mpz_t(), Int(-D / 3).get_mpz_t());
    for (Int a = 1; a <= amax; ++a) {
        for (Int b = -a + 1; b <= a; ++b) {
            if (imod(b - D, 2) != 0) continue;
            Int num = b * b - D;
            if (num % (4 * a) != 0) continue;
            Int c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            forms_.push_back({a, b, c});
        }
    }
    std::sort(forms_.begin(), forms_.end());

    auto [grp, coords] = arith::abelian_structure(
        forms_.size(),
        [this](std::size_t i, std::size_t j) { return index_of(compose(forms_[i], forms_[j])); },
        index_of(principal_form()));
    group_ = grp;
    coords_ = coords;
}

QForm ClassGroup::principal_form() const {
    Int D = Int(K_.D());
    if (imod(D, 2) == 0) return {1, 0, -D / 4};
    return {1, 1, (1 - D) / 4};
}

std::size_t ClassGroup::index_of(const QForm& f) const {
    auto it = std::lower_bound(forms_.begin(), forms_.end(), f);
    if (it == forms_.end() || !(*it == f)) throw InputError("form is not reduced for this discriminant");
    return static_cast<std::size_t>(it - forms_.begin());
}

Ideal ClassGroup::ideal_of_form(const QForm& f) const {
    // (a, b, c) <-> Z a + Z ((-b + sqrt(D))/2) = [a, (-b - s)/2 + omega].
    Int bcoef = (-f.b - Int(K_.s())) / 2;
    return Ideal::from_hnf(K_, f.a, imod(bcoef, f.a), 1);
}

QForm ClassGroup::form_of_ideal(const Ideal& I) const {
    Int ap = I.a() / I.c();
    Int bp = I.b() / I.c();
    Int s = Int(K_.s());
    Int nb = bp * bp + s * bp - Int(K_.t());  // N(bp + omega)
    QForm f{ap, -(2 * bp + s), nb / ap};
    return reduce(K_, f);
}

QForm ClassGroup::compose(const QForm& f, const QForm& g) const {
    Ideal prod = ideal_of_form(f).mul(ideal_of_form(g));
    return form_of_ideal(prod);
}

arith::FiniteAbelianGroup::Elt ClassGroup::class_coords(const QForm& f) const {
    return coords_[index_of(f)];
}

}  // namespace anticyc::iqfield

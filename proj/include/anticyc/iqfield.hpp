#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anticyc/arith.hpp"
#include "anticyc/bigint.hpp"

namespace anticyc::iqfield {

// x + y omega with omega = sqrt(D)/2 (D = 0 mod 4) or (1+sqrt(D))/2 (D = 1 mod 4).
struct QuadInt {
    Int x, y;
    bool operator==(const QuadInt& o) const { return x == o.x && y == o.y; }
};

class IQField {
public:
    explicit IQField(long D);

    long D() const { return D_; }
    long absD() const { return -D_; }
    long s() const { return s_; }  // omega^2 = s omega + t
    long t() const { return t_; }
    int unit_count() const { return wK_; }
    const std::vector<QuadInt>& units() const { return units_; }

    QuadInt add(const QuadInt& a, const QuadInt& b) const { return {a.x + b.x, a.y + b.y}; }
    QuadInt sub(const QuadInt& a, const QuadInt& b) const { return {a.x - b.x, a.y - b.y}; }
    QuadInt neg(const QuadInt& a) const { return {-a.x, -a.y}; }
    QuadInt mul(const QuadInt& a, const QuadInt& b) const;
    QuadInt conj(const QuadInt& a) const { return {a.x + s_ * a.y, -a.y}; }
    Int norm(const QuadInt& a) const { return a.x * a.x + s_ * a.x * a.y - t_ * a.y * a.y; }
    Int trace(const QuadInt& a) const { return 2 * a.x + s_ * a.y; }
    QuadInt pow(const QuadInt& a, unsigned long e) const;

    bool operator==(const IQField& o) const { return D_ == o.D_; }

private:
    long D_, s_, t_;
    int wK_;
    std::vector<QuadInt> units_;
};

enum class Splitting { Split, Inert, Ramified };

Splitting splitting_type(const IQField& K, const Int& ell);

// Integral ideal in HNF [a, b + c omega]: a, c > 0, c | a, c | b, 0 <= b < a.
class Ideal {
public:
    static Ideal from_hnf(const IQField& K, const Int& a, const Int& b, const Int& c);
    static Ideal whole_ring(const IQField& K);
    static Ideal principal(const IQField& K, const QuadInt& g);
    // O-module generated by the given elements (must have full rank).
    static Ideal from_generators(const IQField& K, const std::vector<QuadInt>& gens);

    const IQField& field() const { return K_; }
    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const Int& c() const { return c_; }
    Int norm() const { return a_ * c_; }

    Ideal mul(const Ideal& other) const;
    Ideal pow(unsigned long e) const;
    Ideal conjugate() const;

    bool contains(const QuadInt& q) const;
    // Canonical residue: x in [0,a), y in [0,c).
    QuadInt reduce(const QuadInt& q) const;
    bool is_whole_ring() const { return a_ == 1 && c_ == 1; }
    bool is_coprime_to(const Ideal& other) const;
    bool divides(const Ideal& other) const;  // other subset of this

    bool operator==(const Ideal& o) const { return K_ == o.K_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_; }
    bool operator!=(const Ideal& o) const { return !(*this == o); }
    bool operator<(const Ideal& o) const;  // deterministic container order
    std::string str() const;

private:
    Ideal(const IQField& K, Int a, Int b, Int c) : K_(K), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}
    IQField K_;
    Int a_, b_, c_;
};

// Primes above ell.  Split: two conjugates, designated one (smaller b) first.
// Ramified: the unique prime twice.  Inert: (ell) twice.
std::pair<Ideal, Ideal> primes_above(const IQField& K, const Int& ell);

// All integral ideals of norm n for 1 <= n <= B, built by factoring n and
// multiplying prime ideals.  Norms with no ideal get an empty entry.
std::map<long, std::vector<Ideal>> enumerate_ideals(const IQField& K, long B, const std::optional<Ideal>& coprime_to = std::nullopt);

// Generator of a principal ideal, unit-normalized to the lexicographically
// greatest (x, y) among associates.  Throws NotPrincipal.
QuadInt principal_generator(const Ideal& I);

struct QForm {
    Int a, b, c;
    bool operator==(const QForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const QForm& o) const;
};

class ClassGroup {
public:
    explicit ClassGroup(const IQField& K);

    long h() const { return static_cast<long>(forms_.size()); }
    const std::vector<QForm>& forms() const { return forms_; }
    const IQField& field() const { return K_; }

    static QForm reduce(const IQField& K, QForm f);
    QForm compose(const QForm& f, const QForm& g) const;
    QForm principal_form() const;
    QForm form_of_ideal(const Ideal& I) const;
    Ideal ideal_of_form(const QForm& f) const;
    std::size_t index_of(const QForm& f) const;  // f must be reduced

    // Invariant-factor description plus each reduced form's coordinates.
    const arith::FiniteAbelianGroup& abstract() const { return group_; }
    arith::FiniteAbelianGroup::Elt class_coords(const QForm& f) const;
    std::size_t class_of_ideal(const Ideal& I) const { return index_of(form_of_ideal(I)); }

private:
    IQField K_;
    std::vector<QForm> forms_;
    arith::FiniteAbelianGroup group_;
    std::vector<arith::FiniteAbelianGroup::Elt> coords_;  // per form
};

}  // namespace anticyc::iqfield

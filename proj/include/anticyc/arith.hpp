#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "anticyc/bigint.hpp"

namespace anticyc::arith {

using Mat = std::vector<std::vector<Int>>;
using Vec = std::vector<Int>;

Mat mat_identity(std::size_t n);
Mat mat_mul(const Mat& A, const Mat& B);
Vec mat_apply(const Mat& A, const Vec& v);
Int mat_det(Mat A);  // exact, fraction-free elimination

struct SNFResult {
    // diag(L * M * R) = factors, d_i | d_{i+1}, zeros trailing; L, R unimodular.
    std::vector<Int> factors;
    Mat L;
    Mat R;
};

SNFResult smith_normal_form(const Mat& M);

// One integer solution x of M x = b, via the Smith form.  Throws
// PreconditionFailed when the system has no integer solution.
Vec solve_linear(const Mat& M, const Vec& b);

// Kronecker symbol (D | n), fully multiplicative in n; n = 2 is decided by
// D mod 8 and (D | 1) = 1.
int kronecker_symbol(const Int& D, const Int& n);

// The unique (p-1)-st root of unity in Z/p^N congruent to a mod p.
Int teichmuller(const Int& a, const Int& p, int N);

class PadicInt {
public:
    PadicInt(Int p, int prec, const Int& value);
    static PadicInt zero(const Int& p, int prec) { return PadicInt(p, prec, 0); }
    static PadicInt one(const Int& p, int prec) { return PadicInt(p, prec, 1); }
    static PadicInt from_rat(const Rat& q, const Int& p, int prec);

    const Int& p() const { return p_; }
    int prec() const { return prec_; }
    const Int& residue() const { return r_; }
    const Int& modulus() const { return mod_; }

    bool is_unit() const { return r_ % p_ != 0; }
    bool is_zero() const { return r_ == 0; }
    // Valuation as seen at this precision (prec_ when the residue is 0).
    long valuation() const;

    PadicInt with_prec(int prec) const;  // truncate only; raising precision is refused

    PadicInt operator+(const PadicInt& o) const;
    PadicInt operator-(const PadicInt& o) const;
    PadicInt operator*(const PadicInt& o) const;
    PadicInt operator-() const;
    bool operator==(const PadicInt& o) const;  // compared at the coarser precision

    PadicInt inverse() const;
    PadicInt pow(const Int& e) const;  // negative exponents via inverse

private:
    Int p_;
    int prec_;
    Int mod_;
    Int r_;
    void check_compatible(const PadicInt& o) const;
};

// log on principal units (u = 1 mod p), exp for v(x) >= 1; both need p odd.
PadicInt padic_log(const PadicInt& u);
PadicInt padic_exp(const PadicInt& x);
// u^t = exp(t log u) for a principal unit u and t in Z_p.
PadicInt pow_principal(const PadicInt& u, const PadicInt& t);

// n-th root of a unit by Hensel lifting, p coprime to n.  When u = 1 mod p the
// root returned is the principal-unit one; otherwise the root with the
// smallest residue mod p.  Throws NoRoot when no root exists mod p.
PadicInt padic_root(const PadicInt& u, unsigned long n);

struct KappaValue {
    Int teich_power;  // omega(z)^i mod p^N
    Int exponent;     // t mod p^{N-1} with (1+p)^t = <z>
};

// kappa_i(z) = omega(z)^i . [<z>], the second slot returned as the exponent of
// <z> in base 1+p.
KappaValue kappa_eval(const Int& i, const Int& z, const Int& p, int N);

// Elements are exponent vectors against the invariant-factor presentation
// prod Z/d_i with d_1 | d_2 | ... ; factors equal to 1 are legal but inert.
class FiniteAbelianGroup {
public:
    using Elt = Vec;

    explicit FiniteAbelianGroup(std::vector<Int> invariant_factors);
    static FiniteAbelianGroup trivial() { return FiniteAbelianGroup({}); }

    // Z^ngens modulo the columns of `relations`; returns the group together
    // with the matrix taking old-generator exponent vectors to canonical
    // coordinates.  Throws InputError when the quotient is infinite.
    static std::pair<FiniteAbelianGroup, Mat> from_relations(std::size_t ngens, const Mat& relations);

    const std::vector<Int>& invariants() const { return inv_; }
    std::size_t rank() const { return inv_.size(); }
    Int order() const;

    Elt id() const { return Elt(inv_.size(), 0); }
    Elt reduce(Vec v) const;
    Elt op(const Elt& a, const Elt& b) const;
    Elt inverse(const Elt& a) const;
    Elt pow(const Elt& a, Int e) const;
    Int element_order(const Elt& a) const;
    bool is_id(const Elt& a) const;

    // All elements in lexicographic order; refuses groups larger than cap.
    std::vector<Elt> elements(const Int& cap = Int(200000)) const;

    bool operator==(const FiniteAbelianGroup& o) const { return inv_ == o.inv_; }

private:
    std::vector<Int> inv_;
};

// Structure of a finite abelian group given as a closed multiplication table:
// `op` composes element indices, `id` is the identity's index.  Returns the
// abstract group together with canonical coordinates for every index, found
// by growing a polycyclic presentation one generator at a time.
std::pair<FiniteAbelianGroup, std::vector<Vec>> abelian_structure(
    std::size_t n, const std::function<std::size_t(std::size_t, std::size_t)>& op, std::size_t id);

}  // namespace anticyc::arith

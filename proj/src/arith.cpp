#include "anticyc/arith.hpp"

#include <algorithm>

#include "anticyc/errors.hpp"

namespace anticyc::arith {

Mat mat_identity(std::size_t n) {
    Mat I(n, Vec(n, 0));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

Mat mat_mul(const Mat& A, const Mat& B) {
    if (A.empty() || B.empty()) return {};
    std::size_t n = A.size(), k = B.size(), m = B[0].size();
    if (A[0].size() != k) throw InputError("matrix product shape mismatch");
    Mat C(n, Vec(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (A[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) C[i][j] += A[i][t] * B[t][j];
        }
    return C;
}

Vec mat_apply(const Mat& A, const Vec& v) {
    Vec out(A.size(), 0);
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (A[i].size() != v.size()) throw InputError("matrix-vector shape mismatch");
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += A[i][j] * v[j];
    }
    return out;
}

Int mat_det(Mat A) {
    std::size_t n = A.size();
    for (const auto& row : A)
        if (row.size() != n) throw InputError("determinant of non-square matrix");
    // Bareiss fraction-free elimination: every division below is exact.
    Int sign = 1, prev = 1;
    for (std::size_t t = 0; t + 1 < n; ++t) {
        if (A[t][t] == 0) {
            std::size_t s = t + 1;
            while (s < n && A[s][t] == 0) ++s;
            if (s == n) return 0;
            std::swap(A[t], A[s]);
            sign = -sign;
        }
        for (std::size_t i = t + 1; i < n; ++i)
            for (std::size_t j = t + 1; j < n; ++j)
                A[i][j] = (A[i][j] * A[t][t] - A[i][t] * A[t][j]) / prev;
        prev = A[t][t];
    }
    return n == 0 ? Int(1) : sign * A[n - 1][n - 1];
}

namespace {

void row_swap(Mat& A, Mat& L, std::size_t i, std::size_t j) {
    std::swap(A[i], A[j]);
    std::swap(L[i], L[j]);
}

void col_swap(Mat& A, Mat& R, std::size_t i, std::size_t j) {
    for (auto& row : A) std::swap(row[i], row[j]);
    for (auto& row : R) std::swap(row[i], row[j]);
}

void row_addmul(Mat& A, Mat& L, std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t j = 0; j < A[dst].size(); ++j) A[dst][j] += q * A[src][j];
    for (std::size_t j = 0; j < L[dst].size(); ++j) L[dst][j] += q * L[src][j];
}

void col_addmul(Mat& A, Mat& R, std::size_t dst, std::size_t src, const Int& q) {
    for (auto& row : A) row[dst] += q * row[src];
    for (auto& row : R) row[dst] += q * row[src];
}

}  // namespace

SNFResult smith_normal_form(const Mat& M) {
    std::size_t m = M.size();
    std::size_t n = m ? M[0].size() : 0;
    for (const auto& row : M)
        if (row.size() != n) throw InputError("ragged matrix");
    Mat A = M, L = mat_identity(m), R = mat_identity(n);
    std::size_t t = 0;
    while (t < m && t < n) {
        // Pivot choice: smallest nonzero magnitude in the trailing block keeps
        // intermediate entries from blowing up.
        std::size_t pi = t, pj = t;
        bool found = false;
        Int best = 0;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (A[i][j] == 0) continue;
                Int av = abs(A[i][j]);
                if (!found || av < best) { pi = i; pj = j; best = av; found = true; }
            }
        if (!found) break;  // trailing block zero: remaining factors are 0
        row_swap(A, L, t, pi);
        col_swap(A, R, t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (A[i][t] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), A[i][t].get_mpz_t(), A[t][t].get_mpz_t());
                row_addmul(A, L, i, t, -q);
                if (A[i][t] != 0) {  // remainder strictly smaller: promote it
                    row_swap(A, L, t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (A[t][j] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), A[t][j].get_mpz_t(), A[t][t].get_mpz_t());
                col_addmul(A, R, j, t, -q);
                if (A[t][j] != 0) {
                    col_swap(A, R, t, j);
                    clean = false;
                }
            }
            if (!clean) continue;
            // Divisibility: the pivot must divide the whole trailing block.
            for (std::size_t i = t + 1; i < m && clean; ++i)
                for (std::size_t j = t + 1; j < n && clean; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        row_addmul(A, L, t, i, 1);
                        clean = false;
                    }
        }
        if (A[t][t] < 0) {
            for (std::size_t j = 0; j < n; ++j) A[t][j] = -A[t][j];
            for (std::size_t j = 0; j < m; ++j) L[t][j] = -L[t][j];
        }
        ++t;
    }
    SNFResult out;
    out.factors.resize(std::min(m, n), 0);
    for (std::size_t i = 0; i < out.factors.size(); ++i) out.factors[i] = A[i][i];
    out.L = std::move(L);
    out.R = std::move(R);
    return out;
}

int kronecker_symbol(const Int& D, const Int& n) {
    return mpz_kronecker(D.get_mpz_t(), n.get_mpz_t());
}

Int teichmuller(const Int& a, const Int& p, int N) {
    if (p < 2 || !is_prime(p)) throw InputError("teichmuller: p must be prime");
    if (N < 1) throw InputError("teichmuller: precision must be >= 1");
    if (imod(a, p) == 0) throw InputError("teichmuller: argument divisible by p");
    Int q = ipow(p, static_cast<unsigned long>(N));
    Int x = imod(a, q);
    // x -> x^p converges to the root of unity; mod p^N it stabilises after
    // at most N steps.
    for (int it = 0; it < 2 * N + 2; ++it) {
        Int nx = pow_mod(x, p, q);
        if (nx == x) break;
        x = nx;
    }
    return x;
}

PadicInt::PadicInt(Int p, int prec, const Int& value) : p_(std::move(p)), prec_(prec) {
    if (p_ < 2 || !is_prime(p_)) throw InputError("PadicInt: p must be prime");
    if (prec_ < 1) throw InputError("PadicInt: precision must be >= 1");
    mod_ = ipow(p_, static_cast<unsigned long>(prec_));
    r_ = imod(value, mod_);
}

PadicInt PadicInt::from_rat(const Rat& q, const Int& p, int prec) {
    Int den = q.get_den();
    Int mod = ipow(p, static_cast<unsigned long>(prec));
    if (imod(den, p) == 0) throw InputError("from_rat: denominator not a p-adic unit");
    return PadicInt(p, prec, q.get_num() * inv_mod(den, mod));
}

long PadicInt::valuation() const {
    if (r_ == 0) return prec_;
    return ival(r_, p_);
}

PadicInt PadicInt::with_prec(int prec) const {
    if (prec > prec_) throw PreconditionFailed("cannot raise p-adic precision from " + std::to_string(prec_) + " to " + std::to_string(prec));
    return PadicInt(p_, prec, r_);
}

void PadicInt::check_compatible(const PadicInt& o) const {
    if (p_ != o.p_) throw InputError("mixed p-adic primes " + p_.get_str() + " and " + o.p_.get_str());
}

PadicInt PadicInt::operator+(const PadicInt& o) const {
    check_compatible(o);
    int n = std::min(prec_, o.prec_);
    return PadicInt(p_, n, r_ + o.r_);
}

PadicInt PadicInt::operator-(const PadicInt& o) const {
    check_compatible(o);
    int n = std::min(prec_, o.prec_);
    return PadicInt(p_, n, r_ - o.r_);
}

PadicInt PadicInt::operator*(const PadicInt& o) const {
    check_compatible(o);
    int n = std::min(prec_, o.prec_);
    return PadicInt(p_, n, r_ * o.r_);
}

PadicInt PadicInt::operator-() const { return PadicInt(p_, prec_, -r_); }

bool PadicInt::operator==(const PadicInt& o) const {
    if (p_ != o.p_) return false;
    int n = std::min(prec_, o.prec_);
    Int mod = ipow(p_, static_cast<unsigned long>(n));
    return imod(r_, mod) == imod(o.r_, mod);
}

PadicInt PadicInt::inverse() const {
    if (!is_unit()) throw InputError("inverse of non-unit p-adic integer");
    return PadicInt(p_, prec_, inv_mod(r_, mod_));
}

PadicInt PadicInt::pow(const Int& e) const {
    if (e < 0) return inverse().pow(-e);
    return PadicInt(p_, prec_, pow_mod(r_, e, mod_));
}

PadicInt padic_log(const PadicInt& u) {
    const Int& p = u.p();
    if (p == 2) throw InputError("padic_log: p = 2 unsupported");
    if (imod(u.residue(), p) != 1) throw PreconditionFailed("padic_log: argument is not a principal unit");
    int N = u.prec();
    // Series sum (-1)^{i+1} x^i / i.  Any lift of the residue works: changing
    // u by p^N t moves the log by valuation >= N.  Guard digits absorb the
    // divisions by i.
    int guard = 1;
    while (ipow(p, static_cast<unsigned long>(guard)) <= Int(N + guard + 2)) ++guard;
    int W = N + guard;
    Int modW = ipow(p, static_cast<unsigned long>(W));
    Int x = imod(u.residue() - 1, modW);
    // v(x^i/i) >= i - floor(log_p i), which is non-decreasing in i; stop once
    // it reaches N.
    Int acc = 0, xp = 1;
    long Lp = 0;
    Int pfloor = p;  // p^{Lp+1}
    for (long i = 1;; ++i) {
        if (Int(i) >= pfloor) { ++Lp; pfloor *= p; }
        if (i - Lp >= N) break;
        xp = imod(xp * x, modW);
        Int unit = 1;
        long vi = (i == 1) ? 0 : ival(Int(i), p, &unit);
        // x^i is divisible by p^i >= p^{vi}; divide exactly then invert the unit.
        Int term = xp / ipow(p, static_cast<unsigned long>(vi));
        term = imod(term * inv_mod(imod(unit, modW), modW), modW);
        if (i % 2 == 0) term = -term;
        acc += term;
    }
    return PadicInt(p, N, acc);
}

PadicInt padic_exp(const PadicInt& x) {
    const Int& p = x.p();
    if (p == 2) throw InputError("padic_exp: p = 2 unsupported");
    if (!x.is_zero() && x.valuation() < 1) throw PreconditionFailed("padic_exp: argument must have positive valuation");
    int N = x.prec();
    long pl = to_long(p);
    // v(x^i/i!) >= i - i/(p-1) = i(p-2)/(p-1); choose imax so the tail dies.
    long imax = 2 * N + 4;
    while (imax - imax / (pl - 1) < N + 2) imax += N;
    int guard = static_cast<int>(imax / (pl - 1)) + 2;
    int W = N + guard;
    Int modW = ipow(p, static_cast<unsigned long>(W));
    Int xv = imod(x.residue(), modW);
    Int acc = 1, xp = 1, fact = 1;
    for (long i = 1; i <= imax; ++i) {
        xp = imod(xp * xv, modW);
        fact *= i;
        Int unit;
        long vf = ival(fact, p, &unit);
        long vterm = i - vf;  // i*v(x) - v(i!) with v(x) >= 1
        if (vterm >= N) continue;
        Int term = xp / ipow(p, static_cast<unsigned long>(vf));
        acc += imod(term * inv_mod(imod(unit, modW), modW), modW);
    }
    return PadicInt(p, N, acc);
}

PadicInt pow_principal(const PadicInt& u, const PadicInt& t) {
    PadicInt lg = padic_log(u);
    return padic_exp(PadicInt(u.p(), std::min(u.prec(), t.prec()), lg.residue() * t.residue()));
}

PadicInt padic_root(const PadicInt& u, unsigned long n) {
    if (n == 0) throw InputError("padic_root: exponent must be positive");
    const Int& p = u.p();
    if (!u.is_unit()) throw InputError("padic_root: argument must be a p-adic unit");
    if (imod(Int(static_cast<long>(n)), p) == 0)
        throw NoRoot("padic_root: exponent divisible by p (wildly ramified extraction)");
    Int u0 = imod(u.residue(), p);
    Int x0 = -1;
    if (u0 == 1) {
        x0 = 1;  // principal-unit branch
    } else {
        for (Int c = 1; c < p; ++c)
            if (pow_mod(c, Int(static_cast<long>(n)), p) == u0) { x0 = c; break; }
        if (x0 < 0) throw NoRoot("padic_root: no " + std::to_string(n) + "-th root of " + u0.get_str() + " modulo " + p.get_str());
    }
    // Newton iteration for X^n - u; f'(x0) = n x0^{n-1} is a unit.
    const Int& M = u.modulus();
    Int x = x0;
    Int ne(static_cast<long>(n));
    for (int it = 0; it < 64; ++it) {
        Int fx = imod(pow_mod(x, ne, M) - u.residue(), M);
        if (fx == 0) break;
        Int dfx = imod(ne * pow_mod(x, ne - 1, M), M);
        x = imod(x - fx * inv_mod(dfx, M), M);
    }
    if (imod(pow_mod(x, ne, M) - u.residue(), M) != 0)
        throw NoRoot("padic_root: Newton iteration failed to converge");
    return PadicInt(p, u.prec(), x);
}

KappaValue kappa_eval(const Int& i, const Int& z, const Int& p, int N) {
    if (N < 1) throw InputError("kappa_eval: precision must be >= 1");
    Int q = ipow(p, static_cast<unsigned long>(N));
    Int w = teichmuller(z, p, N);
    KappaValue out;
    out.teich_power = pow_mod(w, imod(i, Int(p - 1)), q);
    Int bracket = imod(z * inv_mod(w, q), q);  // <z> = z / omega(z), principal unit
    if (N == 1) {
        out.exponent = 0;
        return out;
    }
    PadicInt lz = padic_log(PadicInt(p, N, bracket));
    PadicInt lb = padic_log(PadicInt(p, N, 1 + p));
    // Both logs sit in pZ_p with v(log(1+p)) = 1; the quotient is integral
    // and determined mod p^{N-1}.
    Int mod1 = ipow(p, static_cast<unsigned long>(N - 1));
    Int a = lz.residue() / p;
    Int b = lb.residue() / p;
    out.exponent = imod(a * inv_mod(imod(b, mod1), mod1), mod1);
    return out;
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<Int> invariant_factors) : inv_(std::move(invariant_factors)) {
    for (std::size_t i = 0; i < inv_.size(); ++i) {
        if (inv_[i] < 1) throw InputError("invariant factors must be positive");
        if (i + 1 < inv_.size() && inv_[i + 1] % inv_[i] != 0)
            throw InputError("invariant factors must form a divisibility chain");
    }
}

std::pair<FiniteAbelianGroup, Mat> FiniteAbelianGroup::from_relations(std::size_t ngens, const Mat& relations) {
    for (const auto& row : relations)
        if (row.size() != ngens)
            throw InputError("relation rows must have one entry per generator");
    // Rows of `relations` are relation vectors; transpose so relations become
    // columns of an ngens x m matrix.
    Mat A(ngens, Vec(relations.size(), 0));
    for (std::size_t r = 0; r < relations.size(); ++r)
        for (std::size_t j = 0; j < ngens; ++j) A[j][r] = relations[r][j];
    SNFResult snf = smith_normal_form(A);
    std::vector<Int> d(ngens, 0);
    for (std::size_t i = 0; i < snf.factors.size(); ++i) d[i] = snf.factors[i];
    for (std::size_t i = 0; i < ngens; ++i)
        if (d[i] == 0) throw InputError("relation lattice has infinite quotient");
    // Keep coordinates with d_i > 1; generator j maps to column j of L.
    std::vector<std::size_t> keep;
    std::vector<Int> inv;
    for (std::size_t i = 0; i < ngens; ++i)
        if (d[i] > 1) { keep.push_back(i); inv.push_back(d[i]); }
    Mat to_canon(keep.size(), Vec(ngens, 0));
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (std::size_t j = 0; j < ngens; ++j)
            to_canon[r][j] = imod(snf.L[keep[r]][j], inv[r]);
    return {FiniteAbelianGroup(std::move(inv)), std::move(to_canon)};
}

Int FiniteAbelianGroup::order() const {
    Int o = 1;
    for (const auto& d : inv_) o *= d;
    return o;
}

FiniteAbelianGroup::Elt FiniteAbelianGroup::reduce(Vec v) const {
    if (v.size() != inv_.size()) throw InputError("group element has wrong coordinate count");
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = imod(v[i], inv_[i]);
    return v;
}

FiniteAbelianGroup::Elt FiniteAbelianGroup::op(const Elt& a, const Elt& b) const {
    if (a.size() != inv_.size() || b.size() != inv_.size()) throw InputError("group element has wrong coordinate count");
    Elt c(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) c[i] = imod(a[i] + b[i], inv_[i]);
    return c;
}

FiniteAbelianGroup::Elt FiniteAbelianGroup::inverse(const Elt& a) const {
    Elt c(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) c[i] = imod(-a[i], inv_[i]);
    return c;
}

FiniteAbelianGroup::Elt FiniteAbelianGroup::pow(const Elt& a, Int e) const {
    Elt c(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) c[i] = imod(a[i] * e, inv_[i]);
    return c;
}

Int FiniteAbelianGroup::element_order(const Elt& a) const {
    Int o = 1;
    for (std::size_t i = 0; i < inv_.size(); ++i) {
        Int g = igcd(a[i], inv_[i]);
        o = ilcm(o, inv_[i] / g);
    }
    return o;
}

bool FiniteAbelianGroup::is_id(const Elt& a) const {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

std::vector<FiniteAbelianGroup::Elt> FiniteAbelianGroup::elements(const Int& cap) const {
    if (order() > cap) throw ResourceLimit("group of order " + order().get_str() + " exceeds enumeration cap " + cap.get_str());
    std::vector<Elt> out;
    out.push_back(id());
    for (std::size_t i = 0; i < inv_.size(); ++i) {
        std::size_t base = out.size();
        for (Int v = 1; v < inv_[i]; ++v)
            for (std::size_t j = 0; j < base; ++j) {
                Elt e = out[j];
                e[i] = v;
                out.push_back(std::move(e));
            }
    }
    return out;
}

Vec solve_linear(const Mat& M, const Vec& b) {
    if (M.empty() || M.size() != b.size()) throw InputError("solve_linear: shape mismatch");
    std::size_t rows = M.size(), cols = M[0].size();
    SNFResult s = smith_normal_form(M);
    // M x = b  <=>  S (R^-1 x) = L b; solve S w = L b, return x = R w.
    Vec lb = mat_apply(s.L, b);
    Vec w(cols, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        Int d = i < s.factors.size() ? s.factors[i] : Int(0);
        if (d == 0) {
            if (lb[i] != 0) throw PreconditionFailed("linear system has no integer solution");
        } else {
            if (lb[i] % d != 0) throw PreconditionFailed("linear system has no integer solution");
            if (i < cols) w[i] = lb[i] / d;
        }
    }
    return mat_apply(s.R, w);
}

std::pair<FiniteAbelianGroup, std::vector<Vec>> abelian_structure(
    std::size_t n, const std::function<std::size_t(std::size_t, std::size_t)>& op, std::size_t id) {
    if (n == 0) throw InputError("abelian_structure: empty table");
    std::vector<bool> known(n, false);
    std::vector<Vec> expr(n);
    known[id] = true;
    std::size_t covered = 1;
    std::size_t ngens = 0;
    Mat rels;
    while (covered < n) {
        std::size_t g = 0;
        while (known[g]) ++g;
        ++ngens;
        for (std::size_t i = 0; i < n; ++i)
            if (known[i]) expr[i].resize(ngens, 0);
        // relative order: least m >= 1 with g^m inside the current subgroup
        std::size_t pw = g;
        Int m = 1;
        while (!known[pw]) {
            pw = op(pw, g);
            m += 1;
        }
        Vec rel = expr[pw];
        for (auto& e : rel) e = -e;
        rel.back() = m;
        rels.push_back(rel);
        // extend by the disjoint cosets old . g^j, 1 <= j < m
        std::vector<std::size_t> old;
        for (std::size_t i = 0; i < n; ++i)
            if (known[i]) old.push_back(i);
        for (std::size_t i : old) {
            std::size_t q = i;
            for (Int j = 1; j < m; ++j) {
                q = op(q, g);
                if (known[q]) throw PreconditionFailed("abelian_structure: composition table is not a group");
                known[q] = true;
                ++covered;
                expr[q] = expr[i];
                expr[q].back() = j;
            }
        }
    }
    for (auto& r : rels) r.resize(ngens, 0);
    auto [grp, tocanon] = FiniteAbelianGroup::from_relations(ngens, rels);
    if (grp.order() != Int(static_cast<long>(n)))
        throw PreconditionFailed("abelian_structure: presentation order mismatch");
    std::vector<Vec> coords(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec v = expr[i];
        v.resize(ngens, 0);
        coords[i] = grp.reduce(mat_apply(tocanon, v));
    }
    return {grp, coords};
}

}  // namespace anticyc::arith

#include "anticyc/valuering.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "anticyc/arith.hpp"
#include "anticyc/errors.hpp"

namespace anticyc::arith {

namespace {

using Poly = std::vector<Int>;  // little-endian, no trailing zeros

void poly_trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// Exact division (remainder must vanish); used only on cyclotomic factors.
Poly poly_divexact(Poly num, const Poly& den) {
    Poly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, 0);
    while (num.size() >= den.size()) {
        poly_trim(num);
        if (num.size() < den.size()) break;
        if (num.back() % den.back() != 0) throw InputError("non-exact polynomial division");
        Int c = num.back() / den.back();
        std::size_t shift = num.size() - den.size();
        q[shift] = c;
        for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= c * den[i];
    }
    poly_trim(num);
    if (!num.empty()) throw InputError("non-exact polynomial division");
    return q;
}

Poly cyclotomic(long n) {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    Poly num(static_cast<std::size_t>(n) + 1, 0);
    num[0] = -1;
    num[static_cast<std::size_t>(n)] = 1;
    for (long d = 1; d < n; ++d)
        if (n % d == 0) num = poly_divexact(std::move(num), cyclotomic(d));
    return num;
}

long euler_phi(long n) {
    long r = n;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            r -= r / p;
            while (n % p == 0) n /= p;
        }
    if (n > 1) r -= r / n;
    return r;
}

bool is_fundamental_disc(long D) {
    if (D >= 0) return false;
    auto squarefree = [](long n) {
        for (long p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0) return false;
        return true;
    };
    long m = ((D % 4) + 4) % 4;
    if (m == 1) return squarefree(-D);
    if (m == 0) {
        long q = D / 4;
        long qm = ((q % 4) + 4) % 4;
        return (qm == 2 || qm == 3) && squarefree(std::abs(q));
    }
    return false;
}

}  // namespace

ValueRing::ValueRing(long D, long M) : D_(D), M_(M) {
    if (!is_fundamental_disc(D)) throw InputError("ValueRing: discriminant " + std::to_string(D) + " is not a negative fundamental discriminant");
    if (M < 1) throw InputError("ValueRing: root-of-unity order must be >= 1");
    wK_ = (D == -3) ? 6 : (D == -4) ? 4 : 2;
    if (D % 4 == 0) { s_ = 0; t_ = D / 4; } else { s_ = 1; t_ = (D - 1) / 4; }
    W_ = std::lcm(M, wK_);
    contains_K_ = (W_ % (-D) == 0);
    phi_poly_ = cyclotomic(W_);
    phi_ = static_cast<std::size_t>(euler_phi(W_));
    dim_ = contains_K_ ? phi_ : 2 * phi_;

    // Powers of zeta_W reduced mod Phi_W, enough for both convolution folding
    // and direct exponent lookups.
    std::size_t need = std::max<std::size_t>(static_cast<std::size_t>(W_), 2 * phi_ - 1);
    zred_.assign(need, std::vector<Int>(phi_, 0));
    zred_[0][0] = 1;
    for (std::size_t j = 1; j < need; ++j) {
        std::vector<Int> cur(phi_ + 1, 0);
        for (std::size_t b = 0; b < phi_; ++b) cur[b + 1] = zred_[j - 1][b];
        if (cur[phi_] != 0) {
            Int lead = cur[phi_];
            for (std::size_t b = 0; b < phi_; ++b) cur[b] -= lead * phi_poly_[b];
        }
        cur.resize(phi_);
        zred_[j] = std::move(cur);
    }

    if (contains_K_) {
        // sqrt(D) as the quadratic Gauss sum sum_a (D|a) zeta_{|D|}^a.
        std::vector<Rat> g(phi_, 0);
        long absD = -D;
        long step = W_ / absD;
        for (long a = 1; a < absD; ++a) {
            int chi = mpz_kronecker(Int(D).get_mpz_t(), Int(a).get_mpz_t());
            if (chi == 0) continue;
            const auto& z = zred_[static_cast<std::size_t>((a * step) % W_)];
            for (std::size_t b = 0; b < phi_; ++b) g[b] += Rat(chi) * Rat(z[b]);
        }
        omega_vec_.assign(phi_, 0);
        for (std::size_t b = 0; b < phi_; ++b) {
            omega_vec_[b] = (Rat(s_) * Rat(b == 0 ? 1 : 0) + g[b]) / 2;
            omega_vec_[b].canonicalize();
            if (omega_vec_[b].get_den() != 1)
                throw InputError("ValueRing: Gauss-sum expression for omega is not integral");
        }
    }

    // Construction sanity: omega must satisfy its minimal polynomial.
    RElt w = omega();
    if (w * w != w * Rat(s_) + from_rat(Rat(t_)))
        throw InputError("ValueRing: omega fails its minimal polynomial");
    // zeta must have exact multiplicative order M as an M-th root.
    if (M_ > 1 && zeta_pow(M_) != one()) throw InputError("ValueRing: zeta order check failed");
}

std::vector<Rat> ValueRing::mul_cyclo(const std::vector<Rat>& a, const std::vector<Rat>& b) const {
    std::vector<Rat> acc(phi_, 0);
    for (std::size_t i = 0; i < phi_; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < phi_; ++j) {
            if (b[j] == 0) continue;
            Rat c = a[i] * b[j];
            if (i + j < phi_) {
                acc[i + j] += c;
            } else {
                const auto& z = zred_[i + j];
                for (std::size_t k = 0; k < phi_; ++k)
                    if (z[k] != 0) acc[k] += c * Rat(z[k]);
            }
        }
    }
    for (auto& q : acc) q.canonicalize();
    return acc;
}

std::vector<Rat> ValueRing::zeta_w_pow(long j) const {
    long e = ((j % W_) + W_) % W_;
    const auto& z = zred_[static_cast<std::size_t>(e)];
    std::vector<Rat> out(phi_, 0);
    for (std::size_t b = 0; b < phi_; ++b) out[b] = Rat(z[b]);
    return out;
}

RElt ValueRing::zero() const { return RElt(this, std::vector<Rat>(dim_, 0)); }

RElt ValueRing::one() const {
    std::vector<Rat> c(dim_, 0);
    c[0] = 1;
    return RElt(this, std::move(c));
}

RElt ValueRing::from_rat(const Rat& q) const {
    std::vector<Rat> c(dim_, 0);
    c[0] = q;
    return RElt(this, std::move(c));
}

RElt ValueRing::zeta_pow(long j) const {
    std::vector<Rat> c(dim_, 0);
    auto z = zeta_w_pow(j * (W_ / M_));
    for (std::size_t b = 0; b < phi_; ++b) c[b] = z[b];
    return RElt(this, std::move(c));
}

RElt ValueRing::omega() const {
    std::vector<Rat> c(dim_, 0);
    if (contains_K_) {
        for (std::size_t b = 0; b < phi_; ++b) c[b] = omega_vec_[b];
    } else {
        c[phi_] = 1;
    }
    return RElt(this, std::move(c));
}

RElt ValueRing::embed_quad(const Int& x, const Int& y) const {
    return from_rat(Rat(x)) + omega() * Rat(y);
}

RElt ValueRing::coerce(const ValueRing& target, const RElt& v) {
    const ValueRing* src = v.ring();
    if (!src) throw InputError("coerce: null element");
    if (src == &target) return v;
    if (src->D_ != target.D_) throw InputError("coerce: discriminant mismatch");
    if (target.W_ % src->W_ != 0) throw InputError("coerce: target root-of-unity order does not contain source");
    long stretch = target.W_ / src->W_;
    RElt out = target.zero();
    // Source basis element zeta_{W_s}^b (optionally times omega) maps to
    // zeta_{W_t}^{b*stretch} (times omega).
    for (std::size_t b = 0; b < src->phi_; ++b) {
        const Rat& c0 = v.coords()[b];
        if (c0 != 0) {
            std::vector<Rat> z = target.zeta_w_pow(static_cast<long>(b) * stretch);
            std::vector<Rat> full(target.dim_, 0);
            for (std::size_t k = 0; k < target.phi_; ++k) full[k] = z[k] * c0;
            out = out + RElt(&target, std::move(full));
        }
        if (!src->contains_K_) {
            const Rat& c1 = v.coords()[src->phi_ + b];
            if (c1 != 0) {
                std::vector<Rat> z = target.zeta_w_pow(static_cast<long>(b) * stretch);
                std::vector<Rat> full(target.dim_, 0);
                for (std::size_t k = 0; k < target.phi_; ++k) full[k] = z[k] * c1;
                out = out + RElt(&target, std::move(full)) * target.omega();
            }
        }
    }
    return out;
}

Int ValueRing::reduce_padic(const RElt& v, const Int& p, int N, const Int& omega_root) const {
    if (v.ring() != this) throw InputError("reduce_padic: element from foreign ring");
    if (!is_prime(p) || p == 2) throw InputError("reduce_padic: p must be an odd prime");
    if ((p - 1) % W_ != 0) throw InputError("reduce_padic: root-of-unity order " + std::to_string(W_) + " does not divide p-1 for p=" + p.get_str());
    Int q = ipow(p, static_cast<unsigned long>(N));
    // omega_root must be a genuine root of X^2 - sX - t mod p^N.
    if (imod(omega_root * omega_root - s_ * omega_root - t_, q) != 0)
        throw InputError("reduce_padic: omega_root fails omega's minimal polynomial mod p^N");

    // Choose the image of zeta_W: a Teichmueller element of exact order W,
    // compatible with omega_root when the field sits inside the cyclotomic
    // part; smallest qualifying residue for determinism.
    Int zimg = 0;
    for (Int x = 1; x < p; ++x) {
        // exact order W mod p
        if (pow_mod(x, Int(W_), p) != 1) continue;
        bool exact = true;
        for (auto& [f, e] : factorize(Int(W_)))
            if (pow_mod(x, Int(W_) / f, p) == 1) { exact = false; break; }
        if (!exact) continue;
        if (contains_K_) {
            // evaluate omega_vec at zeta -> x, mod p, compare with omega_root
            Int acc = 0, xp = 1;
            for (std::size_t b = 0; b < phi_; ++b) {
                acc = imod(acc + omega_vec_[b].get_num() * xp, p);  // denominators are 1
                xp = imod(xp * x, p);
            }
            if (acc != imod(omega_root, p)) continue;
        }
        zimg = x;
        break;
    }
    if (zimg == 0) {
        if (W_ == 1) zimg = 1;
        else throw InputError("reduce_padic: no compatible root-of-unity image mod p");
    }
    Int zt = teichmuller(zimg, p, N);

    Int acc = 0;
    Int zp = 1;
    for (std::size_t b = 0; b < phi_; ++b) {
        const Rat& c = v.coords()[b];
        if (c != 0) {
            if (imod(c.get_den(), p) == 0) throw InputError("reduce_padic: denominator not a p-adic unit");
            acc = imod(acc + c.get_num() * inv_mod(c.get_den(), q) * zp, q);
        }
        zp = imod(zp * zt, q);
    }
    if (!contains_K_) {
        Int accw = 0;
        zp = 1;
        for (std::size_t b = 0; b < phi_; ++b) {
            const Rat& c = v.coords()[phi_ + b];
            if (c != 0) {
                if (imod(c.get_den(), p) == 0) throw InputError("reduce_padic: denominator not a p-adic unit");
                accw = imod(accw + c.get_num() * inv_mod(c.get_den(), q) * zp, q);
            }
            zp = imod(zp * zt, q);
        }
        acc = imod(acc + accw * omega_root, q);
    }
    return acc;
}

RElt::RElt(const ValueRing* ring, std::vector<Rat> coords) : ring_(ring), c_(std::move(coords)) {
    if (!ring_) throw InputError("RElt: null ring");
    if (c_.size() != ring_->dim()) throw InputError("RElt: wrong coordinate count");
    for (auto& q : c_) q.canonicalize();
}

void RElt::check_same(const RElt& o) const {
    if (!ring_ || !o.ring_) throw InputError("operation on null ring element");
    if (ring_ != o.ring_ && !(ring_->D() == o.ring_->D() && ring_->W() == o.ring_->W()))
        throw InputError("operation mixes distinct value rings");
}

RElt RElt::operator+(const RElt& o) const {
    check_same(o);
    std::vector<Rat> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] + o.c_[i];
    return RElt(ring_, std::move(c));
}

RElt RElt::operator-(const RElt& o) const {
    check_same(o);
    std::vector<Rat> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] - o.c_[i];
    return RElt(ring_, std::move(c));
}

RElt RElt::operator-() const {
    std::vector<Rat> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
    return RElt(ring_, std::move(c));
}

RElt RElt::operator*(const Rat& s) const {
    std::vector<Rat> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] * s;
    return RElt(ring_, std::move(c));
}

RElt RElt::operator*(const RElt& o) const {
    check_same(o);
    const ValueRing& R = *ring_;
    std::size_t phi = R.phi();
    if (R.field_in_cyclotomic()) return RElt(ring_, R.mul_cyclo(c_, o.c_));
    auto lo = [&](const std::vector<Rat>& v) { return std::vector<Rat>(v.begin(), v.begin() + phi); };
    auto hi = [&](const std::vector<Rat>& v) { return std::vector<Rat>(v.begin() + phi, v.end()); };
    std::vector<Rat> u1 = lo(c_), v1 = hi(c_), u2 = lo(o.c_), v2 = hi(o.c_);
    // (u1 + v1 w)(u2 + v2 w) with w^2 = s w + t
    std::vector<Rat> uu = R.mul_cyclo(u1, u2), vv = R.mul_cyclo(v1, v2);
    std::vector<Rat> uv = R.mul_cyclo(u1, v2), vu = R.mul_cyclo(v1, u2);
    std::vector<Rat> out(2 * phi, 0);
    for (std::size_t b = 0; b < phi; ++b) {
        out[b] = uu[b] + Rat(R.omega_t()) * vv[b];
        out[phi + b] = uv[b] + vu[b] + Rat(R.omega_s()) * vv[b];
    }
    return RElt(ring_, std::move(out));
}

bool RElt::operator==(const RElt& o) const {
    if (!ring_ && !o.ring_) return true;
    check_same(o);
    return c_ == o.c_;
}

bool RElt::is_zero() const {
    for (const auto& q : c_)
        if (q != 0) return false;
    return true;
}

bool RElt::is_one() const {
    if (c_[0] != 1) return false;
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

bool RElt::is_integral() const {
    for (const auto& q : c_)
        if (q.get_den() != 1) return false;
    return true;
}

bool RElt::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rat RElt::as_rat() const {
    if (!is_rational()) throw InputError("as_rat: element is not rational");
    return c_[0];
}

RElt RElt::conj() const {
    const ValueRing& R = *ring_;
    std::size_t phi = R.phi();
    auto conj_cyclo = [&](const std::vector<Rat>& v) {
        std::vector<Rat> acc(phi, 0);
        for (std::size_t b = 0; b < phi; ++b) {
            if (v[b] == 0) continue;
            auto z = R.zeta_w_pow(-static_cast<long>(b));
            for (std::size_t k = 0; k < phi; ++k) acc[k] += v[b] * z[k];
        }
        return acc;
    };
    if (R.field_in_cyclotomic()) return RElt(ring_, conj_cyclo(c_));
    std::vector<Rat> u(c_.begin(), c_.begin() + phi), v(c_.begin() + phi, c_.end());
    std::vector<Rat> cu = conj_cyclo(u), cv = conj_cyclo(v);
    // conj(omega) = s - omega
    std::vector<Rat> out(2 * phi, 0);
    for (std::size_t b = 0; b < phi; ++b) {
        out[b] = cu[b] + Rat(R.omega_s()) * cv[b];
        out[phi + b] = -cv[b];
    }
    return RElt(ring_, std::move(out));
}

RElt RElt::inverse() const {
    RElt cj = conj();
    RElt nm = (*this) * cj;
    if (!nm.is_rational() || nm.as_rat() == 0)
        throw InputError("inverse: element times its conjugate is not a nonzero rational");
    return cj * (Rat(1) / nm.as_rat());
}

RElt RElt::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    RElt acc = ring_->one(), base = *this;
    unsigned long u = static_cast<unsigned long>(e);
    while (u) {
        if (u & 1) acc = acc * base;
        base = base * base;
        u >>= 1;
    }
    return acc;
}

std::string RElt::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ';';
        os << c_[i].get_str();
    }
    return os.str();
}

}  // namespace anticyc::arith

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "anticyc/bigint.hpp"

namespace anticyc::arith {

class ValueRing;

// Element of a ValueRing; rational coordinates over the ring's Z-basis carry
// the fraction layer (denominators are always rational integers).
class RElt {
public:
    RElt() : ring_(nullptr) {}
    RElt(const ValueRing* ring, std::vector<Rat> coords);

    const ValueRing* ring() const { return ring_; }
    const std::vector<Rat>& coords() const { return c_; }

    RElt operator+(const RElt& o) const;
    RElt operator-(const RElt& o) const;
    RElt operator-() const;
    RElt operator*(const RElt& o) const;
    RElt operator*(const Rat& s) const;
    bool operator==(const RElt& o) const;
    bool operator!=(const RElt& o) const { return !(*this == o); }

    bool is_zero() const;
    bool is_one() const;
    bool is_integral() const;  // all denominators 1
    bool is_rational() const;  // lies in Q . 1
    Rat as_rat() const;        // requires is_rational()

    RElt conj() const;  // complex conjugation
    // Inverse via v * conj(v); requires that product to be a nonzero rational
    // (true for every monomial value: root of unity times quadratic integer).
    RElt inverse() const;
    RElt pow(long e) const;  // negative e via inverse()

    std::string str() const;  // deterministic, for witnesses and hashing

private:
    const ValueRing* ring_;
    std::vector<Rat> c_;
    void check_same(const RElt& o) const;
};

// Values ring for one quadratic discriminant D < 0 and root-of-unity order M:
// the subring of C generated by the quadratic integer omega and a primitive
// M-th root of unity.  Internally the cyclotomic part has order
// W = lcm(M, w(D)) so the roots of unity of the field are honestly
// identified; when |D| | W the whole field sits inside Q(zeta_W) (omega is a
// cyclotomic integer via the quadratic Gauss sum) and the ring is Z[zeta_W],
// otherwise it is the free rank-2 module Z[zeta_W] + omega Z[zeta_W].
class ValueRing {
public:
    ValueRing(long D, long M);

    long D() const { return D_; }
    long M() const { return M_; }
    long W() const { return W_; }
    bool field_in_cyclotomic() const { return contains_K_; }
    std::size_t phi() const { return phi_; }
    std::size_t dim() const { return dim_; }
    long omega_s() const { return s_; }
    long omega_t() const { return t_; }
    long unit_count() const { return wK_; }

    RElt zero() const;
    RElt one() const;
    RElt from_rat(const Rat& q) const;
    RElt from_int(const Int& n) const { return from_rat(Rat(n)); }
    RElt zeta() const { return zeta_pow(1); }  // primitive M-th root
    RElt zeta_pow(long j) const;               // zeta_M^j
    RElt omega() const;
    RElt embed_quad(const Int& x, const Int& y) const;  // x + y omega

    // Ring homomorphism into Z/p^N.  zeta_W maps to a Teichmueller W-th root
    // of unity (needs W | p-1) and omega to omega_root, which must satisfy
    // omega's minimal polynomial mod p^N; the cyclotomic image is chosen
    // compatibly with omega_root when the field lies in the cyclotomic part.
    Int reduce_padic(const RElt& v, const Int& p, int N, const Int& omega_root) const;

    // Same element viewed in a ring with M' a multiple of M (same D).
    static RElt coerce(const ValueRing& target, const RElt& v);

    const std::vector<Int>& cyclotomic_poly() const { return phi_poly_; }

private:
    long D_, M_, W_, wK_, s_, t_;
    bool contains_K_;
    std::size_t phi_, dim_;
    std::vector<Int> phi_poly_;             // Phi_W, monic, degree phi_
    std::vector<std::vector<Int>> zred_;    // zeta_W^j for j in [0, 2 phi - 2]
    std::vector<Rat> omega_vec_;            // omega in the cyclotomic basis (contained case)

    friend class RElt;
    std::vector<Rat> mul_cyclo(const std::vector<Rat>& a, const std::vector<Rat>& b) const;
    std::vector<Rat> zeta_w_pow(long j) const;  // zeta_W^j as full element coords (cyclo slot)
};

}  // namespace anticyc::arith

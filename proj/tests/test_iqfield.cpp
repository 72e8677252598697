#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anticyc/iqfield.hpp"

using namespace anticyc;
using namespace anticyc::iqfield;

namespace {

// chi_D(a) for composite a, multiplicatively from the prime symbols.
int chi(long D, long a) {
    int v = 1;
    for (const auto& [p, e] : factorize(Int(a))) {
        int k = arith::kronecker_symbol(Int(D), p);
        if (k == 0) return 0;
        if (e % 2) v *= k;
    }
    return v;
}

// Dirichlet's class number formula: h = w/(2|D|) |sum a chi_D(a)|.
long h_by_character_sum(long D) {
    IQField K(D);
    Int s = 0;
    for (long a = 1; a < -D; ++a) s += Int(a) * chi(D, a);
    Int num = Int(K.unit_count()) * abs(s);
    Int den = Int(2) * Int(-D);
    if (num % den != 0) throw std::logic_error("class number formula not integral");
    return to_long(num / den);
}

bool is_fundamental_disc(long D) {
    if (D >= 0) return false;
    auto squarefree = [](long n) {
        for (long d = 2; d * d <= n; ++d)
            if (n % (d * d) == 0) return false;
        return true;
    };
    long r = ((D % 4) + 4) % 4;
    if (r == 1) return squarefree(-D);
    if (r == 0) {
        long m = D / 4;
        long mr = ((m % 4) + 4) % 4;
        return (mr == 2 || mr == 3) && squarefree(m % 2 == 0 ? -m / 2 : -m);
    }
    return false;
}

}  // namespace

TEST_CASE("field arithmetic") {
    IQField K(-4);
    CHECK(K.s() == 0);
    CHECK(K.t() == -1);
    CHECK(K.unit_count() == 4);
    QuadInt g{2, 1};
    CHECK(K.norm(g) == 5);
    CHECK(K.trace(g) == 4);
    CHECK(K.conj(g) == QuadInt{2, -1});
    CHECK(K.mul(g, K.conj(g)) == QuadInt{5, 0});
    CHECK(K.pow(g, 2) == QuadInt{3, 4});

    IQField K7(-7);
    CHECK(K7.s() == 1);
    CHECK(K7.t() == -2);
    CHECK(K7.unit_count() == 2);
    QuadInt w{0, 1};
    CHECK(K7.norm(w) == 2);
    CHECK(K7.mul(w, w) == QuadInt{-2, 1});  // omega^2 = omega - 2
    CHECK(IQField(-3).units().size() == 6);
    CHECK_THROWS_AS(IQField(-5), InputError);  // not a discriminant
}

TEST_CASE("splitting types") {
    IQField K7(-7);
    CHECK(splitting_type(K7, 11) == Splitting::Split);
    CHECK(splitting_type(K7, 7) == Splitting::Ramified);
    CHECK(splitting_type(K7, 3) == Splitting::Inert);
    CHECK(splitting_type(K7, 2) == Splitting::Split);  // -7 = 1 mod 8
    IQField K4(-4);
    CHECK(splitting_type(K4, 2) == Splitting::Ramified);
    CHECK(splitting_type(K4, 5) == Splitting::Split);
    CHECK(splitting_type(K4, 3) == Splitting::Inert);
}

TEST_CASE("primes above and conjugates") {
    IQField K(-4);
    auto [P, Q] = primes_above(K, 5);
    CHECK(P.norm() == 5);
    CHECK(Q.norm() == 5);
    CHECK(P != Q);
    CHECK(P.b() < Q.b());  // designated prime listed first
    CHECK(P.conjugate() == Q);
    CHECK(P.mul(Q) == Ideal::principal(K, QuadInt{5, 0}));
    CHECK(P.mul(P) != Ideal::principal(K, QuadInt{5, 0}));

    auto [R, R2] = primes_above(K, 2);
    CHECK(R == R2);
    CHECK(R.norm() == 2);
    CHECK(R.mul(R) == Ideal::principal(K, QuadInt{2, 0}));

    auto [I, I2] = primes_above(K, 3);
    CHECK(I == I2);
    CHECK(I.norm() == 9);
    CHECK(I == Ideal::principal(K, QuadInt{3, 0}));

    IQField K7(-7);
    for (long ell : {11L, 23L, 29L, 2L}) {
        auto [A, B] = primes_above(K7, ell);
        CHECK(A.norm() == ell);
        CHECK(A.conjugate() == B);
        CHECK(A.mul(B) == Ideal::principal(K7, QuadInt{ell, 0}));
    }
}

TEST_CASE("ideal containment, reduction, coprimality") {
    IQField K(-4);
    QuadInt g{2, 1};
    Ideal I = Ideal::principal(K, g);
    CHECK(I.norm() == 5);
    CHECK(I.contains(g));
    CHECK(I.contains(K.mul(g, QuadInt{-3, 7})));
    CHECK_FALSE(I.contains(QuadInt{1, 0}));
    QuadInt r = I.reduce(QuadInt{17, 23});
    CHECK(I.contains(K.sub(QuadInt{17, 23}, r)));
    CHECK(r == I.reduce(r));
    auto [P, Q] = primes_above(K, 5);
    CHECK(I.divides(I.mul(P)));
    CHECK_FALSE(P.is_coprime_to(P));
    CHECK(P.is_coprime_to(Q));
    CHECK(P.is_coprime_to(primes_above(K, 13).first));
    CHECK(Ideal::whole_ring(K).is_whole_ring());

    // from_generators agrees with principal, and respects products
    CHECK(Ideal::from_generators(K, {g}) == I);
    QuadInt h{1, 3};
    CHECK(Ideal::from_generators(K, {K.mul(g, h)}) == I.mul(Ideal::principal(K, h)));
    CHECK(Ideal::from_generators(K, {QuadInt{4, 2}, QuadInt{5, 0}}) == I);  // (2+i)(2-i)=5, (2+i)*2
    CHECK_THROWS_AS((void)Ideal::from_hnf(K, 5, 1, 1), InputError);  // 1+i not in a norm-5 module
}

TEST_CASE("ideal enumeration matches the zeta coefficient formula") {
    // #ideals of norm n equals sum_{d | n} chi_D(d), for every class number.
    for (long D : {-4L, -7L, -23L}) {
        IQField K(D);
        long B = 2000;
        auto table = enumerate_ideals(K, B);
        for (long n = 1; n <= B; ++n) {
            long want = 0;
            for (long d = 1; d <= n; ++d)
                if (n % d == 0) want += chi(D, d);
            auto it = table.find(n);
            long got = it == table.end() ? 0 : static_cast<long>(it->second.size());
            CHECK_MESSAGE(got == want, "D=", D, " n=", n);
            if (got != want) return;
        }
    }
}

TEST_CASE("ideal enumeration with small oracle and coprime filter") {
    IQField K(-4);
    auto t = enumerate_ideals(K, 5);
    CHECK(t[1].size() == 1);
    CHECK(t[2].size() == 1);
    CHECK(t[3].size() == 0);
    CHECK(t[4].size() == 1);
    CHECK(t[5].size() == 2);
    for (const auto& [n, ideals] : t)
        for (const auto& I : ideals) CHECK(I.norm() == n);

    auto [P2, _] = primes_above(K, 2);
    auto c = enumerate_ideals(K, 10, P2);
    CHECK(c[2].size() == 0);
    CHECK(c[4].size() == 0);
    CHECK(c[5].size() == 2);
    CHECK(c[10].size() == 0);
    CHECK(c[9].size() == 1);
}

TEST_CASE("principal generators") {
    IQField K(-4);
    Ideal I = Ideal::from_hnf(K, 5, 2, 1);
    QuadInt g = principal_generator(I);
    CHECK(K.norm(g) == 5);
    CHECK(I.contains(g));
    CHECK(Ideal::principal(K, g) == I);
    CHECK(g == QuadInt{2, 1});  // lexicographically greatest associate

    // a generator is recovered up to units for random principal ideals
    for (long x = 1; x <= 6; ++x)
        for (long y = 1; y <= 6; ++y) {
            QuadInt q{x, y};
            QuadInt back = principal_generator(Ideal::principal(K, q));
            CHECK(Ideal::principal(K, back) == Ideal::principal(K, q));
        }

    IQField K23(-23);
    auto [P, Q] = primes_above(K23, 2);
    CHECK(P != Q);
    CHECK_THROWS_AS((void)principal_generator(P), NotPrincipal);
    CHECK_THROWS_AS((void)principal_generator(P.pow(2)), NotPrincipal);
    CHECK(K23.norm(principal_generator(P.pow(3))) == 8);  // order 3 class
}

TEST_CASE("class groups: known structures") {
    {
        ClassGroup C(IQField(-4));
        CHECK(C.h() == 1);
        CHECK(C.abstract().invariants().empty());
    }
    CHECK(ClassGroup(IQField(-7)).h() == 1);
    {
        ClassGroup C(IQField(-23));
        CHECK(C.h() == 3);
        CHECK(C.abstract().invariants() == std::vector<Int>{3});
    }
    {
        ClassGroup C(IQField(-47));
        CHECK(C.h() == 5);
        CHECK(C.abstract().invariants() == std::vector<Int>{5});
    }
    {
        ClassGroup C(IQField(-84));
        CHECK(C.h() == 4);
        CHECK(C.abstract().invariants() == std::vector<Int>{2, 2});
    }
}

TEST_CASE("class numbers match the character-sum formula") {
    for (long D = -3; D > -200; --D) {
        if (!is_fundamental_disc(D)) continue;
        ClassGroup C((IQField(D)));
        CHECK_MESSAGE(C.h() == h_by_character_sum(D), "D=", D);
    }
}

TEST_CASE("form composition and ideal correspondence") {
    for (long D : {-23L, -47L, -84L}) {
        IQField K(D);
        ClassGroup C(K);
        const auto& G = C.abstract();
        QForm one = C.principal_form();
        for (const auto& f : C.forms()) {
            CHECK(ClassGroup::reduce(K, f) == f);
            CHECK(C.compose(f, one) == f);
            CHECK(C.form_of_ideal(C.ideal_of_form(f)) == f);
            for (const auto& g : C.forms()) {
                QForm fg = C.compose(f, g);
                CHECK(C.compose(g, f) == fg);
                // coordinates are a homomorphism
                CHECK(C.class_coords(fg) == G.op(C.class_coords(f), C.class_coords(g)));
            }
        }
        // principal ideals land in the identity class
        CHECK(G.is_id(C.class_coords(C.forms()[C.class_of_ideal(Ideal::principal(K, QuadInt{3, 2}))])));
        // the class of a prime times its conjugate is trivial
        auto [P, Q] = primes_above(K, Int(11));
        auto cp = C.class_coords(C.forms()[C.class_of_ideal(P)]);
        auto cq = C.class_coords(C.forms()[C.class_of_ideal(Q)]);
        CHECK(G.is_id(G.op(cp, cq)));
    }
}

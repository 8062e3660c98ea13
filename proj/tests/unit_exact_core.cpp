#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "symschrod/error.hpp"
#include "symschrod/laurent.hpp"
#include "symschrod/matrix.hpp"

using namespace symschrod;

namespace {

struct Rng {
    std::uint64_t s = 0x243F6A8885A308D3ull;
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    std::int64_t small(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

LaurentPoly random_poly(Rng& rng, std::size_t nvars, int max_deg, int min_deg = 0) {
    LaurentPoly p(nvars);
    int terms = static_cast<int>(rng.next() % 6) + 1;
    for (int k = 0; k < terms; ++k) {
        Monomial m(nvars);
        for (std::size_t v = 0; v < nvars; ++v)
            m.exps[v] = static_cast<int>(rng.small(min_deg, max_deg));
        p.add_term(m, GaussianRational(Rational(rng.small(-5, 5), rng.small(1, 4)),
                                       Rational(rng.small(-2, 2))));
    }
    return p;
}

}  // namespace

TEST_CASE("bigint arithmetic and division") {
    CHECK(BigInt::from_string("123456789012345678901234567890").to_string() ==
          "123456789012345678901234567890");
    CHECK((BigInt(-7) + BigInt(3)).to_string() == "-4");
    BigInt a = BigInt::from_string("987654321987654321987654321");
    BigInt b = BigInt::from_string("12345678901234567");
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    CHECK(q * b + r == a);
    CHECK(r.abs() < b.abs());
    CHECK(BigInt::gcd(BigInt(48), BigInt(-36)).to_string() == "12");

    Rng rng;
    for (int i = 0; i < 200; ++i) {
        BigInt x(rng.small(-1000000, 1000000));
        BigInt y(rng.small(-999, 999));
        x = x * x * x;  // make it multi-limb
        if (y.is_zero()) continue;
        BigInt qq, rr;
        BigInt::divmod(x, y, qq, rr);
        CHECK(qq * y + rr == x);
        CHECK(rr.abs() < y.abs());
    }
}

TEST_CASE("rationals reduce and compare") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(3, -6).den() > BigInt(0));
    CHECK(Rational(0, 17).to_string() == "0");
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK(Rational(7, 3).inverse() == Rational(3, 7));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(exact_sqrt(Rational(9, 4)).value() == Rational(3, 2));
    CHECK(!exact_sqrt(Rational(2)).has_value());
    CHECK(!exact_sqrt(Rational(-4)).has_value());
}

TEST_CASE("gaussian rationals") {
    GaussianRational z{Rational(1, 2), Rational(-3)};
    CHECK(z.conj().conj() == z);
    CHECK(z.norm2() == Rational(1, 4) + Rational(9));
    CHECK(z * z.inverse() == GaussianRational(1));
    CHECK((GaussianRational::i() * GaussianRational::i()) == GaussianRational(Rational(-1)));
}

TEST_CASE("poly arithmetic examples") {
    // (x1 + t)(x1 - t) = x1^2 - t^2
    LaurentPoly x = LaurentPoly::variable(2, 1), t = LaurentPoly::variable(2, 0);
    LaurentPoly prod = (x + t) * (x - t);
    CHECK(prod == x * x - t * t);

    Rng rng;
    for (int i = 0; i < 20; ++i) {
        LaurentPoly p = random_poly(rng, 2, 3, -2);
        CHECK(p + LaurentPoly(2) == p);
    }
    LaurentPoly two_xm2 = LaurentPoly::variable(2, 1, -2).scale(GaussianRational(2));
    CHECK(two_xm2.scale(GaussianRational(Rational(3, 2))) ==
          LaurentPoly::variable(2, 1, -2).scale(GaussianRational(3)));

    LaurentPoly other_arity(3);
    CHECK_THROWS_AS((void)(two_xm2 + other_arity), Error);
}

TEST_CASE("poly differentiation with Laurent exponents") {
    LaurentPoly two_xm2 = LaurentPoly::variable(2, 1, -2).scale(GaussianRational(2));
    CHECK(two_xm2.diff(1) == LaurentPoly::variable(2, 1, -3).scale(GaussianRational(-4)));

    LaurentPoly x = LaurentPoly::variable(2, 1), t = LaurentPoly::variable(2, 0);
    CHECK((x * x - t * t).diff(0) == t.scale(GaussianRational(-2)));

    // fourth derivative of 2 x^-2: repeated power rule as the oracle
    Rational expect(2);
    for (int k = 0; k < 4; ++k) expect = expect * Rational(-2 - k);
    CHECK(two_xm2.diff(1, 4) == LaurentPoly::variable(2, 1, -6).scale(GaussianRational(expect)));
    CHECK(expect == Rational(240));
}

TEST_CASE("poly evaluation and poles") {
    LaurentPoly two_xm2 = LaurentPoly::variable(2, 1, -2).scale(GaussianRational(2));
    auto v = two_xm2.eval({{0.0, 0.0}, {0.5, 0.0}});
    CHECK(std::abs(v - std::complex<double>(8.0, 0.0)) < 1e-14);

    LaurentPoly x = LaurentPoly::variable(2, 1), t = LaurentPoly::variable(2, 0);
    CHECK(std::abs((x * x - t * t).eval({{1, 0}, {1, 0}})) < 1e-14);

    CHECK_THROWS_AS((void)LaurentPoly::variable(1, 0, -1).eval({{0.0, 0.0}}), Error);
}

TEST_CASE("Leibniz rule and mixed partials on random pairs") {
    Rng rng;
    for (int i = 0; i < 30; ++i) {
        LaurentPoly p = random_poly(rng, 2, 3, -2), q = random_poly(rng, 2, 3, -2);
        for (std::size_t v : {0u, 1u})
            CHECK((p * q).diff(v) == p.diff(v) * q + p * q.diff(v));
        CHECK(p.diff(0).diff(1) == p.diff(1).diff(0));
    }
}

TEST_CASE("evaluation is multiplicative at well-conditioned points") {
    Rng rng;
    std::vector<std::complex<double>> pt{{0.7, 0.1}, {1.3, -0.4}};
    for (int i = 0; i < 20; ++i) {
        LaurentPoly p = random_poly(rng, 2, 3, 0), q = random_poly(rng, 2, 3, 0);
        auto lhs = (p * q).eval(pt);
        auto rhs = p.eval(pt) * q.eval(pt);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("exact substitution of a variable") {
    // (x^2 - t^2) at t = 3/2
    LaurentPoly x = LaurentPoly::variable(2, 1), t = LaurentPoly::variable(2, 0);
    LaurentPoly p = (x * x - t * t).substitute(0, Rational(3, 2));
    CHECK(p == x * x - LaurentPoly::constant(2, GaussianRational(Rational(9, 4))));
    CHECK(!p.depends_on(0));
    // a pole at zero is rejected, positive powers of zero vanish
    CHECK_THROWS_AS((void)LaurentPoly::variable(2, 1, -1).substitute(1, Rational(0)), Error);
    CHECK(LaurentPoly::variable(2, 1, 2).substitute(1, Rational(0)).is_zero());
}

TEST_CASE("antiderivative") {
    LaurentPoly xm1 = LaurentPoly::variable(1, 0, -1);
    CHECK_THROWS_AS((void)xm1.antiderivative(0), Error);
    Rng rng;
    for (int i = 0; i < 20; ++i) {
        LaurentPoly p = random_poly(rng, 2, 3, 0);
        CHECK(p.antiderivative(1).diff(1) == p);
    }
}

TEST_CASE("rref examples") {
    RationalMatrix a(2, 2);
    a.set(0, 0, GaussianRational(1));
    a.set(0, 1, GaussianRational(2));
    a.set(1, 0, GaussianRational(2));
    a.set(1, 1, GaussianRational(4));
    auto r = rref_nullspace(a);
    CHECK(r.rank == 1);
    REQUIRE(r.nullspace.size() == 1);
    CHECK(r.nullspace[0][0] == GaussianRational(Rational(-2)));
    CHECK(r.nullspace[0][1] == GaussianRational(1));

    RationalMatrix id(3, 3);
    for (int i = 0; i < 3; ++i) id.set(i, i, GaussianRational(1));
    auto ri = rref_nullspace(id);
    CHECK(ri.rank == 3);
    CHECK(ri.nullspace.empty());

    RationalMatrix z(2, 3);
    auto rz = rref_nullspace(z);
    CHECK(rz.rank == 0);
    CHECK(rz.nullspace.size() == 3);
}

TEST_CASE("rank-nullity and exactness of the nullspace on random sparse matrices") {
    Rng rng;
    for (int trial = 0; trial < 8; ++trial) {
        std::size_t rows = 20 + rng.next() % 31, cols = 30 + rng.next() % 51;
        RationalMatrix a(rows, cols);
        for (std::size_t k = 0; k < rows * 3; ++k) {
            a.add(rng.next() % rows, rng.next() % cols,
                  GaussianRational(Rational(rng.small(-4, 4), rng.small(1, 3))));
        }
        auto r = rref_nullspace(a);
        CHECK(r.rank + r.nullspace.size() == cols);
        for (const auto& v : r.nullspace) CHECK(is_zero_vector(a.apply(v)));
    }
}

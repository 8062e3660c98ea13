#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "symschrod/error.hpp"
#include "symschrod/third_order.hpp"

using namespace symschrod;

namespace {

LaurentPoly xpow(int k) { return LaurentPoly::variable(2, 1, k); }
LaurentPoly tpow(int k) { return LaurentPoly::variable(2, 0, k); }
LaurentPoly cpoly(Rational r) { return LaurentPoly::constant(2, GaussianRational(r)); }
const LaurentPoly kZero{2};
const LaurentPoly kOne = cpoly(Rational(1));

PotentialFamily inverse_square_family() {
    PotentialFamily fam;
    fam.id = FamilyId::W213;
    fam.omega1 = Rational(0);
    fam.exact_potential = xpow(-2).scale(GaussianRational(2));
    return fam;
}

std::vector<double> unit_grid(std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) / (n - 1);
    return g;
}

struct Rng {
    std::uint64_t s = 0x2545F4914F6CDD1Dull;
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

LaurentPoly random_laurent_u(Rng& rng) {
    LaurentPoly u(2);
    for (int k = 0; k < 4; ++k) {
        int e = static_cast<int>(rng.small(-3, 3));
        u.add_term(Monomial::unit(2, 1, e), GaussianRational(Rational(rng.small(-3, 3), rng.small(1, 2))));
    }
    return u;
}

}  // namespace

TEST_CASE("five determining residuals on closed-form data") {
    // free cubic momentum direction
    ThirdOrderCoeffs free_h{kOne, kZero, kZero, kZero};
    for (const auto& r : third_order_residuals(free_h, kZero)) CHECK(r.is_zero());

    // U = 2/x^2 with the coefficients generated by a = 1
    LaurentPoly u = xpow(-2).scale(GaussianRational(2));
    ThirdOrderCoeffs h = coeffs_from_abc(kOne, kZero, kZero, kZero, u);
    CHECK(h.h1 == xpow(-2).scale(GaussianRational(12)));
    CHECK(h.h0.is_zero());
    for (const auto& r : third_order_residuals(h, u)) CHECK(r.is_zero());

    // linear potential breaks the chain in the third equation
    auto res = third_order_residuals(free_h, xpow(1));
    CHECK(res[2] == cpoly(Rational(-6)));
}

TEST_CASE("coeffs_from_abc examples and failure") {
    ThirdOrderCoeffs ident = coeffs_from_abc(kZero, kZero, kZero, kOne, kZero);
    CHECK(ident.h3.is_zero());
    CHECK(ident.h2.is_zero());
    CHECK(ident.h1.is_zero());
    CHECK(ident.h0 == kOne);

    ThirdOrderCoeffs lin = coeffs_from_abc(tpow(1), kZero, kZero, kZero, kZero);
    CHECK(lin.h3 == tpow(1));
    CHECK(lin.h2 == xpow(1).scale(GaussianRational(-2)));
    CHECK(lin.h1.is_zero());
    CHECK(lin.h0.is_zero());

    CHECK_THROWS_AS((void)coeffs_from_abc(kOne, kZero, kZero, kZero, xpow(-1)), Error);
    CHECK_THROWS_AS((void)coeffs_from_abc(xpow(1), kZero, kZero, kZero, kZero), Error);
}

TEST_CASE("compatibility condition examples") {
    LaurentPoly u = xpow(-2).scale(GaussianRational(2));
    CHECK(compatibility_residual(u, kOne, kZero, kZero).is_zero());
    CHECK(compatibility_residual(kZero, cpoly(Rational(5)), kZero, kZero).is_zero());
    CHECK(compatibility_residual(xpow(2), kOne, kZero, kZero) ==
          xpow(2).scale(GaussianRational(-36)));
}

TEST_CASE("compatibility equals the second derivative of the Weierstrass residual") {
    Rng rng;
    for (int i = 0; i < 10; ++i) {
        LaurentPoly u = random_laurent_u(rng);
        LaurentPoly compat = compatibility_residual(u, kOne, kZero, kZero);
        LaurentPoly wres = u.diff(1, 2) - (u * u).scale(GaussianRational(3));
        CHECK(compat == wres.diff(1, 2));
    }
}

TEST_CASE("family residual values") {
    PotentialFamily fam = inverse_square_family();
    CHECK(family_residual(fam).is_zero());

    fam.exact_potential = kZero;
    CHECK(family_residual(fam).is_zero());

    PotentialFamily p214;
    p214.id = FamilyId::P214;
    p214.omega2 = Rational(1);
    p214.exact_potential = xpow(1);
    LaurentPoly expect = xpow(2).scale(GaussianRational(-3)) + xpow(1).scale(GaussianRational(-8));
    CHECK(family_residual(p214) == expect);

    // U = 2/x^2 is a member of the drift family for every omega3
    PotentialFamily e215;
    e215.id = FamilyId::E215;
    e215.omega3 = Rational(7, 2);
    e215.exact_potential = xpow(-2).scale(GaussianRational(2));
    CHECK(family_residual(e215).is_zero());

    // and U = -omega3 x is the linear member
    e215.exact_potential = xpow(1).scale(GaussianRational(Rational(-7, 2)));
    CHECK(family_residual(e215).is_zero());

    // oscillator member of the E216 family: U = w^2 x^2, w5 = 2 w^2
    PotentialFamily e216;
    e216.id = FamilyId::E216;
    e216.omega4 = Rational(-4);  // w = 2
    e216.omega5 = Rational(8);
    e216.exact_potential = xpow(2).scale(GaussianRational(4));
    CHECK(family_residual(e216).is_zero());
}

TEST_CASE("explicit operators") {
    PotentialFamily fam = inverse_square_family();
    auto ops = build_operator(fam);
    REQUIRE(ops.size() == 1);
    // Q = i d^3 - 3 i x^-2 d + 3 i x^-3
    DiffOp expect(1);
    const GaussianRational i = GaussianRational::i();
    expect.add_term({0, 3}, LaurentPoly::constant(2, i));
    expect.add_term({0, 1}, xpow(-2).scale(i * GaussianRational(Rational(-3))));
    expect.add_term({0, 0}, xpow(-3).scale(i * GaussianRational(3)));
    CHECK(ops[0].op == expect);

    PotentialFamily freef;
    freef.id = FamilyId::W213;
    freef.exact_potential = kZero;
    auto free_ops = build_operator(freef);
    DiffOp p3(1);
    p3.add_term({0, 3}, LaurentPoly::constant(2, i));
    CHECK(free_ops[0].op == p3);

    PotentialFamily e216;
    e216.id = FamilyId::E216;
    e216.omega4 = Rational(-1);
    e216.omega5 = Rational(2);
    e216.exact_potential = xpow(2);
    auto pair = build_operator(e216);
    REQUIRE(pair.size() == 2);
    CHECK(pair[0].time_exp == -i);  // Q+ pairs with exp(-i w t)
    CHECK(pair[1].time_exp == i);

    PotentialFamily bad = e216;
    bad.omega4 = Rational(1);
    CHECK_THROWS_AS((void)build_operator(bad), Error);
    bad.omega4 = Rational(0);
    CHECK_THROWS_AS((void)build_operator(bad), Error);

    // an irrational frequency is numeric-only: the exact route refuses it,
    // the coefficient profile still works
    PotentialFamily irr = e216;
    irr.omega4 = Rational(-2);
    CHECK_THROWS_AS((void)build_operator(irr), Error);
    CHECK(operator_coeffs(irr, +1).a.terms.size() == 1);
}

TEST_CASE("operator identity p^3 + (3/4){U,p} = 2pH + Up/2 + iU'/4") {
    Rng rng;
    const GaussianRational i = GaussianRational::i();
    for (int trial = 0; trial < 8; ++trial) {
        LaurentPoly u = random_laurent_u(rng);
        PotentialFamily fam;
        fam.id = FamilyId::W213;
        fam.exact_potential = u;
        // left side: p^3 + (3/4){U, p} as built
        DiffOp p = DiffOp::derivative(1, 1).scale(-i);
        DiffOp q = op_compose(p, op_compose(p, p)) +
                   anticommutator(DiffOp::multiplication(u), p)
                       .scale(GaussianRational(Rational(3, 4)));
        // right side: 2 p H + (1/2) U p + (i/4) U'
        DiffOp h = (DiffOp::derivative(1, 1, 2).scale(GaussianRational(Rational(-1))) +
                    DiffOp::multiplication(u))
                       .scale(GaussianRational(Rational(1, 2)));
        DiffOp rhs = op_compose(p, h).scale(GaussianRational(2)) +
                     op_compose(DiffOp::multiplication(u), p).scale(GaussianRational(Rational(1, 2))) +
                     DiffOp::multiplication(u.diff(1)).scale(i * GaussianRational(Rational(1, 4)));
        CHECK(q == rhs);
    }
}

TEST_CASE("exact verification and its equivalence with the residual route") {
    PotentialFamily fam = inverse_square_family();
    CHECK(exact_verify(fam).pass);

    PotentialFamily corrupted = fam;
    corrupted.exact_potential = xpow(-2).scale(GaussianRational(3));
    ExactVerifyResult bad = exact_verify(corrupted);
    CHECK(!bad.pass);
    CHECK(!bad.residuals[0].is_zero());

    // two routes agree: commutator test <=> all five residuals vanish
    for (const PotentialFamily& f : {fam, corrupted}) {
        ThirdOrderCoeffs h = coeffs_from_abc(kOne, kZero, kZero, kZero, *f.exact_potential);
        bool all_zero = true;
        for (const auto& r : third_order_residuals(h, *f.exact_potential))
            all_zero = all_zero && r.is_zero();
        CHECK(all_zero == exact_verify(f).pass);
    }

    // drift family member with a genuine omega3 dependence
    PotentialFamily e215;
    e215.id = FamilyId::E215;
    e215.omega3 = Rational(2);
    e215.exact_potential = xpow(1).scale(GaussianRational(Rational(-2)));
    CHECK(exact_verify(e215).pass);
    e215.omega3 = Rational(-2);  // wrong pairing must fail
    CHECK(!exact_verify(e215).pass);

    // oscillator pair, exactly
    PotentialFamily e216;
    e216.id = FamilyId::E216;
    e216.omega4 = Rational(-1);
    e216.omega5 = Rational(2);
    e216.exact_potential = xpow(2);
    CHECK(exact_verify(e216).pass);
}

TEST_CASE("integrating the Painleve family and checking against the series oracle") {
    PotentialFamily p214;
    p214.id = FamilyId::P214;
    p214.omega2 = Rational(1);
    OdeSolution sol = ode_integrate(p214, 0.0, 1.0, {0.0, 0.0}, 20, 1e-12);
    CHECK(sol.series_check_abscissa == doctest::Approx(0.1));
    CHECK(sol.series_check_error <= 1e-10);
    CHECK(sol.xs.size() == 20);

    auto rep = numeric_verify(p214, sol, unit_grid(20), 1e-8, operator_coeffs(p214));
    CHECK(rep.pass);
    CHECK(rep.max_abs_residual <= 1e-8);
}

TEST_CASE("known exact solution reproduced by the integrator") {
    PotentialFamily w = inverse_square_family();
    OdeSolution sol = ode_integrate(w, 1.0, 2.0, {2.0, -4.0}, 20, 1e-12);
    for (std::size_t i = 0; i < sol.xs.size(); ++i)
        CHECK(std::abs(sol.u[i] - 2.0 / (sol.xs[i] * sol.xs[i])) <= 1e-9);
    auto rep = numeric_verify(w, sol, unit_grid(10), 1e-10, operator_coeffs(w));
    CHECK(rep.pass);
}

TEST_CASE("zero data for the Weierstrass family stays zero") {
    PotentialFamily w;
    w.id = FamilyId::W213;
    w.omega1 = Rational(0);
    OdeSolution sol = ode_integrate(w, 0.0, 1.0, {0.0, 0.0}, 10, 1e-12);
    for (double u : sol.u) CHECK(std::abs(u) < 1e-14);
}

TEST_CASE("blow-up guard reports the last safe abscissa") {
    PotentialFamily w;
    w.id = FamilyId::W213;
    CHECK_THROWS_AS((void)ode_integrate(w, 0.0, 5.0, {50.0, 500.0}, 10, 1e-10, 1e6), Error);
}

TEST_CASE("corrupted coefficients and perturbation scaling") {
    PotentialFamily p214;
    p214.id = FamilyId::P214;
    p214.omega2 = Rational(1);
    OdeSolution sol = ode_integrate(p214, 0.0, 1.0, {0.0, 0.0}, 20, 1e-12);

    NumericCoeffs bad = operator_coeffs(p214);
    bad.h_scale[2] = 1.01;  // corrupt h1
    auto rep = numeric_verify(p214, sol, unit_grid(10), 1e-8, bad);
    CHECK(rep.max_abs_residual > 1e-4);

    // residuals scale linearly in the injected perturbation
    NumericCoeffs eps1 = operator_coeffs(p214), eps2 = operator_coeffs(p214);
    eps1.h_scale[2] = 1.0 + 1e-3;
    eps2.h_scale[2] = 1.0 + 2e-3;
    double r1 = numeric_verify(p214, sol, unit_grid(10), 1.0, eps1).max_abs_residual;
    double r2 = numeric_verify(p214, sol, unit_grid(10), 1.0, eps2).max_abs_residual;
    CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("oscillator-type pair verifies numerically on a generic member") {
    PotentialFamily e216;
    e216.id = FamilyId::E216;
    e216.omega4 = Rational(-1);
    e216.omega5 = Rational(2);
    OdeSolution sol = ode_integrate(e216, 0.0, 1.0, {0.0, 0.3, -0.2}, 20, 1e-12);
    for (int branch : {+1, -1}) {
        auto rep = numeric_verify(e216, sol, unit_grid(10), 1e-7, operator_coeffs(e216, branch));
        CHECK(rep.pass);
    }
    // detuned frequency in the operator only: must fail
    PotentialFamily detuned = e216;
    detuned.omega4 = Rational(-121, 100);
    auto repbad = numeric_verify(e216, sol, unit_grid(10), 1e-7, operator_coeffs(detuned, +1));
    CHECK(repbad.max_abs_residual > 1e-2);

    CHECK_THROWS_AS((void)operator_coeffs(PotentialFamily{FamilyId::E216, {}, {}, {}, Rational(1)}),
                    Error);
}

TEST_CASE("numeric compatibility diagnostic distinguishes the drift pairing") {
    PotentialFamily e215;
    e215.id = FamilyId::E215;
    e215.omega3 = Rational(2);
    OdeSolution sol = ode_integrate(e215, 0.0, 1.0, {0.4, -0.3, 0.2}, 12, 1e-12);
    // correct pairing: b = -omega3 t
    auto good = numeric_compatibility(e215, sol, TimeFunc::constant(1.0),
                                      TimeFunc::monomial(-2.0, 1), TimeFunc::zero(), unit_grid(5));
    double gmax = 0;
    for (double v : good) gmax = std::max(gmax, v);
    CHECK(gmax < 1e-6);
    auto bad = numeric_compatibility(e215, sol, TimeFunc::constant(1.0),
                                     TimeFunc::monomial(+2.0, 1), TimeFunc::zero(), unit_grid(5));
    double bmax = 0;
    for (double v : bad) bmax = std::max(bmax, v);
    CHECK(bmax > 1e-2);
}

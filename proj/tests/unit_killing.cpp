#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symschrod/error.hpp"
#include "symschrod/killing.hpp"

using namespace symschrod;

TEST_CASE("ansatz degree bounds") {
    AnsatzBounds b = ansatz_bounds(1, 1, 0);
    CHECK(b.x_degree[1] == 0);
    CHECK(b.x_degree[0] == 1);

    AnsatzBounds b3 = ansatz_bounds(3, 1, 0);
    CHECK(b3.x_degree == std::vector<int>{3, 2, 1, 0});

    AnsatzBounds bm = ansatz_bounds(3, 1, 2);
    for (int j = 0; j <= 3; ++j) CHECK(bm.x_degree[j] == b3.x_degree[j] + 2);

    AnsatzBounds b2 = ansatz_bounds(2, 3, 0);
    CHECK(b2.x_degree == std::vector<int>{2, 3, 4});  // conservative n + j for m > 1
    CHECK_THROWS_AS((void)ansatz_bounds(2, 1, -1), Error);
}

TEST_CASE("first-order free basis in one dimension") {
    SymmetryBasis basis = solve_free(1, 1);
    CHECK(basis.operators.size() == 3);

    const DiffOp l = build_L(1, Rational(1), LaurentPoly(2));
    for (const auto& q : basis.operators) CHECK(commutator_with_L(l, q).is_zero());

    // spans the identity, the translation, and the Galilei boost t d_x - i x
    CHECK(in_span(DiffOp::identity(1), basis));
    CHECK(in_span(DiffOp::derivative(1, 1), basis));
    DiffOp boost(1);
    boost.add_term({0, 1}, LaurentPoly::variable(2, 0));
    boost += DiffOp::multiplication(LaurentPoly::variable(2, 1)).scale(-GaussianRational::i());
    CHECK(in_span(boost, basis));

    // something outside: the plain coordinate x is not a free symmetry
    CHECK(!in_span(DiffOp::multiplication(LaurentPoly::variable(2, 1)), basis));
}

TEST_CASE("n=1 bases contain translations and rotations for m up to 3") {
    for (std::size_t m : {1u, 2u, 3u}) {
        SymmetryBasis basis = solve_free(1, m);
        for (std::size_t a = 1; a <= m; ++a) CHECK(in_span(DiffOp::derivative(m, a), basis));
        for (std::size_t a = 1; a <= m; ++a) {
            for (std::size_t b = a + 1; b <= m; ++b) {
                DiffOp rot(m);
                DerivIndex da(m + 1, 0), db(m + 1, 0);
                da[a] = 1;
                db[b] = 1;
                rot.add_term(db, LaurentPoly::variable(m + 1, a));
                rot.add_term(da, -LaurentPoly::variable(m + 1, b));
                CHECK(in_span(rot, basis));
            }
        }
    }
}

TEST_CASE("rotation operator arises from its Killing vector") {
    SymmetryBasis basis = solve_free(1, 2);
    CHECK(basis.operators.size() == 6);
    SymTensorField k(1, 2);
    k.set_component({1}, LaurentPoly::variable(3, 2));
    k.set_component({2}, -LaurentPoly::variable(3, 1));
    CHECK(in_span(nested_anticommutator(k), basis));
}

TEST_CASE("second order in one dimension contains products of first-order symmetries") {
    SymmetryBasis b1 = solve_free(1, 1);
    SymmetryBasis b2 = solve_free(2, 1);
    CHECK(b2.operators.size() == 6);
    for (const auto& p : b1.operators) {
        for (const auto& q : b1.operators) {
            DiffOp sym_prod = op_compose(p, q) + op_compose(q, p);
            CHECK(in_span(sym_prod, b2));
        }
    }
}

TEST_CASE("count formula values") {
    CHECK(count_formula(0).to_string() == "1");
    CHECK(count_formula(1).to_string() == "9");
    CHECK(count_formula(2).to_string() == "40");
    CHECK_THROWS_AS((void)count_formula(-1), Error);
}

TEST_CASE("dimension report in one and three dimensions") {
    DimensionReport one = dimension_report(1, 1);
    REQUIRE(one.rows.size() == 2);
    CHECK(one.rows[0].computed_dim == 1);
    CHECK(one.rows[0].raw_match);  // N_0 = 1
    CHECK(one.rows[1].computed_dim == 3);
    CHECK(!one.rows[1].raw_match);  // computed 3, formula 9: recorded mismatch
    CHECK(!one.rows[1].increment_match);

    DimensionReport three = dimension_report(1, 3);
    CHECK(three.rows[0].computed_dim == 1);
    CHECK(three.rows[1].computed_dim == 10);
    CHECK(three.rows[1].increment == 9);
    CHECK(three.rows[1].increment_match);  // the count matches order-exactly-n at m = 3
}

TEST_CASE("mass enters the basis exactly") {
    SymmetryBasis basis = solve_free(1, 1, Rational(3, 2));
    CHECK(basis.operators.size() == 3);
    DiffOp boost(1);
    boost.add_term({0, 1}, LaurentPoly::variable(2, 0));
    boost += DiffOp::multiplication(LaurentPoly::variable(2, 1))
                 .scale(-GaussianRational::i() * GaussianRational(Rational(3, 2)));
    CHECK(in_span(boost, basis));
}

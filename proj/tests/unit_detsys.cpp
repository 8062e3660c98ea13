#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "symschrod/detsys.hpp"
#include "symschrod/error.hpp"

using namespace symschrod;

namespace {

struct Rng {
    std::uint64_t s = 0xA0761D6478BD642Full;
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

LaurentPoly random_poly(Rng& rng, std::size_t nvars, int max_deg, bool no_t = false) {
    LaurentPoly p(nvars);
    int terms = static_cast<int>(rng.next() % 5) + 1;
    for (int k = 0; k < terms; ++k) {
        Monomial m(nvars);
        for (std::size_t v = no_t ? 1 : 0; v < nvars; ++v)
            m.exps[v] = static_cast<int>(rng.small(0, max_deg));
        p.add_term(m, GaussianRational(Rational(rng.small(-3, 3), rng.small(1, 3))));
    }
    return p;
}

LaurentPoly dense_potential(Rng& rng, std::size_t dim, int degree) {
    LaurentPoly p(dim + 1);
    std::vector<int> xe(dim, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int rem) {
        if (pos == dim) {
            std::int64_t num = rng.small(-3, 3);
            if (num != 0) {
                Monomial m(dim + 1);
                for (std::size_t a = 0; a < dim; ++a) m.exps[a + 1] = xe[a];
                p.add_term(m, GaussianRational(Rational(num, rng.small(1, 3))));
            }
            return;
        }
        for (int e = 0; e <= rem; ++e) {
            xe[pos] = e;
            rec(pos + 1, rem - e);
        }
        xe[pos] = 0;
    };
    rec(0, degree);
    return p;
}

AnsatzBounds uniform_bounds(int order, int bound) {
    AnsatzBounds b;
    b.x_degree.assign(order + 1, bound);
    b.t_degree.assign(order + 1, bound);
    return b;
}

}  // namespace

TEST_CASE("n=1 m=1 system has the expected three-equation structure") {
    DetSystem sys = generate_det_system(1, 1, false);
    REQUIRE(sys.equations.size() == 3);

    // closure: Sym(d K_1) = 0
    const DetEquation& top = sys.equations[0];
    CHECK(top.free_rank == 2);
    REQUIRE(top.terms.size() == 1);
    CHECK(top.terms[0].rank == 1);
    CHECK(top.terms[0].k_deriv == std::vector<int>{1});
    CHECK(top.terms[0].sym_grad);

    // rank 1: i K1dot + (1/2M) d K0
    const DetEquation& mid = sys.equations[1];
    CHECK(mid.free_rank == 1);
    REQUIRE(mid.terms.size() == 2);
    CHECK(mid.terms[0].coefficient == GaussianRational::i());
    CHECK(mid.terms[0].t_deriv == 1);
    CHECK(mid.terms[1].rank == 0);
    CHECK(mid.terms[1].coefficient == GaussianRational(Rational(1, 2)));

    // rank 0: i K0dot + 2 K^b d_b V
    const DetEquation& bot = sys.equations[2];
    CHECK(bot.free_rank == 0);
    REQUIRE(bot.terms.size() == 2);
    CHECK(bot.terms[0].coefficient == GaussianRational::i());
    CHECK(bot.terms[1].rank == 1);
    CHECK(bot.terms[1].v_deriv == std::vector<int>{1});
    CHECK(bot.terms[1].coefficient == GaussianRational(2));
}

TEST_CASE("symmetrized gradient examples") {
    // m = 1: single component, the average is trivial
    SymTensorField k1(1, 1);
    k1.set_component({1}, LaurentPoly::variable(2, 1, 3));
    SymTensorField g1 = symmetrized_gradient(k1);
    CHECK(*g1.component({1, 1}) == LaurentPoly::variable(2, 1, 2).scale(GaussianRational(3)));

    // m = 2, K = (x2, 0): component (1,2) of Sym(dK) equals 1/2
    SymTensorField k(1, 2);
    k.set_component({1}, LaurentPoly::variable(3, 2));
    SymTensorField g = symmetrized_gradient(k);
    REQUIRE(g.component({1, 2}) != nullptr);
    CHECK(*g.component({1, 2}) == LaurentPoly::constant(3, GaussianRational(Rational(1, 2))));
    CHECK(g.component({1, 1}) == nullptr);

    // rotation Killing vector (x2, -x1) has vanishing symmetrized gradient
    SymTensorField rot(1, 2);
    rot.set_component({1}, LaurentPoly::variable(3, 2));
    rot.set_component({2}, -LaurentPoly::variable(3, 1));
    SymTensorField grot = symmetrized_gradient(rot);
    CHECK(grot.components().empty());
}

TEST_CASE("full symmetrization is an idempotent projector") {
    Rng rng;
    for (int trial = 0; trial < 6; ++trial) {
        OrderedTensor t;
        t.rank = 3;
        t.dim = 2;
        for (int i = 0; i < 5; ++i) {
            std::vector<int> idx{static_cast<int>(rng.small(1, 2)),
                                 static_cast<int>(rng.small(1, 2)),
                                 static_cast<int>(rng.small(1, 2))};
            t.add(idx, random_poly(rng, 3, 2));
        }
        OrderedTensor once = full_symmetrize(t);
        OrderedTensor twice = full_symmetrize(once);
        CHECK(once.comps == twice.comps);
    }
}

TEST_CASE("symmetrized gradient agrees with the ordered-tensor route") {
    Rng rng;
    for (int trial = 0; trial < 6; ++trial) {
        SymTensorField k(2, 2);
        for (const auto& idx : sorted_multi_indices(2, 2))
            k.set_component(idx, random_poly(rng, 3, 2));
        // explicit gradient as an ordered rank-3 tensor, then project
        OrderedTensor grad;
        grad.rank = 3;
        grad.dim = 2;
        for (const auto& idx : sorted_multi_indices(2, 2)) {
            // ordered components of a symmetric tensor repeat per ordering
            for (int rep = 0; rep < (idx[0] == idx[1] ? 1 : 2); ++rep) {
                std::vector<int> perm_base = rep ? std::vector<int>{idx[1], idx[0]} : idx;
                for (int a = 1; a <= 2; ++a) {
                    std::vector<int> full{a, perm_base[0], perm_base[1]};
                    grad.add(full, k.component(idx)->diff(a));
                }
            }
        }
        OrderedTensor sym = full_symmetrize(grad);
        SymTensorField direct = symmetrized_gradient(k);
        for (const auto& idx : sorted_multi_indices(3, 2)) {
            const LaurentPoly* d = direct.component(idx);
            auto it = sym.comps.find(idx);
            LaurentPoly expected = it == sym.comps.end() ? LaurentPoly(3) : it->second;
            LaurentPoly got = d ? *d : LaurentPoly(3);
            CHECK(got == expected);
        }
    }
}

TEST_CASE("stationary systems decouple into even and odd rank chains") {
    for (std::size_t m : {1u, 2u}) {
        for (int n = 1; n <= 4; ++n) {
            DetSystem sys = generate_det_system(n, m, true);
            for (const auto& eq : sys.equations) {
                // no time derivatives at all
                for (const auto& t : eq.terms) CHECK(t.t_deriv == 0);
                // referenced ranks all share one parity, opposite to free_rank
                auto ranks = DetSystem::referenced_ranks(eq);
                REQUIRE(!ranks.empty());
                int parity = ranks[0] % 2;
                for (int r : ranks) CHECK(r % 2 == parity);
                CHECK((eq.free_rank % 2) != parity);
            }
        }
    }
}

TEST_CASE("instantiate: hand-solved free case and linear potential") {
    UnknownBasis basis(1, 1, uniform_bounds(1, 2));
    DetSystem sys = generate_det_system(1, 1, false);

    RationalMatrix a0 = instantiate(sys, basis, LaurentPoly(2));
    CHECK(rref_nullspace(a0).nullspace.size() == 3);

    RationalMatrix a1 = instantiate(sys, basis, LaurentPoly::variable(2, 1));
    auto r1 = rref_nullspace(a1);
    CHECK(r1.nullspace.size() == 3);
    // the solution space contains a vector with time-dependent rank-1 part
    bool has_accelerated = false;
    for (const auto& v : r1.nullspace) {
        auto tensors = basis.tensors_from_vector(v);
        const LaurentPoly* k1 = tensors[1].component({1});
        if (k1 && k1->depends_on(0)) has_accelerated = true;
    }
    CHECK(has_accelerated);
}

TEST_CASE("constant-only ansatz keeps the identity operator") {
    UnknownBasis basis(1, 1, uniform_bounds(1, 0));
    DetSystem sys = generate_det_system(1, 1, false);
    auto r = rref_nullspace(instantiate(sys, basis, LaurentPoly(2)));
    CHECK(r.nullspace.size() >= 1);
}

TEST_CASE("oracle equivalence across cases") {
    Rng rng;
    struct Case {
        int n;
        std::size_t m;
        int bound;
        bool random_v;
    };
    for (const Case& c : {Case{1, 1, 2, false}, Case{2, 1, 4, false}, Case{1, 1, 2, true},
                          Case{2, 2, 3, true}}) {
        LaurentPoly v(c.m + 1);
        if (c.random_v) v = dense_potential(rng, c.m, 2);
        UnknownBasis basis(c.n, c.m, uniform_bounds(c.n, c.bound));
        DetSystem sys = generate_det_system(c.n, c.m, false);
        RationalMatrix a = instantiate(sys, basis, v);
        RationalMatrix b = oracle_system(c.n, c.m, basis, v);
        SpaceComparison cmp = compare_solution_spaces(a, b);
        CAPTURE(c.n);
        CAPTURE(c.m);
        CHECK(cmp.pass);
    }
}

TEST_CASE("oracle equivalence for the isotropic oscillator in two dimensions") {
    LaurentPoly v = LaurentPoly::variable(3, 1, 2) + LaurentPoly::variable(3, 2, 2);
    UnknownBasis basis(2, 2, uniform_bounds(2, 3));
    DetSystem sys = generate_det_system(2, 2, false);
    SpaceComparison cmp =
        compare_solution_spaces(instantiate(sys, basis, v), oracle_system(2, 2, basis, v));
    CHECK(cmp.pass);
}

TEST_CASE("the central transcription experiment: n=3, m=1, V=U/2 generic cubic") {
    Rng rng;
    LaurentPoly u = dense_potential(rng, 1, 3);
    LaurentPoly v = u.scale(GaussianRational(Rational(1, 2)));
    UnknownBasis basis(3, 1, uniform_bounds(3, 3));
    DetSystem sys = generate_det_system(3, 1, false);
    SpaceComparison cmp =
        compare_solution_spaces(instantiate(sys, basis, v), oracle_system(3, 1, basis, v));
    CHECK(cmp.pass);
}

namespace {

// Evaluate one structured equation on explicit tensors and a potential.
LaurentPoly eval_equation(const DetEquation& eq, const std::vector<SymTensorField>& ks,
                          const LaurentPoly& v) {
    LaurentPoly out(v.nvars());
    for (const auto& term : eq.terms) {
        const LaurentPoly* comp = ks[term.rank].component(term.component);
        if (!comp) continue;
        LaurentPoly piece = *comp;
        if (term.t_deriv) piece = piece.diff(0, term.t_deriv);
        for (int a : term.k_deriv) piece = piece.diff(static_cast<std::size_t>(a));
        if (!term.v_deriv.empty()) {
            LaurentPoly dv = v;
            for (int a : term.v_deriv) dv = dv.diff(static_cast<std::size_t>(a));
            piece *= dv;
        }
        out += piece.scale(term.coefficient);
    }
    return out;
}

}  // namespace

TEST_CASE("the n=3 chain is the printed five-equation system under K_j = (-i)^j h_j") {
    // Arbitrary coefficient functions h_j(t, x) and potential U(x); the
    // generated equations must equal the classical chain
    //   h3' ; h2' + 2 h3dot ; 2 h2dot + h1' - 6 h3 U' ;
    //   2 h1dot + h0' - 4 h2 U' ; h0dot - h1 U' + h3 U'''
    // term by term after the diagonal rescaling, with V = U/2 and M = 1.
    Rng rng;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<LaurentPoly> h;
        for (int j = 0; j < 4; ++j) h.push_back(random_poly(rng, 2, 3));
        LaurentPoly u = random_poly(rng, 2, 3, true);
        LaurentPoly v = u.scale(GaussianRational(Rational(1, 2)));

        std::vector<SymTensorField> ks;
        GaussianRational phase{1};
        const GaussianRational minus_i = -GaussianRational::i();
        for (int j = 0; j <= 3; ++j) {
            SymTensorField k(j, 1);
            k.set_component(std::vector<int>(j, 1), h[j].scale(phase));
            ks.push_back(std::move(k));
            phase *= minus_i;
        }

        const LaurentPoly du = u.diff(1), d3u = u.diff(1, 3);
        std::array<LaurentPoly, 5> chain;
        chain[0] = h[3].diff(1);
        chain[1] = h[2].diff(1) + h[3].diff(0).scale(GaussianRational(2));
        chain[2] = h[2].diff(0).scale(GaussianRational(2)) + h[1].diff(1) -
                   (h[3] * du).scale(GaussianRational(6));
        chain[3] = h[1].diff(0).scale(GaussianRational(2)) + h[0].diff(1) -
                   (h[2] * du).scale(GaussianRational(4));
        chain[4] = h[0].diff(0) - h[1] * du + h[3] * d3u;

        const GaussianRational i = GaussianRational::i();
        std::array<GaussianRational, 5> gamma{
            i * GaussianRational(Rational(1, 2)), GaussianRational(Rational(-1, 2)),
            -(i * GaussianRational(Rational(1, 2))), GaussianRational(Rational(1, 2)), i};

        DetSystem sys = generate_det_system(3, 1, false);
        REQUIRE(sys.equations.size() == 5);
        for (int k = 0; k < 5; ++k)
            CHECK(eval_equation(sys.equations[k], ks, v) == chain[k].scale(gamma[k]));
    }
}

TEST_CASE("compare_solution_spaces failure modes") {
    RationalMatrix a(1, 2), b(2, 2);
    // A = 0 (nullspace is everything), B = identity (nullspace trivial)
    b.set(0, 0, GaussianRational(1));
    b.set(1, 1, GaussianRational(1));
    SpaceComparison cmp = compare_solution_spaces(a, b);
    CHECK(!cmp.pass);
    CHECK(!cmp.witness.empty());

    SpaceComparison same = compare_solution_spaces(b, b);
    CHECK(same.pass);

    RationalMatrix c(1, 3);
    CHECK_THROWS_AS((void)compare_solution_spaces(a, c), Error);
}

TEST_CASE("stationary chains agree with the oracle on time-independent ansatz") {
    // On a t-degree-zero ansatz the time-derivative terms vanish identically,
    // so the stationary system must carve out the same solution space as the
    // full commutator.
    Rng rng;
    for (std::size_t m : {1u, 2u}) {
        LaurentPoly v = dense_potential(rng, m, 2);
        AnsatzBounds b;
        b.x_degree.assign(3, 3);
        b.t_degree.assign(3, 0);
        UnknownBasis basis(2, m, b);
        DetSystem stat = generate_det_system(2, m, true);
        RationalMatrix a = instantiate(stat, basis, v);
        RationalMatrix o = oracle_system(2, m, basis, v);
        SpaceComparison cmp = compare_solution_spaces(a, o);
        CAPTURE(m);
        CHECK(cmp.pass);
    }
}

TEST_CASE("oracle equivalence at higher order") {
    Rng rng;
    {
        LaurentPoly v = dense_potential(rng, 1, 3);
        UnknownBasis basis(4, 1, uniform_bounds(4, 3));
        DetSystem sys = generate_det_system(4, 1, false);
        SpaceComparison cmp =
            compare_solution_spaces(instantiate(sys, basis, v), oracle_system(4, 1, basis, v));
        CHECK(cmp.pass);
    }
    {
        LaurentPoly v = dense_potential(rng, 2, 2);
        UnknownBasis basis(3, 2, uniform_bounds(3, 2));
        DetSystem sys = generate_det_system(3, 2, false);
        SpaceComparison cmp =
            compare_solution_spaces(instantiate(sys, basis, v), oracle_system(3, 2, basis, v));
        CHECK(cmp.pass);
    }
}

TEST_CASE("every generated symbol rank is admissible") {
    for (int n : {1, 2, 3}) {
        for (std::size_t m : {1u, 2u}) {
            DetSystem sys = generate_det_system(n, m, false);
            for (const auto& eq : sys.equations)
                for (const auto& t : eq.terms) {
                    CHECK(t.rank >= 0);
                    CHECK(t.rank <= n);
                    CHECK(static_cast<int>(t.component.size()) == t.rank);
                }
        }
    }
}

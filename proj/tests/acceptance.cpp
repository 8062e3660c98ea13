// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "symschrod/error.hpp"
#include "symschrod/killing.hpp"
#include "symschrod/lie.hpp"
#include "symschrod/report.hpp"
#include "symschrod/third_order.hpp"

using namespace symschrod;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool pass, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

LaurentPoly seeded_potential(std::size_t dim, int degree, std::uint64_t seed) {
    LaurentPoly p(dim + 1);
    std::uint64_t s = seed * 0x9E3779B97F4A7C15ull + 0x51ull;
    auto next = [&s] {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    };
    std::vector<int> xe(dim, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int rem) {
        if (pos == dim) {
            std::int64_t num = static_cast<std::int64_t>(next() % 7) - 3;
            if (num != 0) {
                Monomial m(dim + 1);
                for (std::size_t a = 0; a < dim; ++a) m.exps[a + 1] = xe[a];
                p.add_term(m, GaussianRational(
                                  Rational(num, static_cast<std::int64_t>(next() % 3) + 1)));
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

std::vector<double> grid01(std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) / (n - 1);
    return g;
}

std::string run_tool(const std::string& args) {
    std::string cmd = std::string(SYMSCHROD_TOOL_PATH) + " " + args + " 2>/dev/null";
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    std::string out;
    char buf[4096];
    while (pipe && fgets(buf, sizeof buf, pipe.get())) out += buf;
    return out;
}

std::string strip_timing(const std::string& report_text) {
    auto j = nlohmann::json::parse(report_text);
    j.erase("timing");
    return j.dump(2);
}

// 1. Determining-system transcription: instantiate vs commutator oracle.
void criterion1() {
    auto t0 = Clock::now();
    struct Case {
        int n;
        std::size_t m;
        int bound;
    };
    bool all = true;
    std::ostringstream detail;
    for (const Case& c : {Case{1, 1, 3}, Case{2, 1, 4}, Case{3, 1, 4}, Case{2, 2, 3}}) {
        for (bool random_v : {false, true}) {
            LaurentPoly v(c.m + 1);
            if (random_v) v = seeded_potential(c.m, 3, 42);
            AnsatzBounds bounds;
            bounds.x_degree.assign(c.n + 1, c.bound);
            bounds.t_degree.assign(c.n + 1, c.bound);
            UnknownBasis basis(c.n, c.m, bounds);
            DetSystem sys = generate_det_system(c.n, c.m, false);
            SpaceComparison cmp = compare_solution_spaces(instantiate(sys, basis, v),
                                                          oracle_system(c.n, c.m, basis, v));
            all = all && cmp.pass;
            if (!cmp.pass)
                detail << "(" << c.n << "," << c.m << (random_v ? ",V!=0" : ",V=0") << ") "
                       << cmp.witness << "; ";
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    all = all && secs <= 120.0;
    detail << "runtime " << secs << "s (limit 120)";
    criterion(1, "determining-system transcription equals the commutator oracle", all,
              detail.str());
}

// 2. Stationary decoupling: disjoint even/odd rank chains, no time derivatives.
void criterion2() {
    bool all = true;
    for (std::size_t m : {1u, 2u, 3u}) {
        for (int n = 1; n <= 4; ++n) {
            DetSystem sys = generate_det_system(n, m, true);
            for (const auto& eq : sys.equations) {
                auto ranks = DetSystem::referenced_ranks(eq);
                if (ranks.empty()) {
                    all = false;
                    continue;
                }
                int parity = ranks[0] % 2;
                for (int r : ranks) all = all && (r % 2 == parity);
                all = all && ((eq.free_rank % 2) != parity);
                for (const auto& t : eq.terms) all = all && t.t_deriv == 0;
            }
        }
    }
    criterion(2, "stationary systems split into disjoint even/odd rank chains", all);
}

// 3. Free-case bases: exact commutation, saturation-stable dimensions, and
// the closed-form count comparison at m = 3.
void criterion3() {
    auto t0 = Clock::now();
    bool all = true;
    std::ostringstream detail;
    struct Case {
        int n;
        std::size_t m;
    };
    for (const Case& c :
         {Case{1, 1}, Case{2, 1}, Case{3, 1}, Case{1, 2}, Case{2, 2}, Case{1, 3}}) {
        try {
            SymmetryBasis basis = solve_free(c.n, c.m);  // saturation margins +1, +2 inside
            detail << "dim(" << c.n << "," << c.m << ")=" << basis.operators.size() << " ";
        } catch (const std::exception& e) {
            all = false;
            detail << "(" << c.n << "," << c.m << ") failed: " << e.what() << "; ";
        }
    }
    DimensionReport rep = dimension_report(2, 3);
    std::array<std::string, 3> formulas{"1", "9", "40"};
    for (int n = 0; n <= 2; ++n) {
        all = all && rep.rows[n].formula.to_string() == formulas[n];
        detail << "m=3 n=" << n << ": computed=" << rep.rows[n].computed_dim
               << " incr=" << rep.rows[n].increment << " N=" << rep.rows[n].formula.to_string()
               << (rep.rows[n].increment_match ? " (increment matches)" : " (mismatch)") << " ";
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    all = all && secs <= 300.0;
    detail << "runtime " << secs << "s (limit 300)";
    criterion(3, "free-potential bases commute exactly and saturate", all, detail.str());
}

// 4. Third-order exact pipeline on U = 2/x^2.
void criterion4() {
    auto t0 = Clock::now();
    PotentialFamily fam;
    fam.id = FamilyId::W213;
    fam.omega1 = Rational(0);
    fam.exact_potential = LaurentPoly::variable(2, 1, -2).scale(GaussianRational(2));

    bool all = family_residual(fam).is_zero();
    LaurentPoly one = LaurentPoly::constant(2, GaussianRational(1)), zero(2);
    all = all && compatibility_residual(*fam.exact_potential, one, zero, zero).is_zero();
    all = all && exact_verify(fam).pass;

    PotentialFamily corrupted = fam;
    corrupted.exact_potential = LaurentPoly::variable(2, 1, -2).scale(GaussianRational(3));
    all = all && !exact_verify(corrupted).pass;

    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    all = all && secs <= 1.0;
    criterion(4, "third-order exact checks on U = 2/x^2 with negative control", all,
              "runtime " + std::to_string(secs) + "s (limit 1)");
}

// 5. Third-order numeric pipeline on the Painleve-I family.
void criterion5() {
    auto t0 = Clock::now();
    PotentialFamily fam;
    fam.id = FamilyId::P214;
    fam.omega2 = Rational(1);
    OdeSolution sol = ode_integrate(fam, 0.0, 1.0, {0.0, 0.0}, 20, 1e-12);
    bool all = sol.series_check_error <= 1e-10;
    auto rep = numeric_verify(fam, sol, grid01(20), 1e-8, operator_coeffs(fam));
    all = all && rep.pass;
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    all = all && secs <= 30.0;
    std::ostringstream detail;
    detail << "series err " << sol.series_check_error << " at x=" << sol.series_check_abscissa
           << ", max residual " << rep.max_abs_residual << ", runtime " << secs << "s";
    criterion(5, "Painleve-I: series oracle <= 1e-10 and residuals <= 1e-8 on a 20x20 grid", all,
              detail.str());
}

// 6. Oscillator-type pair with numeric phi.
void criterion6() {
    auto t0 = Clock::now();
    PotentialFamily fam;
    fam.id = FamilyId::E216;
    fam.omega4 = Rational(-1);
    fam.omega5 = Rational(2);
    OdeSolution sol = ode_integrate(fam, 0.0, 1.0, {0.0, 0.3, -0.2}, 20, 1e-12);
    bool all = true;
    std::ostringstream detail;
    for (int branch : {+1, -1}) {
        auto rep = numeric_verify(fam, sol, grid01(20), 1e-7, operator_coeffs(fam, branch));
        all = all && rep.pass;
        detail << (branch > 0 ? "Q+ " : "Q- ") << rep.max_abs_residual << " ";
    }
    bool err_caught = false;
    try {
        PotentialFamily bad = fam;
        bad.omega4 = Rational(1);
        (void)operator_coeffs(bad, +1);
    } catch (const Error&) {
        err_caught = true;
    }
    all = all && err_caught;
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    all = all && secs <= 30.0;
    detail << "omega4>=0 rejected: " << (err_caught ? "yes" : "no") << ", runtime " << secs << "s";
    criterion(6, "oscillator-type pair passes at 1e-7; omega4 >= 0 errors", all, detail.str());
}

// 7. Full classification catalog at tol 1e-9, 100 seeded samples, i-form.
void criterion7() {
    auto t0 = Clock::now();
    bool all = true;
    std::ostringstream detail;
    std::size_t rows_checked = 0;
    for (const std::string& row : catalog_rows()) {
        for (int m : {1, 2, 3}) {
            RowReport rep;
            try {
                rep = check_row(row, m, {}, 100, 42, 1e-9, NseForm::SchrodingerI);
            } catch (const Error&) {
                all = false;
                detail << row << "@m=" << m << " threw; ";
                continue;
            }
            ++rows_checked;
            if (!rep.pass) {
                all = false;
                detail << row << "@m=" << m << " failed; ";
            }
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    all = all && secs <= 300.0;
    detail << rows_checked << " row checks, runtime " << secs << "s (limit 300)";
    criterion(7, "every table row (plus the generic-F base) passes at 1e-9 for m in {1,2,3}", all,
              detail.str());
}

// 8. Negative controls: detuned rows must fail hard.
void criterion8() {
    NegativeSweepReport rep = negative_sweep(2, 60, 42, 1e-9);
    bool all = rep.pass && rep.cases.size() == 3;
    std::ostringstream detail;
    for (const auto& c : rep.cases) detail << c.name << ": median " << c.median_normalized << "; ";
    criterion(8, "negative sweep medians >= 1e-2 with controls re-passing", all, detail.str());
}

// 9. Determinism: byte-identical reports (timing excluded) from the CLI.
void criterion9() {
    const std::array<std::string, 4> runs{
        "third-order --family painleve1 --omega2 1 --numeric --samples 20",
        "third-order --family oscillator-type --omega4 -1 --omega5 2 --numeric "
        "--init 0 --init 0.3 --init -0.2 --samples 20 --tol 1e-7",
        "lie-check --row 2.8 --dim 3 --samples 100 --seed 42 --tol 1e-9",
        "lie-check --negative-sweep --dim 2 --samples 40 --seed 42",
    };
    bool all = true;
    std::ostringstream detail;
    for (const auto& args : runs) {
        std::string a = run_tool(args);
        std::string b = run_tool(args);
        if (a.empty() || strip_timing(a) != strip_timing(b)) {
            all = false;
            detail << "non-deterministic or empty: " << args << "; ";
        }
    }
    criterion(9, "repeated CLI runs are byte-identical once timing is stripped", all,
              detail.str());
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}

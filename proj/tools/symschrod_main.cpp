#include <chrono>
#include <fstream>
#include <iostream>
#include <functional>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "symschrod/error.hpp"
#include "symschrod/killing.hpp"
#include "symschrod/lie.hpp"
#include "symschrod/parse.hpp"
#include "symschrod/report.hpp"
#include "symschrod/third_order.hpp"

using nlohmann::json;
using namespace symschrod;

namespace {

using Clock = std::chrono::steady_clock;

struct Emitter {
    std::string subcommand;
    json config = json::object();
    json results = json::object();
    std::size_t checks = 0;
    std::size_t failures = 0;
    Clock::time_point start = Clock::now();
    std::string report_path;
    bool with_timing = true;

    void check(bool ok) {
        ++checks;
        if (!ok) ++failures;
    }

    int finish() {
        json rep;
        rep["tool"] = {{"name", "symschrod"}, {"version", tool_version()}, {"schema", 1}};
        rep["subcommand"] = subcommand;
        rep["config"] = config;
        json conv = json::object();
        for (const auto& [k, v] : convention_notes()) conv[k] = v;
        rep["conventions"] = conv;
        rep["results"] = results;
        bool pass = failures == 0;
        rep["summary"] = {{"pass", pass}, {"checks", checks}, {"failures", failures}};
        if (with_timing)
            rep["timing"] = {
                {"seconds", std::chrono::duration<double>(Clock::now() - start).count()}};
        std::string text = rep.dump(2);
        text.push_back('\n');
        if (report_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(report_path);
            out << text;
        }
        return pass ? 0 : 1;
    }
};

Rational parse_rational_arg(const std::string& s) { return Rational::from_string(s); }

// Deterministic dense polynomial with small rational coefficients.
LaurentPoly seeded_random_potential(std::size_t dim, int degree, std::uint64_t seed) {
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

json comparison_json(const SpaceComparison& cmp) {
    json j;
    j["pass"] = cmp.pass;
    j["rank_instantiate"] = cmp.rank_a;
    j["rank_oracle"] = cmp.rank_b;
    j["nullity_instantiate"] = cmp.nullity_a;
    j["nullity_oracle"] = cmp.nullity_b;
    if (!cmp.witness.empty()) j["witness"] = cmp.witness;
    return j;
}

json field_report_json(const FieldReport& f) {
    return json{{"field", f.label},
                {"max_normalized_residual", f.max_normalized},
                {"median_normalized_residual", f.median_normalized},
                {"max_conjugation_mismatch", f.max_conj_mismatch},
                {"pass", f.pass}};
}

PotentialFamily make_family(const std::string& name, const std::string& w1, const std::string& w2,
                            const std::string& w3, const std::string& w4, const std::string& w5,
                            const std::string& potential_expr) {
    PotentialFamily fam;
    if (name == "weierstrass")
        fam.id = FamilyId::W213;
    else if (name == "painleve1")
        fam.id = FamilyId::P214;
    else if (name == "linear-drift")
        fam.id = FamilyId::E215;
    else if (name == "oscillator-type")
        fam.id = FamilyId::E216;
    else
        throw Error(ErrorKind::BadArgument, "unknown family: " + name);
    fam.omega1 = parse_rational_arg(w1);
    fam.omega2 = parse_rational_arg(w2);
    fam.omega3 = parse_rational_arg(w3);
    fam.omega4 = parse_rational_arg(w4);
    fam.omega5 = parse_rational_arg(w5);
    if (!potential_expr.empty()) fam.exact_potential = parse_potential(potential_expr, 1);
    return fam;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symmetry-operator workbench for linear and nonlinear Schrodinger equations"};
    app.require_subcommand(1);

    // ---- detgen ----
    auto* detgen = app.add_subcommand("detgen", "emit the determining-equation system");
    int dg_order = 1;
    std::size_t dg_dim = 1;
    bool dg_stationary = false;
    std::string dg_mass = "1", dg_format = "json", dg_out, dg_report;
    detgen->add_option("--order,-n", dg_order, "operator order n")->required();
    detgen->add_option("--dim,-m", dg_dim, "spatial dimension m")->required();
    detgen->add_flag("--stationary", dg_stationary, "drop time derivatives (stationary chains)");
    detgen->add_option("--mass", dg_mass, "mass M as a rational");
    detgen->add_option("--format", dg_format, "json | latex")
        ->check(CLI::IsMember({"json", "latex"}));
    detgen->add_option("--out", dg_out, "write the document to this path (default stdout)");
    detgen->add_option("--report", dg_report, "write the run report to this path");

    // ---- freesolve ----
    auto* freesolve = app.add_subcommand("freesolve", "solve the free-potential system exactly");
    int fs_order = 1;
    std::size_t fs_dim = 1;
    int fs_margin = 0;
    std::string fs_mass = "1", fs_out, fs_report;
    bool fs_dim_report = false;
    freesolve->add_option("--order,-n", fs_order, "operator order n")->required();
    freesolve->add_option("--dim,-m", fs_dim, "spatial dimension m")->required();
    freesolve->add_option("--mass", fs_mass, "mass M as a rational");
    freesolve->add_option("--margin", fs_margin, "extra ansatz degree margin");
    freesolve->add_flag("--dimension-report", fs_dim_report,
                        "tabulate dimensions vs the closed-form count up to n");
    freesolve->add_option("--basis-out", fs_out, "write the basis JSON to this path");
    freesolve->add_option("--report", fs_report, "write the run report to this path");

    // ---- third-order ----
    auto* third = app.add_subcommand("third-order", "third-order family pipeline (m=1, V=U/2)");
    std::string to_family = "weierstrass";
    std::string to_w1 = "0", to_w2 = "0", to_w3 = "0", to_w4 = "0", to_w5 = "0";
    std::string to_potential, to_csv, to_report;
    bool to_exact = false, to_numeric = false;
    double to_x0 = 0.0, to_x1 = 1.0, to_tol = 1e-12, to_vtol = 1e-8;
    std::size_t to_samples = 20;
    std::vector<double> to_init;
    third->add_option("--family", to_family, "weierstrass | painleve1 | linear-drift | oscillator-type")
        ->required();
    third->add_option("--omega1", to_w1, "family parameter");
    third->add_option("--omega2", to_w2, "family parameter");
    third->add_option("--omega3", to_w3, "family parameter");
    third->add_option("--omega4", to_w4, "family parameter");
    third->add_option("--omega5", to_w5, "family parameter");
    third->add_option("--potential", to_potential, "exact potential U(x) for the exact route");
    third->add_flag("--exact", to_exact, "run the exact verification route");
    third->add_flag("--numeric", to_numeric, "run the numeric ODE + residual route");
    third->add_option("--x0", to_x0, "integration start");
    third->add_option("--x1", to_x1, "integration end");
    third->add_option("--init", to_init, "initial data (family state layout)");
    third->add_option("--samples", to_samples, "grid samples per axis");
    third->add_option("--ode-tol", to_tol, "integrator tolerance");
    third->add_option("--tol", to_vtol, "residual tolerance");
    third->add_option("--csv", to_csv, "export the ODE solution as CSV");
    third->add_option("--report", to_report, "write the run report to this path");

    // ---- lie-check ----
    auto* lie = app.add_subcommand("lie-check", "verify classification table rows by prolongation");
    std::string lc_row = "base", lc_form = "i", lc_report;
    int lc_dim = 1, lc_table = 0;
    std::size_t lc_samples = 100;
    std::uint64_t lc_seed = 42;
    double lc_tol = 1e-9;
    std::vector<std::string> lc_params;
    bool lc_negative = false, lc_all = false;
    lie->add_option("--table", lc_table, "table number (1 or 2); must agree with --row")
        ->check(CLI::IsMember({1, 2}));
    lie->add_option("--row", lc_row, "table row id (1.1 .. 2.15) or 'base'");
    lie->add_flag("--all", lc_all, "check every catalog row");
    lie->add_option("--dim,-m", lc_dim, "spatial dimension m")->required();
    lie->add_option("--samples", lc_samples, "number of jet samples");
    lie->add_option("--seed", lc_seed, "sampling seed");
    lie->add_option("--tol", lc_tol, "normalized residual tolerance");
    lie->add_option("--form", lc_form, "i | heat")->check(CLI::IsMember({"i", "heat"}));
    lie->add_option("--param", lc_params, "row parameter overrides as name=value");
    lie->add_flag("--negative-sweep", lc_negative, "run the detuned-parameter falsification sweep");
    lie->add_option("--report", lc_report, "write the run report to this path");

    // ---- verify ----
    auto* verify = app.add_subcommand(
        "verify", "compare the generated determining system against the commutator oracle");
    int vf_order = 1;
    std::size_t vf_dim = 1;
    int vf_bound = 3, vf_vdegree = 3;
    std::string vf_mass = "1", vf_potential, vf_report;
    std::uint64_t vf_seed = 42;
    bool vf_random = false;
    verify->add_option("--order,-n", vf_order, "operator order n")->required();
    verify->add_option("--dim,-m", vf_dim, "spatial dimension m")->required();
    verify->add_option("--bound", vf_bound, "ansatz degree bound (x and t)");
    verify->add_option("--mass", vf_mass, "mass M as a rational");
    verify->add_option("--potential", vf_potential, "exact potential V expression");
    verify->add_flag("--random-potential", vf_random, "use a seeded random dense polynomial V");
    verify->add_option("--v-degree", vf_vdegree, "degree of the random potential");
    verify->add_option("--seed", vf_seed, "seed for the random potential");
    verify->add_option("--report", vf_report, "write the run report to this path");

    // ---- catalog ----
    auto* catalog = app.add_subcommand("catalog", "dump the classification catalog");
    std::string cat_out, cat_report;
    catalog->add_option("--out", cat_out, "write the catalog JSON to this path");
    catalog->add_option("--report", cat_report, "write the run report to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Emitter em;
    try {
        if (*detgen) {
            em.subcommand = "detgen";
            em.report_path = dg_report;
            em.config = {{"order", dg_order}, {"dim", dg_dim},       {"stationary", dg_stationary},
                         {"mass", dg_mass},   {"format", dg_format}, {"out", dg_out}};
            DetSystem sys =
                generate_det_system(dg_order, dg_dim, dg_stationary, parse_rational_arg(dg_mass));
            std::string doc =
                dg_format == "latex" ? emit_detsystem_latex(sys) : emit_detsystem_json(sys);
            if (dg_out.empty()) {
                std::cout << doc;
                if (!doc.empty() && doc.back() != '\n') std::cout << "\n";
            } else {
                std::ofstream out(dg_out);
                out << doc;
            }
            em.results["equations"] = sys.equations.size();
            if (dg_format == "json") {
                em.check(parse_detsystem_json(doc) == sys);  // round trip
                em.results["round_trip"] = em.failures == 0;
            }
            if (dg_report.empty()) return em.failures == 0 ? 0 : 1;  // document already on stdout
            return em.finish();
        }

        if (*freesolve) {
            em.subcommand = "freesolve";
            em.report_path = fs_report;
            em.config = {{"order", fs_order},
                         {"dim", fs_dim},
                         {"mass", fs_mass},
                         {"margin", fs_margin},
                         {"dimension_report", fs_dim_report}};
            Rational mass = parse_rational_arg(fs_mass);
            SymmetryBasis basis = solve_free(fs_order, fs_dim, mass, fs_margin);
            em.results["dimension"] = basis.operators.size();
            em.results["all_commute"] = true;  // enforced inside solve_free
            em.check(true);
            BigInt formula = count_formula(fs_order);
            em.results["count_formula"] = formula.to_string();
            if (fs_dim_report) {
                DimensionReport dr = dimension_report(fs_order, fs_dim, mass);
                json rows = json::array();
                for (const auto& r : dr.rows)
                    rows.push_back({{"order", r.order},
                                    {"computed_dim", r.computed_dim},
                                    {"increment", r.increment},
                                    {"formula", r.formula.to_string()},
                                    {"raw_match", r.raw_match},
                                    {"increment_match", r.increment_match}});
                em.results["dimension_table"] = rows;
            }
            if (!fs_out.empty()) {
                std::ofstream out(fs_out);
                out << serialize_basis_json(basis) << "\n";
            }
            return em.finish();
        }

        if (*third) {
            em.subcommand = "third-order";
            em.report_path = to_report;
            em.config = {{"family", to_family}, {"omega1", to_w1},   {"omega2", to_w2},
                         {"omega3", to_w3},     {"omega4", to_w4},   {"omega5", to_w5},
                         {"potential", to_potential}, {"exact", to_exact}, {"numeric", to_numeric},
                         {"x0", to_x0},         {"x1", to_x1},       {"samples", to_samples},
                         {"ode_tol", to_tol},   {"tol", to_vtol}};
            PotentialFamily fam =
                make_family(to_family, to_w1, to_w2, to_w3, to_w4, to_w5, to_potential);
            if (!to_exact && !to_numeric) to_exact = fam.exact_potential.has_value();
            if (to_exact) {
                LaurentPoly res = family_residual(fam);
                em.results["family_residual_zero"] = res.is_zero();
                em.check(res.is_zero());
                ExactVerifyResult ev = exact_verify(fam);
                em.results["exact_verify"] = ev.pass;
                em.check(ev.pass);
            }
            if (to_numeric) {
                if (to_init.empty()) to_init.assign(fam.id == FamilyId::W213 || fam.id == FamilyId::P214 ? 2 : 3, 0.0);
                OdeSolution sol = ode_integrate(fam, to_x0, to_x1, to_init, to_samples, to_tol);
                em.results["series_check_abscissa"] = sol.series_check_abscissa;
                em.results["series_check_error"] = sol.series_check_error;
                em.check(sol.series_check_error <= 1e-9);
                std::vector<double> tgrid(to_samples);
                for (std::size_t i = 0; i < to_samples; ++i)
                    tgrid[i] = static_cast<double>(i) / std::max<std::size_t>(1, to_samples - 1);
                json branches = json::array();
                if (fam.id == FamilyId::E216) {
                    for (int branch : {+1, -1}) {
                        auto rep = numeric_verify(fam, sol, tgrid, to_vtol,
                                                  operator_coeffs(fam, branch));
                        branches.push_back({{"branch", branch > 0 ? "Q+" : "Q-"},
                                            {"max_residual", rep.max_abs_residual},
                                            {"pass", rep.pass}});
                        em.check(rep.pass);
                    }
                } else {
                    auto rep = numeric_verify(fam, sol, tgrid, to_vtol, operator_coeffs(fam));
                    branches.push_back(
                        {{"max_residual", rep.max_abs_residual}, {"pass", rep.pass}});
                    em.check(rep.pass);
                }
                em.results["numeric_verify"] = branches;
                if (!to_csv.empty()) {
                    std::ofstream csv(to_csv);
                    csv << "x,u,du\n";
                    for (std::size_t i = 0; i < sol.xs.size(); ++i)
                        csv << sol.xs[i] << "," << sol.u[i] << "," << sol.du[i] << "\n";
                }
            }
            return em.finish();
        }

        if (*lie) {
            em.subcommand = "lie-check";
            em.report_path = lc_report;
            if (lc_table != 0 && (lc_row == "base" || lc_row[0] != '0' + lc_table))
                throw Error(ErrorKind::BadArgument,
                            "--table " + std::to_string(lc_table) + " does not match --row " + lc_row);
            NseForm form = lc_form == "heat" ? NseForm::Heat : NseForm::SchrodingerI;
            std::map<std::string, double> params;
            for (const auto& kv : lc_params) {
                auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw Error(ErrorKind::BadArgument, "expected name=value: " + kv);
                params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            }
            em.config = {{"row", lc_all ? "all" : lc_row},
                         {"dim", lc_dim},
                         {"samples", lc_samples},
                         {"seed", lc_seed},
                         {"tol", lc_tol},
                         {"form", lc_form},
                         {"negative_sweep", lc_negative}};
            if (lc_negative) {
                NegativeSweepReport sweep = negative_sweep(lc_dim, lc_samples, lc_seed, lc_tol);
                json cases = json::array();
                for (const auto& c : sweep.cases) {
                    cases.push_back({{"case", c.name},
                                     {"median_normalized_residual", c.median_normalized},
                                     {"failed_as_required", c.failed_as_required},
                                     {"control_pass", c.control_pass}});
                    em.check(c.failed_as_required && c.control_pass);
                }
                em.results["required_min"] = sweep.required_min;
                em.results["cases"] = cases;
            } else {
                std::vector<std::string> rows =
                    lc_all ? catalog_rows() : std::vector<std::string>{lc_row};
                json out = json::array();
                for (const auto& row : rows) {
                    RowReport rep = check_row(row, lc_dim, params, lc_samples, lc_seed, lc_tol, form);
                    json jr;
                    jr["row"] = rep.row;
                    jr["pass"] = rep.pass;
                    json fields = json::array();
                    for (const auto& f : rep.fields) fields.push_back(field_report_json(f));
                    json bases = json::array();
                    for (const auto& f : rep.base_fields) bases.push_back(field_report_json(f));
                    jr["fields"] = fields;
                    jr["base_fields"] = bases;
                    if (!rep.theta_variant.empty()) jr["theta_variant"] = rep.theta_variant;
                    out.push_back(std::move(jr));
                    em.check(rep.pass);
                }
                em.results["rows"] = out;
            }
            return em.finish();
        }

        if (*verify) {
            em.subcommand = "verify";
            em.report_path = vf_report;
            em.config = {{"order", vf_order}, {"dim", vf_dim},
                         {"bound", vf_bound}, {"mass", vf_mass},
                         {"potential", vf_potential}, {"random_potential", vf_random},
                         {"v_degree", vf_vdegree}, {"seed", vf_seed}};
            Rational mass = parse_rational_arg(vf_mass);
            LaurentPoly v(vf_dim + 1);
            if (vf_random)
                v = seeded_random_potential(vf_dim, vf_vdegree, vf_seed);
            else if (!vf_potential.empty())
                v = parse_potential(vf_potential, vf_dim);
            AnsatzBounds bounds;
            bounds.x_degree.assign(vf_order + 1, vf_bound);
            bounds.t_degree.assign(vf_order + 1, vf_bound);
            UnknownBasis basis(vf_order, vf_dim, bounds);
            DetSystem sys = generate_det_system(vf_order, vf_dim, false, mass);
            RationalMatrix a = instantiate(sys, basis, v);
            RationalMatrix b = oracle_system(vf_order, vf_dim, basis, v, mass);
            SpaceComparison cmp = compare_solution_spaces(a, b);
            em.results["unknowns"] = basis.size();
            em.results["comparison"] = comparison_json(cmp);
            em.check(cmp.pass);
            return em.finish();
        }

        if (*catalog) {
            em.subcommand = "catalog";
            em.report_path = cat_report;
            json rows = json::array();
            for (const auto& row : catalog_rows()) {
                if (row == "base") continue;
                JetContext ctx(2);
                CatalogEntry entry = catalog_lookup(row, 2, {}, ctx);
                json fields = json::array();
                for (const auto& f : entry.fields) fields.push_back(f.label);
                json params = json::object();
                for (const auto& [k, vv] : entry.spec.params) params[k] = vv;
                rows.push_back({{"row", row},
                                {"fields", fields},
                                {"default_params", params},
                                {"citation", std::string("table ") + (row[0] == '1' ? "1" : "2") +
                                                 " row " + row}});
            }
            json doc;
            doc["schema"] = "symschrod.catalog/1";
            doc["rows"] = rows;
            if (cat_out.empty()) {
                std::cout << doc.dump(2) << "\n";
            } else {
                std::ofstream out(cat_out);
                out << doc.dump(2) << "\n";
            }
            em.results["rows"] = rows.size();
            if (cat_report.empty()) return 0;
            return em.finish();
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        bool usage = e.kind() == ErrorKind::BadArgument || e.kind() == ErrorKind::ParseError ||
                     e.kind() == ErrorKind::ConstraintViolated;
        std::cerr << "error: " << e.what() << "\n";
        return usage ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

#include "symschrod/report.hpp"

#include <sstream>

#include <json.hpp>

#include "symschrod/error.hpp"

namespace symschrod {

using nlohmann::json;

namespace {

json rational_to_json(const Rational& r) {
    return json::array({r.num().to_string(), r.den().to_string()});
}

Rational rational_from_json(const json& j) {
    return {BigInt::from_string(j.at(0).get<std::string>()),
            BigInt::from_string(j.at(1).get<std::string>())};
}

json gaussian_to_json(const GaussianRational& g) {
    json j;
    j["re"] = rational_to_json(g.re());
    if (!g.im().is_zero()) j["im"] = rational_to_json(g.im());
    return j;
}

GaussianRational gaussian_from_json(const json& j) {
    Rational re = rational_from_json(j.at("re"));
    Rational im = j.contains("im") ? rational_from_json(j.at("im")) : Rational(0);
    return {std::move(re), std::move(im)};
}

}  // namespace

std::string tool_version() { return "0.1.0"; }

std::map<std::string, std::string> convention_notes() {
    return {
        {"momentum_sign",
         "p_a = -i d/dx_a, so L = i d/dt + (1/2M) Laplacian - V; fixed by the Galilei-boost "
         "commutation check"},
        {"symmetrization",
         "round-bracket symmetrization is the idempotent average over index permutations"},
        {"determining_system",
         "equation coefficients follow the commutator [L, Q] exactly: time-derivative terms carry "
         "a factor i and the potential couplings are 2*C(r+p, p) in V-units; the real-form chain "
         "used in the third-order pipeline is equivalent under K_j -> (-i)^j K_j"},
        {"nse_form",
         "nonlinear-equation checks default to the i-form i psi_t + Lap psi + F = 0; the heat "
         "form is selectable and rows listing Galilei or conformal fields fail under it"},
        {"third_order_pairings",
         "with p = -i d/dx the drift generator pairs as Q = p^3 + (3/4){U,p} - w3 (tH - {x,p}/4) "
         "and the oscillator pair carries exp(-+ i w t) against the printed +-; row 2.4's phase "
         "profile is i (t Re(sigma) - x^2 Im(sigma)/(2n))"},
    };
}

std::string emit_detsystem_json(const DetSystem& sys) {
    json j;
    j["schema"] = "symschrod.detsystem/1";
    j["order"] = sys.order;
    j["dim"] = sys.dim;
    j["stationary"] = sys.stationary;
    j["mass"] = rational_to_json(sys.mass);
    json eqs = json::array();
    for (const auto& eq : sys.equations) {
        json je;
        je["free_rank"] = eq.free_rank;
        je["free_index"] = eq.free_index;
        json terms = json::array();
        for (const auto& t : eq.terms) {
            json jt;
            jt["coeff"] = gaussian_to_json(t.coefficient);
            jt["rank"] = t.rank;
            jt["component"] = t.component;
            if (t.t_deriv) jt["t_deriv"] = t.t_deriv;
            if (!t.k_deriv.empty()) jt["k_deriv"] = t.k_deriv;
            if (!t.v_deriv.empty()) jt["v_deriv"] = t.v_deriv;
            if (t.sym_grad) jt["sym_grad"] = true;
            terms.push_back(std::move(jt));
        }
        je["terms"] = std::move(terms);
        eqs.push_back(std::move(je));
    }
    j["equations"] = std::move(eqs);
    return j.dump(2);
}

DetSystem parse_detsystem_json(const std::string& text) {
    json j = json::parse(text);
    if (j.at("schema").get<std::string>() != "symschrod.detsystem/1")
        throw Error(ErrorKind::BadArgument, "parse_detsystem_json: unknown schema");
    DetSystem sys;
    sys.order = j.at("order").get<int>();
    sys.dim = j.at("dim").get<std::size_t>();
    sys.stationary = j.at("stationary").get<bool>();
    sys.mass = rational_from_json(j.at("mass"));
    for (const auto& je : j.at("equations")) {
        DetEquation eq;
        eq.free_rank = je.at("free_rank").get<int>();
        eq.free_index = je.at("free_index").get<std::vector<int>>();
        for (const auto& jt : je.at("terms")) {
            DetTerm t;
            t.coefficient = gaussian_from_json(jt.at("coeff"));
            t.rank = jt.at("rank").get<int>();
            t.component = jt.at("component").get<std::vector<int>>();
            if (jt.contains("t_deriv")) t.t_deriv = jt.at("t_deriv").get<int>();
            if (jt.contains("k_deriv")) t.k_deriv = jt.at("k_deriv").get<std::vector<int>>();
            if (jt.contains("v_deriv")) t.v_deriv = jt.at("v_deriv").get<std::vector<int>>();
            if (jt.contains("sym_grad")) t.sym_grad = jt.at("sym_grad").get<bool>();
            eq.terms.push_back(std::move(t));
        }
        sys.equations.push_back(std::move(eq));
    }
    return sys;
}

namespace {

std::string indices_superscript(const std::vector<int>& idx) {
    std::string s;
    for (int v : idx) s += std::to_string(v);
    return s;
}

std::string coeff_latex(const GaussianRational& c) {
    auto rat = [&](const Rational& r, bool lead_sign, bool drop_unit) {
        std::string sign = r.sign() < 0 ? "-" : (lead_sign ? "+" : "");
        if (drop_unit && r.num().abs().is_one() && r.is_integer()) return sign;
        std::string num = r.num().abs().to_string();
        if (r.is_integer()) return sign + num;
        return sign + "\\tfrac{" + num + "}{" + r.den().to_string() + "}";
    };
    if (c.im().is_zero()) return rat(c.re(), true, true);
    if (c.re().is_zero()) return rat(c.im(), true, true) + "i";
    return "+(" + rat(c.re(), false, false) + rat(c.im(), true, false) + "i)";
}

}  // namespace

std::string emit_detsystem_latex(const DetSystem& sys) {
    std::ostringstream os;
    os << "% determining equations, order " << sys.order << ", dimension " << sys.dim
       << (sys.stationary ? ", stationary" : "") << "\n\\begin{align*}\n";
    for (const auto& eq : sys.equations) {
        bool first = true;
        bool sym_done = false;
        for (const auto& t : eq.terms) {
            if (t.sym_grad) {
                if (sym_done) continue;
                sym_done = true;
                // One bracketed token for the whole symmetrized-gradient
                // group: \partial^{(a_r} K^{a_1 ... a_{r-1})}.
                std::vector<int> head = eq.free_index;
                int last = head.back();
                head.pop_back();
                os << (first ? "" : " ") << "+\\tfrac{1}{2M}\\,\\partial^{(" << last << "}K^{"
                   << indices_superscript(head) << ")}";
                first = false;
                continue;
            }
            os << (first ? "" : " ") << coeff_latex(t.coefficient);
            first = false;
            if (t.t_deriv)
                os << "\\dot{K}";
            else
                os << "K";
            os << "^{" << (t.component.empty() ? "0" : indices_superscript(t.component)) << "}";
            if (!t.v_deriv.empty()) {
                os << "\\,\\partial_{" << indices_superscript(t.v_deriv) << "}V";
            }
        }
        os << " &= 0 \\\\\n";
    }
    os << "\\end{align*}\n";
    return os.str();
}

std::string serialize_operator_json(const DiffOp& op) {
    json terms = json::array();
    for (const auto& [d, poly] : op.terms()) {
        json jt;
        jt["deriv"] = d;
        json monos = json::array();
        for (const auto& [mono, c] : poly.terms()) {
            json jm;
            jm["exps"] = mono.exps;
            jm["coeff"] = gaussian_to_json(c);
            monos.push_back(std::move(jm));
        }
        jt["poly"] = std::move(monos);
        terms.push_back(std::move(jt));
    }
    json j;
    j["dim"] = op.dim();
    j["terms"] = std::move(terms);
    return j.dump();
}

std::string serialize_basis_json(const SymmetryBasis& basis) {
    json j;
    j["schema"] = "symschrod.basis/1";
    j["order"] = basis.order;
    j["dim"] = basis.dim;
    j["mass"] = rational_to_json(basis.mass);
    j["dimension"] = basis.operators.size();
    json ops = json::array();
    for (const auto& op : basis.operators) ops.push_back(json::parse(serialize_operator_json(op)));
    j["operators"] = std::move(ops);
    return j.dump(2);
}

}  // namespace symschrod

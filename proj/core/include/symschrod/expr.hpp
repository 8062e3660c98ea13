#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace symschrod {

using Cplx = std::complex<double>;

// Variables of the jet grammar: the independents t, x_1..x_m and the jet
// coordinates psi_J / psi*_J with a t-derivative order and a sorted spatial
// multi-index. Ids are interned per JetContext.
struct JetVarInfo {
    enum class Kind { T, X, Jet } kind = Kind::T;
    int x_index = 0;              // for X (1..m)
    bool conj = false;            // for Jet
    int t_order = 0;              // for Jet
    std::vector<int> spatial;     // for Jet, sorted over 1..m
};

class JetContext {
  public:
    explicit JetContext(int m);

    int m() const { return m_; }
    int t_var() const { return 0; }
    int x_var(int a) const { return a; }  // a = 1..m
    int jet_var(bool conj, int t_order, std::vector<int> spatial);
    int psi() { return jet_var(false, 0, {}); }
    int psi_conj() { return jet_var(true, 0, {}); }

    const JetVarInfo& info(int id) const { return infos_[id]; }
    int var_count() const { return static_cast<int>(infos_.size()); }

  private:
    int m_;
    std::vector<JetVarInfo> infos_;
    std::map<std::tuple<bool, int, std::vector<int>>, int> jet_ids_;
};

// Sampling / constraint key of an opaque atom occurrence.
struct AtomKey {
    std::string name;
    std::vector<int> fn_deriv;   // per-argument derivative orders (function atoms)
    int t_order = 0;             // space-time atoms
    std::vector<int> spatial;    // space-time atoms, sorted

    auto operator<=>(const AtomKey&) const = default;
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

enum class ExprOp {
    Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sin, Cos,
    SpaceAtom,  // named function of (t, x) with registered derivatives
    FnAtom,     // named function of its argument expressions
};

struct ExprNode {
    ExprOp op;
    Cplx cval{0.0, 0.0};
    int var = -1;
    double exponent = 0.0;
    std::string atom;
    int t_order = 0;
    std::vector<int> spatial;
    std::vector<int> fn_deriv;
    std::vector<Expr> kids;
};

// Builders (with light constant folding).
Expr e_const(Cplx v);
Expr e_var(int id);
Expr e_add(Expr a, Expr b);
Expr e_sub(Expr a, Expr b);
Expr e_mul(Expr a, Expr b);
Expr e_div(Expr a, Expr b);
Expr e_neg(Expr a);
Expr e_pow(Expr base, double exponent);  // constant real exponent
Expr e_exp(Expr a);
Expr e_log(Expr a);
Expr e_sin(Expr a);
Expr e_cos(Expr a);
Expr e_space_atom(std::string name, int t_order = 0, std::vector<int> spatial = {});
Expr e_fn_atom(std::string name, std::vector<Expr> args, std::vector<int> deriv = {});

// Derived quantities of the wave function.
Expr e_rho(JetContext& ctx);    // |psi| = (psi psi*)^(1/2)
Expr e_phase(JetContext& ctx);  // (i/2) ln(psi*/psi)
Expr e_re(JetContext& ctx, const Expr& e);
Expr e_im(JetContext& ctx, const Expr& e);
Expr e_ln_abs(JetContext& ctx, const Expr& real_valued);   // ln|e| = (1/2) ln(e^2)
Expr e_abs_pow(JetContext& ctx, const Expr& real_valued, double gamma);  // |e|^gamma

// Structural conjugate: swaps psi <-> psi*, conjugates constants, and maps
// atoms to their registered partners ("f" <-> "fc", "eta0" <-> "eta0c",
// "theta" fixed). Exponents of Pow are real and stay.
Expr conj_expr(JetContext& ctx, const Expr& e);

// Symbolic partial derivative with respect to a grammar variable.
Expr diff(JetContext& ctx, const Expr& e, int var);

// Total derivative treating psi, psi* and their jets as functions of (t, x):
// direction is a variable id of kind T or X. Jet indices are bumped; space
// atoms pick up derivative markers.
Expr total_derivative(JetContext& ctx, const Expr& e, int direction);

// Evaluation environment: variable values plus atom samples.
struct EvalEnv {
    std::map<int, Cplx> vars;
    std::map<AtomKey, Cplx> atoms;
};

Cplx eval(const JetContext& ctx, const Expr& e, const EvalEnv& env);

// All jet variables / atom keys referenced by an expression.
void collect_jet_vars(const JetContext& ctx, const Expr& e, std::map<int, bool>& out);
void collect_atoms(const Expr& e, std::map<AtomKey, bool>& out);

}  // namespace symschrod

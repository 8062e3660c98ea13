#include "symschrod/expr.hpp"

#include <algorithm>
#include <cmath>

#include "symschrod/error.hpp"

namespace symschrod {

JetContext::JetContext(int m) : m_(m) {
    JetVarInfo t;
    t.kind = JetVarInfo::Kind::T;
    infos_.push_back(t);
    for (int a = 1; a <= m; ++a) {
        JetVarInfo x;
        x.kind = JetVarInfo::Kind::X;
        x.x_index = a;
        infos_.push_back(x);
    }
}

int JetContext::jet_var(bool conj, int t_order, std::vector<int> spatial) {
    std::sort(spatial.begin(), spatial.end());
    auto key = std::make_tuple(conj, t_order, spatial);
    auto it = jet_ids_.find(key);
    if (it != jet_ids_.end()) return it->second;
    JetVarInfo info;
    info.kind = JetVarInfo::Kind::Jet;
    info.conj = conj;
    info.t_order = t_order;
    info.spatial = std::move(spatial);
    infos_.push_back(info);
    int id = static_cast<int>(infos_.size()) - 1;
    jet_ids_.emplace(std::move(key), id);
    return id;
}

namespace {

bool is_const(const Expr& e, Cplx v) { return e->op == ExprOp::Const && e->cval == v; }

Expr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

}  // namespace

Expr e_const(Cplx v) {
    ExprNode n;
    n.op = ExprOp::Const;
    n.cval = v;
    return make(std::move(n));
}

Expr e_var(int id) {
    ExprNode n;
    n.op = ExprOp::Var;
    n.var = id;
    return make(std::move(n));
}

Expr e_add(Expr a, Expr b) {
    if (is_const(a, {0, 0})) return b;
    if (is_const(b, {0, 0})) return a;
    if (a->op == ExprOp::Const && b->op == ExprOp::Const) return e_const(a->cval + b->cval);
    ExprNode n;
    n.op = ExprOp::Add;
    n.kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

Expr e_sub(Expr a, Expr b) {
    if (is_const(b, {0, 0})) return a;
    if (a->op == ExprOp::Const && b->op == ExprOp::Const) return e_const(a->cval - b->cval);
    if (is_const(a, {0, 0})) return e_neg(std::move(b));
    ExprNode n;
    n.op = ExprOp::Sub;
    n.kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

Expr e_mul(Expr a, Expr b) {
    if (is_const(a, {0, 0}) || is_const(b, {0, 0})) return e_const({0, 0});
    if (is_const(a, {1, 0})) return b;
    if (is_const(b, {1, 0})) return a;
    if (a->op == ExprOp::Const && b->op == ExprOp::Const) return e_const(a->cval * b->cval);
    ExprNode n;
    n.op = ExprOp::Mul;
    n.kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

Expr e_div(Expr a, Expr b) {
    if (is_const(a, {0, 0})) return e_const({0, 0});
    if (is_const(b, {1, 0})) return a;
    if (a->op == ExprOp::Const && b->op == ExprOp::Const) return e_const(a->cval / b->cval);
    ExprNode n;
    n.op = ExprOp::Div;
    n.kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

Expr e_neg(Expr a) {
    if (a->op == ExprOp::Const) return e_const(-a->cval);
    ExprNode n;
    n.op = ExprOp::Neg;
    n.kids = {std::move(a)};
    return make(std::move(n));
}

Expr e_pow(Expr base, double exponent) {
    if (exponent == 0.0) return e_const({1, 0});
    if (exponent == 1.0) return base;
    ExprNode n;
    n.op = ExprOp::Pow;
    n.exponent = exponent;
    n.kids = {std::move(base)};
    return make(std::move(n));
}

namespace {
Expr unary(ExprOp op, Expr a) {
    ExprNode n;
    n.op = op;
    n.kids = {std::move(a)};
    return make(std::move(n));
}
}  // namespace

Expr e_exp(Expr a) { return unary(ExprOp::Exp, std::move(a)); }
Expr e_log(Expr a) { return unary(ExprOp::Log, std::move(a)); }
Expr e_sin(Expr a) { return unary(ExprOp::Sin, std::move(a)); }
Expr e_cos(Expr a) { return unary(ExprOp::Cos, std::move(a)); }

Expr e_space_atom(std::string name, int t_order, std::vector<int> spatial) {
    std::sort(spatial.begin(), spatial.end());
    ExprNode n;
    n.op = ExprOp::SpaceAtom;
    n.atom = std::move(name);
    n.t_order = t_order;
    n.spatial = std::move(spatial);
    return make(std::move(n));
}

Expr e_fn_atom(std::string name, std::vector<Expr> args, std::vector<int> deriv) {
    if (deriv.empty()) deriv.assign(args.size(), 0);
    ExprNode n;
    n.op = ExprOp::FnAtom;
    n.atom = std::move(name);
    n.fn_deriv = std::move(deriv);
    n.kids = std::move(args);
    return make(std::move(n));
}

Expr e_rho(JetContext& ctx) {
    return e_pow(e_mul(e_var(ctx.psi()), e_var(ctx.psi_conj())), 0.5);
}

Expr e_phase(JetContext& ctx) {
    return e_mul(e_const(Cplx(0, 0.5)), e_log(e_div(e_var(ctx.psi_conj()), e_var(ctx.psi()))));
}

Expr e_re(JetContext& ctx, const Expr& e) {
    return e_mul(e_const(0.5), e_add(e, conj_expr(ctx, e)));
}

Expr e_im(JetContext& ctx, const Expr& e) {
    return e_mul(e_const(Cplx(0, -0.5)), e_sub(e, conj_expr(ctx, e)));
}

Expr e_ln_abs(JetContext& ctx, const Expr& real_valued) {
    (void)ctx;
    return e_mul(e_const(0.5), e_log(e_mul(real_valued, real_valued)));
}

Expr e_abs_pow(JetContext& ctx, const Expr& real_valued, double gamma) {
    (void)ctx;
    return e_pow(e_mul(real_valued, real_valued), gamma / 2.0);
}

namespace {

std::string conj_atom_name(const std::string& name) {
    if (name == "theta") return "theta";
    if (name.size() >= 1 && name.back() == 'c') return name.substr(0, name.size() - 1);
    return name + "c";
}

}  // namespace

Expr conj_expr(JetContext& ctx, const Expr& e) {
    switch (e->op) {
        case ExprOp::Const: return e_const(std::conj(e->cval));
        case ExprOp::Var: {
            const auto& info = ctx.info(e->var);
            if (info.kind != JetVarInfo::Kind::Jet) return e;  // t, x are real
            return e_var(ctx.jet_var(!info.conj, info.t_order, info.spatial));
        }
        case ExprOp::Add: return e_add(conj_expr(ctx, e->kids[0]), conj_expr(ctx, e->kids[1]));
        case ExprOp::Sub: return e_sub(conj_expr(ctx, e->kids[0]), conj_expr(ctx, e->kids[1]));
        case ExprOp::Mul: return e_mul(conj_expr(ctx, e->kids[0]), conj_expr(ctx, e->kids[1]));
        case ExprOp::Div: return e_div(conj_expr(ctx, e->kids[0]), conj_expr(ctx, e->kids[1]));
        case ExprOp::Neg: return e_neg(conj_expr(ctx, e->kids[0]));
        case ExprOp::Pow: return e_pow(conj_expr(ctx, e->kids[0]), e->exponent);
        case ExprOp::Exp: return e_exp(conj_expr(ctx, e->kids[0]));
        case ExprOp::Log: return e_log(conj_expr(ctx, e->kids[0]));
        case ExprOp::Sin: return e_sin(conj_expr(ctx, e->kids[0]));
        case ExprOp::Cos: return e_cos(conj_expr(ctx, e->kids[0]));
        case ExprOp::SpaceAtom:
            return e_space_atom(conj_atom_name(e->atom), e->t_order, e->spatial);
        case ExprOp::FnAtom: {
            // The conjugate partner keeps its derivative slots: conjugating
            // the arguments already swaps the roles, and samples pair as
            // sample(fc, d) = conj(sample(f, d)).
            std::vector<Expr> args;
            for (const auto& k : e->kids) args.push_back(conj_expr(ctx, k));
            return e_fn_atom(conj_atom_name(e->atom), std::move(args), e->fn_deriv);
        }
    }
    throw Error(ErrorKind::BadArgument, "conj_expr: unknown node");
}

Expr diff(JetContext& ctx, const Expr& e, int var) {
    const Expr zero = e_const({0, 0});
    switch (e->op) {
        case ExprOp::Const: return zero;
        case ExprOp::Var: return e->var == var ? e_const({1, 0}) : zero;
        case ExprOp::Add: return e_add(diff(ctx, e->kids[0], var), diff(ctx, e->kids[1], var));
        case ExprOp::Sub: return e_sub(diff(ctx, e->kids[0], var), diff(ctx, e->kids[1], var));
        case ExprOp::Mul:
            return e_add(e_mul(diff(ctx, e->kids[0], var), e->kids[1]),
                         e_mul(e->kids[0], diff(ctx, e->kids[1], var)));
        case ExprOp::Div:
            return e_sub(e_div(diff(ctx, e->kids[0], var), e->kids[1]),
                         e_div(e_mul(e->kids[0], diff(ctx, e->kids[1], var)),
                               e_mul(e->kids[1], e->kids[1])));
        case ExprOp::Neg: return e_neg(diff(ctx, e->kids[0], var));
        case ExprOp::Pow: {
            Expr inner = diff(ctx, e->kids[0], var);
            if (is_const(inner, {0, 0})) return zero;
            return e_mul(e_mul(e_const(e->exponent), e_pow(e->kids[0], e->exponent - 1)), inner);
        }
        case ExprOp::Exp: {
            Expr inner = diff(ctx, e->kids[0], var);
            if (is_const(inner, {0, 0})) return zero;
            return e_mul(e, inner);
        }
        case ExprOp::Log: {
            Expr inner = diff(ctx, e->kids[0], var);
            if (is_const(inner, {0, 0})) return zero;
            return e_div(inner, e->kids[0]);
        }
        case ExprOp::Sin: {
            Expr inner = diff(ctx, e->kids[0], var);
            if (is_const(inner, {0, 0})) return zero;
            return e_mul(e_cos(e->kids[0]), inner);
        }
        case ExprOp::Cos: {
            Expr inner = diff(ctx, e->kids[0], var);
            if (is_const(inner, {0, 0})) return zero;
            return e_neg(e_mul(e_sin(e->kids[0]), inner));
        }
        case ExprOp::SpaceAtom: {
            const auto& info = ctx.info(var);
            if (info.kind == JetVarInfo::Kind::T) {
                if (e->atom == "theta" || e->atom == "Theta") return zero;  // theta = theta(x)
                return e_space_atom(e->atom, e->t_order + 1, e->spatial);
            }
            if (info.kind == JetVarInfo::Kind::X) {
                std::vector<int> sp = e->spatial;
                sp.push_back(info.x_index);
                return e_space_atom(e->atom, e->t_order, std::move(sp));
            }
            return zero;  // jets are independent of space-time atoms
        }
        case ExprOp::FnAtom: {
            Expr sum = zero;
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                Expr darg = diff(ctx, e->kids[i], var);
                if (is_const(darg, {0, 0})) continue;
                std::vector<int> d = e->fn_deriv;
                ++d[i];
                sum = e_add(sum, e_mul(e_fn_atom(e->atom, e->kids, std::move(d)), darg));
            }
            return sum;
        }
    }
    throw Error(ErrorKind::BadArgument, "diff: unknown node");
}

void collect_jet_vars(const JetContext& ctx, const Expr& e, std::map<int, bool>& out) {
    if (e->op == ExprOp::Var && ctx.info(e->var).kind == JetVarInfo::Kind::Jet) out[e->var] = true;
    for (const auto& k : e->kids) collect_jet_vars(ctx, k, out);
}

void collect_atoms(const Expr& e, std::map<AtomKey, bool>& out) {
    if (e->op == ExprOp::SpaceAtom) out[AtomKey{e->atom, {}, e->t_order, e->spatial}] = true;
    if (e->op == ExprOp::FnAtom) out[AtomKey{e->atom, e->fn_deriv, 0, {}}] = true;
    for (const auto& k : e->kids) collect_atoms(k, out);
}

Expr total_derivative(JetContext& ctx, const Expr& e, int direction) {
    const auto& dir = ctx.info(direction);
    if (dir.kind == JetVarInfo::Kind::Jet)
        throw Error(ErrorKind::BadArgument, "total_derivative: direction must be t or x_a");
    Expr out = diff(ctx, e, direction);
    std::map<int, bool> jets;
    collect_jet_vars(ctx, e, jets);
    for (const auto& [id, unused] : jets) {
        Expr partial = diff(ctx, e, id);
        if (is_const(partial, {0, 0})) continue;
        const auto& info = ctx.info(id);
        int bumped;
        if (dir.kind == JetVarInfo::Kind::T) {
            bumped = ctx.jet_var(info.conj, info.t_order + 1, info.spatial);
        } else {
            std::vector<int> sp = info.spatial;
            sp.push_back(dir.x_index);
            bumped = ctx.jet_var(info.conj, info.t_order, std::move(sp));
        }
        out = e_add(out, e_mul(partial, e_var(bumped)));
    }
    return out;
}

Cplx eval(const JetContext& ctx, const Expr& e, const EvalEnv& env) {
    switch (e->op) {
        case ExprOp::Const: return e->cval;
        case ExprOp::Var: {
            auto it = env.vars.find(e->var);
            if (it == env.vars.end())
                throw Error(ErrorKind::BadArgument, "eval: missing variable value");
            return it->second;
        }
        case ExprOp::Add: return eval(ctx, e->kids[0], env) + eval(ctx, e->kids[1], env);
        case ExprOp::Sub: return eval(ctx, e->kids[0], env) - eval(ctx, e->kids[1], env);
        case ExprOp::Mul: return eval(ctx, e->kids[0], env) * eval(ctx, e->kids[1], env);
        case ExprOp::Div: return eval(ctx, e->kids[0], env) / eval(ctx, e->kids[1], env);
        case ExprOp::Neg: return -eval(ctx, e->kids[0], env);
        case ExprOp::Pow: return std::pow(eval(ctx, e->kids[0], env), e->exponent);
        case ExprOp::Exp: return std::exp(eval(ctx, e->kids[0], env));
        case ExprOp::Log: return std::log(eval(ctx, e->kids[0], env));
        case ExprOp::Sin: return std::sin(eval(ctx, e->kids[0], env));
        case ExprOp::Cos: return std::cos(eval(ctx, e->kids[0], env));
        case ExprOp::SpaceAtom: {
            auto it = env.atoms.find(AtomKey{e->atom, {}, e->t_order, e->spatial});
            if (it == env.atoms.end())
                throw Error(ErrorKind::BadArgument, "eval: missing atom sample for " + e->atom);
            return it->second;
        }
        case ExprOp::FnAtom: {
            auto it = env.atoms.find(AtomKey{e->atom, e->fn_deriv, 0, {}});
            if (it == env.atoms.end())
                throw Error(ErrorKind::BadArgument, "eval: missing atom sample for " + e->atom);
            return it->second;
        }
    }
    throw Error(ErrorKind::BadArgument, "eval: unknown node");
}

}  // namespace symschrod

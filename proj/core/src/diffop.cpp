#include "symschrod/diffop.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "symschrod/error.hpp"

namespace symschrod {

DiffOp DiffOp::identity(std::size_t dim) {
    DiffOp op(dim);
    op.add_term(DerivIndex(dim + 1, 0), LaurentPoly::constant(dim + 1, GaussianRational(1)));
    return op;
}

DiffOp DiffOp::multiplication(const LaurentPoly& f) {
    DiffOp op(f.nvars() - 1);
    op.add_term(DerivIndex(f.nvars(), 0), f);
    return op;
}

DiffOp DiffOp::derivative(std::size_t dim, std::size_t var, int order) {
    DiffOp op(dim);
    DerivIndex d(dim + 1, 0);
    d[var] = order;
    op.add_term(d, LaurentPoly::constant(dim + 1, GaussianRational(1)));
    return op;
}

int DiffOp::order() const {
    int n = 0;
    for (const auto& [d, c] : terms_) n = std::max(n, std::accumulate(d.begin(), d.end(), 0));
    return n;
}

bool DiffOp::has_time_derivative() const {
    for (const auto& [d, c] : terms_) {
        if (d[0] != 0) return true;
    }
    return false;
}

LaurentPoly DiffOp::coefficient(const DerivIndex& d) const {
    auto it = terms_.find(d);
    return it == terms_.end() ? LaurentPoly(dim_ + 1) : it->second;
}

void DiffOp::add_term(const DerivIndex& d, const LaurentPoly& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.emplace(d, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
    if (a.dim_ != b.dim_) throw Error(ErrorKind::ArityMismatch, "DiffOp: dimension mismatch");
    DiffOp r = a;
    for (const auto& [d, c] : b.terms_) r.add_term(d, c);
    return r;
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + (-b); }

DiffOp DiffOp::operator-() const {
    DiffOp r(dim_);
    for (const auto& [d, c] : terms_) r.terms_.emplace(d, -c);
    return r;
}

DiffOp DiffOp::scale(const GaussianRational& c) const {
    DiffOp r(dim_);
    if (c.is_zero()) return r;
    for (const auto& [d, coef] : terms_) r.terms_.emplace(d, coef.scale(c));
    return r;
}

namespace {

// Iterate all gamma with 0 <= gamma_i <= alpha_i.
bool next_sub_index(DerivIndex& gamma, const DerivIndex& alpha) {
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        if (gamma[i] < alpha[i]) {
            ++gamma[i];
            for (std::size_t j = 0; j < i; ++j) gamma[j] = 0;
            return true;
        }
    }
    return false;
}

Rational binomial(int n, int k) {
    if (k < 0 || k > n) return Rational(0);
    BigInt r(1);
    for (int i = 0; i < k; ++i) r = r * BigInt(n - i) / BigInt(i + 1);
    return Rational(r, BigInt(1));
}

}  // namespace

DiffOp op_compose(const DiffOp& a, const DiffOp& b) {
    if (a.dim() != b.dim()) throw Error(ErrorKind::ArityMismatch, "op_compose: dimension mismatch");
    const std::size_t nv = a.nvars();
    DiffOp r(a.dim());
    for (const auto& [alpha, f] : a.terms()) {
        for (const auto& [beta, g] : b.terms()) {
            // f d^alpha (g d^beta) = sum_{gamma <= alpha} C(alpha, gamma)
            //   f (d^gamma g) d^{alpha - gamma + beta}
            DerivIndex gamma(nv, 0);
            do {
                Rational mult(1);
                for (std::size_t i = 0; i < nv; ++i) mult *= binomial(alpha[i], gamma[i]);
                LaurentPoly dg = g;
                for (std::size_t i = 0; i < nv; ++i) {
                    if (gamma[i] > 0) dg = dg.diff(i, gamma[i]);
                }
                if (dg.is_zero()) continue;
                DerivIndex d(nv);
                for (std::size_t i = 0; i < nv; ++i) d[i] = alpha[i] - gamma[i] + beta[i];
                r.add_term(d, (f * dg).scale(GaussianRational(mult)));
            } while (next_sub_index(gamma, alpha));
        }
    }
    return r;
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) {
    return op_compose(a, b) - op_compose(b, a);
}

DiffOp anticommutator(const DiffOp& a, const DiffOp& b) {
    return op_compose(a, b) + op_compose(b, a);
}

const LaurentPoly* SymTensorField::component(std::vector<int> idx) const {
    std::sort(idx.begin(), idx.end());
    auto it = comps_.find(idx);
    return it == comps_.end() ? nullptr : &it->second;
}

void SymTensorField::set_component(std::vector<int> idx, LaurentPoly value) {
    std::sort(idx.begin(), idx.end());
    if (value.is_zero())
        comps_.erase(idx);
    else
        comps_[std::move(idx)] = std::move(value);
}

void SymTensorField::add_component(std::vector<int> idx, const LaurentPoly& value) {
    if (value.is_zero()) return;
    std::sort(idx.begin(), idx.end());
    auto [it, inserted] = comps_.emplace(std::move(idx), value);
    if (!inserted) {
        it->second += value;
        if (it->second.is_zero()) comps_.erase(it);
    }
}

std::vector<std::vector<int>> sorted_multi_indices(int rank, std::size_t dim) {
    std::vector<std::vector<int>> out;
    if (rank == 0) {
        out.push_back({});
        return out;
    }
    std::vector<int> cur(rank, 1);
    while (true) {
        out.push_back(cur);
        int pos = rank - 1;
        while (pos >= 0 && cur[pos] == static_cast<int>(dim)) --pos;
        if (pos < 0) break;
        ++cur[pos];
        for (int i = pos + 1; i < rank; ++i) cur[i] = cur[pos];
    }
    return out;
}

BigInt multi_index_multiplicity(const std::vector<int>& idx) {
    BigInt fact(1);
    for (std::size_t i = 2; i <= idx.size(); ++i) fact *= BigInt(static_cast<std::int64_t>(i));
    BigInt denom(1);
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j < idx.size() && idx[j] == idx[i]) ++j;
        for (std::size_t k = 2; k <= j - i; ++k) denom *= BigInt(static_cast<std::int64_t>(k));
        i = j;
    }
    return fact / denom;
}

DiffOp nested_anticommutator(const SymTensorField& k) {
    const std::size_t m = k.dim();
    DiffOp total(m);
    for (const auto& [idx, coeff] : k.components()) {
        // The nested anticommutator is symmetric in the derivative indices,
        // so each sorted component contributes once per distinct permutation.
        DiffOp op = DiffOp::multiplication(coeff);
        for (int a : idx) op = anticommutator(op, DiffOp::derivative(m, static_cast<std::size_t>(a)));
        BigInt mult = multi_index_multiplicity(idx);
        total += op.scale(GaussianRational(Rational(mult, BigInt(1))));
    }
    return total;
}

DiffOp build_L(std::size_t m, const Rational& mass, const LaurentPoly& v) {
    if (mass.sign() <= 0) throw Error(ErrorKind::BadArgument, "build_L: mass must be positive");
    if (v.nvars() != m + 1) throw Error(ErrorKind::ArityMismatch, "build_L: potential arity mismatch");
    if (v.depends_on(0))
        throw Error(ErrorKind::TimeDependentPotential, "build_L: potential depends on t");
    DiffOp l = DiffOp::derivative(m, 0).scale(GaussianRational::i());
    GaussianRational half_inv_mass{Rational(1) / (Rational(2) * mass)};
    for (std::size_t a = 1; a <= m; ++a)
        l += DiffOp::derivative(m, a, 2).scale(half_inv_mass);
    l -= DiffOp::multiplication(v);
    return l;
}

DiffOp commutator_with_L(const DiffOp& l, const DiffOp& q) {
    if (q.has_time_derivative())
        throw Error(ErrorKind::BadArgument, "commutator_with_L: Q must not contain d/dt");
    return commutator(l, q);
}

std::vector<SymTensorField> anticommutator_decompose(const DiffOp& q) {
    if (q.has_time_derivative())
        throw Error(ErrorKind::BadArgument, "anticommutator_decompose: Q must not contain d/dt");
    const std::size_t m = q.dim();
    const int n = q.order();
    std::vector<SymTensorField> out;
    out.reserve(n + 1);
    for (int j = 0; j <= n; ++j) out.emplace_back(j, m);

    DiffOp rem = q;
    for (int j = n; j >= 0; --j) {
        // Top-order coefficients of the remainder are 2^j * mult * K.
        Rational two_j(1);
        for (int k = 0; k < j; ++k) two_j *= Rational(2);
        for (const auto& [d, c] : rem.terms()) {
            if (std::accumulate(d.begin(), d.end(), 0) != j) continue;
            std::vector<int> idx;
            for (std::size_t a = 1; a <= m; ++a) idx.insert(idx.end(), d[a], static_cast<int>(a));
            Rational mult(multi_index_multiplicity(idx), BigInt(1));
            out[j].set_component(idx, c.scale(GaussianRational((two_j * mult).inverse())));
        }
        rem -= nested_anticommutator(out[j]);
    }
    if (!rem.is_zero())
        throw Error(ErrorKind::BadArgument, "anticommutator_decompose: residual not zero");
    return out;
}

std::string DiffOp::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [d, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "[" << c.to_string() << "]";
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (d[i] == 0) continue;
            os << " d";
            if (i == 0)
                os << "t";
            else if (dim_ == 1)
                os << "x";
            else
                os << "x" << i;
            if (d[i] != 1) os << "^" << d[i];
        }
    }
    return os.str();
}

}  // namespace symschrod

#include "symschrod/detsys.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "symschrod/error.hpp"

namespace symschrod {

namespace {

Rational binom(int n, int k) {
    if (k < 0 || k > n) return Rational(0);
    BigInt r(1);
    for (int i = 0; i < k; ++i) r = r * BigInt(n - i) / BigInt(i + 1);
    return Rational(r, BigInt(1));
}

// Distinct values of a sorted multi-index with their counts.
std::vector<std::pair<int, int>> value_counts(const std::vector<int>& idx) {
    std::vector<std::pair<int, int>> out;
    for (int v : idx) {
        if (!out.empty() && out.back().first == v)
            ++out.back().second;
        else
            out.emplace_back(v, 1);
    }
    return out;
}

std::vector<int> erase_one(const std::vector<int>& idx, int value) {
    std::vector<int> out = idx;
    out.erase(std::find(out.begin(), out.end(), value));
    return out;
}

}  // namespace

std::vector<int> DetSystem::referenced_ranks(const DetEquation& eq) {
    std::set<int> ranks;
    for (const auto& t : eq.terms) ranks.insert(t.rank);
    return {ranks.begin(), ranks.end()};
}

DetSystem generate_det_system(int order, std::size_t dim, bool stationary, const Rational& mass) {
    if (order < 0 || dim < 1) throw Error(ErrorKind::BadArgument, "generate_det_system: need n >= 0, m >= 1");
    DetSystem sys;
    sys.order = order;
    sys.dim = dim;
    sys.stationary = stationary;
    sys.mass = mass;

    const GaussianRational half_inv_mass{Rational(1) / (Rational(2) * mass)};

    // Free-index count n+1: the closure condition Sym(d K_n) = 0.
    for (const auto& idx : sorted_multi_indices(order + 1, dim)) {
        DetEquation eq;
        eq.free_rank = order + 1;
        eq.free_index = idx;
        for (const auto& [value, count] : value_counts(idx)) {
            DetTerm t;
            t.coefficient = GaussianRational(Rational(count, order + 1)) * half_inv_mass;
            t.rank = order;
            t.component = erase_one(idx, value);
            t.k_deriv = {value};
            t.sym_grad = true;
            eq.terms.push_back(std::move(t));
        }
        sys.equations.push_back(std::move(eq));
    }

    // Free-index counts r = n .. 0:
    //   i Kdot_r + (1/2M) Sym(d K_{r-1}) + 2 sum_{p odd} C(r+p, p) K_{r+p} . grad^p V = 0
    for (int r = order; r >= 0; --r) {
        for (const auto& idx : sorted_multi_indices(r, dim)) {
            DetEquation eq;
            eq.free_rank = r;
            eq.free_index = idx;

            if (!stationary) {
                DetTerm t;
                t.coefficient = GaussianRational::i();
                t.rank = r;
                t.component = idx;
                t.t_deriv = 1;
                eq.terms.push_back(std::move(t));
            }
            if (r >= 1) {
                for (const auto& [value, count] : value_counts(idx)) {
                    DetTerm t;
                    t.coefficient = GaussianRational(Rational(count, r)) * half_inv_mass;
                    t.rank = r - 1;
                    t.component = erase_one(idx, value);
                    t.k_deriv = {value};
                    t.sym_grad = true;
                    eq.terms.push_back(std::move(t));
                }
            }
            for (int p = 1; r + p <= order; p += 2) {
                const Rational factor = Rational(2) * binom(r + p, p);
                for (const auto& b : sorted_multi_indices(p, dim)) {
                    DetTerm t;
                    t.coefficient =
                        GaussianRational(factor * Rational(multi_index_multiplicity(b), BigInt(1)));
                    t.rank = r + p;
                    t.component = idx;
                    t.component.insert(t.component.end(), b.begin(), b.end());
                    std::sort(t.component.begin(), t.component.end());
                    t.v_deriv = b;
                    eq.terms.push_back(std::move(t));
                }
            }
            if (!eq.terms.empty()) sys.equations.push_back(std::move(eq));
        }
    }
    return sys;
}

void OrderedTensor::add(const std::vector<int>& idx, const LaurentPoly& value) {
    if (value.is_zero()) return;
    auto [it, inserted] = comps.emplace(idx, value);
    if (!inserted) {
        it->second += value;
        if (it->second.is_zero()) comps.erase(it);
    }
}

OrderedTensor full_symmetrize(const OrderedTensor& t) {
    OrderedTensor out;
    out.rank = t.rank;
    out.dim = t.dim;
    for (const auto& [idx, poly] : t.comps) {
        std::vector<int> perm = idx;
        std::sort(perm.begin(), perm.end());
        // Each component contributes its share to every distinct ordering of
        // its index multiset; dividing by the count of those orderings makes
        // the map an idempotent average.
        Rational inv_mult = Rational(multi_index_multiplicity(perm), BigInt(1)).inverse();
        LaurentPoly share = poly.scale(GaussianRational(inv_mult));
        do {
            out.add(perm, share);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

SymTensorField symmetrized_gradient(const SymTensorField& k) {
    const int r = k.rank() + 1;
    SymTensorField out(r, k.dim());
    for (const auto& idx : sorted_multi_indices(r, k.dim())) {
        LaurentPoly acc;
        bool started = false;
        for (const auto& [value, count] : value_counts(idx)) {
            const LaurentPoly* comp = k.component(erase_one(idx, value));
            if (!comp) continue;
            LaurentPoly piece =
                comp->diff(static_cast<std::size_t>(value)).scale(GaussianRational(Rational(count, r)));
            if (!started) {
                acc = std::move(piece);
                started = true;
            } else {
                acc += piece;
            }
        }
        if (started && !acc.is_zero()) out.set_component(idx, std::move(acc));
    }
    return out;
}

UnknownBasis::UnknownBasis(int order, std::size_t dim, const AnsatzBounds& bounds)
    : order_(order), dim_(dim) {
    if (static_cast<int>(bounds.x_degree.size()) < order + 1 ||
        static_cast<int>(bounds.t_degree.size()) < order + 1)
        throw Error(ErrorKind::BadArgument, "UnknownBasis: bounds must cover ranks 0..n");
    monos_.resize(order + 1);
    const std::size_t nv = dim + 1;
    for (int j = 0; j <= order; ++j) {
        // All monomials with t-degree <= t_bound and total x-degree <= x_bound,
        // collected in canonical (graded-lex) order.
        std::map<Monomial, bool> set;
        std::vector<int> xe(dim, 0);
        auto emit = [&](int tdeg) {
            Monomial m(nv);
            m.exps[0] = tdeg;
            for (std::size_t a = 0; a < dim; ++a) m.exps[a + 1] = xe[a];
            set.emplace(std::move(m), true);
        };
        // Enumerate x-exponent vectors with bounded total degree.
        std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int remaining) {
            if (pos == dim) {
                for (int td = 0; td <= bounds.t_degree[j]; ++td) emit(td);
                return;
            }
            for (int e = 0; e <= remaining; ++e) {
                xe[pos] = e;
                rec(pos + 1, remaining - e);
            }
            xe[pos] = 0;
        };
        rec(0, bounds.x_degree[j]);
        for (const auto& [m, unused] : set) monos_[j].push_back(m);
    }
    for (int j = 0; j <= order; ++j) {
        for (const auto& comp : sorted_multi_indices(j, dim)) {
            offset_[{j, comp}] = entries_.size();
            for (const auto& m : monos_[j]) entries_.push_back({j, comp, m});
        }
    }
}

std::pair<std::size_t, std::size_t> UnknownBasis::block(int rank,
                                                        const std::vector<int>& comp) const {
    auto it = offset_.find({rank, comp});
    if (it == offset_.end()) throw Error(ErrorKind::BadArgument, "UnknownBasis: unknown block");
    return {it->second, monos_[rank].size()};
}

std::vector<SymTensorField> UnknownBasis::tensors_from_vector(const ExactVector& v) const {
    if (v.size() != entries_.size())
        throw Error(ErrorKind::BadArgument, "tensors_from_vector: size mismatch");
    std::vector<SymTensorField> out;
    for (int j = 0; j <= order_; ++j) out.emplace_back(j, dim_);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (v[i].is_zero()) continue;
        const Entry& e = entries_[i];
        out[e.rank].add_component(e.component,
                                  LaurentPoly::term(dim_ + 1, e.mono, v[i]));
    }
    return out;
}

ExactVector UnknownBasis::vector_from_tensors(const std::vector<SymTensorField>& ks) const {
    ExactVector v(entries_.size());
    for (const auto& k : ks) {
        if (k.rank() > order_)
            throw Error(ErrorKind::BadArgument, "vector_from_tensors: rank exceeds order");
        for (const auto& [comp, poly] : k.components()) {
            auto [off, len] = block(k.rank(), comp);
            const auto& monos = monos_[k.rank()];
            for (const auto& [mono, coeff] : poly.terms()) {
                auto it = std::lower_bound(monos.begin(), monos.end(), mono);
                if (it == monos.end() || !(*it == mono))
                    throw Error(ErrorKind::BadArgument,
                                "vector_from_tensors: monomial outside ansatz bounds");
                v[off + static_cast<std::size_t>(it - monos.begin())] = coeff;
            }
            (void)len;
        }
    }
    return v;
}

RationalMatrix instantiate(const DetSystem& sys, const UnknownBasis& basis, const LaurentPoly& v) {
    const std::size_t nv = sys.dim + 1;
    if (v.nvars() != nv) throw Error(ErrorKind::ArityMismatch, "instantiate: V arity mismatch");
    if (v.depends_on(0))
        throw Error(ErrorKind::TimeDependentPotential, "instantiate: V depends on t");

    // Precompute the distinct V derivatives appearing in the system.
    std::map<std::vector<int>, LaurentPoly> v_derivs;
    for (const auto& eq : sys.equations) {
        for (const auto& term : eq.terms) {
            if (term.v_deriv.empty()) continue;
            if (v_derivs.count(term.v_deriv)) continue;
            LaurentPoly d = v;
            for (int a : term.v_deriv) d = d.diff(static_cast<std::size_t>(a));
            v_derivs.emplace(term.v_deriv, std::move(d));
        }
    }

    RationalMatrix mat(0, basis.size());
    std::map<std::pair<std::size_t, Monomial>, std::size_t> row_of;
    for (std::size_t e = 0; e < sys.equations.size(); ++e) {
        const DetEquation& eq = sys.equations[e];
        for (const auto& term : eq.terms) {
            auto [off, len] = basis.block(term.rank, term.component);
            const auto& monos = basis.monomials(term.rank);
            for (std::size_t i = 0; i < len; ++i) {
                LaurentPoly contrib = LaurentPoly::term(nv, monos[i], term.coefficient);
                if (term.t_deriv) contrib = contrib.diff(0, term.t_deriv);
                for (int a : term.k_deriv) contrib = contrib.diff(static_cast<std::size_t>(a));
                if (!term.v_deriv.empty()) contrib *= v_derivs.at(term.v_deriv);
                if (contrib.is_zero()) continue;
                for (const auto& [mono, coeff] : contrib.terms()) {
                    auto [it, inserted] = row_of.emplace(std::make_pair(e, mono), mat.rows());
                    if (inserted) mat.append_row();
                    mat.add(it->second, off + i, coeff);
                }
            }
        }
    }
    return mat;
}

RationalMatrix oracle_system(int order, std::size_t dim, const UnknownBasis& basis,
                             const LaurentPoly& v, const Rational& mass) {
    const DiffOp l = build_L(dim, mass, v);
    RationalMatrix mat(0, basis.size());
    std::map<std::pair<DerivIndex, Monomial>, std::size_t> row_of;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const auto& e = basis.entries()[col];
        SymTensorField k(e.rank, dim);
        k.set_component(e.component,
                        LaurentPoly::term(dim + 1, e.mono, GaussianRational(1)));
        DiffOp residual = commutator_with_L(l, nested_anticommutator(k));
        for (const auto& [d, coeff] : residual.terms()) {
            for (const auto& [mono, c] : coeff.terms()) {
                auto [it, inserted] = row_of.emplace(std::make_pair(d, mono), mat.rows());
                if (inserted) mat.append_row();
                mat.add(it->second, col, c);
            }
        }
    }
    (void)order;
    return mat;
}

SpaceComparison compare_solution_spaces(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols() != b.cols())
        throw Error(ErrorKind::BadArgument, "compare_solution_spaces: unknown-count mismatch");
    RrefResult ra = rref_nullspace(a);
    RrefResult rb = rref_nullspace(b);
    SpaceComparison cmp;
    cmp.rank_a = ra.rank;
    cmp.rank_b = rb.rank;
    cmp.nullity_a = ra.nullspace.size();
    cmp.nullity_b = rb.nullspace.size();
    if (ra.rank != rb.rank) {
        cmp.witness = "rank mismatch";
        return cmp;
    }
    for (std::size_t i = 0; i < ra.nullspace.size(); ++i) {
        if (!is_zero_vector(b.apply(ra.nullspace[i]))) {
            cmp.witness = "nullspace vector " + std::to_string(i) + " of A not annihilated by B";
            return cmp;
        }
    }
    for (std::size_t i = 0; i < rb.nullspace.size(); ++i) {
        if (!is_zero_vector(a.apply(rb.nullspace[i]))) {
            cmp.witness = "nullspace vector " + std::to_string(i) + " of B not annihilated by A";
            return cmp;
        }
    }
    cmp.pass = true;
    return cmp;
}

}  // namespace symschrod

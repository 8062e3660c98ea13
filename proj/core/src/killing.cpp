#include "symschrod/killing.hpp"

#include <algorithm>

#include "symschrod/error.hpp"

namespace symschrod {

AnsatzBounds ansatz_bounds(int order, std::size_t dim, int margin) {
    if (margin < 0) throw Error(ErrorKind::BadArgument, "ansatz_bounds: margin must be >= 0");
    AnsatzBounds b;
    b.x_degree.resize(order + 1);
    b.t_degree.resize(order + 1);
    for (int j = 0; j <= order; ++j) {
        b.x_degree[j] = (dim == 1 ? order - j : order + j) + margin;
        b.t_degree[j] = order + margin;
    }
    return b;
}

namespace {

struct FreeSolve {
    AnsatzBounds bounds;
    UnknownBasis basis;
    RrefResult rr;
};

FreeSolve solve_free_once(int order, std::size_t dim, const Rational& mass, int margin) {
    AnsatzBounds bounds = ansatz_bounds(order, dim, margin);
    UnknownBasis basis(order, dim, bounds);
    DetSystem sys = generate_det_system(order, dim, false, mass);
    RationalMatrix a = instantiate(sys, basis, LaurentPoly(dim + 1));
    RrefResult rr = rref_nullspace(a);
    return {std::move(bounds), std::move(basis), std::move(rr)};
}

}  // namespace

SymmetryBasis solve_free(int order, std::size_t dim, const Rational& mass, int margin,
                         bool check_saturation) {
    FreeSolve fs = solve_free_once(order, dim, mass, margin);
    std::size_t dim0 = fs.rr.nullspace.size();

    if (check_saturation) {
        std::size_t dim1 = solve_free_once(order, dim, mass, margin + 1).rr.nullspace.size();
        std::size_t dim2 = solve_free_once(order, dim, mass, margin + 2).rr.nullspace.size();
        if (dim0 != dim1 || dim0 != dim2)
            throw Error(ErrorKind::SaturationFailure,
                        "solve_free: nullspace dimension still grows with the ansatz margin (" +
                            std::to_string(dim0) + ", " + std::to_string(dim1) + ", " +
                            std::to_string(dim2) + "); enlarge the bounds");
    }

    SymmetryBasis out;
    out.order = order;
    out.dim = dim;
    out.mass = mass;
    out.bounds = fs.bounds;

    const DiffOp l = build_L(dim, mass, LaurentPoly(dim + 1));
    for (auto& vec : fs.rr.nullspace) {
        auto tensors = fs.basis.tensors_from_vector(vec);
        DiffOp q(dim);
        for (const auto& k : tensors) q += nested_anticommutator(k);
        if (!commutator_with_L(l, q).is_zero())
            throw Error(ErrorKind::BadArgument,
                        "solve_free: nullspace vector fails the commutator check");
        out.operators.push_back(std::move(q));
        out.provenance.push_back(std::move(vec));
    }
    return out;
}

BigInt count_formula(int order) {
    if (order < 0) throw Error(ErrorKind::BadArgument, "count_formula: order must be >= 0");
    BigInt n(order);
    BigInt num = (n + BigInt(1)) * (n + BigInt(2)) * (n + BigInt(2)) * (n + BigInt(2)) * (n + BigInt(3));
    return num / BigInt(24);
}

DimensionReport dimension_report(int max_order, std::size_t dim, const Rational& mass) {
    DimensionReport rep;
    rep.dim = dim;
    rep.mass = mass;
    std::size_t prev = 0;
    for (int n = 0; n <= max_order; ++n) {
        SymmetryBasis basis = solve_free(n, dim, mass);
        DimensionRow row;
        row.order = n;
        row.computed_dim = basis.operators.size();
        row.increment = row.computed_dim - prev;
        row.formula = count_formula(n);
        BigInt raw(static_cast<std::int64_t>(row.computed_dim));
        BigInt inc(static_cast<std::int64_t>(row.increment));
        row.raw_match = raw == row.formula;
        row.increment_match = inc == row.formula;
        rep.rows.push_back(std::move(row));
        prev = basis.operators.size();
    }
    return rep;
}

bool in_span(const DiffOp& candidate, const SymmetryBasis& basis) {
    UnknownBasis ub(basis.order, basis.dim, basis.bounds);
    ExactVector cand;
    try {
        cand = ub.vector_from_tensors(anticommutator_decompose(candidate));
    } catch (const Error&) {
        return false;  // outside the ansatz bounds
    }
    RationalMatrix rows_only(0, ub.size());
    for (const auto& v : basis.provenance) {
        std::size_t r = rows_only.append_row();
        for (std::size_t c = 0; c < v.size(); ++c) rows_only.set(r, c, v[c]);
    }
    std::size_t base_rank = rref_nullspace(rows_only).rank;
    std::size_t r = rows_only.append_row();
    for (std::size_t c = 0; c < cand.size(); ++c) rows_only.set(r, c, cand[c]);
    return rref_nullspace(rows_only).rank == base_rank;
}

}  // namespace symschrod

#pragma once

#include "symschrod/detsys.hpp"

namespace symschrod {

// Polynomial degree bounds for the free-potential ansatz. For m = 1 the
// chain d^s K = 0 with s = n - j + 1 caps the x-degree at n - j; for m > 1
// a conservative n + j bound is used and validated by saturation.
AnsatzBounds ansatz_bounds(int order, std::size_t dim, int margin);

struct SymmetryBasis {
    int order = 0;
    std::size_t dim = 1;
    Rational mass{1};
    std::vector<DiffOp> operators;
    std::vector<ExactVector> provenance;  // nullspace vector per operator
    AnsatzBounds bounds;                  // bounds actually used
};

// Solves the V = 0 determining system exactly on a polynomial ansatz,
// converts the nullspace into explicit operators, and verifies each against
// the free L by commutation. The dimension must be stable under margin +1
// and +2, otherwise a SaturationFailure is thrown.
SymmetryBasis solve_free(int order, std::size_t dim, const Rational& mass = Rational(1),
                         int margin = 0, bool check_saturation = true);

// N_n = (n+1)(n+2)^3(n+3) / 4!.
BigInt count_formula(int order);

struct DimensionRow {
    int order = 0;
    std::size_t computed_dim = 0;    // dim of symmetries of order <= n
    std::size_t increment = 0;       // computed_dim(n) - computed_dim(n-1)
    BigInt formula;                  // N_n
    bool raw_match = false;
    bool increment_match = false;
};

struct DimensionReport {
    std::size_t dim = 1;
    Rational mass{1};
    std::vector<DimensionRow> rows;
};

// Computed dimensions against the closed-form count N_n. The comparison is
// reported both for the raw dimension and for the increment over order n-1;
// the count's intended spatial dimension is not pinned down, so matches are
// recorded, not asserted.
DimensionReport dimension_report(int max_order, std::size_t dim,
                                 const Rational& mass = Rational(1));

// Exact membership of an operator in the span of a basis (coefficient-vector
// rank test within the given ansatz enumeration).
bool in_span(const DiffOp& candidate, const SymmetryBasis& basis);

}  // namespace symschrod

#pragma once

#include <map>
#include <string>
#include <vector>

#include "symschrod/laurent.hpp"

namespace symschrod {

// Multi-index of derivatives over (d/dt, d/dx_1, ..., d/dx_m).
using DerivIndex = std::vector<int>;

// Normal-ordered linear differential operator: sum of coefficient * mixed
// partial, with all LaurentPoly coefficients to the left of all derivatives.
class DiffOp {
  public:
    DiffOp() : dim_(0) {}
    explicit DiffOp(std::size_t dim) : dim_(dim) {}  // spatial dimension m
    static DiffOp zero(std::size_t dim) { return DiffOp(dim); }
    static DiffOp identity(std::size_t dim);
    static DiffOp multiplication(const LaurentPoly& f);
    static DiffOp derivative(std::size_t dim, std::size_t var, int order = 1);

    std::size_t dim() const { return dim_; }           // m
    std::size_t nvars() const { return dim_ + 1; }     // t plus x_1..x_m
    bool is_zero() const { return terms_.empty(); }
    int order() const;  // max total derivative degree, 0 for the zero operator
    bool has_time_derivative() const;

    const std::map<DerivIndex, LaurentPoly>& terms() const { return terms_; }
    LaurentPoly coefficient(const DerivIndex& d) const;
    void add_term(const DerivIndex& d, const LaurentPoly& coeff);

    friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
    friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
    DiffOp operator-() const;
    DiffOp& operator+=(const DiffOp& b) { *this = *this + b; return *this; }
    DiffOp& operator-=(const DiffOp& b) { *this = *this - b; return *this; }
    DiffOp scale(const GaussianRational& c) const;

    friend bool operator==(const DiffOp& a, const DiffOp& b) {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const DiffOp& a, const DiffOp& b) { return !(a == b); }

    std::string to_string() const;

  private:
    std::size_t dim_;
    std::map<DerivIndex, LaurentPoly> terms_;
};

// Exact normal-ordered product via the generalized Leibniz expansion.
DiffOp op_compose(const DiffOp& a, const DiffOp& b);
// a b - b a.
DiffOp commutator(const DiffOp& a, const DiffOp& b);
// a b + b a.
DiffOp anticommutator(const DiffOp& a, const DiffOp& b);

// Rank-j symmetric tensor with LaurentPoly components over indices 1..m,
// stored once per sorted multi-index.
class SymTensorField {
  public:
    SymTensorField(int rank, std::size_t dim) : rank_(rank), dim_(dim) {}

    int rank() const { return rank_; }
    std::size_t dim() const { return dim_; }

    // Index values in 1..m, any order; stored sorted.
    const LaurentPoly* component(std::vector<int> idx) const;
    void set_component(std::vector<int> idx, LaurentPoly value);
    void add_component(std::vector<int> idx, const LaurentPoly& value);

    const std::map<std::vector<int>, LaurentPoly>& components() const { return comps_; }

  private:
    int rank_;
    std::size_t dim_;
    std::map<std::vector<int>, LaurentPoly> comps_;
};

// All sorted multi-indices of length `rank` over {1..dim}, in lexicographic
// order; C(dim+rank-1, rank) of them.
std::vector<std::vector<int>> sorted_multi_indices(int rank, std::size_t dim);
// Number of distinct permutations of a sorted multi-index.
BigInt multi_index_multiplicity(const std::vector<int>& idx);

// Q_j = [[...[K, d_{a_1}]_+, d_{a_2}]_+, ..., d_{a_j}]_+ summed over repeated
// indices; rank 0 yields multiplication by the scalar component.
DiffOp nested_anticommutator(const SymTensorField& k);

// L = i d/dt + (1/2M) Laplacian - V, with V a time-independent potential
// over nvars = m+1 variables.
DiffOp build_L(std::size_t m, const Rational& mass, const LaurentPoly& v);

// Residual [L, Q] for a purely spatial Q (throws if Q contains d/dt).
DiffOp commutator_with_L(const DiffOp& l, const DiffOp& q);

// Inverse of the nested-anticommutator representation: tensors K_0..K_n such
// that Q = sum_j nested_anticommutator(K_j). Requires Q free of d/dt.
std::vector<SymTensorField> anticommutator_decompose(const DiffOp& q);

}  // namespace symschrod

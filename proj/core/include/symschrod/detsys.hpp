#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symschrod/diffop.hpp"
#include "symschrod/matrix.hpp"

namespace symschrod {

// One additive term of a determining equation: coefficient times a
// (possibly t- or x-differentiated) tensor component, optionally contracted
// with a derivative of the potential.
struct DetTerm {
    GaussianRational coefficient;
    int rank = 0;                 // tensor rank of the referenced K
    std::vector<int> component;   // sorted multi-index of the K component
    int t_deriv = 0;              // time derivatives applied to K
    std::vector<int> k_deriv;     // spatial derivatives applied to K (var ids 1..m)
    std::vector<int> v_deriv;     // derivative multi-index applied to V; empty = no V factor
    bool sym_grad = false;        // belongs to a symmetrized-gradient group

    friend bool operator==(const DetTerm&, const DetTerm&) = default;
};

struct DetEquation {
    int free_rank = 0;            // number of free indices
    std::vector<int> free_index;  // sorted multi-index, length free_rank
    std::vector<DetTerm> terms;

    friend bool operator==(const DetEquation&, const DetEquation&) = default;
};

// Structured determining-equation system for n-th order symmetry operators
// in m spatial dimensions. The emitted coefficients follow the commutator
// [L, Q] with L = i d/dt + (1/2M) Laplacian - V, which fixes every sign and
// factor; see the convention notes in generated reports.
struct DetSystem {
    int order = 0;
    std::size_t dim = 1;
    bool stationary = false;
    Rational mass{1};
    std::vector<DetEquation> equations;

    friend bool operator==(const DetSystem&, const DetSystem&) = default;

    // Tensor ranks referenced by an equation (for the decoupling checks).
    static std::vector<int> referenced_ranks(const DetEquation& eq);
};

DetSystem generate_det_system(int order, std::size_t dim, bool stationary,
                              const Rational& mass = Rational(1));

// Tensor with one explicit (unsymmetrized) index slot order; used to state
// symmetrization as an honest idempotent operation.
struct OrderedTensor {
    int rank = 0;
    std::size_t dim = 1;
    std::map<std::vector<int>, LaurentPoly> comps;  // unsorted index tuples

    void add(const std::vector<int>& idx, const LaurentPoly& value);
};

// Average over all index permutations; idempotent.
OrderedTensor full_symmetrize(const OrderedTensor& t);

// Symmetrized gradient Sym(d K): the full symmetrization of the rank-(j+1)
// tensor d_a K^{a_1...a_j}, returned in symmetric storage.
SymTensorField symmetrized_gradient(const SymTensorField& k);

// Polynomial ansatz degree bounds per tensor rank 0..n.
struct AnsatzBounds {
    std::vector<int> x_degree;
    std::vector<int> t_degree;
};

// Enumeration of the unknown monomial coefficients of an ansatz, fixing the
// column order shared by `instantiate` and `oracle_system`.
class UnknownBasis {
  public:
    struct Entry {
        int rank;
        std::vector<int> component;
        Monomial mono;
    };

    UnknownBasis(int order, std::size_t dim, const AnsatzBounds& bounds);

    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t dim() const { return dim_; }
    int order() const { return order_; }

    // Columns covering the block of a given (rank, component).
    std::pair<std::size_t, std::size_t> block(int rank, const std::vector<int>& comp) const;
    const std::vector<Monomial>& monomials(int rank) const { return monos_[rank]; }

    // Assemble the tensors described by an exact coefficient vector.
    std::vector<SymTensorField> tensors_from_vector(const ExactVector& v) const;

    // Project explicit tensors onto the coefficient vector; throws when a
    // component falls outside the ansatz degree bounds.
    ExactVector vector_from_tensors(const std::vector<SymTensorField>& ks) const;

  private:
    int order_;
    std::size_t dim_;
    std::vector<Entry> entries_;
    std::vector<std::vector<Monomial>> monos_;                      // per rank
    std::map<std::pair<int, std::vector<int>>, std::size_t> offset_;
};

// Linear system over the ansatz unknowns obtained by substituting the ansatz
// into the structured determining equations. V must be time-independent.
RationalMatrix instantiate(const DetSystem& sys, const UnknownBasis& basis, const LaurentPoly& v);

// Independent derivation of the same linear system: builds Q from the ansatz
// via nested anticommutators, expands [L, Q], and equates every
// normal-ordered coefficient to zero.
RationalMatrix oracle_system(int order, std::size_t dim, const UnknownBasis& basis,
                             const LaurentPoly& v, const Rational& mass = Rational(1));

struct SpaceComparison {
    bool pass = false;
    std::size_t rank_a = 0, rank_b = 0;
    std::size_t nullity_a = 0, nullity_b = 0;
    std::string witness;  // set on failure
};

// Rank equality plus mutual containment of nullspaces.
SpaceComparison compare_solution_spaces(const RationalMatrix& a, const RationalMatrix& b);

}  // namespace symschrod

#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "symschrod/rational.hpp"

namespace symschrod {

using ExactVector = std::vector<GaussianRational>;

// Sparse matrix over Gaussian rationals. Rows are kept as ordered maps so
// elimination and serialization are deterministic.
class RationalMatrix {
  public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    void set(std::size_t r, std::size_t c, GaussianRational v);
    void add(std::size_t r, std::size_t c, const GaussianRational& v);
    GaussianRational get(std::size_t r, std::size_t c) const;
    std::size_t append_row();  // returns new row index

    const std::map<std::size_t, GaussianRational>& row(std::size_t r) const { return rows_[r]; }

    // Exact A*v.
    ExactVector apply(const ExactVector& v) const;

    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
        return a.cols_ == b.cols_ && a.rows_ == b.rows_;
    }

  private:
    std::size_t cols_ = 0;
    std::vector<std::map<std::size_t, GaussianRational>> rows_;
};

struct RrefResult {
    std::size_t rank = 0;
    // Canonical reduced nullspace basis: for each free column, the vector
    // with 1 there and back-substituted pivot entries. Deterministic.
    std::vector<ExactVector> nullspace;
    std::vector<std::size_t> pivot_cols;
};

RrefResult rref_nullspace(const RationalMatrix& a);

bool is_zero_vector(const ExactVector& v);

}  // namespace symschrod

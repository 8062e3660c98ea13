#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "symschrod/rational.hpp"

namespace symschrod {

// Exponent vector over the m+1 variables (slot 0 = t, slots 1..m = x_a).
// Exponents may be negative (Laurent). Ordered graded-lexicographically
// with total degree first, then t before x_1 < ... < x_m.
struct Monomial {
    std::vector<int> exps;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : exps(nvars, 0) {}
    static Monomial unit(std::size_t nvars, std::size_t var, int power = 1);

    int total_degree() const;
    bool is_constant() const;

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps == b.exps; }
    friend bool operator<(const Monomial& a, const Monomial& b);

    Monomial operator*(const Monomial& b) const;
};

// Sparse multivariate Laurent polynomial over Gaussian rationals.
// The canonical form never stores zero coefficients; the term map's
// ordering makes serialization and iteration deterministic.
class LaurentPoly {
  public:
    LaurentPoly() : nvars_(0) {}
    explicit LaurentPoly(std::size_t nvars) : nvars_(nvars) {}
    static LaurentPoly constant(std::size_t nvars, GaussianRational c);
    static LaurentPoly variable(std::size_t nvars, std::size_t var, int power = 1);
    static LaurentPoly term(std::size_t nvars, Monomial mono, GaussianRational c);

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Monomial, GaussianRational>& terms() const { return terms_; }

    GaussianRational coeff(const Monomial& m) const;
    // Max / min exponent of a variable over all terms (0 for the zero poly).
    int max_degree(std::size_t var) const;
    int min_degree(std::size_t var) const;
    bool depends_on(std::size_t var) const;

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& b) { *this = *this + b; return *this; }
    LaurentPoly& operator-=(const LaurentPoly& b) { *this = *this - b; return *this; }
    LaurentPoly& operator*=(const LaurentPoly& b) { *this = *this * b; return *this; }

    LaurentPoly scale(const GaussianRational& c) const;
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    // Exact partial derivative of the given order w.r.t. variable `var`.
    LaurentPoly diff(std::size_t var, int order = 1) const;

    // Term-by-term antiderivative w.r.t. `var`; throws if any term has
    // exponent -1 in `var` (logarithmic antiderivative unsupported).
    LaurentPoly antiderivative(std::size_t var) const;

    // The polynomial with `var` fixed to an exact rational value, same arity.
    LaurentPoly substitute(std::size_t var, const Rational& value) const;

    // Direct evaluation; throws PoleAtPoint when a coordinate with negative
    // exponent is zero at the point.
    std::complex<double> eval(const std::vector<std::complex<double>>& point) const;

    void add_term(const Monomial& mono, const GaussianRational& c);

    std::string to_string(const std::vector<std::string>& names = {}) const;

  private:
    std::size_t nvars_;
    std::map<Monomial, GaussianRational> terms_;
    void check_arity(const LaurentPoly& other) const;
};

}  // namespace symschrod

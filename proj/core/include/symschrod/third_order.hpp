#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "symschrod/diffop.hpp"
#include "symschrod/ode.hpp"

namespace symschrod {

// Canonical potential families of the third-order analysis (m = 1, V = U/2):
//   W213: U'' - 3U^2 + 3 w1 = 0                (Weierstrass)
//   P214: U'' - 3U^2 - 8 w2 x = 0              (Painleve I)
//   E215: (U'' - 3U^2)' - 2 w3 (x U' + 2U) = 0
//   E216: phi''' - 3(phi')^2 - 2 w4 (x^2 phi)' = (1/3) w4^2 x^4 + w5,  U = phi'
enum class FamilyId { W213, P214, E215, E216 };

const char* family_name(FamilyId id);

struct PotentialFamily {
    FamilyId id = FamilyId::W213;
    Rational omega1{0}, omega2{0}, omega3{0}, omega4{0}, omega5{0};
    std::optional<LaurentPoly> exact_potential;  // over (t, x), x-dependence only
};

// Exact third-order coefficient functions h_3..h_0 over (t, x).
struct ThirdOrderCoeffs {
    LaurentPoly h3, h2, h1, h0;
};

// The five-equation determining chain for n = 3, m = 1, V = U/2, M = 1:
//   h3' ; h2' + 2 h3dot ; 2 h2dot + h1' - 6 h3 U' ;
//   2 h1dot + h0' - 4 h2 U' ; h0dot - h1 U' + h3 U'''
std::array<LaurentPoly, 5> third_order_residuals(const ThirdOrderCoeffs& h, const LaurentPoly& u);

// Compatibility condition on U for functions a(t), b(t), c(t):
//   a U'''' - (2 a..x^2 + 6 a U + c - 2 b.x) U'' - 6 (2 a.. x + a U' - b.) U'
//   - 12 a.. U - 2 (2 a'''' x^2 - 2 b... x + c..)
LaurentPoly compatibility_residual(const LaurentPoly& u, const LaurentPoly& a,
                                   const LaurentPoly& b, const LaurentPoly& c);

// Coefficients generated by (a, b, c, d):
//   h3 = a ; h2 = -2 a. x + b ; h1 = 2 a.. x^2 - 2 b. x + c + 6 a U ;
//   h0 = -(4/3) a... x^3 + 2 b.. x^2 - 2 c. x + d - 4 a. phi + 4 (b - 2 a. x) U
// with phi the term-by-term antiderivative of U (fails if U has an x^-1 term).
ThirdOrderCoeffs coeffs_from_abc(const LaurentPoly& a, const LaurentPoly& b, const LaurentPoly& c,
                                 const LaurentPoly& d, const LaurentPoly& u);

// Residual of the family's defining ODE for an exact potential.
LaurentPoly family_residual(const PotentialFamily& fam);

// A symmetry candidate Q = op * exp(time_exp * t). Except for the E216 pair
// the exponent is zero. exact_verify checks [L, op] + i*time_exp*op == 0.
struct ThirdOrderOp {
    DiffOp op;
    GaussianRational time_exp;
    std::string label;
};

// Explicit operators per family; the E216 pair needs omega4 < 0 (and, for the
// exact route, -omega4 a perfect rational square).
std::vector<ThirdOrderOp> build_operator(const PotentialFamily& fam);

struct ExactVerifyResult {
    bool pass = false;
    std::vector<DiffOp> residuals;  // per operator
};

ExactVerifyResult exact_verify(const PotentialFamily& fam);

// ---- numeric pipeline ----

struct OdeSolution {
    FamilyId id = FamilyId::W213;
    std::vector<double> params;     // family parameters as doubles
    std::vector<double> xs;         // strictly increasing sample abscissas
    std::vector<double> u, du;      // U, U'
    std::vector<double> d2u;        // U'' (E215 only; part of its state)
    std::vector<double> phi;        // E216 only
    // Derivative columns from finite-difference stencils over auxiliary
    // integrated samples. They are numerically independent of the analytic
    // expansion of the h coefficients, so the residual checks do not collapse
    // into algebraic identities.
    double fd_step = 0.0;
    std::vector<double> du_fd;      // d/dx of the u samples
    std::vector<double> d2u_fd;     // d/dx of the du samples
    std::vector<double> d3u_fd;     // d/dx of U'' values closed through the family ODE
    std::vector<double> dphi_fd;    // d/dx of the phi samples (E216)
    double max_step_error = 0.0;
    double series_check_abscissa = 0.0;
    double series_check_error = 0.0;  // |series - integrator| at the abscissa
};

// Initial data layout: W213/P214 {U, U'}; E215 {U, U', U''}; E216 {phi, U, U'}.
// fd_step_rel is the stencil step for the derivative columns, relative to
// the interval length.
OdeSolution ode_integrate(const PotentialFamily& fam, double x0, double x1,
                          const std::vector<double>& init, std::size_t samples, double tol,
                          double blowup_bound = 1e8, double fd_step_rel = 2e-4);

// Truncated power-series solution about x0 (same initial-data layout);
// returns Taylor coefficients of U (and of phi for E216).
struct SeriesSolution {
    std::vector<double> u;
    std::vector<double> phi;
    double eval_u(double dx) const;
};
SeriesSolution series_solution(const PotentialFamily& fam, double x0,
                               const std::vector<double>& init, int order);

// Analytic time profile: sum of kappa * t^k * exp(s t).
struct TimeFunc {
    struct Term {
        std::complex<double> kappa;
        int power = 0;
        std::complex<double> expo{0.0, 0.0};
    };
    std::vector<Term> terms;

    static TimeFunc zero() { return {}; }
    static TimeFunc constant(std::complex<double> v);
    static TimeFunc monomial(std::complex<double> kappa, int power);
    static TimeFunc exponential(std::complex<double> kappa, std::complex<double> s);

    std::complex<double> eval(double t) const;
    TimeFunc derivative() const;
};

// Numeric h-coefficients in the (a, b, c, d) parametrization, with optional
// per-coefficient perturbation knobs for negative controls.
struct NumericCoeffs {
    TimeFunc a, b, c, d;
    double scale = 1.0;
    std::array<double, 4> h_scale{1.0, 1.0, 1.0, 1.0};  // multiplies h3, h2, h1, h0
};

// The (a, b, c, d) profile of the family's operator; branch selects the
// member of the E216 pair (+1 / -1) and is ignored otherwise.
NumericCoeffs operator_coeffs(const PotentialFamily& fam, int branch = +1);

struct NumericVerifyReport {
    double max_abs_residual = 0.0;
    std::array<double, 5> per_residual{};
    double tol = 0.0;
    bool pass = false;
};

// Evaluates the five determining residuals pointwise on the (t, x) grid
// spanned by t_samples and the solution's abscissas.
NumericVerifyReport numeric_verify(const PotentialFamily& fam, const OdeSolution& sol,
                                   const std::vector<double>& t_samples, double tol,
                                   const NumericCoeffs& coeffs);

// Pointwise compatibility residual on the numeric solution (a, b, c analytic).
std::vector<double> numeric_compatibility(const PotentialFamily& fam, const OdeSolution& sol,
                                          const TimeFunc& a, const TimeFunc& b, const TimeFunc& c,
                                          const std::vector<double>& t_samples);

}  // namespace symschrod

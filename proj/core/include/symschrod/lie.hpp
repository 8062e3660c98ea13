#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symschrod/expr.hpp"

namespace symschrod {

// Which form of the evolution equation the residuals are taken against.
// The catalog's symmetries hold for the i-form i psi_t + Lap psi + F = 0;
// the heat form stays selectable so the difference between the two readings
// is a measurable fact rather than an assumption.
enum class NseForm { SchrodingerI, Heat };

struct VectorField {
    std::string label;
    Expr xi_t;                 // coefficient of d/dt
    std::vector<Expr> xi_x;    // coefficients of d/dx_a, a = 1..m
    Expr eta;                  // psi component
    Expr eta_conj;             // psi* component
};

// How the eta0 atom's time derivative closes (rows whose extra symmetry
// shifts by an arbitrary solution of the equation itself).
struct Eta0Rule {
    bool present = false;
    double gamma = 0.0;  // F = gamma psi + psi* for row 2.2; zero for 2.1
};

// Laplacian eigenvalue rule for the theta(x) atom.
enum class ThetaRule { None, Laplace, HelmholtzDelta2 };

struct NonlinearitySpec {
    std::string row;     // "base", "1.1".."1.6", "2.1".."2.15"
    int m = 1;
    Expr f;              // F(psi, psi*)
    Expr f_conj;
    std::map<std::string, double> params;
    Eta0Rule eta0;
    ThetaRule theta = ThetaRule::None;
    double theta_lambda = 0.0;  // eigenvalue for the designated rule
};

struct CatalogEntry {
    NonlinearitySpec spec;
    std::vector<VectorField> fields;        // additional symmetries of the row
    std::vector<VectorField> base_fields;   // E(1, m): P0, P_a, J_ab
};

// Row ids: table 1 -> "1.1".."1.6"; table 2 -> "2.1".."2.15"; "base" for the
// generic-F check. Throws ConstraintViolated naming the violated constraint.
CatalogEntry catalog_lookup(const std::string& row, int m,
                            const std::map<std::string, double>& params, JetContext& ctx);

std::vector<std::string> catalog_rows();

// Numeric jet point with on-shell completion baked into the environment.
struct JetPoint {
    double t = 0;
    std::vector<double> x;
    EvalEnv env;
};

// Seeded on-shell jet sample for the given nonlinearity; atoms required by
// the field/residual trees must be passed in so their samples are drawn.
JetPoint sample_jet_point(JetContext& ctx, const NonlinearitySpec& spec,
                          const std::map<AtomKey, bool>& needed_atoms, std::uint64_t seed,
                          std::uint64_t index, NseForm form);

// Second-prolongation residuals of the pair (Delta1, Delta2) for one field,
// evaluated on-shell. `normalizer` returns the magnitude of the largest
// single prolongation term (for scale-free thresholds).
struct ResidualSample {
    Cplx r1, r2;
    double normalizer = 1.0;
};

class ProlongationChecker {
  public:
    ProlongationChecker(JetContext& ctx, const NonlinearitySpec& spec, const VectorField& field,
                        NseForm form);

    ResidualSample residual_at(const JetPoint& point) const;
    const std::map<AtomKey, bool>& needed_atoms() const { return atoms_; }

  private:
    JetContext& ctx_;
    std::vector<Expr> terms1_;  // additive parts of the Delta1 residual
    std::vector<Expr> terms2_;
    std::map<AtomKey, bool> atoms_;
};

// One-shot residual pair at a fresh sample (convenience wrapper).
ResidualSample prolong_residual(JetContext& ctx, const NonlinearitySpec& spec,
                                const VectorField& field, std::uint64_t seed, std::uint64_t index,
                                NseForm form = NseForm::SchrodingerI);

struct FieldReport {
    std::string label;
    double max_normalized = 0.0;
    double median_normalized = 0.0;
    double max_conj_mismatch = 0.0;  // |r2 - conj(r1)| over samples
    bool pass = false;
};

struct RowReport {
    std::string row;
    int m = 1;
    NseForm form = NseForm::SchrodingerI;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    double tol = 0.0;
    bool pass = false;
    std::vector<FieldReport> fields;       // additional symmetries
    std::vector<FieldReport> base_fields;  // E(1, m)
    std::string theta_variant;             // which footnote rule the row needed
};

RowReport check_row(const std::string& row, int m, const std::map<std::string, double>& params,
                    std::size_t n_samples, std::uint64_t seed, double tol,
                    NseForm form = NseForm::SchrodingerI);

struct NegativeCase {
    std::string name;
    double median_normalized = 0.0;
    bool failed_as_required = false;   // detuned variant must fail
    bool control_pass = false;         // unperturbed control re-passes
};

struct NegativeSweepReport {
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    double required_min = 1e-2;
    bool pass = false;
    std::vector<NegativeCase> cases;
};

// Detunes the critical parameter of rows 2.6, 2.7 (with Pi added) and 2.8
// and requires the residual to blow past the floor, with unperturbed
// controls re-passing.
NegativeSweepReport negative_sweep(int m, std::size_t n_samples, std::uint64_t seed, double tol);

}  // namespace symschrod

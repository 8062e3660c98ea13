#pragma once

#include <map>
#include <string>

#include "symschrod/detsys.hpp"
#include "symschrod/killing.hpp"

namespace symschrod {

// The convention notes embedded in every report so results are
// interpretable standalone.
std::map<std::string, std::string> convention_notes();

// Round-trippable JSON for determining-equation systems (exact integer-pair
// coefficients, schema-versioned).
std::string emit_detsystem_json(const DetSystem& sys);
DetSystem parse_detsystem_json(const std::string& text);

// Best-effort presentational LaTeX; the symmetrized-gradient group of each
// equation renders with the bracketed index notation.
std::string emit_detsystem_latex(const DetSystem& sys);

// Operators as coefficient / derivative-multi-index term lists with exact
// rationals (JSON fragment).
std::string serialize_operator_json(const DiffOp& op);
std::string serialize_basis_json(const SymmetryBasis& basis);

std::string tool_version();

}  // namespace symschrod

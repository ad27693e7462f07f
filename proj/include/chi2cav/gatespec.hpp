// gatespec.hpp — Partial isometries given as input/target state pairs.

#pragma once

#include <string>
#include <vector>

#include "chi2cav/propagator.hpp"

namespace chi2cav {

struct GateSpec {
    std::string name;
    std::string notes;
    std::vector<std::pair<StateVector, StateVector>> pairs;  // (input, target)

    int num_pairs() const { return static_cast<int>(pairs.size()); }

    // Sorted list of charge sectors touched by any pair.
    std::vector<int> sectors() const;
};

struct SpecViolation {
    std::string what;
};

struct ValidationReport {
    std::vector<SpecViolation> violations;
    bool valid() const { return violations.empty(); }
};

// Checks charge conservation per pair, input orthonormality, and Gram-matrix
// consistency (<t_i|t_j> == <s_i|s_j>).
ValidationReport validate_spec(const GateSpec& spec, double tol = 1e-9);

// Throwing variant for call sites that require a valid spec.
void require_valid(const GateSpec& spec);

// Swap input and target of every pair (running the gate in reverse).
GateSpec reversed(const GateSpec& spec);

}  // namespace chi2cav

// gates.hpp — Registry of the processor's gate truth tables as GateSpecs.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chi2cav/gatespec.hpp"

namespace chi2cav::gates {

GateSpec toffoli_phase(const fock::SectorTable& table);
GateSpec routing(const fock::SectorTable& table);
GateSpec loss_correction(const fock::SectorTable& table);
GateSpec entangler(const fock::SectorTable& table);
GateSpec partial_encoder(const fock::SectorTable& table);
GateSpec cphase_core(const fock::SectorTable& table);
GateSpec binary_decomposition(const fock::SectorTable& table);

// Stable registry names, in a fixed order.
const std::vector<std::string>& registry_names();

// Look up a registry gate by name; nullopt if unknown.
std::optional<GateSpec> by_name(const std::string& name, const fock::SectorTable& table);

}  // namespace chi2cav::gates

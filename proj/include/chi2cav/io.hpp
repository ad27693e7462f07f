// io.hpp — JSON/CSV serialization and artifact metadata helpers.

#pragma once

#include <json.hpp>

#include <string>

#include "chi2cav/gatespec.hpp"
#include "chi2cav/propagator.hpp"
#include "chi2cav/pulse.hpp"

namespace chi2cav::io {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a over the canonical serialization of a config, as a hex string.
std::string fnv1a_hex(const std::string& data);

// StateVector <-> {"amplitudes": [{"state":[a,b,c],"re":..,"im":..}, ...]}
json state_to_json(const StateVector& sv, const fock::SectorTable& table);
StateVector state_from_json(const json& j, const fock::SectorTable& table);

// GateSpec <-> {"name":..,"notes":..,"pairs":[{"input":..,"target":..}, ...]}
json spec_to_json(const GateSpec& spec, const fock::SectorTable& table);
GateSpec spec_from_json(const json& j, const fock::SectorTable& table);

json sectors_to_json(const fock::SectorTable& table, int K_max);

// CSV writers (UTF-8, comma, header row, LF endings).
std::string trajectory_csv(const Trajectory& traj);
std::string stage1_pulse_csv(const PulseParams& params);
std::string stage2_pulse_csv(const SampledPulse& pulse);

void write_text(const std::string& path, const std::string& text);
json read_json_file(const std::string& path);

}  // namespace chi2cav::io

#include "chi2cav/gates.hpp"

#include <cmath>

namespace chi2cav::gates {

namespace {

using fock::FockState;
using fock::SectorTable;

StateVector basis(const SectorTable& t, int a, int b, int c, Complex amp = {1.0, 0.0}) {
    return StateVector::basis_state(t, FockState{a, b, c}, amp);
}

StateVector sum(StateVector lhs, const StateVector& rhs) {
    for (const auto& [K, v] : rhs.amplitudes) {
        auto it = lhs.amplitudes.find(K);
        if (it == lhs.amplitudes.end())
            lhs.amplitudes[K] = v;
        else
            it->second += v;
    }
    return lhs;
}

void add_identity(GateSpec& spec, const SectorTable& t, std::initializer_list<FockState> states) {
    for (const FockState& s : states) {
        StateVector v = StateVector::basis_state(t, s);
        spec.pairs.emplace_back(v, v);
    }
}

}  // namespace

GateSpec toffoli_phase(const SectorTable& t) {
    GateSpec spec;
    spec.name = "toffoli_phase";
    spec.notes = "pi phase on |111>, identity on the other seven one-photon-per-mode basis states";
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b)
            for (int c = 0; c <= 1; ++c) {
                StateVector in = basis(t, a, b, c);
                Complex phase = (a == 1 && b == 1 && c == 1) ? Complex{-1.0, 0.0} : Complex{1.0, 0.0};
                spec.pairs.emplace_back(in, basis(t, a, b, c, phase));
            }
    return spec;
}

GateSpec routing(const SectorTable& t) {
    GateSpec spec;
    spec.name = "routing";
    spec.notes = "c-mode controlled conversion b^4 -> a^2 (and b^2 -> a) when c is empty";
    spec.pairs.emplace_back(basis(t, 0, 4, 0), basis(t, 2, 0, 0));
    spec.pairs.emplace_back(basis(t, 0, 2, 0), basis(t, 1, 0, 0));
    // the vacuum row pins the gate's phase: circuit branches where this
    // processor is empty must stay coherent with the converted ones
    add_identity(spec, t, {{0, 4, 1}, {0, 2, 1}, {0, 0, 1}, {0, 0, 0}});
    return spec;
}

GateSpec loss_correction(const SectorTable& t) {
    GateSpec spec;
    spec.name = "loss_correction";
    spec.notes = "pump a lost b-photon back when the c ancilla is present";
    spec.pairs.emplace_back(basis(t, 0, 3, 1), basis(t, 0, 4, 0));
    spec.pairs.emplace_back(basis(t, 0, 1, 1), basis(t, 0, 2, 0));
    add_identity(spec, t, {{0, 0, 1}, {0, 2, 1}, {0, 4, 1}});
    return spec;
}

GateSpec entangler(const SectorTable& t) {
    GateSpec spec;
    spec.name = "entangler";
    spec.notes = "symmetrize |020> with |002>, leave |011> alone";
    StateVector in = basis(t, 0, 1, 1);
    spec.pairs.emplace_back(in, in);
    const double r = 1.0 / std::sqrt(2.0);
    spec.pairs.emplace_back(basis(t, 0, 2, 0),
                            sum(basis(t, 0, 2, 0, {r, 0.0}), basis(t, 0, 0, 2, {r, 0.0})));
    return spec;
}

GateSpec partial_encoder(const SectorTable& t) {
    GateSpec spec;
    spec.name = "partial_encoder";
    spec.notes = "one photon in each mode merges into a, |110> untouched";
    spec.pairs.emplace_back(basis(t, 1, 1, 1), basis(t, 2, 0, 0));
    spec.pairs.emplace_back(basis(t, 1, 1, 0), basis(t, 1, 1, 0));
    return spec;
}

GateSpec cphase_core(const SectorTable& t) {
    GateSpec spec;
    spec.name = "cphase_core";
    spec.notes = "pi phase on |022>, identity on the other even b/c occupations";
    spec.pairs.emplace_back(basis(t, 0, 2, 2), basis(t, 0, 2, 2, {-1.0, 0.0}));
    add_identity(spec, t,
                 {{0, 0, 0}, {0, 0, 2}, {0, 2, 0}, {0, 0, 4}, {0, 4, 0}, {0, 2, 4}, {0, 4, 2}, {0, 4, 4}});
    return spec;
}

GateSpec binary_decomposition(const SectorTable& t) {
    GateSpec spec;
    spec.name = "binary_decomposition";
    spec.notes = "photon number in c rewritten in binary across the modes";
    add_identity(spec, t, {{0, 0, 0}, {0, 0, 1}});
    spec.pairs.emplace_back(basis(t, 0, 0, 2), basis(t, 0, 1, 1));
    spec.pairs.emplace_back(basis(t, 0, 0, 3), basis(t, 1, 0, 1));
    spec.pairs.emplace_back(basis(t, 0, 0, 4), basis(t, 1, 1, 1));
    return spec;
}

const std::vector<std::string>& registry_names() {
    static const std::vector<std::string> names = {
        "toffoli_phase",  "routing",     "loss_correction",      "entangler",
        "partial_encoder", "cphase_core", "binary_decomposition",
    };
    return names;
}

std::optional<GateSpec> by_name(const std::string& name, const SectorTable& t) {
    if (name == "toffoli_phase") return toffoli_phase(t);
    if (name == "routing") return routing(t);
    if (name == "loss_correction") return loss_correction(t);
    if (name == "entangler") return entangler(t);
    if (name == "partial_encoder") return partial_encoder(t);
    if (name == "cphase_core") return cphase_core(t);
    if (name == "binary_decomposition") return binary_decomposition(t);
    return std::nullopt;
}

}  // namespace chi2cav::gates

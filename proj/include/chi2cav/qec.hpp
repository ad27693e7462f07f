// qec.hpp — Two-mode bosonic code on a pair of three-mode processors:
// encoding, measurement-free single-loss correction, logical CPHASE, loss
// channels, and the lifetime/break-even experiment.
//
// Physical register: six modes ordered (a1, b1, c1, a2, b2, c2); the code
// lives on (b1, b2), ancilla photons ride in (c1, c2).

#pragma once

#include <json.hpp>

#include <array>
#include <map>
#include <string>
#include <vector>

#include "chi2cav/gatespec.hpp"
#include "chi2cav/propagator.hpp"

namespace chi2cav::qec {

inline constexpr int kModes = 6;
enum ModeIndex { A1 = 0, B1 = 1, C1 = 2, A2 = 3, B2 = 4, C2 = 5 };

using Occ = std::array<int, kModes>;

inline int occ_charge(const Occ& o) {
    return 2 * o[A1] + o[B1] + o[C1] + 2 * o[A2] + o[B2] + o[C2];
}

// Sparse pure state over six-mode occupation tuples.
struct SparseState {
    std::map<Occ, Complex> amps;

    double norm() const;
    void normalize();
    Complex dot(const SparseState& other) const;  // <this|other>
    void prune(double tol = 1e-14);

    static SparseState basis(const Occ& o, Complex amp = {1.0, 0.0});
};

// Deterministic completion of a GateSpec to a full charge-conserving unitary:
// spec pairs are honored exactly, orthocomplements are filled by Gram-Schmidt
// against the standard basis, sectors without pairs act as identity.
BlockUnitary complete_unitary(const GateSpec& spec, const fock::SectorTable& table);

// Apply a three-mode BlockUnitary to the (a, b, c) slots given by `modes`;
// throws if a local charge exceeds the unitary's coverage.
SparseState apply_triple(const SparseState& state, const BlockUnitary& u,
                         const std::array<int, 3>& modes);

SparseState swap_modes(const SparseState& state, int m1, int m2);

// Unnormalized action of the annihilator on one mode.
SparseState apply_annihilator(const SparseState& state, int mode);

// Restoration gate closing the two error branches after conditional routing;
// bound across the processors to (a1, b2, c1) and (a2, b1, c2).
GateSpec branch_restore(const fock::SectorTable& table);

// --- circuit plans -----------------------------------------------------------

struct PlanStep {
    std::string kind;             // "gate" or "swap"
    std::string gate;             // registry name or "branch_restore"
    bool reversed{false};
    std::array<int, 3> modes{};   // gate binding (a, b, c slots)
    std::array<int, 2> pair{};    // swap binding
};

struct CircuitPlan {
    std::string name;
    std::vector<PlanStep> steps;

    nlohmann::json to_json() const;
};

CircuitPlan correction_plan();
CircuitPlan encoding_plan();

// Resolve a plan step's gate spec (registry gates plus branch_restore).
GateSpec plan_gate_spec(const PlanStep& step, const fock::SectorTable& table);

// Run a plan with ideal spec-completing unitaries.
SparseState run_plan_ideal(const CircuitPlan& plan, const SparseState& input,
                           const fock::SectorTable& table);

// Run a plan with caller-supplied unitaries keyed by gate name (reversed steps
// use the adjoint, i.e. the conjugated, order-reversed pulse).
SparseState run_plan(const CircuitPlan& plan, const SparseState& input,
                     const std::map<std::string, BlockUnitary>& unitaries);

// --- code states -------------------------------------------------------------

// α(|40⟩+|04⟩)/√2 + β|22⟩ on (b1, b2); throws unless |α|²+|β|² = 1.
SparseState encode(Complex alpha, Complex beta);

// Unprotected input of the encoding circuit: a1 = b1 = 1, qubit α|1⟩+β|0⟩ in c1.
SparseState encoding_input(Complex alpha, Complex beta);

// Full encoding chain (ideal unitaries); equals encode(α, β) up to 1e−9.
SparseState encoding_circuit(Complex alpha, Complex beta, const fock::SectorTable& table);

// Correction of the pre-corrupted code plus |11⟩ ancillas. Throws if the input
// leaks outside span{|C⟩, |E1⟩, |E2⟩} ⊗ |11⟩ by more than `leak_tol`.
SparseState correction_circuit(const SparseState& input, const fock::SectorTable& table,
                               double leak_tol = 1e-9);

// Logical CPHASE on two encoded qubits laid out as qubit 1 on (b1, c1) and
// qubit 2 on (c2, b2); cphase_core is applied to the inner pair (c1, c2) with
// the empty a1 as the a-slot.
SparseState logical_cphase(const SparseState& two_qubits, const fock::SectorTable& table);

// --- channels and lifetime ---------------------------------------------------

// Binomial amplitude-damping Kraus operator E_k on a single mode with
// occupations 0..n_max.
Eigen::MatrixXd damping_kraus(int k, double eta, int n_max);

// (no_error, correctable, uncorrectable) = ((1−p)², 2p(1−p), p²).
std::array<double, 3> channel_outcome_probs(double p_loss_per_mode);

// Dense two-mode code-space density matrix support: occupations (n1, n2) with
// n1 + n2 ≤ cap.
struct CodeSpace {
    int cap{8};
    std::vector<std::array<int, 2>> basis;
    std::map<std::array<int, 2>, int> index;

    explicit CodeSpace(int cap_ = 8);
    int dim() const { return static_cast<int>(basis.size()); }
};

struct LifetimeCurves {
    std::vector<double> t;
    std::vector<double> unprotected;   // single photon, fidelity e^{−t/N}
    std::vector<double> uncorrected;   // idle code fidelity to |C⟩
    std::vector<double> corrected;     // periodically corrected code
    double leaked_weight{0.0};         // trace dropped by the charge cap
};

struct LifetimeConfig {
    double N{2000.0};             // ops-per-lifetime figure of merit; loss rate 1/N
    double period{300.0};         // idle time between corrections
    double circuit_time{40.0};    // loss exposure of the correction circuit
    double horizon{6000.0};
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};
};

// Precomputed per-period correction channel (Kraus form over the code space);
// independent of N, reusable across a sweep.
class CorrectionChannel {
  public:
    explicit CorrectionChannel(const fock::SectorTable& table);

    const CodeSpace& space() const { return space_; }
    // rho after embedding with fresh |11⟩ ancillas, correcting, and tracing
    // out the a and c modes. Weight on code charge > embed cap is dropped and
    // reported via `leaked`.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho, double& leaked) const;

  private:
    CodeSpace space_;
    std::vector<Eigen::MatrixXcd> kraus_;  // one per traced-out environment config
    int embed_cap_;                        // max code charge accepted for embedding
};

LifetimeCurves lifetime_experiment(const LifetimeConfig& cfg, const CorrectionChannel& channel);

// Smallest N on the grid where the corrected curve beats the unprotected one
// at the horizon; −1 if none.
double breakeven_N(const std::vector<double>& N_grid, const LifetimeConfig& base,
                   const CorrectionChannel& channel);

}  // namespace chi2cav::qec

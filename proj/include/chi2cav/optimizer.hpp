// optimizer.hpp — Two-stage pulse synthesis against GateSpec targets.
//
// Stage 1 searches the sigmoid-constrained (X, P, T) parameterization with a
// deterministic multi-restart Adam loop; stage 2 refines the pulse on a fine
// uniform grid with bandwidth/power penalties.

#pragma once

#include <string>
#include <vector>

#include "chi2cav/gatespec.hpp"
#include "chi2cav/propagator.hpp"

namespace chi2cav::opt {

struct SynthesisConfig {
    int s{60};                     // stage-1 segment count
    double delta_tau{0.4};  // max single-segment duration
    double amplitude_scale{1.0};   // 1.0 -> amplitude box (−π/2, π/2)
    int max_iters{2000};
    int restarts{8};
    unsigned seed{0};
    double target_infidelity{1e-3};
    double learning_rate{0.1};
    // stage 2
    int smooth_cells{512};
    int smooth_iters{600};
    double smooth_learning_rate{0.02};
    double lambda_bw{1e-3};
    double lambda_pow{1e-4};
    int anneal_every{200};   // halve both penalty weights this often
    // robustness
    double robustness_eps{0.01};
    double robustness_floor{0.99};

    void validate() const;
};

struct SynthesisResult {
    PulseParams params;
    double fidelity{0.0};
    bool target_met{false};
    int best_restart{-1};
    std::vector<double> history;  // best-restart fidelity per iteration
};

struct SmoothResult {
    SampledPulse pulse;
    double fidelity{0.0};
    bool ok{false};  // F within 1e-3 of stage 1 and >= 0.99
    double stage1_fidelity{0.0};
    double bandwidth{0.0};       // total variation of the grid
    double peak_amplitude{0.0};
};

struct RobustnessEntry {
    std::string kind;  // "amplitude" or "time"
    double factor;     // applied scale
    double fidelity;
};

struct RobustnessReport {
    double nominal{0.0};
    double floor{0.0};
    std::vector<RobustnessEntry> entries;
    bool pass{false};
};

struct ControllabilityResult {
    int K{0};
    int dim{0};
    int rank{0};
    bool full{false};  // rank == dim²−1
};

// Coherent-average gate fidelity |(1/d) Σ_k <t_k|U|s_k>|².
double fidelity(const BlockUnitary& U, const GateSpec& spec);

double fidelity(const Propagator& prop, const PulseParams& params, const GateSpec& spec);
double fidelity(const Propagator& prop, const SampledPulse& pulse, const GateSpec& spec);

// Exact gradient of the fidelity w.r.t. (X, P, T), length 3s, ordered
// [dX_0..dX_{s−1}, dP_0.., dT_0..].
std::vector<double> gradient(const Propagator& prop, const PulseParams& params, const GateSpec& spec);

SynthesisResult synthesize(const Propagator& prop, const GateSpec& spec, const SynthesisConfig& cfg);

SmoothResult smooth(const Propagator& prop, const PulseParams& params, const GateSpec& spec,
                    const SynthesisConfig& cfg);

RobustnessReport robustness_check(const Propagator& prop, const SampledPulse& pulse,
                                  const GateSpec& spec, double eps, double floor);

// Rank of the real Lie closure of {iH_shg, iH_x, iH_y} restricted to sector K.
ControllabilityResult controllability_check(const fock::HamiltonianTerms& terms, int K,
                                            double tol = 1e-10);

}  // namespace chi2cav::opt

// propagator.hpp — Exact piecewise-constant time evolution per charge sector.

#pragma once

#include <Eigen/Dense>

#include <map>
#include <vector>

#include "chi2cav/fock.hpp"
#include "chi2cav/pulse.hpp"

namespace chi2cav {

// State supported on one or more charge sectors; amplitudes are aligned with
// the sector's lexicographic basis.
struct StateVector {
    std::map<int, fock::Vector> amplitudes;  // sector K -> amplitudes

    double norm() const;
    void normalize();
    Complex dot(const StateVector& other) const;  // <this|other>

    // Mean occupation of a mode, summed over sectors (state need not be normalized).
    double mean_occupation(const fock::SectorTable& table, fock::Mode mode) const;
    double mean_charge(const fock::SectorTable& table) const;

    static StateVector basis_state(const fock::SectorTable& table, const fock::FockState& s,
                                   Complex amplitude = {1.0, 0.0});
};

struct BlockUnitary {
    std::map<int, fock::Matrix> blocks;  // sector K -> unitary
    double duration{0.0};

    StateVector apply(const StateVector& state) const;
    // Max-norm of U†U − I over all blocks.
    double unitarity_defect() const;
};

struct TrajectorySample {
    double t{0.0};
    double n_a{0.0}, n_b{0.0}, n_c{0.0};
    StateVector state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
};

class Propagator {
  public:
    explicit Propagator(int K_max);

    const fock::SectorTable& table() const { return table_; }
    const fock::HamiltonianTerms& terms() const { return terms_; }

    // exp(−i (H_shg + Re p H_x + Im p H_y) dt) restricted to sector K.
    fock::Matrix segment_propagator(Complex p, double dt, int K) const;

    BlockUnitary pulse_unitary(const std::vector<Segment>& segments, const std::vector<int>& sectors) const;
    BlockUnitary pulse_unitary(const PulseParams& params, const std::vector<int>& sectors) const;
    BlockUnitary pulse_unitary(const SampledPulse& pulse, const std::vector<int>& sectors) const;

    // Evolve a state, recording populations at segment boundaries plus a
    // uniform sub-grid of record_every (<=0 records boundaries only).
    std::pair<StateVector, Trajectory> propagate(const std::vector<Segment>& segments,
                                                 const StateVector& initial,
                                                 double record_every) const;

    std::vector<int> all_sectors() const;

  private:
    fock::SectorTable table_;
    fock::HamiltonianTerms terms_;
};

}  // namespace chi2cav

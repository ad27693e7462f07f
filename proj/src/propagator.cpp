#include "chi2cav/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace chi2cav {

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& [K, v] : amplitudes) s += v.squaredNorm();
    return std::sqrt(s);
}

void StateVector::normalize() {
    double n = norm();
    if (n == 0.0) throw std::invalid_argument("StateVector: cannot normalize zero state");
    for (auto& [K, v] : amplitudes) v /= n;
}

Complex StateVector::dot(const StateVector& other) const {
    Complex s{0.0, 0.0};
    for (const auto& [K, v] : amplitudes) {
        auto it = other.amplitudes.find(K);
        if (it != other.amplitudes.end()) s += v.dot(it->second);
    }
    return s;
}

double StateVector::mean_occupation(const fock::SectorTable& table, fock::Mode mode) const {
    double s = 0.0;
    for (const auto& [K, v] : amplitudes) {
        Eigen::VectorXd diag = fock::number_diagonal(table.sector(K), mode);
        s += (v.cwiseAbs2().cwiseProduct(diag.array().matrix())).sum();
    }
    return s;
}

double StateVector::mean_charge(const fock::SectorTable& table) const {
    return 2.0 * mean_occupation(table, fock::Mode::A) + mean_occupation(table, fock::Mode::B) +
           mean_occupation(table, fock::Mode::C);
}

StateVector StateVector::basis_state(const fock::SectorTable& table, const fock::FockState& s,
                                     Complex amplitude) {
    const int K = s.charge();
    const fock::ChargeSector& sec = table.sector(K);
    int idx = sec.index_of(s);
    if (idx < 0) throw std::invalid_argument("basis_state: state not in sector basis");
    StateVector sv;
    sv.amplitudes[K] = fock::Vector::Zero(sec.dim());
    sv.amplitudes[K](idx) = amplitude;
    return sv;
}

StateVector BlockUnitary::apply(const StateVector& state) const {
    StateVector out;
    for (const auto& [K, v] : state.amplitudes) {
        auto it = blocks.find(K);
        if (it == blocks.end())
            throw std::out_of_range("BlockUnitary: state sector K=" + std::to_string(K) + " not covered");
        out.amplitudes[K] = it->second * v;
    }
    return out;
}

double BlockUnitary::unitarity_defect() const {
    double worst = 0.0;
    for (const auto& [K, U] : blocks) {
        fock::Matrix d = U.adjoint() * U - fock::Matrix::Identity(U.rows(), U.cols());
        worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
    return worst;
}

Propagator::Propagator(int K_max) : table_(K_max), terms_(fock::build_hamiltonian_terms(table_)) {}

fock::Matrix Propagator::segment_propagator(Complex p, double dt, int K) const {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()) || !std::isfinite(dt) || dt < 0.0)
        throw std::invalid_argument("segment_propagator: non-finite or negative input");
    const fock::Matrix h = fock::sector_hamiltonian(terms_, K, p);
    Eigen::SelfAdjointEigenSolver<fock::Matrix> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("segment_propagator: eigensolver failed");
    fock::Vector phases(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        phases(i) = std::exp(Complex{0.0, -es.eigenvalues()(i) * dt});
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

BlockUnitary Propagator::pulse_unitary(const std::vector<Segment>& segments,
                                       const std::vector<int>& sectors) const {
    BlockUnitary u;
    for (const Segment& s : segments) u.duration += s.dt;
    for (int K : sectors) {
        const int d = table_.sector(K).dim();
        fock::Matrix m = fock::Matrix::Identity(d, d);
        for (const Segment& s : segments) m = segment_propagator(s.p, s.dt, K) * m;
        u.blocks[K] = m;
    }
    return u;
}

BlockUnitary Propagator::pulse_unitary(const PulseParams& params, const std::vector<int>& sectors) const {
    params.validate();
    return pulse_unitary(params.to_segments(), sectors);
}

BlockUnitary Propagator::pulse_unitary(const SampledPulse& pulse, const std::vector<int>& sectors) const {
    pulse.validate();
    return pulse_unitary(pulse.to_segments(), sectors);
}

std::pair<StateVector, Trajectory> Propagator::propagate(const std::vector<Segment>& segments,
                                                         const StateVector& initial,
                                                         double record_every) const {
    for (const auto& [K, v] : initial.amplitudes)
        if (!table_.has(K))
            throw std::out_of_range("propagate: state sector K=" + std::to_string(K) +
                                    " exceeds built K_max");
    Trajectory traj;
    StateVector state = initial;
    double t = 0.0;
    auto record = [&](double time) {
        traj.samples.push_back({time,
                                state.mean_occupation(table_, fock::Mode::A),
                                state.mean_occupation(table_, fock::Mode::B),
                                state.mean_occupation(table_, fock::Mode::C), state});
    };
    record(0.0);
    for (const Segment& seg : segments) {
        int substeps = 1;
        if (record_every > 0.0 && seg.dt > 0.0)
            substeps = std::max(1, static_cast<int>(std::ceil(seg.dt / record_every)));
        const double dt = seg.dt / substeps;
        for (int i = 0; i < substeps; ++i) {
            StateVector next;
            for (const auto& [K, v] : state.amplitudes)
                next.amplitudes[K] = segment_propagator(seg.p, dt, K) * v;
            state = std::move(next);
            t += dt;
            record(t);
        }
    }
    return {state, traj};
}

std::vector<int> Propagator::all_sectors() const {
    std::vector<int> ks;
    for (int K = 0; K <= table_.k_max(); ++K) ks.push_back(K);
    return ks;
}

SampledPulse resample(const PulseParams& params, int cells) {
    params.validate();
    if (cells <= 0) throw std::invalid_argument("resample: cells must be positive");
    std::vector<Segment> seg = params.to_segments();
    SampledPulse out;
    out.dt = params.total_duration() / cells;
    out.amplitudes.resize(static_cast<std::size_t>(cells));
    std::size_t j = 0;
    double seg_end = seg.empty() ? 0.0 : seg[0].dt;
    for (int k = 0; k < cells; ++k) {
        const double t_mid = (k + 0.5) * out.dt;
        while (j + 1 < seg.size() && t_mid > seg_end) {
            ++j;
            seg_end += seg[j].dt;
        }
        out.amplitudes[static_cast<std::size_t>(k)] = seg.empty() ? Complex{0, 0} : seg[j].p;
    }
    return out;
}

}  // namespace chi2cav

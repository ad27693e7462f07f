#include "chi2cav/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace chi2cav::opt {

namespace {

using fock::Matrix;
using fock::Vector;

// sin(z)/z with a series fallback near zero.
double sinc(double z) {
    if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0 + z * z * z * z / 120.0;
    return std::sin(z) / z;
}

// Spec pair restricted to one sector; only pairs with support on both sides
// contribute to the overlap and its gradient.
struct SectorPair {
    Vector s, t;
};

std::vector<SectorPair> restrict_pairs(const GateSpec& spec, int K, int dim) {
    std::vector<SectorPair> out;
    for (const auto& [in, tgt] : spec.pairs) {
        auto si = in.amplitudes.find(K);
        auto ti = tgt.amplitudes.find(K);
        if (si == in.amplitudes.end() || ti == tgt.amplitudes.end()) continue;
        if (si->second.squaredNorm() == 0.0 || ti->second.squaredNorm() == 0.0) continue;
        if (si->second.size() != dim) throw std::invalid_argument("restrict_pairs: dimension mismatch");
        out.push_back({si->second, ti->second});
    }
    return out;
}

struct PulseGradient {
    Complex g{0.0, 0.0};          // (1/d) Σ_k <t_k|U|s_k>
    std::vector<Complex> d_re;    // dg/d Re(p_l)
    std::vector<Complex> d_im;    // dg/d Im(p_l)
    std::vector<Complex> d_dt;    // dg/d dt_l
};

// Overlap g and its exact derivatives for a piecewise-constant pulse,
// via per-segment eigendecompositions and divided differences.
PulseGradient pulse_gradient(const Propagator& prop, const std::vector<Segment>& seg,
                             const GateSpec& spec, bool want_dt) {
    const int ns = static_cast<int>(seg.size());
    PulseGradient out;
    out.d_re.assign(static_cast<std::size_t>(ns), {0.0, 0.0});
    out.d_im.assign(static_cast<std::size_t>(ns), {0.0, 0.0});
    if (want_dt) out.d_dt.assign(static_cast<std::size_t>(ns), {0.0, 0.0});
    const double d = static_cast<double>(spec.num_pairs());

    for (int K : spec.sectors()) {
        const int dim = prop.table().sector(K).dim();
        std::vector<SectorPair> pairs = restrict_pairs(spec, K, dim);
        if (pairs.empty()) continue;
        const Matrix& hx = prop.terms().h_x.block(K);
        const Matrix& hy = prop.terms().h_y.block(K);

        std::vector<Matrix> V(static_cast<std::size_t>(ns)), U(static_cast<std::size_t>(ns)),
            H(static_cast<std::size_t>(ns));
        std::vector<Eigen::VectorXd> lam(static_cast<std::size_t>(ns));
        for (int l = 0; l < ns; ++l) {
            H[static_cast<std::size_t>(l)] = fock::sector_hamiltonian(prop.terms(), K, seg[static_cast<std::size_t>(l)].p);
            Eigen::SelfAdjointEigenSolver<Matrix> es(H[static_cast<std::size_t>(l)]);
            if (es.info() != Eigen::Success) throw std::runtime_error("pulse_gradient: eigensolver failed");
            V[static_cast<std::size_t>(l)] = es.eigenvectors();
            lam[static_cast<std::size_t>(l)] = es.eigenvalues();
            Vector ph(dim);
            for (int i = 0; i < dim; ++i)
                ph(i) = std::exp(Complex{0.0, -lam[static_cast<std::size_t>(l)](i) * seg[static_cast<std::size_t>(l)].dt});
            U[static_cast<std::size_t>(l)] =
                V[static_cast<std::size_t>(l)] * ph.asDiagonal() * V[static_cast<std::size_t>(l)].adjoint();
        }

        // Forward and backward vectors per pair around each segment.
        const int np = static_cast<int>(pairs.size());
        std::vector<std::vector<Vector>> phi(static_cast<std::size_t>(np)), chi(static_cast<std::size_t>(np));
        for (int k = 0; k < np; ++k) {
            phi[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(ns) + 1);
            chi[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(ns) + 1);
            phi[static_cast<std::size_t>(k)][0] = pairs[static_cast<std::size_t>(k)].s;
            for (int l = 0; l < ns; ++l)
                phi[static_cast<std::size_t>(k)][static_cast<std::size_t>(l) + 1] =
                    U[static_cast<std::size_t>(l)] * phi[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
            chi[static_cast<std::size_t>(k)][static_cast<std::size_t>(ns)] = pairs[static_cast<std::size_t>(k)].t;
            for (int l = ns - 1; l >= 0; --l)
                chi[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
                    U[static_cast<std::size_t>(l)].adjoint() *
                    chi[static_cast<std::size_t>(k)][static_cast<std::size_t>(l) + 1];
            out.g += chi[static_cast<std::size_t>(k)][static_cast<std::size_t>(ns)]
                         .dot(phi[static_cast<std::size_t>(k)][static_cast<std::size_t>(ns)]);
        }

        for (int l = 0; l < ns; ++l) {
            const double dt = seg[static_cast<std::size_t>(l)].dt;
            const Matrix& Vl = V[static_cast<std::size_t>(l)];
            const Eigen::VectorXd& lm = lam[static_cast<std::size_t>(l)];
            // Divided differences of e^{−i·dt·λ} in the eigenbasis.
            Matrix D(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) {
                    const double avg = 0.5 * (lm(i) + lm(j));
                    const double diff = 0.5 * (lm(i) - lm(j));
                    D(i, j) = Complex{0.0, -dt} * std::exp(Complex{0.0, -dt * avg}) * sinc(dt * diff);
                }
            const Matrix A = (Vl.adjoint() * hx * Vl).cwiseProduct(D);
            const Matrix B = (Vl.adjoint() * hy * Vl).cwiseProduct(D);
            const Matrix dU_re = Vl * A * Vl.adjoint();
            const Matrix dU_im = Vl * B * Vl.adjoint();
            for (int k = 0; k < np; ++k) {
                const Vector& f = phi[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
                const Vector& b = chi[static_cast<std::size_t>(k)][static_cast<std::size_t>(l) + 1];
                out.d_re[static_cast<std::size_t>(l)] += b.dot(dU_re * f);
                out.d_im[static_cast<std::size_t>(l)] += b.dot(dU_im * f);
                if (want_dt)
                    out.d_dt[static_cast<std::size_t>(l)] +=
                        Complex{0.0, -1.0} *
                        b.dot(H[static_cast<std::size_t>(l)] *
                              phi[static_cast<std::size_t>(k)][static_cast<std::size_t>(l) + 1]);
            }
        }
    }

    out.g /= d;
    for (auto& v : out.d_re) v /= d;
    for (auto& v : out.d_im) v /= d;
    for (auto& v : out.d_dt) v /= d;
    return out;
}

// Deterministic Adam ascent state.
struct Adam {
    std::vector<double> m, v;
    double lr;
    int t{0};

    explicit Adam(std::size_t n, double lr_) : m(n, 0.0), v(n, 0.0), lr(lr_) {}

    void step(std::vector<double>& x, const std::vector<double>& grad) {
        ++t;
        const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        const double c1 = 1.0 - std::pow(b1, t), c2 = 1.0 - std::pow(b2, t);
        for (std::size_t i = 0; i < x.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
            v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
            x[i] += lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
    }
};

}  // namespace

void SynthesisConfig::validate() const {
    if (s <= 0 || delta_tau <= 0.0 || amplitude_scale <= 0.0 || max_iters <= 0 || restarts <= 0 ||
        target_infidelity < 0.0 || learning_rate <= 0.0 || smooth_cells <= 0 || smooth_iters < 0 ||
        smooth_learning_rate <= 0.0 || lambda_bw < 0.0 || lambda_pow < 0.0 || anneal_every <= 0 ||
        robustness_eps < 0.0 || robustness_floor < 0.0)
        throw std::invalid_argument("SynthesisConfig: non-positive field");
}

double fidelity(const BlockUnitary& U, const GateSpec& spec) {
    require_valid(spec);
    Complex g{0.0, 0.0};
    for (const auto& [in, tgt] : spec.pairs) {
        StateVector mapped;
        for (const auto& [K, v] : in.amplitudes) {
            auto it = U.blocks.find(K);
            if (it == U.blocks.end())
                throw std::invalid_argument("fidelity: unitary lacks sector K=" + std::to_string(K));
            mapped.amplitudes[K] = it->second * v;
        }
        g += tgt.dot(mapped);
    }
    g /= static_cast<double>(spec.num_pairs());
    return std::norm(g);
}

double fidelity(const Propagator& prop, const PulseParams& params, const GateSpec& spec) {
    return fidelity(prop.pulse_unitary(params, spec.sectors()), spec);
}

double fidelity(const Propagator& prop, const SampledPulse& pulse, const GateSpec& spec) {
    return fidelity(prop.pulse_unitary(pulse, spec.sectors()), spec);
}

std::vector<double> gradient(const Propagator& prop, const PulseParams& params, const GateSpec& spec) {
    params.validate();
    require_valid(spec);
    const int s = params.segments();
    PulseGradient pg = pulse_gradient(prop, params.to_segments(), spec, true);
    std::vector<double> grad(static_cast<std::size_t>(3 * s), 0.0);
    const Complex gc = std::conj(pg.g);
    for (int l = 0; l < s; ++l) {
        const double x = params.X[static_cast<std::size_t>(l)];
        const double p = params.P[static_cast<std::size_t>(l)];
        const double sig = params.duration(l);
        const double dre_dX = params.amplitude_scale / (1.0 + x * x);
        const double dim_dP = params.amplitude_scale / (1.0 + p * p);
        const double ddt_dT = sig * (1.0 - sig / params.delta_tau);
        grad[static_cast<std::size_t>(l)] = 2.0 * std::real(gc * pg.d_re[static_cast<std::size_t>(l)]) * dre_dX;
        grad[static_cast<std::size_t>(s + l)] = 2.0 * std::real(gc * pg.d_im[static_cast<std::size_t>(l)]) * dim_dP;
        grad[static_cast<std::size_t>(2 * s + l)] = 2.0 * std::real(gc * pg.d_dt[static_cast<std::size_t>(l)]) * ddt_dT;
    }
    return grad;
}

SynthesisResult synthesize(const Propagator& prop, const GateSpec& spec, const SynthesisConfig& cfg) {
    cfg.validate();
    require_valid(spec);
    for (int K : spec.sectors())
        if (!prop.table().has(K)) throw std::invalid_argument("synthesize: spec sector exceeds K_max");

    SynthesisResult best;
    const std::size_t n = static_cast<std::size_t>(3 * cfg.s);
    for (int r = 0; r < cfg.restarts; ++r) {
        std::mt19937 rng(cfg.seed * 1000003u + static_cast<unsigned>(r));
        std::normal_distribution<double> dist(0.0, 1.0);
        PulseParams p;
        p.delta_tau = cfg.delta_tau;
        p.amplitude_scale = cfg.amplitude_scale;
        p.X.resize(static_cast<std::size_t>(cfg.s));
        p.P.resize(static_cast<std::size_t>(cfg.s));
        p.T.resize(static_cast<std::size_t>(cfg.s));
        for (double& x : p.X) x = 0.5 * dist(rng);
        for (double& x : p.P) x = 0.5 * dist(rng);
        for (double& x : p.T) x = dist(rng);

        std::vector<double> vars(n);
        auto pack = [&] {
            for (int l = 0; l < cfg.s; ++l) {
                vars[static_cast<std::size_t>(l)] = p.X[static_cast<std::size_t>(l)];
                vars[static_cast<std::size_t>(cfg.s + l)] = p.P[static_cast<std::size_t>(l)];
                vars[static_cast<std::size_t>(2 * cfg.s + l)] = p.T[static_cast<std::size_t>(l)];
            }
        };
        auto unpack = [&] {
            for (int l = 0; l < cfg.s; ++l) {
                p.X[static_cast<std::size_t>(l)] = vars[static_cast<std::size_t>(l)];
                p.P[static_cast<std::size_t>(l)] = vars[static_cast<std::size_t>(cfg.s + l)];
                p.T[static_cast<std::size_t>(l)] = vars[static_cast<std::size_t>(2 * cfg.s + l)];
            }
        };
        pack();

        Adam adam(n, cfg.learning_rate);
        std::vector<double> history;
        double F = fidelity(prop, p, spec);
        for (int it = 0; it < cfg.max_iters; ++it) {
            history.push_back(F);
            if (1.0 - F <= cfg.target_infidelity) break;
            std::vector<double> g = gradient(prop, p, spec);
            adam.step(vars, g);
            unpack();
            F = fidelity(prop, p, spec);
        }
        history.push_back(F);

        const bool better =
            F > best.fidelity + 1e-15 ||
            (std::abs(F - best.fidelity) <= 1e-15 && p.total_duration() < best.params.total_duration());
        if (best.best_restart < 0 || better) {
            best.params = p;
            best.fidelity = F;
            best.best_restart = r;
            best.history = std::move(history);
        }
        if (1.0 - best.fidelity <= cfg.target_infidelity) break;  // deterministic early stop
    }
    best.target_met = 1.0 - best.fidelity <= cfg.target_infidelity;
    return best;
}

SmoothResult smooth(const Propagator& prop, const PulseParams& params, const GateSpec& spec,
                    const SynthesisConfig& cfg) {
    cfg.validate();
    require_valid(spec);
    SmoothResult res;
    res.stage1_fidelity = fidelity(prop, params, spec);
    if (res.stage1_fidelity < 0.99)
        throw std::invalid_argument("smooth: stage-1 fidelity below 0.99");

    SampledPulse pulse = resample(params, cfg.smooth_cells);
    const int nc = pulse.cells();
    const double dt = pulse.dt;
    double lbw = cfg.lambda_bw, lpow = cfg.lambda_pow;

    std::vector<double> vars(static_cast<std::size_t>(2 * nc));
    for (int k = 0; k < nc; ++k) {
        vars[static_cast<std::size_t>(k)] = pulse.amplitudes[static_cast<std::size_t>(k)].real();
        vars[static_cast<std::size_t>(nc + k)] = pulse.amplitudes[static_cast<std::size_t>(k)].imag();
    }
    Adam adam(vars.size(), cfg.smooth_learning_rate);
    double best_f = -1.0;
    std::vector<double> best_vars = vars;
    for (int it = 0; it < cfg.smooth_iters; ++it) {
        if (it > 0 && it % cfg.anneal_every == 0) {
            lbw *= 0.5;
            lpow *= 0.5;
        }
        for (int k = 0; k < nc; ++k)
            pulse.amplitudes[static_cast<std::size_t>(k)] = {vars[static_cast<std::size_t>(k)],
                                                             vars[static_cast<std::size_t>(nc + k)]};
        PulseGradient pg = pulse_gradient(prop, pulse.to_segments(), spec, false);
        if (std::norm(pg.g) > best_f) {
            best_f = std::norm(pg.g);
            best_vars = vars;
        }
        const Complex gc = std::conj(pg.g);
        std::vector<double> grad(vars.size(), 0.0);
        for (int k = 0; k < nc; ++k) {
            Complex pen{0.0, 0.0};
            const Complex pk = pulse.amplitudes[static_cast<std::size_t>(k)];
            if (k > 0) pen += 2.0 * (pk - pulse.amplitudes[static_cast<std::size_t>(k) - 1]);
            if (k + 1 < nc) pen += 2.0 * (pk - pulse.amplitudes[static_cast<std::size_t>(k) + 1]);
            const Complex dre = 2.0 * std::real(gc * pg.d_re[static_cast<std::size_t>(k)]) -
                                lbw * pen.real() - lpow * 2.0 * dt * pk.real();
            const Complex dim = 2.0 * std::real(gc * pg.d_im[static_cast<std::size_t>(k)]) -
                                lbw * pen.imag() - lpow * 2.0 * dt * pk.imag();
            grad[static_cast<std::size_t>(k)] = dre.real();
            grad[static_cast<std::size_t>(nc + k)] = dim.real();
        }
        adam.step(vars, grad);
    }
    // keep the best raw-fidelity iterate seen (penalties steer, F decides)
    for (int k = 0; k < nc; ++k)
        pulse.amplitudes[static_cast<std::size_t>(k)] = {vars[static_cast<std::size_t>(k)],
                                                         vars[static_cast<std::size_t>(nc + k)]};
    if (fidelity(prop, pulse, spec) < best_f)
        for (int k = 0; k < nc; ++k)
            pulse.amplitudes[static_cast<std::size_t>(k)] = {
                best_vars[static_cast<std::size_t>(k)], best_vars[static_cast<std::size_t>(nc + k)]};

    res.pulse = pulse;
    res.fidelity = fidelity(prop, pulse, spec);
    res.bandwidth = pulse.total_variation();
    res.peak_amplitude = pulse.peak_amplitude();
    res.ok = res.fidelity >= 0.99 && res.fidelity >= res.stage1_fidelity - 1e-3;
    return res;
}

RobustnessReport robustness_check(const Propagator& prop, const SampledPulse& pulse,
                                  const GateSpec& spec, double eps, double floor) {
    RobustnessReport rep;
    rep.floor = floor;
    rep.nominal = fidelity(prop, pulse, spec);
    rep.pass = rep.nominal >= floor;
    for (double sgn : {+1.0, -1.0}) {
        const double f = 1.0 + sgn * eps;
        SampledPulse amp = pulse;
        for (Complex& a : amp.amplitudes) a *= f;
        rep.entries.push_back({"amplitude", f, fidelity(prop, amp, spec)});
        SampledPulse tim = pulse;
        tim.dt *= f;
        rep.entries.push_back({"time", f, fidelity(prop, tim, spec)});
    }
    for (const RobustnessEntry& e : rep.entries) rep.pass = rep.pass && e.fidelity >= floor;
    return rep;
}

ControllabilityResult controllability_check(const fock::HamiltonianTerms& terms, int K, double tol) {
    ControllabilityResult res;
    res.K = K;
    const Matrix* gens[3] = {&terms.h_shg.block(K), &terms.h_x.block(K), &terms.h_y.block(K)};
    const int d = static_cast<int>(gens[0]->rows());
    res.dim = d;
    if (d == 1) {
        res.rank = 0;
        res.full = true;
        return res;
    }
    const Complex mi{0.0, -1.0};

    // Real span of skew-Hermitian matrices under <A,B> = Re tr(A†B).
    std::vector<Matrix> basis;
    auto try_add = [&](Matrix m) -> bool {
        double n0 = m.norm();
        if (n0 < 1e-13) return false;
        m /= n0;
        for (int pass = 0; pass < 2; ++pass)  // re-orthogonalize for stability
            for (const Matrix& b : basis) {
                const double c = (b.adjoint() * m).trace().real();
                m -= c * b;
            }
        const double nr = m.norm();
        if (nr <= tol) return false;
        basis.push_back(m / nr);
        return true;
    };

    for (const Matrix* g : gens) try_add(mi * (*g));
    std::size_t processed = 0;
    while (processed < basis.size() && static_cast<int>(basis.size()) < d * d - 1) {
        const Matrix a = basis[processed];
        ++processed;
        for (std::size_t j = 0; j < processed && static_cast<int>(basis.size()) < d * d - 1; ++j) {
            const Matrix& b = basis[j];
            try_add(a * b - b * a);
        }
    }
    res.rank = static_cast<int>(basis.size());
    res.full = res.rank == d * d - 1;
    return res;
}

}  // namespace chi2cav::opt

#include "chi2cav/qec.hpp"

#include <cmath>
#include <stdexcept>

#include "chi2cav/gates.hpp"

namespace chi2cav::qec {

namespace {

using fock::Matrix;
using fock::Vector;

constexpr double kAmpTol = 1e-14;

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

BlockUnitary adjoint(const BlockUnitary& u) {
    BlockUnitary out;
    out.duration = u.duration;
    for (const auto& [K, m] : u.blocks) out.blocks[K] = m.adjoint();
    return out;
}

// Extend orthonormal columns to a full orthonormal basis, deterministically,
// by Gram-Schmidt against the standard basis.
Matrix complete_columns(const Matrix& cols, int d) {
    std::vector<Vector> basis;
    for (int j = 0; j < cols.cols(); ++j) basis.push_back(cols.col(j));
    for (int j = 0; j < d && static_cast<int>(basis.size()) < d; ++j) {
        Vector v = Vector::Zero(d);
        v(j) = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& b : basis) v -= b.dot(v) * b;
        const double n = v.norm();
        if (n > 1e-6) basis.push_back(v / n);
    }
    if (static_cast<int>(basis.size()) != d)
        throw std::runtime_error("complete_columns: completion failed");
    Matrix out(d, d);
    for (int j = 0; j < d; ++j) out.col(j) = basis[static_cast<std::size_t>(j)];
    return out;
}

}  // namespace

double SparseState::norm() const {
    double s = 0.0;
    for (const auto& [o, a] : amps) s += std::norm(a);
    return std::sqrt(s);
}

void SparseState::normalize() {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("SparseState: cannot normalize zero state");
    for (auto& [o, a] : amps) a /= n;
}

Complex SparseState::dot(const SparseState& other) const {
    Complex s{0.0, 0.0};
    for (const auto& [o, a] : amps) {
        auto it = other.amps.find(o);
        if (it != other.amps.end()) s += std::conj(a) * it->second;
    }
    return s;
}

void SparseState::prune(double tol) {
    for (auto it = amps.begin(); it != amps.end();)
        it = std::abs(it->second) < tol ? amps.erase(it) : std::next(it);
}

SparseState SparseState::basis(const Occ& o, Complex amp) {
    SparseState s;
    s.amps[o] = amp;
    return s;
}

BlockUnitary complete_unitary(const GateSpec& spec, const fock::SectorTable& table) {
    require_valid(spec);
    BlockUnitary u;
    for (int K = 0; K <= table.k_max(); ++K) {
        const int d = table.sector(K).dim();
        std::vector<Vector> s_cols, t_cols;
        for (const auto& [in, tgt] : spec.pairs) {
            auto si = in.amplitudes.find(K);
            if (si == in.amplitudes.end() || si->second.norm() < 1e-12) continue;
            // Completion works sector by sector; pairs must not straddle sectors.
            if (std::abs(si->second.norm() - 1.0) > 1e-9)
                throw std::invalid_argument("complete_unitary: pair input straddles sectors");
            auto ti = tgt.amplitudes.find(K);
            if (ti == tgt.amplitudes.end() || std::abs(ti->second.norm() - 1.0) > 1e-9)
                throw std::invalid_argument("complete_unitary: pair target straddles sectors");
            s_cols.push_back(si->second);
            t_cols.push_back(ti->second);
        }
        if (s_cols.empty()) {
            u.blocks[K] = Matrix::Identity(d, d);
            continue;
        }
        Matrix S(d, static_cast<int>(s_cols.size())), T(d, static_cast<int>(t_cols.size()));
        for (int j = 0; j < S.cols(); ++j) {
            S.col(j) = s_cols[static_cast<std::size_t>(j)];
            T.col(j) = t_cols[static_cast<std::size_t>(j)];
        }
        u.blocks[K] = complete_columns(T, d) * complete_columns(S, d).adjoint();
    }
    return u;
}

SparseState apply_triple(const SparseState& state, const BlockUnitary& u,
                         const std::array<int, 3>& modes) {
    for (int m : modes)
        if (m < 0 || m >= kModes) throw std::invalid_argument("apply_triple: mode index out of range");
    std::map<int, fock::ChargeSector> sectors;
    SparseState out;
    for (const auto& [o, a] : state.amps) {
        const fock::FockState local{o[static_cast<std::size_t>(modes[0])],
                                    o[static_cast<std::size_t>(modes[1])],
                                    o[static_cast<std::size_t>(modes[2])]};
        const int K = local.charge();
        auto bit = u.blocks.find(K);
        if (bit == u.blocks.end())
            throw std::out_of_range("apply_triple: unitary lacks sector K=" + std::to_string(K));
        auto sit = sectors.find(K);
        if (sit == sectors.end()) sit = sectors.emplace(K, fock::enumerate_sector(K)).first;
        const fock::ChargeSector& sec = sit->second;
        const int col = sec.index_of(local);
        for (int row = 0; row < sec.dim(); ++row) {
            const Complex v = bit->second(row, col);
            if (std::abs(v) < kAmpTol) continue;
            Occ no = o;
            const fock::FockState& t = sec.basis[static_cast<std::size_t>(row)];
            no[static_cast<std::size_t>(modes[0])] = t.n_a;
            no[static_cast<std::size_t>(modes[1])] = t.n_b;
            no[static_cast<std::size_t>(modes[2])] = t.n_c;
            out.amps[no] += a * v;
        }
    }
    out.prune();
    return out;
}

SparseState swap_modes(const SparseState& state, int m1, int m2) {
    SparseState out;
    for (const auto& [o, a] : state.amps) {
        Occ no = o;
        std::swap(no[static_cast<std::size_t>(m1)], no[static_cast<std::size_t>(m2)]);
        out.amps[no] += a;
    }
    return out;
}

SparseState apply_annihilator(const SparseState& state, int mode) {
    SparseState out;
    for (const auto& [o, a] : state.amps) {
        const int n = o[static_cast<std::size_t>(mode)];
        if (n == 0) continue;
        Occ no = o;
        no[static_cast<std::size_t>(mode)] = n - 1;
        out.amps[no] += a * std::sqrt(static_cast<double>(n));
    }
    return out;
}

GateSpec branch_restore(const fock::SectorTable& table) {
    GateSpec spec;
    spec.name = "branch_restore";
    spec.notes = "rebuild the symmetric code component from the routed error branch";
    auto bs = [&](int a, int b, int c, Complex amp = {1.0, 0.0}) {
        return StateVector::basis_state(table, fock::FockState{a, b, c}, amp);
    };
    const double r = 1.0 / std::sqrt(2.0);
    StateVector sym = bs(2, 0, 0, {r, 0.0});
    sym.amplitudes[4] += bs(0, 4, 0, {r, 0.0}).amplitudes[4];
    spec.pairs.emplace_back(bs(2, 0, 0), sym);
    for (auto [a, b, c] : {std::array<int, 3>{1, 2, 0}, {0, 4, 1}, {0, 2, 1}, {0, 0, 1}}) {
        StateVector v = bs(a, b, c);
        spec.pairs.emplace_back(v, v);
    }
    return spec;
}

nlohmann::json CircuitPlan::to_json() const {
    nlohmann::json steps_j = nlohmann::json::array();
    for (const PlanStep& s : steps) {
        if (s.kind == "gate")
            steps_j.push_back({{"kind", "gate"},
                               {"gate", s.gate},
                               {"reversed", s.reversed},
                               {"modes", {s.modes[0], s.modes[1], s.modes[2]}}});
        else
            steps_j.push_back({{"kind", "swap"}, {"pair", {s.pair[0], s.pair[1]}}});
    }
    return {{"name", name}, {"steps", steps_j}};
}

CircuitPlan correction_plan() {
    CircuitPlan plan;
    plan.name = "correction";
    auto gate = [](std::string g, std::array<int, 3> m, bool rev = false) {
        return PlanStep{"gate", std::move(g), rev, m, {}};
    };
    plan.steps = {
        gate("loss_correction", {A1, B1, C1}),
        gate("loss_correction", {A2, B2, C2}),
        gate("routing", {A1, B1, C1}),
        gate("routing", {A2, B2, C2}),
        gate("branch_restore", {A1, B2, C1}),
        gate("branch_restore", {A2, B1, C2}),
        gate("routing", {A1, B1, C1}, true),
        gate("routing", {A2, B2, C2}, true),
    };
    return plan;
}

CircuitPlan encoding_plan() {
    CircuitPlan plan;
    plan.name = "encoding";
    auto gate = [](std::string g, std::array<int, 3> m, bool rev = false) {
        return PlanStep{"gate", std::move(g), rev, m, {}};
    };
    auto swap = [](int m1, int m2) { return PlanStep{"swap", "", false, {}, {m1, m2}}; };
    plan.steps = {
        gate("partial_encoder", {A1, B1, C1}),
        swap(A1, B2),
        swap(B1, C2),
        gate("entangler", {A2, B2, C2}),
        swap(B2, A1),
        swap(C2, A2),
        gate("routing", {A1, B1, C1}, true),
        gate("routing", {A2, B2, C2}, true),
    };
    return plan;
}

GateSpec plan_gate_spec(const PlanStep& step, const fock::SectorTable& table) {
    if (step.gate == "branch_restore") return branch_restore(table);
    auto spec = gates::by_name(step.gate, table);
    if (!spec) throw std::invalid_argument("plan_gate_spec: unknown gate " + step.gate);
    return *spec;
}

SparseState run_plan_ideal(const CircuitPlan& plan, const SparseState& input,
                           const fock::SectorTable& table) {
    std::map<std::string, BlockUnitary> cache;
    SparseState state = input;
    for (const PlanStep& step : plan.steps) {
        if (step.kind == "swap") {
            state = swap_modes(state, step.pair[0], step.pair[1]);
            continue;
        }
        auto it = cache.find(step.gate);
        if (it == cache.end())
            it = cache.emplace(step.gate, complete_unitary(plan_gate_spec(step, table), table)).first;
        state = apply_triple(state, step.reversed ? adjoint(it->second) : it->second, step.modes);
    }
    return state;
}

SparseState run_plan(const CircuitPlan& plan, const SparseState& input,
                     const std::map<std::string, BlockUnitary>& unitaries) {
    SparseState state = input;
    for (const PlanStep& step : plan.steps) {
        if (step.kind == "swap") {
            state = swap_modes(state, step.pair[0], step.pair[1]);
            continue;
        }
        auto it = unitaries.find(step.gate);
        if (it == unitaries.end())
            throw std::invalid_argument("run_plan: no unitary for gate " + step.gate);
        state = apply_triple(state, step.reversed ? adjoint(it->second) : it->second, step.modes);
    }
    return state;
}

SparseState encode(Complex alpha, Complex beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
        throw std::invalid_argument("encode: amplitudes not normalized");
    const double r = 1.0 / std::sqrt(2.0);
    SparseState s;
    s.amps[{0, 4, 0, 0, 0, 0}] = alpha * r;
    s.amps[{0, 0, 0, 0, 4, 0}] = alpha * r;
    s.amps[{0, 2, 0, 0, 2, 0}] = beta;
    s.prune();
    return s;
}

SparseState encoding_input(Complex alpha, Complex beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
        throw std::invalid_argument("encoding_input: amplitudes not normalized");
    SparseState s;
    s.amps[{1, 1, 1, 0, 0, 0}] = alpha;
    s.amps[{1, 1, 0, 0, 0, 0}] = beta;
    s.prune();
    return s;
}

SparseState encoding_circuit(Complex alpha, Complex beta, const fock::SectorTable& table) {
    return run_plan_ideal(encoding_plan(), encoding_input(alpha, beta), table);
}

SparseState correction_circuit(const SparseState& input, const fock::SectorTable& table,
                               double leak_tol) {
    // Declared domain, spanned independently of (α, β); ancillas must be |11⟩.
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<SparseState> span;
    SparseState sym;
    sym.amps[{0, 4, 1, 0, 0, 1}] = r;
    sym.amps[{0, 0, 1, 0, 4, 1}] = r;
    span.push_back(sym);
    for (Occ o : {Occ{0, 2, 1, 0, 2, 1}, Occ{0, 3, 1, 0, 0, 1}, Occ{0, 1, 1, 0, 2, 1},
                  Occ{0, 0, 1, 0, 3, 1}, Occ{0, 2, 1, 0, 1, 1}})
        span.push_back(SparseState::basis(o));
    double in_span = 0.0;
    for (const SparseState& v : span) in_span += std::norm(v.dot(input));
    const double leak = input.norm() * input.norm() - in_span;
    if (leak > leak_tol)
        throw std::invalid_argument("correction_circuit: input leaks outside the declared span by " +
                                    std::to_string(leak));
    return run_plan_ideal(correction_plan(), input, table);
}

SparseState logical_cphase(const SparseState& two_qubits, const fock::SectorTable& table) {
    BlockUnitary u = complete_unitary(gates::cphase_core(table), table);
    return apply_triple(two_qubits, u, {A1, C1, C2});
}

Eigen::MatrixXd damping_kraus(int k, double eta, int n_max) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("damping_kraus: eta outside [0,1]");
    if (k < 0 || k > n_max) throw std::invalid_argument("damping_kraus: bad k");
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
    for (int n = k; n <= n_max; ++n)
        E(n - k, n) = std::sqrt(binomial(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
    return E;
}

std::array<double, 3> channel_outcome_probs(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("channel_outcome_probs: p outside [0,1]");
    return {(1.0 - p) * (1.0 - p), 2.0 * p * (1.0 - p), p * p};
}

CodeSpace::CodeSpace(int cap_) : cap(cap_) {
    if (cap < 0) throw std::invalid_argument("CodeSpace: negative cap");
    for (int n1 = 0; n1 <= cap; ++n1)
        for (int n2 = 0; n1 + n2 <= cap; ++n2) {
            index[{n1, n2}] = static_cast<int>(basis.size());
            basis.push_back({n1, n2});
        }
}

namespace {

// Amplitude damping on one of the two code modes, over a CodeSpace density
// matrix; exact binomial Kraus sum.
Eigen::MatrixXcd damp_code_mode(const CodeSpace& cs, const Eigen::MatrixXcd& rho, int mode,
                                double eta) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(cs.dim(), cs.dim());
    for (int k = 0; k <= cs.cap; ++k) {
        // E_k as a (partial) map on the code basis.
        Eigen::MatrixXcd Ek = Eigen::MatrixXcd::Zero(cs.dim(), cs.dim());
        bool any = false;
        for (int i = 0; i < cs.dim(); ++i) {
            std::array<int, 2> o = cs.basis[static_cast<std::size_t>(i)];
            const int n = o[static_cast<std::size_t>(mode)];
            if (n < k) continue;
            o[static_cast<std::size_t>(mode)] = n - k;
            const double w = std::sqrt(binomial(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
            if (w == 0.0) continue;
            Ek(cs.index.at(o), i) = w;
            any = true;
        }
        if (any) out += Ek * rho * Ek.adjoint();
    }
    return out;
}

}  // namespace

CorrectionChannel::CorrectionChannel(const fock::SectorTable& table) : space_(8), embed_cap_(6) {
    // Run the ideal correction circuit on every embeddable code basis state
    // (fresh |11⟩ ancillas, empty a-modes) and group the output rows by the
    // traced-out (a1, c1, a2, c2) configuration.
    std::vector<int> embed_cols;
    for (int i = 0; i < space_.dim(); ++i) {
        const auto& o = space_.basis[static_cast<std::size_t>(i)];
        if (o[0] + o[1] <= embed_cap_) embed_cols.push_back(i);
    }
    const int ne = static_cast<int>(embed_cols.size());
    const CircuitPlan plan = correction_plan();

    std::map<std::array<int, 4>, Eigen::MatrixXcd> by_env;
    for (int j = 0; j < ne; ++j) {
        const auto& o = space_.basis[static_cast<std::size_t>(embed_cols[static_cast<std::size_t>(j)])];
        SparseState in = SparseState::basis({0, o[0], 1, 0, o[1], 1});
        SparseState out = run_plan_ideal(plan, in, table);
        for (const auto& [occ, amp] : out.amps) {
            const std::array<int, 4> env{occ[A1], occ[C1], occ[A2], occ[C2]};
            auto it = by_env.find(env);
            if (it == by_env.end())
                it = by_env.emplace(env, Eigen::MatrixXcd::Zero(space_.dim(), ne)).first;
            it->second(space_.index.at({occ[B1], occ[B2]}), j) += amp;
        }
    }
    // Re-expand the Kraus column space to the full code space (zero columns
    // for states that cannot be embedded).
    for (auto& [env, K] : by_env) {
        Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(space_.dim(), space_.dim());
        for (int j = 0; j < ne; ++j) full.col(embed_cols[static_cast<std::size_t>(j)]) = K.col(j);
        kraus_.push_back(std::move(full));
    }
}

Eigen::MatrixXcd CorrectionChannel::apply(const Eigen::MatrixXcd& rho, double& leaked) const {
    // Drop weight on code states too charged to embed under the cap.
    Eigen::MatrixXcd projected = rho;
    for (int i = 0; i < space_.dim(); ++i) {
        const auto& o = space_.basis[static_cast<std::size_t>(i)];
        if (o[0] + o[1] > embed_cap_) {
            leaked += std::real(rho(i, i));
            projected.row(i).setZero();
            projected.col(i).setZero();
        }
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(space_.dim(), space_.dim());
    for (const Eigen::MatrixXcd& K : kraus_) out += K * projected * K.adjoint();
    return out;
}

LifetimeCurves lifetime_experiment(const LifetimeConfig& cfg, const CorrectionChannel& channel) {
    if (cfg.N <= 0.0 || cfg.period <= 0.0 || cfg.circuit_time < 0.0 || cfg.horizon <= 0.0)
        throw std::invalid_argument("lifetime_experiment: non-positive config");
    const CodeSpace& cs = channel.space();
    Eigen::VectorXcd C = Eigen::VectorXcd::Zero(cs.dim());
    const double r = 1.0 / std::sqrt(2.0);
    C(cs.index.at({4, 0})) = cfg.alpha * r;
    C(cs.index.at({0, 4})) = cfg.alpha * r;
    C(cs.index.at({2, 2})) = cfg.beta;

    LifetimeCurves curves;
    const double gamma = 1.0 / cfg.N;
    const double cycle = cfg.period + cfg.circuit_time;

    auto idle_fidelity = [&](double t) {
        const double eta = std::exp(-gamma * t);
        Eigen::MatrixXcd rho = C * C.adjoint();
        rho = damp_code_mode(cs, rho, 0, eta);
        rho = damp_code_mode(cs, rho, 1, eta);
        return std::real((C.adjoint() * rho * C)(0, 0));
    };

    Eigen::MatrixXcd rho = C * C.adjoint();
    double t = 0.0;
    curves.t.push_back(0.0);
    curves.unprotected.push_back(1.0);
    curves.uncorrected.push_back(1.0);
    curves.corrected.push_back(1.0);
    const double eta_cycle = std::exp(-gamma * cycle);
    while (t + cycle <= cfg.horizon + 1e-9) {
        rho = damp_code_mode(cs, rho, 0, eta_cycle);
        rho = damp_code_mode(cs, rho, 1, eta_cycle);
        rho = channel.apply(rho, curves.leaked_weight);
        t += cycle;
        curves.t.push_back(t);
        curves.unprotected.push_back(std::exp(-gamma * t));
        curves.uncorrected.push_back(idle_fidelity(t));
        curves.corrected.push_back(std::real((C.adjoint() * rho * C)(0, 0)));
    }
    return curves;
}

double breakeven_N(const std::vector<double>& N_grid, const LifetimeConfig& base,
                   const CorrectionChannel& channel) {
    for (double N : N_grid) {
        LifetimeConfig cfg = base;
        cfg.N = N;
        LifetimeCurves c = lifetime_experiment(cfg, channel);
        if (c.corrected.back() >= c.unprotected.back()) return N;
    }
    return -1.0;
}

}  // namespace chi2cav::qec

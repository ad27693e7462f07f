#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "chi2cav/propagator.hpp"

using namespace chi2cav;

namespace {

// 4th-order Runge-Kutta reference for U' = −iHU with step halving.
fock::Matrix reference_expm(const fock::Matrix& h, double dt) {
    const int d = static_cast<int>(h.rows());
    auto integrate = [&](int steps) {
        fock::Matrix u = fock::Matrix::Identity(d, d);
        const double hstep = dt / steps;
        const fock::Matrix m = Complex{0.0, -1.0} * h;
        for (int s = 0; s < steps; ++s) {
            fock::Matrix k1 = m * u;
            fock::Matrix k2 = m * (u + 0.5 * hstep * k1);
            fock::Matrix k3 = m * (u + 0.5 * hstep * k2);
            fock::Matrix k4 = m * (u + hstep * k3);
            u += hstep / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return u;
    };
    fock::Matrix u1 = integrate(2000), u2 = integrate(4000);
    REQUIRE((u1 - u2).cwiseAbs().maxCoeff() < 1e-9);
    return u2;
}

}  // namespace

TEST_CASE("segment propagator basics") {
    Propagator prop(6);
    CHECK((prop.segment_propagator({0.3, -0.2}, 0.0, 3) -
           fock::Matrix::Identity(prop.table().sector(3).dim(), prop.table().sector(3).dim()))
              .norm() < 1e-14);
    CHECK(prop.segment_propagator({1.0, 2.0}, 0.7, 0)(0, 0) == Complex{1.0, 0.0});
    CHECK_THROWS_AS(prop.segment_propagator({0.0, 0.0}, -1.0, 2), std::invalid_argument);
}

TEST_CASE("Rabi oscillation in K=2 at p=0") {
    Propagator prop(4);
    StateVector init = StateVector::basis_state(prop.table(), {1, 0, 0});
    for (double dt : {0.2, 0.5, 1.3}) {
        auto [fin, traj] = prop.propagate({{Complex{0.0, 0.0}, dt}}, init, -1.0);
        const double expect = std::pow(std::cos(std::sqrt(2.0) * dt), 2);
        CHECK(fin.mean_occupation(prop.table(), fock::Mode::A) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("exponential correctness oracle") {
    Propagator prop(8);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 5; ++trial) {
        const Complex p{u(rng), u(rng)};
        const double dt = 0.3 + 0.2 * trial;
        for (int K : {2, 4}) {
            fock::Matrix h = fock::sector_hamiltonian(prop.terms(), K, p);
            fock::Matrix exact = prop.segment_propagator(p, dt, K);
            CHECK((exact - reference_expm(h, dt)).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("pulse unitarity, composition and inverse") {
    Propagator prop(6);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Segment> p1, p2;
    for (int l = 0; l < 6; ++l) p1.push_back({{u(rng), u(rng)}, 0.2 + 0.1 * l});
    for (int l = 0; l < 4; ++l) p2.push_back({{u(rng), u(rng)}, 0.15 * (l + 1)});

    auto sectors = prop.all_sectors();
    BlockUnitary u1 = prop.pulse_unitary(p1, sectors);
    CHECK(u1.unitarity_defect() < 1e-10);

    std::vector<Segment> cat = p1;
    cat.insert(cat.end(), p2.begin(), p2.end());
    BlockUnitary u2 = prop.pulse_unitary(p2, sectors);
    BlockUnitary ucat = prop.pulse_unitary(cat, sectors);
    for (int K : sectors)
        CHECK((ucat.blocks.at(K) - u2.blocks.at(K) * u1.blocks.at(K)).cwiseAbs().maxCoeff() < 1e-9);

    // Pulse inversion: the SHG term has a fixed sign, so the inverse pulse is
    // the reversed sequence with p → i·p, conjugated by the frame (−i)^{n_b}.
    std::vector<Segment> rev(p1.rbegin(), p1.rend());
    for (Segment& s : rev) s.p *= Complex{0.0, 1.0};
    BlockUnitary urev = prop.pulse_unitary(rev, sectors);
    for (int K : sectors) {
        const auto& sec = prop.table().sector(K);
        fock::Vector frame(sec.dim());
        for (int i = 0; i < sec.dim(); ++i)
            frame(i) = std::pow(Complex{0.0, -1.0}, sec.basis[static_cast<std::size_t>(i)].n_b);
        fock::Matrix expect = frame.asDiagonal() * u1.blocks.at(K).adjoint() *
                              frame.conjugate().asDiagonal();
        CHECK((urev.blocks.at(K) - expect).cwiseAbs().maxCoeff() < 1e-9);
        fock::Matrix prod = u1.blocks.at(K).adjoint() * u1.blocks.at(K);
        CHECK((prod - fock::Matrix::Identity(prod.rows(), prod.cols())).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("trajectory recording and charge conservation") {
    Propagator prop(6);
    StateVector vac = StateVector::basis_state(prop.table(), {0, 0, 0});
    auto [fv, tv] = prop.propagate({{Complex{0.5, 0.5}, 1.0}}, vac, 0.1);
    for (const auto& s : tv.samples) {
        CHECK(s.n_a == doctest::Approx(0.0));
        CHECK(s.n_b == doctest::Approx(0.0));
    }

    StateVector init = StateVector::basis_state(prop.table(), {1, 1, 1});
    auto [fin, traj] = prop.propagate({{Complex{0.8, -0.3}, 0.9}, {Complex{-0.2, 0.6}, 1.1}}, init, 0.05);
    CHECK(fin.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const double q0 = traj.samples.front().n_a * 2 + traj.samples.front().n_b + traj.samples.front().n_c;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        CHECK(traj.samples[i].t > traj.samples[i - 1].t);
        const auto& s = traj.samples[i];
        CHECK(std::abs(2 * s.n_a + s.n_b + s.n_c - q0) < 1e-9);
    }

    StateVector high = StateVector::basis_state(fock::SectorTable(9), {0, 9, 0});
    CHECK_THROWS_AS(prop.propagate({{Complex{0, 0}, 0.1}}, high, -1.0), std::out_of_range);
}

TEST_CASE("resampling a parameterized pulse") {
    PulseParams params;
    params.X = {0.5, -1.0};
    params.P = {0.0, 2.0};
    params.T = {0.0, 0.3};
    params.delta_tau = 0.5;
    SampledPulse fine = resample(params, 64);
    CHECK(fine.cells() == 64);
    CHECK(fine.total_duration() == doctest::Approx(params.total_duration()));
    CHECK(fine.amplitudes.front() == params.amplitude(0));
    CHECK(fine.amplitudes.back() == params.amplitude(1));
}

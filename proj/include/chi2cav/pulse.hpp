// pulse.hpp — Drive parameterizations.
//
// Stage 1 works with PulseParams: s piecewise-constant segments whose complex
// amplitudes and durations are squashed into boxes by arctan and a sigmoid.
// Stage 2 works with SampledPulse: a fine uniform grid, zero-order hold.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace chi2cav {

using Complex = std::complex<double>;

struct Segment {
    Complex p;   // constant drive amplitude
    double dt;   // unitless duration (units of 1/chi)
};

struct PulseParams {
    std::vector<double> X, P, T;
    double delta_tau{1.0};        // max segment duration
    double amplitude_scale{1.0};  // 1.0 -> box (−π/2, π/2); 2/π -> box (−1, 1)

    int segments() const { return static_cast<int>(X.size()); }

    void validate() const {
        if (X.size() != P.size() || X.size() != T.size())
            throw std::invalid_argument("PulseParams: X, P, T must have equal length");
        if (delta_tau <= 0.0) throw std::invalid_argument("PulseParams: delta_tau must be positive");
        for (double v : X) if (!std::isfinite(v)) throw std::invalid_argument("PulseParams: non-finite X");
        for (double v : P) if (!std::isfinite(v)) throw std::invalid_argument("PulseParams: non-finite P");
        for (double v : T) if (!std::isfinite(v)) throw std::invalid_argument("PulseParams: non-finite T");
    }

    Complex amplitude(int l) const {
        return amplitude_scale * Complex{std::atan(X[static_cast<std::size_t>(l)]),
                                         std::atan(P[static_cast<std::size_t>(l)])};
    }
    double duration(int l) const {
        return delta_tau / (1.0 + std::exp(-T[static_cast<std::size_t>(l)]));
    }
    double total_duration() const {
        double t = 0.0;
        for (int l = 0; l < segments(); ++l) t += duration(l);
        return t;
    }

    std::vector<Segment> to_segments() const {
        std::vector<Segment> seg;
        seg.reserve(X.size());
        for (int l = 0; l < segments(); ++l) seg.push_back({amplitude(l), duration(l)});
        return seg;
    }
};

struct SampledPulse {
    double dt{0.0};                  // grid step
    std::vector<Complex> amplitudes; // one per grid cell

    int cells() const { return static_cast<int>(amplitudes.size()); }
    double total_duration() const { return dt * cells(); }

    void validate() const {
        if (cells() > 0 && dt <= 0.0) throw std::invalid_argument("SampledPulse: dt must be positive");
        for (const Complex& a : amplitudes)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw std::invalid_argument("SampledPulse: non-finite amplitude");
    }

    double peak_amplitude() const {
        double m = 0.0;
        for (const Complex& a : amplitudes) m = std::max(m, std::abs(a));
        return m;
    }
    // Sum of |p_{k+1} - p_k| over the grid.
    double total_variation() const {
        double tv = 0.0;
        for (int k = 0; k + 1 < cells(); ++k)
            tv += std::abs(amplitudes[static_cast<std::size_t>(k) + 1] - amplitudes[static_cast<std::size_t>(k)]);
        return tv;
    }

    std::vector<Segment> to_segments() const {
        std::vector<Segment> seg;
        seg.reserve(amplitudes.size());
        for (const Complex& a : amplitudes) seg.push_back({a, dt});
        return seg;
    }
};

// Zero-order-hold resampling of a stage-1 pulse onto a uniform grid.
SampledPulse resample(const PulseParams& params, int cells);

}  // namespace chi2cav

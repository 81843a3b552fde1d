#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "qpe/errors.hpp"
#include "qpe/qubit.hpp"
#include "qpe/report.hpp"
#include "qpe/summation.hpp"

namespace qpe {

/// Clock wavepacket and grid. The grid spans q - q0 in [-W sigma_q, +W sigma_q].
struct ClockNumericsConfig {
    double v = 1.0;
    double q0 = -0.2;
    double sigma_q = 0.01;
    double grid_halfwidth_sigmas = 10.0;
    std::size_t grid_points = 4096;

    double dq() const noexcept {
        return 2.0 * grid_halfwidth_sigmas * sigma_q / static_cast<double>(grid_points - 1);
    }

    /// sigma_q = ratio * v / omega0, q0 = -2 W sigma_q.
    static ClockNumericsConfig from_ratio(double ratio, const QubitHamiltonian &h, double v = 1.0,
                                          std::size_t grid_points = 4096) {
        ClockNumericsConfig c;
        c.v = v;
        c.sigma_q = ratio * v / h.omega0();
        c.q0 = -2.0 * c.grid_halfwidth_sigmas * c.sigma_q;
        c.grid_points = grid_points;
        return c;
    }
};

inline void validate(const ClockNumericsConfig &c) {
    if (!(c.v > 0.0) || !std::isfinite(c.v)) {
        throw InvalidParameter("clock speed v must be positive");
    }
    if (!(c.sigma_q > 0.0) || !std::isfinite(c.sigma_q)) {
        throw InvalidParameter("sigma_q must be positive");
    }
    if (!(c.grid_halfwidth_sigmas > 0.0) || !std::isfinite(c.grid_halfwidth_sigmas)) {
        throw InvalidParameter("grid half-width must be positive");
    }
    if (!std::isfinite(c.q0) || !(c.q0 < -c.grid_halfwidth_sigmas * c.sigma_q)) {
        throw InvalidParameter("q0 must lie left of the grid half-width (q0 < -W sigma_q)");
    }
    if (c.grid_points < 256 || (c.grid_points & (c.grid_points - 1)) != 0) {
        throw InvalidParameter("grid_points must be a power of two and at least 256");
    }
    if (c.sigma_q / c.dq() < 8.0) {
        throw GridUnderresolved("sigma_q/dq = " + describe(c.sigma_q / c.dq()) + " < 8");
    }
}

/// Conditioned clock wavepacket on the offset grid q~ = q - q0 (un-normalized).
struct ClockWavepacket {
    std::vector<double> offsets;
    std::vector<cplx> amps;
    double norm_sq = 0.0;
    Outcome outcome = Outcome::f;
};

inline double qubit_energy_change(const QubitState &i, const MeasurementBasis &b, Outcome o,
                                  const QubitHamiltonian &h) noexcept {
    return energy_expectation(b.state(o), h) - energy_expectation(i, h);
}

inline ShiftReport clock_shift_analytic(const QubitState &i, const MeasurementBasis &b, Outcome o,
                                        const QubitHamiltonian &h) {
    const QubitState &f = b.state(o);
    const double p = std::norm(inner(f, i));
    if (p < kOverlapFloor) {
        throw OrthogonalPostSelection("|<f|i>|^2 = " + describe(p) + " is below the overlap floor");
    }
    // Re(<f|H0|i>/<f|i>) - <f|H0|f> over the common denominator |<f|i>|^2.
    const double fu2 = std::norm(f.up());
    const double fd2 = std::norm(f.down());
    const double cross = (std::conj(f.up()) * f.down() * (i.up() * std::conj(i.down()))).real();
    ShiftReport r;
    r.model = Model::clock;
    r.method = Method::analytic;
    r.outcome = o;
    r.shift = h.omega0() * (fu2 * fd2 * (std::norm(i.up()) - std::norm(i.down())) - (fu2 - fd2) * cross) / p;
    r.probability = p;
    return r;
}

/// Default numerics for (i, b): sigma_q omega0 / v = ratio, shrunk further when
/// either analytic shift exceeds 10 omega0 in magnitude.
inline ClockNumericsConfig default_clock_config(const QubitState &i, const MeasurementBasis &b,
                                                const QubitHamiltonian &h, double ratio = 0.01,
                                                double v = 1.0) {
    double worst = 0.0;
    for (Outcome o : {Outcome::f, Outcome::perp}) {
        try {
            worst = std::max(worst, std::fabs(clock_shift_analytic(i, b, o, h).shift));
        } catch (const OrthogonalPostSelection &) {
        }
    }
    if (worst > 10.0 * h.omega0()) {
        ratio *= h.omega0() / worst;
    }
    return ClockNumericsConfig::from_ratio(ratio, h, v);
}

namespace detail {

inline double trapezoid(const std::vector<double> &y, double dx) {
    CompensatedSum s;
    for (std::size_t k = 0; k < y.size(); ++k) {
        s += (k == 0 || k + 1 == y.size()) ? 0.5 * y[k] : y[k];
    }
    return s.value() * dx;
}

inline cplx trapezoid(const std::vector<cplx> &y, double dx) {
    CompensatedComplexSum s;
    for (std::size_t k = 0; k < y.size(); ++k) {
        s += (k == 0 || k + 1 == y.size()) ? 0.5 * y[k] : y[k];
    }
    return s.value() * dx;
}

inline double gaussian_profile(double x, double sigma) {
    return std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) * std::exp(-x * x / (4.0 * sigma * sigma));
}

}  // namespace detail

/// Joint qubit-clock evolution projected on the outcome state, written in the
/// gauge where the post-interaction free phase of the outcome is removed:
///   psi(q~) = e^{-i E_out s} <out| e^{+i H0 s} |i> phi(q~),  s = q~ / v.
/// The norm over both outcomes is exactly that of phi.
inline ClockWavepacket conditioned_wavepacket(const QubitState &i, const MeasurementBasis &b, Outcome o,
                                              const ClockNumericsConfig &cfg, const QubitHamiltonian &h) {
    validate(cfg);
    const QubitState &f = b.state(o);
    const double w = h.omega0();
    const double e_out = energy_expectation(f, h);
    const cplx cu = std::conj(f.up()) * i.up();
    const cplx cd = std::conj(f.down()) * i.down();
    const std::size_t n = cfg.grid_points;
    const double dq = cfg.dq();
    const double half = cfg.grid_halfwidth_sigmas * cfg.sigma_q;

    ClockWavepacket p;
    p.outcome = o;
    p.offsets.resize(n);
    p.amps.resize(n);
    std::vector<double> dens(n);
    for (std::size_t k = 0; k < n; ++k) {
        double x = -half + static_cast<double>(k) * dq;
        double s = x / cfg.v;
        cplx proj = cu * std::polar(1.0, 0.5 * w * s) + cd * std::polar(1.0, -0.5 * w * s);
        p.offsets[k] = x;
        p.amps[k] = std::polar(1.0, -e_out * s) * proj * detail::gaussian_profile(x, cfg.sigma_q);
        dens[k] = std::norm(p.amps[k]);
    }
    p.norm_sq = detail::trapezoid(dens, dq);

    double peak = 0.0;
    for (double d : dens) {
        peak = std::max(peak, d);
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (dens[k] > 1e-12 * peak && dens[k + 1] > 1e-12 * peak) {
            double step = std::fabs(std::arg(std::conj(p.amps[k]) * p.amps[k + 1]));
            if (step > std::numbers::pi / 4) {
                throw GridUnderresolved("phase step " + describe(step) + " rad between grid points exceeds pi/4");
            }
        }
    }
    return p;
}

/// v <p> of a conditioned packet: v Im(int psi* psi') / int |psi|^2.
inline ShiftReport clock_shift_numeric(const ClockWavepacket &w, const ClockNumericsConfig &cfg,
                                       const QubitHamiltonian &) {
    validate(cfg);
    const std::size_t n = w.amps.size();
    if (n < 3) {
        throw GridUnderresolved("wavepacket has fewer than three grid points");
    }
    const double dq = w.offsets[1] - w.offsets[0];
    std::vector<cplx> integrand(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx d;
        if (k == 0) {
            d = (w.amps[1] - w.amps[0]) / dq;
        } else if (k + 1 == n) {
            d = (w.amps[n - 1] - w.amps[n - 2]) / dq;
        } else {
            d = (w.amps[k + 1] - w.amps[k - 1]) / (2.0 * dq);
        }
        integrand[k] = std::conj(w.amps[k]) * d;
    }
    if (!(w.norm_sq >= kOverlapFloor)) {
        throw ZeroProbabilityOutcome("conditioned clock packet has vanishing norm");
    }
    ShiftReport r;
    r.model = Model::clock;
    r.method = Method::numeric;
    r.outcome = w.outcome;
    r.shift = cfg.v * detail::trapezoid(integrand, dq).imag() / w.norm_sq;
    r.probability = w.norm_sq;
    return r;
}

/// P_f (dE0_f + dEM_f) + P_perp (dE0_perp + dEM_perp) with analytic shifts.
inline double clock_energy_balance(const QubitState &i, const MeasurementBasis &b, const QubitHamiltonian &h) {
    CompensatedSum s;
    for (Outcome o : {Outcome::f, Outcome::perp}) {
        ShiftReport r = clock_shift_analytic(i, b, o, h);
        s += r.probability * (qubit_energy_change(i, b, o, h) + r.shift);
    }
    return s.value();
}

struct OffDiagonalDecay {
    double closed_form = 0.0;
    double quadrature = 0.0;
};

/// |rho_up,down| of the qubit after the clock interaction, traced over the clock.
inline OffDiagonalDecay clock_offdiagonal_decay(const MeasurementBasis &b, const ClockNumericsConfig &cfg,
                                                const QubitHamiltonian &h) {
    validate(cfg);
    const double k = h.omega0() / cfg.v;
    const double bare = std::abs(b.f.up() * std::conj(b.f.down()));
    OffDiagonalDecay out;
    out.closed_form = bare * std::exp(-0.5 * k * k * cfg.sigma_q * cfg.sigma_q);

    const std::size_t n = cfg.grid_points;
    const double dq = cfg.dq();
    const double half = cfg.grid_halfwidth_sigmas * cfg.sigma_q;
    std::vector<cplx> integrand(n);
    for (std::size_t j = 0; j < n; ++j) {
        double x = -half + static_cast<double>(j) * dq;
        double g = detail::gaussian_profile(x, cfg.sigma_q);
        integrand[j] = g * g * std::polar(1.0, k * x);
    }
    out.quadrature = bare * std::abs(detail::trapezoid(integrand, dq));
    return out;
}

}  // namespace qpe

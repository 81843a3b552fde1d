#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "qpe/common_form.hpp"
#include "qpe/errors.hpp"
#include "qpe/oscillator.hpp"
#include "qpe/parallel.hpp"
#include "qpe/qubit.hpp"
#include "qpe/report.hpp"
#include "qpe/summation.hpp"

namespace qpe {

constexpr Spin to_spin(Outcome o) noexcept {
    return o == Outcome::f ? Spin::up : Spin::down;
}

/// First drive in the interaction picture, calibrated so that
/// Omega0 t sqrt(n0 + m) = theta. It rotates f to |up_z> and f_perp to |down_z>
/// for an infinitely bright field.
inline ConditionedOscillatorState jc_postselected_amplitudes(const QubitState &i, double theta,
                                                             const OscillatorWindow &w, Spin outcome) {
    if (!std::isfinite(theta)) {
        throw InvalidParameter("theta must be finite");
    }
    const double half = 0.5 * theta;
    const double scale = 1.0 / (w.n0 + w.m);
    return ladder_amplitudes(i, w, outcome, [half, scale](std::int64_t k) {
        const double x = half * std::sqrt(static_cast<double>(k) * scale);
        return std::pair{std::cos(x), std::sin(x)};
    });
}

/// Born probability of the sub-shift outcome in the bright-field limit.
inline double jc_subshift_probability(SubShiftKind k, double theta) {
    const double s = std::sin(0.5 * theta);
    const double c = std::cos(0.5 * theta);
    return k.prep == k.found ? c * c : s * s;
}

/// Closed-form oscillator sub-shifts:
///   uu, dd: -x tan x     du: -1 + x cot x     ud: 1 + x cot x     (x = |theta|/2)
/// The removable point theta = 0 of du/ud returns its limit (0 resp. 2) even
/// though the outcome has zero probability there.
inline double jc_subshift_analytic(SubShiftKind k, double theta) {
    if (!std::isfinite(theta)) {
        throw InvalidParameter("theta must be finite");
    }
    theta = std::fabs(theta);
    const double x = 0.5 * theta;
    const double p = jc_subshift_probability(k, theta);
    if (k.prep == k.found) {
        if (p < kOverlapFloor) {
            throw PoleAtTheta("tan pole at a zero-probability outcome");
        }
        return -x * std::tan(x);
    }
    if (p < kOverlapFloor && x > 1e-4) {
        throw PoleAtTheta("cot pole at a zero-probability outcome");
    }
    const double xc = x_cot_x(x);
    return k.prep == Spin::down ? -1.0 + xc : 1.0 + xc;
}

/// Qubit excitation change for each sub-shift kind.
constexpr double jc_qubit_subshift(SubShiftKind k) noexcept {
    if (k.prep == k.found) {
        return 0.0;
    }
    return k.prep == Spin::down ? 1.0 : -1.0;
}

/// P * (oscillator sub-shift) in a form that stays finite at the poles.
inline double jc_weighted_subshift(SubShiftKind k, double theta) {
    const double x = 0.5 * std::fabs(theta);
    const double s = std::sin(x);
    const double c = std::cos(x);
    if (k.prep == k.found) {
        return -x * s * c;
    }
    return k.prep == Spin::down ? -s * s + x * s * c : s * s + x * s * c;
}

struct ConservationResidual {
    double res_up = 0.0;
    double res_down = 0.0;
};

/// Per-preparation balance of oscillator and qubit excitation changes,
///   sum_found P(found|prep) [dn(prep, found) + dq(prep, found)].
/// Closed forms are used where the outcome probability is appreciable and the
/// pole-free products elsewhere.
inline ConservationResidual jc_conservation_residual(double theta) {
    if (!std::isfinite(theta)) {
        throw InvalidParameter("theta must be finite");
    }
    auto term = [theta](SubShiftKind k) {
        const double p = jc_subshift_probability(k, theta);
        const double dn = p > 1e-6 ? p * jc_subshift_analytic(k, theta) : jc_weighted_subshift(k, theta);
        return dn + p * jc_qubit_subshift(k);
    };
    ConservationResidual r;
    CompensatedSum up;
    up += term({Spin::up, Spin::up});
    up += term({Spin::up, Spin::down});
    CompensatedSum down;
    down += term({Spin::down, Spin::up});
    down += term({Spin::down, Spin::down});
    r.res_up = up.value();
    r.res_down = down.value();
    return r;
}

/// First-drive oscillator shift for a general preparation, pole-free
/// (x = theta/2, R = Re(i_up conj(i_down))).
inline double jc_first_segment_analytic(const QubitState &i, double theta, Outcome o) {
    const MeasurementBasis b = basis_from_angle(theta);
    const double p = std::norm(inner(b.state(o), i));
    if (p < kOverlapFloor) {
        throw OrthogonalPostSelection("outcome probability below the overlap floor");
    }
    const double x = 0.5 * theta;
    const double s = std::sin(x);
    const double c = std::cos(x);
    const double pu = std::norm(i.up());
    const double pd = std::norm(i.down());
    const double r = (i.up() * std::conj(i.down())).real();
    CompensatedSum num;
    if (o == Outcome::f) {
        num += pu * (-x * s * c);
        num += pd * (-s * s + x * s * c);
        num += r * (-x * s * s - s * c + x * c * c);
    } else {
        num += pu * (s * s + x * s * c);
        num += pd * (-x * s * c);
        num += -r * (s * c + x * c * c - x * s * s);
    }
    return num.value() / p;
}

/// Windowed sub-shift: mean (n - n0) of the oscillator conditioned on `found`
/// after preparing `prep` and applying the first drive.
inline double jc_subshift_numeric(SubShiftKind k, double theta, const OscillatorWindow &w) {
    const ConditionedOscillatorState st = jc_postselected_amplitudes(prep_state(k.prep), theta, w, k.found);
    if (st.norm_sq() < kOverlapFloor) {
        throw ZeroProbabilityOutcome("sub-shift outcome has probability below 1e-12");
    }
    return st.mean_shift();
}

/// Total photon-number change conditioned on outcome o, including the second drive.
inline ShiftReport jc_full_shift(const QubitState &i, double theta, Outcome o, Method method,
                                 const std::optional<OscillatorWindow> &w = std::nullopt) {
    const MeasurementBasis b = basis_from_angle(theta);
    ShiftReport r;
    r.model = Model::jc;
    r.method = method;
    r.outcome = o;
    r.probability = std::norm(inner(b.state(o), i));
    if (r.probability < kOverlapFloor) {
        throw OrthogonalPostSelection("outcome probability below the overlap floor");
    }
    if (method == Method::analytic) {
        // Both drives combined; the bracket vanishes identically for
        // preparations on the equator through |up_y>.
        const double half_sin = 0.5 * std::sin(theta);
        const double x = 0.5 * theta;
        const double bracket = (std::norm(i.up()) - std::norm(i.down())) * half_sin -
                               (i.up() * std::conj(i.down())).real() * std::cos(theta);
        r.shift = (o == Outcome::f ? half_sin - x : half_sin + x) * bracket / r.probability;
        return r;
    }
    if (!w) {
        throw InvalidParameter("numeric method needs an oscillator window");
    }
    const ConditionedOscillatorState st = jc_postselected_amplitudes(i, theta, *w, to_spin(o));
    const double p = st.norm_sq();
    if (p < kOverlapFloor) {
        throw ZeroProbabilityOutcome("windowed outcome probability below 1e-12");
    }
    r.shift = st.mean_shift() + second_drive_term(b, o);
    r.probability = p;
    r.residuals["probability_vs_born"] = p - std::norm(inner(b.state(o), i));
    return r;
}

struct ConvergenceRow {
    double n0 = 0.0;
    double numeric = 0.0;
    double analytic = 0.0;
    double abs_error = 0.0;
};

/// First-drive shift versus n0 against its bright-field limit.
inline std::vector<ConvergenceRow> jc_convergence_sweep(const QubitState &i, double theta, Outcome o,
                                                        const std::vector<double> &n0_list, int m,
                                                        AmpMode mode = AmpMode::gaussian_continuum,
                                                        double window_sigmas = 10.0) {
    for (double n0 : n0_list) {
        if (!(n0 >= 100.0)) {
            throw InvalidParameter("convergence sweep requires every n0 >= 100");
        }
    }
    const double analytic = jc_first_segment_analytic(i, theta, o);
    std::vector<ConvergenceRow> rows(n0_list.size());
    parallel_for(n0_list.size(), [&](std::size_t k) {
        const OscillatorWindow w = make_window(n0_list[k], m, window_sigmas, mode);
        const ConditionedOscillatorState st = jc_postselected_amplitudes(i, theta, w, to_spin(o));
        if (st.norm_sq() < kOverlapFloor) {
            throw ZeroProbabilityOutcome("windowed outcome probability below 1e-12");
        }
        rows[k].n0 = n0_list[k];
        rows[k].numeric = st.mean_shift();
        rows[k].analytic = analytic;
        rows[k].abs_error = std::fabs(rows[k].numeric - analytic);
    });
    return rows;
}

/// <t| rho_qubit |t> after the first drive, with t = exp(-i theta sigma_y / 2) i.
inline double jc_rotation_fidelity(const QubitState &i, double theta, const OscillatorWindow &w) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const cplx tu = c * i.up() - s * i.down();
    const cplx td = s * i.up() + c * i.down();
    // The amplitude routine rotates by +theta about y; flip the drive sign.
    const ConditionedOscillatorState up = jc_postselected_amplitudes(i, -theta, w, Spin::up);
    const ConditionedOscillatorState down = jc_postselected_amplitudes(i, -theta, w, Spin::down);
    CompensatedSum f;
    for (std::size_t k = 0; k < up.amps.size(); ++k) {
        f += std::norm(std::conj(tu) * up.amps[k] + std::conj(td) * down.amps[k]);
    }
    return std::clamp(f.value(), 0.0, 1.0);
}

/// Purity of the reduced qubit state after a drive of area omega_t on |i>|n>.
inline double jc_fock_purity(const QubitState &i, std::int64_t n, double omega_t) {
    if (n < 0) {
        throw InvalidParameter("Fock index must be non-negative");
    }
    const double x_hi = 0.5 * omega_t * std::sqrt(static_cast<double>(n + 1));
    const double x_lo = 0.5 * omega_t * std::sqrt(static_cast<double>(n));
    // Components: up at n and n-1, down at n+1 and n.
    const cplx up_n = i.up() * std::cos(x_hi);
    const cplx up_nm1 = -i.down() * std::sin(x_lo);
    const cplx dn_np1 = i.up() * std::sin(x_hi);
    const cplx dn_n = i.down() * std::cos(x_lo);
    const double r_uu = std::norm(up_n) + std::norm(up_nm1);
    const double r_dd = std::norm(dn_np1) + std::norm(dn_n);
    const cplx r_ud = up_n * std::conj(dn_n);
    return r_uu * r_uu + r_dd * r_dd + 2.0 * std::norm(r_ud);
}

}  // namespace qpe

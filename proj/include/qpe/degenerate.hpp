#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <utility>

#include "qpe/clock.hpp"
#include "qpe/common_form.hpp"
#include "qpe/errors.hpp"
#include "qpe/jc.hpp"
#include "qpe/oscillator.hpp"
#include "qpe/qubit.hpp"
#include "qpe/report.hpp"

namespace qpe {

/// Drive area for the degenerate ladder coupling: Omega0 t = theta.
struct DegenerateDriveCalibration {
    double theta = 0.0;

    explicit DegenerateDriveCalibration(double t) : theta(t) {
        if (!std::isfinite(t)) {
            throw InvalidParameter("theta must be finite");
        }
    }
};

/// Same ladder as the Jaynes-Cummings drive but with n-independent mixing.
/// The vacuum has no lower rung, so |down, 0> is left untouched.
inline ConditionedOscillatorState deg_postselected_amplitudes(const QubitState &i, double theta,
                                                              const OscillatorWindow &w, Spin outcome) {
    const DegenerateDriveCalibration cal(theta);
    const double c = std::cos(0.5 * cal.theta);
    const double s = std::sin(0.5 * cal.theta);
    return ladder_amplitudes(i, w, outcome, [c, s](std::int64_t k) {
        return k == 0 ? std::pair{1.0, 0.0} : std::pair{c, s};
    });
}

/// Bright-field sub-shift values: 0, -1, +1, 0 for uu, du, ud, dd.
constexpr double deg_subshift_analytic(SubShiftKind k) noexcept {
    return -jc_qubit_subshift(k);
}

inline constexpr SubShiftValues kDegenerateSubShifts{0.0, -1.0, 1.0, 0.0};

inline double deg_subshift_numeric(SubShiftKind k, double theta, const OscillatorWindow &w) {
    const ConditionedOscillatorState st = deg_postselected_amplitudes(prep_state(k.prep), theta, w, k.found);
    if (st.norm_sq() < kOverlapFloor) {
        throw ZeroProbabilityOutcome("sub-shift outcome has probability below 1e-12");
    }
    return st.mean_shift();
}

/// Residuals of the per-preparation balance with the degenerate sub-shifts.
inline ConservationResidual deg_conservation_residual(double theta) {
    auto term = [theta](SubShiftKind k) {
        return jc_subshift_probability(k, theta) * (deg_subshift_analytic(k) + jc_qubit_subshift(k));
    };
    return {term({Spin::up, Spin::up}) + term({Spin::up, Spin::down}),
            term({Spin::down, Spin::up}) + term({Spin::down, Spin::down})};
}

inline ShiftReport deg_full_shift(const QubitState &i, double theta, Outcome o, Method method,
                                  const std::optional<OscillatorWindow> &w = std::nullopt) {
    const MeasurementBasis b = basis_from_angle(theta);
    ShiftReport r;
    r.model = Model::degenerate;
    r.method = method;
    r.outcome = o;
    r.probability = std::norm(inner(b.state(o), i));
    if (r.probability < kOverlapFloor) {
        throw OrthogonalPostSelection("outcome probability below the overlap floor");
    }
    if (method == Method::analytic) {
        r.shift = common_form_shift(i, b, o, kDegenerateSubShifts);
        return r;
    }
    if (!w) {
        throw InvalidParameter("numeric method needs an oscillator window");
    }
    const ConditionedOscillatorState st = deg_postselected_amplitudes(i, theta, *w, to_spin(o));
    const double p = st.norm_sq();
    if (p < kOverlapFloor) {
        throw ZeroProbabilityOutcome("windowed outcome probability below 1e-12");
    }
    r.shift = st.mean_shift() + second_drive_term(b, o);
    r.probability = p;
    r.residuals["probability_vs_born"] = p - std::norm(inner(b.state(o), i));
    return r;
}

/// |clock analytic shift (omega0 units) - common form with degenerate sub-shifts|.
inline double common_form_equivalence_residual(const QubitState &i, double theta, Outcome o) {
    const MeasurementBasis b = basis_from_angle(theta);
    const QubitHamiltonian h(1.0);
    const double clock = clock_shift_analytic(i, b, o, h).shift;
    return std::fabs(clock - common_form_shift(i, b, o, kDegenerateSubShifts));
}

}  // namespace qpe

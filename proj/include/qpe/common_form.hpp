#pragma once

#include <cmath>
#include <complex>

#include "qpe/errors.hpp"
#include "qpe/qubit.hpp"
#include "qpe/summation.hpp"

namespace qpe {

/// Oscillator sub-shifts per (prep, found) pair, in quanta.
struct SubShiftValues {
    double uu = 0.0;
    double du = 0.0;
    double ud = 0.0;
    double dd = 0.0;
};

/// Oscillator cost of the second (reverse) drive: minus the qubit's excitation
/// change from the z outcome back to the basis state.
inline double second_drive_term(const MeasurementBasis &b, Outcome o) {
    return o == Outcome::f ? -(std::norm(b.f.up()) - 1.0) : -std::norm(b.f_perp.up());
}

/// Full conditional shift assembled from sub-shift values:
///   [|A|^2 v_up + |B|^2 v_down + Re(A B*) (v_up + v_down)] / |A + B|^2 + second drive,
/// with A = <s|up><up|i>, B = <s|down><down|i> for outcome state s.
inline double common_form_shift(const QubitState &i, const MeasurementBasis &b, Outcome o, const SubShiftValues &v) {
    const QubitState &s = b.state(o);
    const cplx A = std::conj(s.up()) * i.up();
    const cplx B = std::conj(s.down()) * i.down();
    const double p = std::norm(A + B);
    if (p < kOverlapFloor) {
        throw OrthogonalPostSelection("outcome probability below the overlap floor");
    }
    const double v_up = o == Outcome::f ? v.uu : v.ud;
    const double v_down = o == Outcome::f ? v.du : v.dd;
    CompensatedSum bracket;
    bracket += std::norm(A) * v_up;
    bracket += std::norm(B) * v_down;
    bracket += (A * std::conj(B)).real() * (v_up + v_down);
    return bracket.value() / p + second_drive_term(b, o);
}

}  // namespace qpe

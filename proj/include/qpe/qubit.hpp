#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>

#include "qpe/errors.hpp"

namespace qpe {

using cplx = std::complex<double>;

/// Smallest |<f|i>|^2 for which a weak value / conditional shift is reported.
inline constexpr double kOverlapFloor = 1e-12;

/// Pure qubit state over {|up_z>, |down_z>}. Always normalized; the global
/// phase supplied by the caller is kept.
class QubitState {
   public:
    /// |up_z>.
    QubitState() = default;

    static QubitState from_amplitudes(cplx up, cplx down) {
        if (!std::isfinite(up.real()) || !std::isfinite(up.imag()) || !std::isfinite(down.real()) ||
            !std::isfinite(down.imag())) {
            throw InvalidParameter("qubit amplitudes must be finite");
        }
        double n = std::sqrt(std::norm(up) + std::norm(down));
        if (!(n > 0.0)) {
            throw InvalidParameter("qubit amplitudes must not both vanish");
        }
        return QubitState(up / n, down / n);
    }

    /// cos(polar/2)|up_z> + e^{i azimuth} sin(polar/2)|down_z>.
    static QubitState from_bloch(double polar, double azimuth) {
        if (!std::isfinite(polar) || !std::isfinite(azimuth)) {
            throw InvalidParameter("Bloch angles must be finite");
        }
        return QubitState(cplx(std::cos(polar / 2), 0.0), std::polar(std::sin(polar / 2), azimuth));
    }

    static QubitState up_z() {
        return QubitState(1.0, 0.0);
    }
    static QubitState down_z() {
        return QubitState(0.0, 1.0);
    }
    static QubitState up_x() {
        return QubitState(std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2);
    }
    static QubitState down_x() {
        return QubitState(std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2);
    }
    static QubitState up_y() {
        return QubitState(std::numbers::sqrt2 / 2, cplx(0.0, std::numbers::sqrt2 / 2));
    }

    cplx up() const noexcept {
        return up_;
    }
    cplx down() const noexcept {
        return down_;
    }

   private:
    QubitState(cplx up, cplx down) : up_(up), down_(down) {
    }

    cplx up_{1.0, 0.0};
    cplx down_{0.0, 0.0};
};

/// <a|b>
inline cplx inner(const QubitState &a, const QubitState &b) noexcept {
    return std::conj(a.up()) * b.up() + std::conj(a.down()) * b.down();
}

/// Equality up to a global phase: |<a|b>| = 1 within `tol`.
inline bool same_ray(const QubitState &a, const QubitState &b, double tol = 1e-12) noexcept {
    return std::fabs(std::abs(inner(a, b)) - 1.0) <= tol;
}

enum class Outcome { f, perp };

constexpr std::string_view to_string(Outcome o) {
    return o == Outcome::f ? "f" : "perp";
}

/// Orthonormal measurement basis in the XZ plane of the Bloch sphere.
///   f      =  cos(theta/2)|up_z> + sin(theta/2)|down_z>
///   f_perp = -sin(theta/2)|up_z> + cos(theta/2)|down_z>
/// theta is kept unreduced; the Jaynes-Cummings shifts depend on the full
/// drive angle, not theta mod 2pi.
struct MeasurementBasis {
    double theta = 0.0;
    QubitState f;
    QubitState f_perp = QubitState::down_z();

    const QubitState &state(Outcome o) const noexcept {
        return o == Outcome::f ? f : f_perp;
    }
};

inline MeasurementBasis basis_from_angle(double theta) {
    if (!std::isfinite(theta)) {
        throw InvalidParameter("measurement angle must be finite");
    }
    double c = std::cos(theta / 2);
    double s = std::sin(theta / 2);
    return MeasurementBasis{
        theta,
        QubitState::from_amplitudes(c, s),
        QubitState::from_amplitudes(-s, c),
    };
}

/// H0 = (omega0/2) sigma_z, hbar = 1.
class QubitHamiltonian {
   public:
    explicit QubitHamiltonian(double omega0 = 1.0) : omega0_(omega0) {
        if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
            throw InvalidParameter("omega0 must be positive and finite");
        }
    }
    double omega0() const noexcept {
        return omega0_;
    }

    /// <a|H0|b>
    cplx matrix_element(const QubitState &a, const QubitState &b) const noexcept {
        return 0.5 * omega0_ * (std::conj(a.up()) * b.up() - std::conj(a.down()) * b.down());
    }

   private:
    double omega0_;
};

inline double energy_expectation(const QubitState &s, const QubitHamiltonian &h) noexcept {
    return 0.5 * h.omega0() * (std::norm(s.up()) - std::norm(s.down()));
}

/// <f|H0|i> / <f|i>. Throws OrthogonalPostSelection when |<f|i>|^2 < kOverlapFloor.
inline cplx weak_value(const QubitState &i, const QubitState &f, const QubitHamiltonian &h) {
    cplx overlap = inner(f, i);
    if (std::norm(overlap) < kOverlapFloor) {
        throw OrthogonalPostSelection("|<f|i>|^2 = " + describe(std::norm(overlap)) +
                                      " is below the overlap floor");
    }
    return h.matrix_element(f, i) / overlap;
}

struct OutcomeProbabilities {
    double p_f = 0.0;
    double p_perp = 0.0;

    double of(Outcome o) const noexcept {
        return o == Outcome::f ? p_f : p_perp;
    }
};

inline OutcomeProbabilities outcome_probabilities(const QubitState &i, const MeasurementBasis &b) noexcept {
    return {std::norm(inner(b.f, i)), std::norm(inner(b.f_perp, i))};
}

}  // namespace qpe

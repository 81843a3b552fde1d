#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpe/errors.hpp"
#include "qpe/qubit.hpp"
#include "qpe/summation.hpp"

namespace qpe {

enum class AmpMode { poisson_exact, gaussian_continuum };

constexpr std::string_view to_string(AmpMode m) {
    return m == AmpMode::poisson_exact ? "poisson" : "gaussian";
}

/// Qubit z-basis label, used for oscillator-model preparations and outcomes.
enum class Spin { up, down };

constexpr std::string_view to_string(Spin s) {
    return s == Spin::up ? "up" : "down";
}

/// Fock-index window [n_lo, n_hi] around a coherent state of mean n0, plus the
/// drive calibration offset m.
struct OscillatorWindow {
    double n0 = 1e4;
    int m = 1;
    double window_sigmas = 10.0;
    std::int64_t n_lo = 0;
    std::int64_t n_hi = 0;
    AmpMode amp_mode = AmpMode::poisson_exact;

    std::size_t size() const noexcept {
        return static_cast<std::size_t>(n_hi - n_lo + 1);
    }
};

inline OscillatorWindow make_window(double n0, int m = 1, double window_sigmas = 10.0,
                                    AmpMode mode = AmpMode::poisson_exact) {
    if (!(n0 > 0.0) || !std::isfinite(n0)) {
        throw NonPositiveN0("n0 must be positive and finite");
    }
    if (!std::isfinite(window_sigmas) || window_sigmas < 6.0) {
        throw WindowTooSmall("window half-width " + describe(window_sigmas) + " sqrt(n0) is below 6 sqrt(n0)");
    }
    const double root = std::sqrt(n0);
    if (std::fabs(static_cast<double>(m)) > root / 10.0) {
        throw InvalidParameter("|m| must not exceed sqrt(n0)/10");
    }
    if (n0 + window_sigmas * root > 9.0e15) {
        throw InvalidParameter("n0 too large for an explicit Fock window");
    }
    OscillatorWindow w;
    w.n0 = n0;
    w.m = m;
    w.window_sigmas = window_sigmas;
    w.n_lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(n0 - window_sigmas * root)));
    w.n_hi = static_cast<std::int64_t>(std::ceil(n0 + window_sigmas * root));
    w.amp_mode = mode;
    return w;
}

namespace detail {

/// log(n!) - [(n + 1/2) log n - n + log sqrt(2 pi)]
inline double stirling_error(std::int64_t n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(16, 0.0);
        const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
        double log_fact = 0.0;
        for (int k = 1; k < 16; ++k) {
            double lk = std::log(static_cast<double>(k));
            log_fact += lk;
            t[k] = log_fact + k - half_log_2pi - (0.5 + k) * lk;
        }
        return t;
    }();
    constexpr double s0 = 1.0 / 12, s1 = 1.0 / 360, s2 = 1.0 / 1260, s3 = 1.0 / 1680, s4 = 1.0 / 1188;
    if (n < 16) {
        return table[static_cast<std::size_t>(n)];
    }
    const double r = 1.0 / static_cast<double>(n);
    const double r2 = r * r;
    if (n > 500) return (s0 - s1 * r2) * r;
    if (n > 80) return (s0 - (s1 - s2 * r2) * r2) * r;
    if (n > 35) return (s0 - (s1 - (s2 - s3 * r2) * r2) * r2) * r;
    return (s0 - (s1 - (s2 - (s3 - s4 * r2) * r2) * r2) * r2) * r;
}

/// Deviance term x log(x/np) + np - x, evaluated without cancellation near x = np.
inline double deviance(double x, double np) {
    if (std::fabs(x - np) < 0.1 * (x + np)) {
        const double v = (x - np) / (x + np);
        double s = (x - np) * v;
        double ej = 2.0 * x * v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v * v;
            double s1 = s + ej / (2 * j + 1);
            if (s1 == s) {
                return s1;
            }
            s = s1;
        }
        return s;
    }
    return x * std::log(x / np) + np - x;
}

}  // namespace detail

/// <n|alpha> for real alpha = sqrt(n0): sqrt of the Poisson pmf (saddle-point
/// form, accurate for n up to ~1e15), or the continuum Gaussian surrogate.
inline double coherent_amplitude(std::int64_t n, double n0, AmpMode mode) {
    if (n < 0) {
        return 0.0;
    }
    if (mode == AmpMode::gaussian_continuum) {
        const double d = static_cast<double>(n) - n0;
        return std::pow(2.0 * std::numbers::pi * n0, -0.25) * std::exp(-d * d / (4.0 * n0));
    }
    if (n == 0) {
        return std::exp(-0.5 * n0);
    }
    const double x = static_cast<double>(n);
    return std::exp(-0.5 * (detail::stirling_error(n) + detail::deviance(x, n0))) *
           std::pow(2.0 * std::numbers::pi * x, -0.25);
}

/// Coherent amplitudes over the window, index k <-> n = n_lo + k.
inline std::vector<double> coherent_amplitudes(const OscillatorWindow &w) {
    std::vector<double> a(w.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] = coherent_amplitude(w.n_lo + static_cast<std::int64_t>(k), w.n0, w.amp_mode);
    }
    return a;
}

/// Oscillator amplitudes conditioned on a z-basis qubit outcome (un-normalized).
struct ConditionedOscillatorState {
    OscillatorWindow window;
    std::vector<cplx> amps;
    Spin outcome = Spin::up;

    double norm_sq() const {
        CompensatedSum s;
        for (const cplx &a : amps) {
            s += std::norm(a);
        }
        return s.value();
    }

    /// sum (n - n0) |a_n|^2 / sum |a_n|^2
    double mean_shift() const {
        CompensatedSum num;
        CompensatedSum den;
        for (std::size_t k = 0; k < amps.size(); ++k) {
            double p = std::norm(amps[k]);
            double d = static_cast<double>(window.n_lo + static_cast<std::int64_t>(k)) - window.n0;
            num += d * p;
            den += p;
        }
        return num.value() / den.value();
    }
};

/// Exchange interaction acting on |i>|alpha> within one excitation ladder:
///   <up|U|i>|alpha>   = sum_n [C(n+1) i_up a_n + S(n+1) i_down a_{n+1}] |n>
///   <down|U|i>|alpha> = sum_n [-S(n) i_up a_{n-1} + C(n) i_down a_n] |n>
/// `coeff(k)` returns the pair (C(k), S(k)) coupling |up, k-1> and |down, k>.
/// Amplitudes outside the window are treated as zero.
template <class Coeff>
ConditionedOscillatorState ladder_amplitudes(const QubitState &i, const OscillatorWindow &w, Spin outcome,
                                             Coeff &&coeff) {
    const std::vector<double> a = coherent_amplitudes(w);
    const std::size_t n = a.size();
    ConditionedOscillatorState st;
    st.window = w;
    st.outcome = outcome;
    st.amps.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::int64_t fock = w.n_lo + static_cast<std::int64_t>(k);
        if (outcome == Spin::up) {
            auto [c, s] = coeff(fock + 1);
            const double next = k + 1 < n ? a[k + 1] : 0.0;
            st.amps[k] = c * i.up() * a[k] + s * i.down() * next;
        } else {
            auto [c, s] = coeff(fock);
            const double prev = k > 0 ? a[k - 1] : 0.0;
            st.amps[k] = -s * i.up() * prev + c * i.down() * a[k];
        }
    }
    return st;
}

/// Sub-shift label: qubit prepared in `prep`, first drive, z outcome `found`.
struct SubShiftKind {
    Spin prep = Spin::up;
    Spin found = Spin::up;

    friend bool operator==(const SubShiftKind &, const SubShiftKind &) = default;
};

inline constexpr SubShiftKind kAllSubShiftKinds[4] = {
    {Spin::up, Spin::up},
    {Spin::down, Spin::up},
    {Spin::up, Spin::down},
    {Spin::down, Spin::down},
};

/// "uu", "du", "ud", "dd" (prep then found).
inline std::string kind_label(SubShiftKind k) {
    std::string s;
    s += k.prep == Spin::up ? 'u' : 'd';
    s += k.found == Spin::up ? 'u' : 'd';
    return s;
}

inline QubitState prep_state(Spin s) {
    return s == Spin::up ? QubitState::up_z() : QubitState::down_z();
}

/// Pole-free x cot x; series near 0.
inline double x_cot_x(double x) {
    if (std::fabs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 3.0 - x2 * x2 / 45.0;
    }
    return x / std::tan(x);
}

}  // namespace qpe

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qpe/clock.hpp"
#include "qpe/degenerate.hpp"
#include "qpe/jc.hpp"
#include "qpe/scenarios.hpp"

namespace qpe {

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;
    double limit = 0.0;
};

/// Deterministic sampler for property checks.
class Sampler {
   public:
    explicit Sampler(std::uint64_t seed = 0x5eed) : rng_(seed) {
    }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    QubitState state() {
        const double polar = std::acos(uniform(-1.0, 1.0));
        return QubitState::from_bloch(polar, uniform(0.0, 2.0 * std::numbers::pi));
    }
    double angle() {
        return uniform(-4.0 * std::numbers::pi, 4.0 * std::numbers::pi);
    }
    /// Angle at least `margin` away from every multiple of pi.
    double angle_off_poles(double margin = 1e-3) {
        for (;;) {
            double t = angle();
            double r = std::remainder(t, std::numbers::pi);
            if (std::fabs(r) >= margin) {
                return t;
            }
        }
    }

   private:
    std::mt19937_64 rng_;
};

namespace detail {

class Checker {
   public:
    template <class Fn>
    void max_abs(std::string name, double limit, int samples, Fn &&fn) {
        double worst = 0.0;
        for (int k = 0; k < samples; ++k) {
            worst = std::max(worst, std::fabs(fn(k)));
        }
        results.push_back({std::move(name), worst <= limit, worst, limit});
    }
    void value(std::string name, double got, double limit) {
        results.push_back({std::move(name), std::fabs(got) <= limit, std::fabs(got), limit});
    }
    std::vector<CheckResult> results;
};

}  // namespace detail

inline std::vector<CheckResult> selftest_clock() {
    detail::Checker c;
    Sampler s(101);
    const QubitHamiltonian h(1.0);
    c.max_abs("probability_sum", 1e-12, 1000, [&](int) {
        const OutcomeProbabilities p = outcome_probabilities(s.state(), basis_from_angle(s.angle()));
        return p.p_f + p.p_perp - 1.0;
    });
    c.max_abs("basis_orthonormal", 1e-14, 1000, [&](int) {
        const MeasurementBasis b = basis_from_angle(s.angle());
        return std::abs(inner(b.f, b.f_perp));
    });
    c.max_abs("energy_balance", 1e-12, 1000, [&](int) {
        return clock_energy_balance(s.state(), basis_from_angle(s.angle()), h);
    });
    c.max_abs("weak_value_hermitian", 1e-14, 1000, [&](int) {
        const QubitState f = s.state();
        return std::abs(weak_value(f, f, h) - energy_expectation(f, h));
    });
    const QubitState i = QubitState::up_x();
    const MeasurementBasis dice = basis_from_angle(std::asin(2.0 / 3.0));
    const ClockNumericsConfig cfg = ClockNumericsConfig::from_ratio(0.01, h);
    const ClockWavepacket wf = conditioned_wavepacket(i, dice, Outcome::f, cfg, h);
    const ClockWavepacket wp = conditioned_wavepacket(i, dice, Outcome::perp, cfg, h);
    const double exact = clock_shift_analytic(i, dice, Outcome::f, h).shift;
    c.value("dice_numeric_relative", (clock_shift_numeric(wf, cfg, h).shift - exact) / exact, 1e-2);
    c.value("conditioned_norm_sum", wf.norm_sq + wp.norm_sq - 1.0, 1e-6);
    c.value("dice_norm_vs_born", wf.norm_sq - 5.0 / 6.0, 1e-3);
    const OffDiagonalDecay d = clock_offdiagonal_decay(basis_from_angle(std::numbers::pi / 2),
                                                       ClockNumericsConfig::from_ratio(1.0, h), h);
    c.value("offdiagonal_decay_relative", (d.quadrature - d.closed_form) / d.closed_form, 1e-8);
    return c.results;
}

inline std::vector<CheckResult> selftest_jc() {
    detail::Checker c;
    Sampler s(202);
    c.max_abs("conservation", 1e-12, 1000, [&](int) {
        const ConservationResidual r = jc_conservation_residual(s.angle_off_poles());
        return std::max(std::fabs(r.res_up), std::fabs(r.res_down));
    });
    c.max_abs("evenness", 0.0, 1000, [&](int) {
        const double t = s.angle_off_poles();
        double worst = 0.0;
        for (SubShiftKind k : kAllSubShiftKinds) {
            worst = std::max(worst, std::fabs(jc_subshift_analytic(k, t) - jc_subshift_analytic(k, -t)));
        }
        return worst;
    });
    const OscillatorWindow w = make_window(1e3);
    c.max_abs("unitarity_n0_1e3", 1e-9, 20, [&](int) {
        const QubitState i = s.state();
        const double t = s.angle();
        return jc_postselected_amplitudes(i, t, w, Spin::up).norm_sq() +
               jc_postselected_amplitudes(i, t, w, Spin::down).norm_sq() - 1.0;
    });
    const OscillatorWindow big = make_window(1e6);
    c.max_abs("subshift_vs_numeric_n0_1e6", 5e-3, 4, [&](int k) {
        const SubShiftKind kind = kAllSubShiftKinds[k];
        return jc_subshift_numeric(kind, 1.0, big) - jc_subshift_analytic(kind, 1.0);
    });
    c.max_abs("up_y_zero", 0.0, 200, [&](int k) {
        return jc_full_shift(QubitState::up_y(), s.angle(), k % 2 ? Outcome::f : Outcome::perp, Method::analytic)
            .shift;
    });
    return c.results;
}

inline std::vector<CheckResult> selftest_deg() {
    detail::Checker c;
    Sampler s(303);
    c.max_abs("common_form_equivalence", 1e-12, 1000, [&](int k) {
        return common_form_equivalence_residual(s.state(), s.angle(), k % 2 ? Outcome::f : Outcome::perp);
    });
    c.max_abs("conservation", 0.0, 1000, [&](int) {
        const ConservationResidual r = deg_conservation_residual(s.angle());
        return std::max(std::fabs(r.res_up), std::fabs(r.res_down));
    });
    const OscillatorWindow w = make_window(1e4);
    c.max_abs("subshift_numeric_n0_1e4", 2e-3, 4, [&](int k) {
        const SubShiftKind kind = kAllSubShiftKinds[k];
        return deg_subshift_numeric(kind, std::numbers::pi / 2, w) - deg_subshift_analytic(kind);
    });
    return c.results;
}

inline std::vector<CheckResult> selftest_scenario() {
    detail::Checker c;
    const DiceReport d = dice_scenario();
    c.value("dice_p_f", d.p_f - 5.0 / 6.0, 1e-12);
    c.value("dice_shift_M_f", d.shift_M_f + 1.0 / (3.0 * std::sqrt(5.0)), 1e-12);
    c.value("dice_shift_M_perp", d.shift_M_perp + std::sqrt(5.0) / 3.0, 1e-12);
    c.value("dice_balance", d.balance_residual, 1e-12);
    Sampler s(404);
    c.max_abs("sweep_balance", 1e-10, 5, [&](int) {
        const SweepTable t = sweep_curves(s.state(), -2.0 * std::numbers::pi, 2.0 * std::numbers::pi, 101);
        double worst = 0.0;
        for (const char *col : {"clock_balance_residual", "jc_balance_residual", "deg_minus_clock"}) {
            for (const auto &v : t.column(col).values) {
                if (v) {
                    worst = std::max(worst, std::fabs(*v));
                }
            }
        }
        return worst;
    });
    return c.results;
}

inline std::vector<CheckResult> run_selftest(std::string_view module) {
    if (module == "clock") return selftest_clock();
    if (module == "jc") return selftest_jc();
    if (module == "deg") return selftest_deg();
    if (module == "scenario") return selftest_scenario();
    throw InvalidParameter("no self-test suite named " + std::string(module));
}

}  // namespace qpe

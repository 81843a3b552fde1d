#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpe/clock.hpp"
#include "qpe/degenerate.hpp"
#include "qpe/errors.hpp"
#include "qpe/jc.hpp"
#include "qpe/parallel.hpp"
#include "qpe/qubit.hpp"
#include "qpe/summation.hpp"

namespace qpe {

/// i = (|up_z> + |down_z>)/sqrt(2) measured at theta = arcsin(2/3).
struct DiceReport {
    double theta = 0.0;
    double p_f = 0.0;
    double p_perp = 0.0;
    double qubit_shift_f = 0.0;
    double qubit_shift_perp = 0.0;
    double shift_M_f = 0.0;
    double shift_M_perp = 0.0;
    double ensemble_shift_per_six = 0.0;
    double balance_residual = 0.0;
    bool both_lose_perp = false;
};

inline DiceReport dice_scenario(const QubitHamiltonian &h = QubitHamiltonian(1.0)) {
    const QubitState i = QubitState::up_x();
    DiceReport d;
    d.theta = std::asin(2.0 / 3.0);
    const MeasurementBasis b = basis_from_angle(d.theta);
    const ShiftReport f = clock_shift_analytic(i, b, Outcome::f, h);
    const ShiftReport p = clock_shift_analytic(i, b, Outcome::perp, h);
    d.p_f = f.probability;
    d.p_perp = p.probability;
    d.qubit_shift_f = qubit_energy_change(i, b, Outcome::f, h);
    d.qubit_shift_perp = qubit_energy_change(i, b, Outcome::perp, h);
    d.shift_M_f = f.shift;
    d.shift_M_perp = p.shift;
    d.ensemble_shift_per_six = 6.0 * (d.p_f * d.shift_M_f + d.p_perp * d.shift_M_perp);
    d.balance_residual = clock_energy_balance(i, b, h);
    d.both_lose_perp = d.qubit_shift_perp < 0.0 && d.shift_M_perp < 0.0;
    return d;
}

struct SweepColumn {
    std::string name;
    std::vector<std::optional<double>> values;
};

struct SweepTable {
    std::string scenario;
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<SweepColumn> columns;

    const SweepColumn &column(const std::string &name) const {
        for (const auto &c : columns) {
            if (c.name == name) {
                return c;
            }
        }
        throw InvalidParameter("no column named " + name);
    }
    std::size_t rows() const {
        return columns.empty() ? 0 : columns.front().values.size();
    }
};

/// Inclusive grid of exactly `steps` points.
inline std::vector<double> theta_grid(double start, double end, int steps) {
    if (!std::isfinite(start) || !std::isfinite(end)) {
        throw InvalidRange("theta range must be finite");
    }
    if (steps < 2) {
        throw InvalidRange("steps must be at least 2");
    }
    if (!(end > start)) {
        throw InvalidRange("theta_end must exceed theta_start");
    }
    std::vector<double> g(static_cast<std::size_t>(steps));
    const double span = end - start;
    for (int k = 0; k < steps; ++k) {
        g[static_cast<std::size_t>(k)] = start + span * k / (steps - 1);
    }
    g.back() = end;
    return g;
}

namespace detail {

inline SweepTable make_sweep_table(std::string scenario, const std::vector<std::string> &names, std::size_t n) {
    SweepTable t;
    t.scenario = std::move(scenario);
    for (const auto &name : names) {
        t.columns.push_back({name, std::vector<std::optional<double>>(n)});
    }
    return t;
}

}  // namespace detail

/// Per-theta comparison of the three models for one preparation, in omega0
/// units / quanta. Cells are absent where the outcome probability is below the
/// overlap floor. With a window, windowed Jaynes-Cummings columns are added.
inline SweepTable sweep_curves(const QubitState &i, double theta_start, double theta_end, int steps,
                               const std::optional<OscillatorWindow> &w = std::nullopt) {
    const std::vector<double> grid = theta_grid(theta_start, theta_end, steps);
    std::vector<std::string> names = {
        "theta",          "p_f",          "p_perp",         "clock_shift_f",        "clock_shift_perp",
        "jc_shift_f",     "jc_shift_perp", "deg_shift_f",   "deg_shift_perp",       "neg_qubit_shift_f",
        "neg_qubit_shift_perp", "clock_balance_residual", "jc_balance_residual", "deg_minus_clock"};
    if (w) {
        names.push_back("jc_numeric_f");
        names.push_back("jc_numeric_perp");
    }
    SweepTable t = detail::make_sweep_table("sweep", names, grid.size());
    t.parameters = {{"i_up_re", i.up().real()},     {"i_up_im", i.up().imag()},
                    {"i_down_re", i.down().real()}, {"i_down_im", i.down().imag()},
                    {"theta_start", theta_start},   {"theta_end", theta_end},
                    {"steps", static_cast<double>(steps)}};
    if (w) {
        t.parameters.push_back({"n0", w->n0});
        t.parameters.push_back({"m", static_cast<double>(w->m)});
    }
    const QubitHamiltonian h(1.0);
    parallel_for(grid.size(), [&](std::size_t k) {
        const double theta = grid[k];
        const MeasurementBasis b = basis_from_angle(theta);
        const OutcomeProbabilities p = outcome_probabilities(i, b);
        auto set = [&](std::size_t col, std::optional<double> v) { t.columns[col].values[k] = v; };
        set(0, theta);
        set(1, p.p_f);
        set(2, p.p_perp);
        std::optional<double> clock[2], jc[2], qubit[2];
        double worst_deg = 0.0;
        bool deg_any = false;
        for (int j = 0; j < 2; ++j) {
            const Outcome o = j == 0 ? Outcome::f : Outcome::perp;
            qubit[j] = qubit_energy_change(i, b, o, h);
            set(9 + j, -*qubit[j]);
            if (p.of(o) < kOverlapFloor) {
                continue;
            }
            clock[j] = clock_shift_analytic(i, b, o, h).shift;
            jc[j] = jc_full_shift(i, theta, o, Method::analytic).shift;
            const double deg = deg_full_shift(i, theta, o, Method::analytic).shift;
            worst_deg = std::max(worst_deg, std::fabs(deg - *clock[j]));
            deg_any = true;
            set(3 + j, clock[j]);
            set(5 + j, jc[j]);
            set(7 + j, deg);
            if (w) {
                set(14 + j, jc_full_shift(i, theta, o, Method::numeric, w).shift);
            }
        }
        if (clock[0] && clock[1]) {
            CompensatedSum c;
            c += p.p_f * (*qubit[0] + *clock[0]);
            c += p.p_perp * (*qubit[1] + *clock[1]);
            set(11, c.value());
            CompensatedSum q;
            q += p.p_f * (*qubit[0] + *jc[0]);
            q += p.p_perp * (*qubit[1] + *jc[1]);
            set(12, q.value());
        }
        if (deg_any) {
            set(13, worst_deg);
        }
    });
    return t;
}

/// Ground-state preparation: oscillator sub-shifts for ground (dd) and excited
/// (du) post-selection versus drive angle. Poles are absent cells. With an
/// envelope constant c, +-c|theta| columns are appended.
inline SweepTable stevens_theory_curves(double theta_start, double theta_end, int steps,
                                        std::optional<double> envelope_constant = std::nullopt) {
    const std::vector<double> grid = theta_grid(theta_start, theta_end, steps);
    std::vector<std::string> names = {"theta", "ground_postselect", "excited_postselect", "p_ground", "p_excited"};
    if (envelope_constant) {
        if (!std::isfinite(*envelope_constant)) {
            throw InvalidParameter("envelope constant must be finite");
        }
        names.push_back("envelope_upper");
        names.push_back("envelope_lower");
    }
    SweepTable t = detail::make_sweep_table("stevens", names, grid.size());
    t.parameters = {{"theta_start", theta_start}, {"theta_end", theta_end}, {"steps", static_cast<double>(steps)}};
    if (envelope_constant) {
        t.parameters.push_back({"envelope_constant", *envelope_constant});
    }
    constexpr SubShiftKind ground{Spin::down, Spin::down};
    constexpr SubShiftKind excited{Spin::down, Spin::up};
    parallel_for(grid.size(), [&](std::size_t k) {
        const double theta = grid[k];
        auto value = [theta](SubShiftKind kind) -> std::optional<double> {
            try {
                return jc_subshift_analytic(kind, theta);
            } catch (const PoleAtTheta &) {
                return std::nullopt;
            }
        };
        t.columns[0].values[k] = theta;
        t.columns[1].values[k] = value(ground);
        t.columns[2].values[k] = value(excited);
        t.columns[3].values[k] = jc_subshift_probability(ground, theta);
        t.columns[4].values[k] = jc_subshift_probability(excited, theta);
        if (envelope_constant) {
            t.columns[5].values[k] = *envelope_constant * std::fabs(theta);
            t.columns[6].values[k] = -*envelope_constant * std::fabs(theta);
        }
    });
    return t;
}

}  // namespace qpe

#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpe/clock.hpp"
#include "qpe/degenerate.hpp"
#include "qpe/errors.hpp"
#include "qpe/jc.hpp"
#include "qpe/output.hpp"
#include "qpe/scenarios.hpp"
#include "qpe/selftest.hpp"

namespace qpe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSelftestFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUndefined = 3;
inline constexpr int kExitResolution = 4;

constexpr int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::OrthogonalPostSelection:
        case ErrorKind::ZeroProbabilityOutcome:
        case ErrorKind::PoleAtTheta:
            return kExitUndefined;
        case ErrorKind::GridUnderresolved:
        case ErrorKind::WindowTooSmall:
            return kExitResolution;
        case ErrorKind::InvalidParameter:
        case ErrorKind::InvalidRange:
        case ErrorKind::NonPositiveN0:
            return kExitUsage;
    }
    return kExitUsage;
}

struct Options {
    double i_theta = 0.0;
    double i_phi = 0.0;
    double theta = 0.0;
    std::string outcome;
    double omega0 = 1.0;
    double n0 = 1e4;
    int m = 1;
    double window = 10.0;
    std::string amp_mode = "poisson";
    std::optional<double> sigma_q;
    std::size_t grid_points = 4096;
    double v = 1.0;
    std::string format = "csv";
    int precision = 12;
    std::string out;
    std::string method = "analytic";
    std::string n0_list = "1e4,1e5,1e6,1e7";
    double theta_start = 0.0;
    double theta_end = 2.0 * std::numbers::pi;
    int steps = 101;
    std::optional<double> envelope;
    std::optional<std::int64_t> fock;
    bool selftest = false;
    bool omega0_given = false;

    QubitState initial() const {
        return QubitState::from_bloch(i_theta, i_phi);
    }
    std::vector<Outcome> outcomes() const {
        if (outcome == "f") return {Outcome::f};
        if (outcome == "perp") return {Outcome::perp};
        return {Outcome::f, Outcome::perp};
    }
    AmpMode mode() const {
        return amp_mode == "gaussian" ? AmpMode::gaussian_continuum : AmpMode::poisson_exact;
    }
    OscillatorWindow window_spec() const {
        return make_window(n0, m, window, mode());
    }
    bool numeric() const {
        return method == "numeric";
    }
};

struct Result {
    Table table;
    Meta meta;
    bool failed = false;
};

namespace detail {

inline std::vector<double> parse_list(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) {
                throw InvalidParameter("bad number in list: " + item);
            }
        } catch (const std::logic_error &) {
            throw InvalidParameter("bad number in list: " + item);
        }
    }
    if (out.empty()) {
        throw InvalidParameter("empty list");
    }
    return out;
}

inline std::string outcome_name(Outcome o) {
    return o == Outcome::f ? "f" : "perp";
}

/// Excitation change of the qubit (in quanta) for outcome o.
inline double qubit_quanta(const QubitState &i, const MeasurementBasis &b, Outcome o) {
    return qubit_energy_change(i, b, o, QubitHamiltonian(1.0));
}

inline Table from_sweep(const SweepTable &s) {
    Table t;
    for (const auto &c : s.columns) {
        t.columns.push_back(c.name);
    }
    for (std::size_t r = 0; r < s.rows(); ++r) {
        std::vector<Cell> row;
        for (const auto &c : s.columns) {
            row.push_back(cell(c.values[r]));
        }
        t.add_row(std::move(row));
    }
    return t;
}

inline Table selftest_table(const std::vector<CheckResult> &checks, bool &failed) {
    Table t;
    t.columns = {"check", "passed", "worst", "limit"};
    for (const auto &c : checks) {
        t.add_row({c.name, c.passed, c.worst, c.limit});
        failed = failed || !c.passed;
    }
    return t;
}

using Handler = std::function<Table(const Options &)>;

inline Table clock_shift(const Options &o) {
    const QubitHamiltonian h(o.omega0);
    const QubitState i = o.initial();
    const MeasurementBasis b = basis_from_angle(o.theta);
    Table t;
    t.columns = {"outcome", "probability", "qubit_shift", "shift", "weak_value_re", "weak_value_im"};
    if (o.omega0_given) {
        t.columns.push_back("shift_abs");
    }
    for (Outcome out : o.outcomes()) {
        const ShiftReport r = clock_shift_analytic(i, b, out, h);
        const cplx wv = weak_value(i, b.state(out), h) / o.omega0;
        std::vector<Cell> row = {outcome_name(out), r.probability, qubit_energy_change(i, b, out, h) / o.omega0,
                                 r.shift / o.omega0, wv.real(), wv.imag()};
        if (o.omega0_given) {
            row.push_back(r.shift);
        }
        t.add_row(std::move(row));
    }
    return t;
}

inline ClockNumericsConfig clock_config(const Options &o, const QubitState &i, const MeasurementBasis &b,
                                        const QubitHamiltonian &h) {
    ClockNumericsConfig cfg;
    if (o.sigma_q) {
        cfg.v = o.v;
        cfg.sigma_q = *o.sigma_q;
        cfg.q0 = -2.0 * cfg.grid_halfwidth_sigmas * cfg.sigma_q;
    } else {
        cfg = default_clock_config(i, b, h, 0.01, o.v);
    }
    cfg.grid_points = o.grid_points;
    return cfg;
}

inline Table clock_numeric(const Options &o) {
    const QubitHamiltonian h(o.omega0);
    const QubitState i = o.initial();
    const MeasurementBasis b = basis_from_angle(o.theta);
    const ClockNumericsConfig cfg = clock_config(o, i, b, h);
    Table t;
    t.columns = {"outcome",  "sigma_q",        "grid_points",    "probability_born",
                 "norm_sq",  "shift_numeric",  "shift_analytic", "abs_error"};
    for (Outcome out : o.outcomes()) {
        const ShiftReport a = clock_shift_analytic(i, b, out, h);
        const ClockWavepacket w = conditioned_wavepacket(i, b, out, cfg, h);
        const ShiftReport n = clock_shift_numeric(w, cfg, h);
        t.add_row({outcome_name(out), cfg.sigma_q, static_cast<double>(cfg.grid_points), a.probability, w.norm_sq,
                   n.shift / o.omega0, a.shift / o.omega0, std::fabs(n.shift - a.shift) / o.omega0});
    }
    return t;
}

inline Table clock_balance(const Options &o) {
    const QubitHamiltonian h(o.omega0);
    const QubitState i = o.initial();
    const MeasurementBasis b = basis_from_angle(o.theta);
    const OutcomeProbabilities p = outcome_probabilities(i, b);
    Table t;
    t.columns = {"theta", "p_f", "p_perp", "residual"};
    t.add_row({o.theta, p.p_f, p.p_perp, clock_energy_balance(i, b, h) / o.omega0});
    t.single_record = true;
    return t;
}

inline Table clock_decoherence(const Options &o) {
    const QubitHamiltonian h(o.omega0);
    const MeasurementBasis b = basis_from_angle(o.theta);
    ClockNumericsConfig cfg = ClockNumericsConfig::from_ratio(0.01, h, o.v, o.grid_points);
    if (o.sigma_q) {
        cfg.sigma_q = *o.sigma_q;
        cfg.q0 = -2.0 * cfg.grid_halfwidth_sigmas * cfg.sigma_q;
    }
    const OffDiagonalDecay d = clock_offdiagonal_decay(b, cfg, h);
    Table t;
    t.columns = {"theta", "sigma_q", "closed_form", "quadrature", "abs_difference"};
    t.add_row({o.theta, cfg.sigma_q, d.closed_form, d.quadrature, std::fabs(d.quadrature - d.closed_form)});
    t.single_record = true;
    return t;
}

template <class Analytic, class Numeric>
Table subshift_table(const Options &o, Analytic &&analytic, Numeric &&numeric) {
    Table t;
    t.columns = {"kind", "probability", "analytic", "zero_probability", "qubit_subshift"};
    std::optional<OscillatorWindow> w;
    if (o.numeric()) {
        w = o.window_spec();
        t.columns.push_back("numeric");
    }
    for (SubShiftKind k : kAllSubShiftKinds) {
        const double p = jc_subshift_probability(k, o.theta);
        std::vector<Cell> row = {kind_label(k), p, cell(analytic(k)), p < kOverlapFloor, jc_qubit_subshift(k)};
        if (w) {
            std::optional<double> n;
            try {
                n = numeric(k, *w);
            } catch (const ZeroProbabilityOutcome &) {
            }
            row.push_back(cell(n));
        }
        t.add_row(std::move(row));
    }
    return t;
}

inline Table jc_subshifts(const Options &o) {
    return subshift_table(
        o,
        [&](SubShiftKind k) -> std::optional<double> {
            try {
                return jc_subshift_analytic(k, o.theta);
            } catch (const PoleAtTheta &) {
                return std::nullopt;
            }
        },
        [&](SubShiftKind k, const OscillatorWindow &w) { return jc_subshift_numeric(k, o.theta, w); });
}

inline Table deg_subshifts(const Options &o) {
    return subshift_table(
        o, [](SubShiftKind k) -> std::optional<double> { return deg_subshift_analytic(k); },
        [&](SubShiftKind k, const OscillatorWindow &w) { return deg_subshift_numeric(k, o.theta, w); });
}

template <class Shift>
Table full_shift_table(const Options &o, Shift &&shift) {
    const QubitState i = o.initial();
    const MeasurementBasis b = basis_from_angle(o.theta);
    std::optional<OscillatorWindow> w;
    if (o.numeric()) {
        w = o.window_spec();
    }
    Table t;
    t.columns = {"outcome", "method", "probability", "qubit_shift", "shift"};
    for (Outcome out : o.outcomes()) {
        const ShiftReport r = shift(i, o.theta, out, o.numeric() ? Method::numeric : Method::analytic, w);
        t.add_row({outcome_name(out), std::string(to_string(r.method)), r.probability, qubit_quanta(i, b, out),
                   r.shift});
    }
    return t;
}

inline Table jc_shift(const Options &o) {
    return full_shift_table(o, [](auto &&...a) { return jc_full_shift(a...); });
}

inline Table deg_shift(const Options &o) {
    return full_shift_table(o, [](auto &&...a) { return deg_full_shift(a...); });
}

inline Table jc_converge(const Options &o) {
    const std::vector<double> n0s = parse_list(o.n0_list);
    const Outcome out = o.outcome == "perp" ? Outcome::perp : Outcome::f;
    const auto rows = jc_convergence_sweep(o.initial(), o.theta, out, n0s, o.m, o.mode(), o.window);
    Table t;
    t.columns = {"n0", "numeric", "analytic", "abs_error"};
    for (const auto &r : rows) {
        t.add_row({r.n0, r.numeric, r.analytic, r.abs_error});
    }
    return t;
}

inline Table jc_fidelity(const Options &o) {
    Table t;
    if (o.fock) {
        const double omega_t = std::numbers::pi / (2.0 * std::sqrt(static_cast<double>(*o.fock + 1)));
        t.columns = {"fock_n", "omega_t", "purity"};
        t.add_row({static_cast<double>(*o.fock), omega_t, jc_fock_purity(o.initial(), *o.fock, omega_t)});
    } else {
        t.columns = {"n0", "theta", "fidelity"};
        t.add_row({o.n0, o.theta, jc_rotation_fidelity(o.initial(), o.theta, o.window_spec())});
    }
    t.single_record = true;
    return t;
}

inline Table jc_conserve(const Options &o) {
    const ConservationResidual r = jc_conservation_residual(o.theta);
    Table t;
    t.columns = {"theta", "res_up", "res_down"};
    t.add_row({o.theta, r.res_up, r.res_down});
    t.single_record = true;
    return t;
}

inline Table deg_equiv(const Options &o) {
    const QubitState i = o.initial();
    const MeasurementBasis b = basis_from_angle(o.theta);
    Table t;
    t.columns = {"outcome", "clock_shift", "common_form_shift", "residual"};
    for (Outcome out : o.outcomes()) {
        const double res = common_form_equivalence_residual(i, o.theta, out);
        t.add_row({outcome_name(out), clock_shift_analytic(i, b, out, QubitHamiltonian(1.0)).shift,
                   common_form_shift(i, b, out, kDegenerateSubShifts), res});
    }
    return t;
}

inline Table scenario_dice(const Options &o) {
    const DiceReport d = dice_scenario(QubitHamiltonian(o.omega0));
    const double u = o.omega0;
    Table t;
    t.columns = {"theta",       "p_f",          "p_perp",         "qubit_shift_f",         "qubit_shift_perp",
                 "shift_M_f",   "shift_M_perp", "ensemble_shift_per_six", "balance_residual", "both_lose_perp"};
    std::vector<Cell> row = {d.theta,         d.p_f,
                             d.p_perp,        d.qubit_shift_f / u,
                             d.qubit_shift_perp / u, d.shift_M_f / u,
                             d.shift_M_perp / u,     d.ensemble_shift_per_six / u,
                             d.balance_residual / u, d.both_lose_perp};
    if (o.omega0_given) {
        t.columns.push_back("shift_M_f_abs");
        t.columns.push_back("shift_M_perp_abs");
        row.push_back(d.shift_M_f);
        row.push_back(d.shift_M_perp);
    }
    t.add_row(std::move(row));
    t.single_record = true;
    return t;
}

inline Table scenario_sweep(const Options &o) {
    std::optional<OscillatorWindow> w;
    if (o.numeric()) {
        w = o.window_spec();
    }
    return from_sweep(sweep_curves(o.initial(), o.theta_start, o.theta_end, o.steps, w));
}

inline Table scenario_stevens(const Options &o) {
    return from_sweep(stevens_theory_curves(o.theta_start, o.theta_end, o.steps, o.envelope));
}

struct Command {
    const char *group;
    const char *name;
    const char *help;
    const char *model;
    Handler handler;
};

inline const std::vector<Command> &commands() {
    static const std::vector<Command> list = {
        {"clock", "shift", "analytic conditional clock energy shift", "clock", clock_shift},
        {"clock", "numeric", "grid wavepacket shift vs analytic", "clock", clock_numeric},
        {"clock", "balance", "ensemble energy balance residual", "clock", clock_balance},
        {"clock", "decoherence", "qubit off-diagonal decay from the clock", "clock", clock_decoherence},
        {"jc", "subshifts", "the four oscillator sub-shifts", "jc", jc_subshifts},
        {"jc", "shift", "full conditional photon-number shift", "jc", jc_shift},
        {"jc", "converge", "windowed shift vs n0", "jc", jc_converge},
        {"jc", "fidelity", "rotation fidelity / Fock-input purity", "jc", jc_fidelity},
        {"jc", "conserve", "sub-shift conservation residuals", "jc", jc_conserve},
        {"deg", "subshifts", "degenerate-ladder sub-shifts", "degenerate", deg_subshifts},
        {"deg", "shift", "degenerate-ladder full shift", "degenerate", deg_shift},
        {"deg", "equiv", "clock vs degenerate common-form residual", "degenerate", deg_equiv},
        {"scenario", "dice", "worked dice example", "clock", scenario_dice},
        {"scenario", "sweep", "theta sweep across all models", "all", scenario_sweep},
        {"scenario", "stevens", "ground-preparation theory curves", "jc", scenario_stevens},
    };
    return list;
}

inline std::vector<std::pair<std::string, Cell>> meta_parameters(const Options &o) {
    return {
        {"i_theta", o.i_theta},         {"i_phi", o.i_phi},
        {"theta", o.theta},             {"outcome", o.outcome.empty() ? std::string("both") : o.outcome},
        {"omega0", o.omega0},           {"n0", o.n0},
        {"m", static_cast<double>(o.m)}, {"window", o.window},
        {"amp_mode", o.amp_mode},       {"sigma_q", cell(o.sigma_q)},
        {"grid_points", static_cast<double>(o.grid_points)}, {"method", o.method},
        {"n0_list", o.n0_list},         {"theta_start", o.theta_start},
        {"theta_end", o.theta_end},     {"steps", static_cast<double>(o.steps)},
        {"envelope", cell(o.envelope)}, {"precision", static_cast<double>(o.precision)},
    };
}

}  // namespace detail

/// Entry point. `args` excludes the program name.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Options o;
    CLI::App app{"Post-selected measurement energy shifts: clock, Jaynes-Cummings and degenerate-ladder models"};
    app.name("qpe");
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.allow_config_extras(false);

    app.add_option("--i-theta", o.i_theta, "polar Bloch angle of the pre-selection (rad)");
    app.add_option("--i-phi", o.i_phi, "azimuthal Bloch angle of the pre-selection (rad)");
    app.add_option("--theta", o.theta, "measurement angle (rad)");
    app.add_option("--outcome", o.outcome, "f or perp (default: both)")->check(CLI::IsMember({"f", "perp"}));
    auto *omega = app.add_option("--omega0", o.omega0, "qubit frequency");
    app.add_option("--n0", o.n0, "coherent-state mean photon number");
    app.add_option("--m", o.m, "drive calibration offset");
    app.add_option("--window", o.window, "window half-width in sqrt(n0)");
    app.add_option("--amp-mode", o.amp_mode, "poisson or gaussian")->check(CLI::IsMember({"poisson", "gaussian"}));
    app.add_option("--sigma-q", o.sigma_q, "clock wavepacket width");
    app.add_option("--v", o.v, "clock speed");
    app.add_option("--grid-points", o.grid_points, "clock grid points (power of two)");
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--precision", o.precision, "significant digits (6-17)")->check(CLI::Range(6, 17));
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--method", o.method, "analytic or numeric")->check(CLI::IsMember({"analytic", "numeric"}));
    app.add_option("--n0-list", o.n0_list, "comma-separated n0 values");
    app.add_option("--theta-start", o.theta_start, "sweep start (rad)");
    app.add_option("--theta-end", o.theta_end, "sweep end (rad)");
    app.add_option("--steps", o.steps, "sweep points, endpoints included");
    app.add_option("--envelope", o.envelope, "envelope constant c for +-c|theta| columns");
    app.add_option("--fock", o.fock, "Fock index for the purity illustration");
    app.add_flag("--selftest", o.selftest, "run the invariant suite of the command's module");

    std::map<std::string, CLI::App *> groups;
    std::vector<std::pair<CLI::App *, const detail::Command *>> leaves;
    for (const auto &c : detail::commands()) {
        CLI::App *&g = groups[c.group];
        if (!g) {
            g = app.add_subcommand(c.group, std::string(c.group) + " commands");
            g->require_subcommand(1);
            g->fallthrough();
        }
        CLI::App *leaf = g->add_subcommand(c.name, c.help);
        leaf->fallthrough();
        leaves.emplace_back(leaf, &c);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    o.omega0_given = omega->count() > 0;

    const detail::Command *cmd = nullptr;
    for (auto &[leaf, c] : leaves) {
        if (leaf->parsed()) {
            cmd = c;
        }
    }
    if (!cmd) {
        err << "no command selected\n";
        return kExitUsage;
    }

    try {
        OutputSpec opts;
        opts.format = o.format == "json" ? Format::json : Format::csv;
        opts.precision = o.precision;
        opts.destination = o.out;
        Meta meta;
        meta.model = cmd->model;
        meta.command = std::string(cmd->group) + " " + cmd->name;
        meta.parameters = detail::meta_parameters(o);

        bool failed = false;
        Table table = o.selftest ? detail::selftest_table(run_selftest(cmd->group), failed) : cmd->handler(o);
        if (o.selftest) {
            meta.command += " --selftest";
        }
        std::ostringstream text;
        write_table(text, table, meta, opts);
        if (o.out.empty()) {
            out << text.str();
        } else {
            std::ofstream file(o.out, std::ios::binary);
            if (!file || !(file << text.str())) {
                err << "cannot write " << o.out << '\n';
                return kExitUsage;
            }
        }
        if (failed) {
            err << "self-test failed\n";
            return kExitSelftestFailed;
        }
        return kExitOk;
    } catch (const Error &e) {
        err << e.what() << '\n';
        return exit_code(e.kind());
    }
}

}  // namespace qpe::cli

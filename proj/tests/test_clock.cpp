#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qpe/clock.hpp"
#include "qpe/selftest.hpp"

using namespace qpe;
using std::numbers::pi;

namespace {

const QubitHamiltonian kUnit(1.0);
const double kDiceTheta = std::asin(2.0 / 3.0);
// 40-digit reference values.
const double kDiceShiftF = -0.149071198499985979760611577915418415696;
const double kDiceShiftPerp = -0.7453559924999298988030578895770920784802;
const double kEpsShift = -9.924937185533099773672399105006030025891;
const double kEpsBorn = 0.002506281446690022632760089499396997410936;

double eps_theta(double eps) {
    return -2.0 * std::atan(std::sqrt((1 + eps) / (1 - eps)));
}

/// Literal weak-value route, kept separate from the library's rearranged form.
double shift_via_weak_value(const QubitState &i, const QubitState &f) {
    return weak_value(i, f, kUnit).real() - energy_expectation(f, kUnit);
}

}  // namespace

TEST(ClockAnalytic, DiceValues) {
    MeasurementBasis b = basis_from_angle(kDiceTheta);
    ShiftReport f = clock_shift_analytic(QubitState::up_x(), b, Outcome::f, kUnit);
    ShiftReport p = clock_shift_analytic(QubitState::up_x(), b, Outcome::perp, kUnit);
    EXPECT_NEAR(f.shift, kDiceShiftF, 1e-15);
    EXPECT_NEAR(p.shift, kDiceShiftPerp, 1e-15);
    EXPECT_NEAR(f.probability, 5.0 / 6.0, 1e-15);
    EXPECT_EQ(f.model, Model::clock);
    EXPECT_EQ(f.method, Method::analytic);
    EXPECT_EQ(p.outcome, Outcome::perp);
}

TEST(ClockAnalytic, ScalesWithOmega0) {
    MeasurementBasis b = basis_from_angle(kDiceTheta);
    EXPECT_NEAR(clock_shift_analytic(QubitState::up_x(), b, Outcome::f, QubitHamiltonian(2.5)).shift,
                2.5 * kDiceShiftF, 1e-14);
}

TEST(ClockAnalytic, MatchesWeakValueRoute) {
    Sampler s(11);
    for (int k = 0; k < 1000; ++k) {
        QubitState i = s.state();
        MeasurementBasis b = basis_from_angle(s.angle());
        for (Outcome o : {Outcome::f, Outcome::perp}) {
            if (std::norm(inner(b.state(o), i)) < 1e-6) {
                continue;
            }
            double lib = clock_shift_analytic(i, b, o, kUnit).shift;
            double ref = shift_via_weak_value(i, b.state(o));
            ASSERT_NEAR(lib, ref, 1e-12 * std::max(1.0, std::fabs(ref)));
        }
    }
}

TEST(ClockAnalytic, EnergyBasisMeasurementGivesZero) {
    Sampler s(12);
    for (int k = 0; k < 200; ++k) {
        QubitState i = s.state();
        for (Outcome o : {Outcome::f, Outcome::perp}) {
            if (std::norm(inner(basis_from_angle(0.0).state(o), i)) < 1e-12) {
                continue;
            }
            ASSERT_EQ(clock_shift_analytic(i, basis_from_angle(0.0), o, kUnit).shift, 0.0);
        }
    }
}

TEST(ClockAnalytic, DownPreselectionAtQuarterTurn) {
    EXPECT_NEAR(clock_shift_analytic(QubitState::down_z(), basis_from_angle(pi / 2), Outcome::f, kUnit).shift, -0.5,
                1e-15);
}

TEST(ClockAnalytic, EigenstateShiftOpposesQubitChange) {
    Sampler s(13);
    for (int k = 0; k < 1000; ++k) {
        MeasurementBasis b = basis_from_angle(s.angle());
        for (QubitState i : {QubitState::up_z(), QubitState::down_z()}) {
            for (Outcome o : {Outcome::f, Outcome::perp}) {
                if (std::norm(inner(b.state(o), i)) < 1e-12) {
                    continue;
                }
                double expected = energy_expectation(i, kUnit) - energy_expectation(b.state(o), kUnit);
                ASSERT_NEAR(clock_shift_analytic(i, b, o, kUnit).shift, expected, 1e-15);
            }
        }
    }
}

TEST(ClockAnalytic, UpYPreselectionTransfersNothing) {
    Sampler s(14);
    for (int k = 0; k < 1000; ++k) {
        MeasurementBasis b = basis_from_angle(s.angle());
        for (Outcome o : {Outcome::f, Outcome::perp}) {
            ASSERT_EQ(clock_shift_analytic(QubitState::up_y(), b, o, kUnit).shift, 0.0);
        }
    }
}

TEST(ClockAnalytic, OrthogonalThrows) {
    EXPECT_THROW(clock_shift_analytic(QubitState::up_x(), basis_from_angle(3 * pi / 2), Outcome::f, kUnit),
                 OrthogonalPostSelection);
    EXPECT_THROW(clock_shift_analytic(QubitState::up_z(), basis_from_angle(0.0), Outcome::perp, kUnit),
                 OrthogonalPostSelection);
}

TEST(ClockBalance, DiceAndUpY) {
    EXPECT_LE(std::fabs(clock_energy_balance(QubitState::up_x(), basis_from_angle(kDiceTheta), kUnit)), 1e-12);
    EXPECT_LE(std::fabs(clock_energy_balance(QubitState::up_y(), basis_from_angle(pi / 2), kUnit)), 1e-12);
}

TEST(ClockBalance, RandomInputs) {
    Sampler s(15);
    for (int k = 0; k < 1000; ++k) {
        ASSERT_LE(std::fabs(clock_energy_balance(s.state(), basis_from_angle(s.angle()), kUnit)), 1e-12);
    }
}

TEST(ClockConfig, Validation) {
    ClockNumericsConfig ok = ClockNumericsConfig::from_ratio(0.01, kUnit);
    EXPECT_NO_THROW(validate(ok));
    ClockNumericsConfig c = ok;
    c.grid_points = 1000;
    EXPECT_THROW(validate(c), InvalidParameter);
    c = ok;
    c.grid_points = 128;
    EXPECT_THROW(validate(c), InvalidParameter);
    c = ok;
    c.q0 = -5.0 * c.sigma_q;
    EXPECT_THROW(validate(c), InvalidParameter);
    c = ok;
    c.sigma_q = -1.0;
    EXPECT_THROW(validate(c), InvalidParameter);
    c = ok;
    c.grid_halfwidth_sigmas = 40.0;
    c.q0 = -100.0 * c.sigma_q;
    c.grid_points = 256;
    EXPECT_THROW(validate(c), GridUnderresolved);
}

TEST(ClockConfig, AutoTightensForLargeShifts) {
    const double eps = 0.01;
    MeasurementBasis b = basis_from_angle(eps_theta(eps));
    ClockNumericsConfig c = default_clock_config(QubitState::up_x(), b, kUnit);
    double worst = std::fabs(clock_shift_analytic(QubitState::up_x(), b, Outcome::f, kUnit).shift);
    ASSERT_GT(worst, 10.0);
    EXPECT_NEAR(c.sigma_q, 0.01 / worst, 1e-15);
    ClockNumericsConfig plain = default_clock_config(QubitState::up_x(), basis_from_angle(kDiceTheta), kUnit);
    EXPECT_DOUBLE_EQ(plain.sigma_q, 0.01);
}

TEST(ClockWavepacket, EnergyBasisHasNoPhaseGradient) {
    ClockNumericsConfig c = ClockNumericsConfig::from_ratio(0.01, kUnit);
    ClockWavepacket w = conditioned_wavepacket(QubitState::up_x(), basis_from_angle(0.0), Outcome::f, c, kUnit);
    double peak = 0.0;
    for (const cplx &a : w.amps) {
        peak = std::max(peak, std::abs(a));
    }
    for (std::size_t k = 0; k < w.amps.size(); ++k) {
        ASSERT_LE(std::fabs(w.amps[k].imag()), 1e-15 * peak);
        double x = w.offsets[k];
        double phi = std::pow(2 * pi * c.sigma_q * c.sigma_q, -0.25) * std::exp(-x * x / (4 * c.sigma_q * c.sigma_q));
        ASSERT_NEAR(w.amps[k].real(), phi / std::sqrt(2.0), 1e-13 * peak);
    }
    EXPECT_NEAR(clock_shift_numeric(w, c, kUnit).shift, 0.0, 1e-10);
}

TEST(ClockWavepacket, UnconditionedPacketHasZeroMomentum) {
    // Energy eigenstate preparation measured in the energy basis: the packet is
    // the bare profile.
    ClockNumericsConfig c = ClockNumericsConfig::from_ratio(0.01, kUnit);
    ClockWavepacket w = conditioned_wavepacket(QubitState::up_z(), basis_from_angle(0.0), Outcome::f, c, kUnit);
    EXPECT_NEAR(w.norm_sq, 1.0, 1e-10);
    EXPECT_NEAR(clock_shift_numeric(w, c, kUnit).shift, 0.0, 1e-10);
}

TEST(ClockWavepacket, NormSquaredMatchesTrapezoidIntegral) {
    ClockNumericsConfig c = ClockNumericsConfig::from_ratio(0.01, kUnit);
    ClockWavepacket w = conditioned_wavepacket(QubitState::up_x(), basis_from_angle(kDiceTheta), Outcome::f, c, kUnit);
    double dq = c.dq();
    double sum = 0.0;
    for (std::size_t k = 0; k < w.amps.size(); ++k) {
        double wt = (k == 0 || k + 1 == w.amps.size()) ? 0.5 : 1.0;
        sum += wt * std::norm(w.amps[k]) * dq;
    }
    EXPECT_NEAR(w.norm_sq, sum, 1e-10 * sum);
}

TEST(ClockWavepacket, DiceNormMatchesBornProbability) {
    ClockNumericsConfig c = ClockNumericsConfig::from_ratio(0.01, kUnit);
    MeasurementBasis b = basis_from_angle(kDiceTheta);
    ClockWavepacket f = conditioned_wavepacket(QubitState::up_x(), b, Outcome::f, c, kUnit);
    ClockWavepacket p = conditioned_wavepacket(QubitState::up_x(), b, Outcome::perp, c, kUnit);
    EXPECT_NEAR(f.norm_sq, 5.0 / 6.0, 1e-3);
    EXPECT_NEAR(p.norm_sq, 1.0 / 6.0, 1e-3);
}

TEST(ClockWavepacket, OutcomeNormsSumToOne) {
    Sampler s(16);
    ClockNumericsConfig c = ClockNumericsConfig::from_ratio(0.01, kUnit);
    for (int k = 0; k < 50; ++k) {
        QubitState i = s.state();
        MeasurementBasis b = basis_from_angle(s.angle());
        double total = conditioned_wavepacket(i, b, Outcome::f, c, kUnit).norm_sq +
                       conditioned_wavepacket(i, b, Outcome::perp, c, kUnit).norm_sq;
        ASSERT_NEAR(total, 1.0, 1e-6);
    }
}

TEST(ClockWavepacket, AnomalousNormMatchesBornProbability) {
    ClockNumericsConfig c = ClockNumericsConfig::from_ratio(1e-3, kUnit);
    ClockWavepacket w =
        conditioned_wavepacket(QubitState::up_x(), basis_from_angle(eps_theta(0.1)), Outcome::f, c, kUnit);
    EXPECT_NEAR(w.norm_sq, kEpsBorn, 0.05 * kEpsBorn);
}

TEST(ClockWavepacket, FastPhaseOnCoarseGridIsRejected) {
    // A wide packet in units of v/omega0 winds its phase faster than the grid resolves.
    ClockNumericsConfig c = ClockNumericsConfig::from_ratio(500.0, kUnit, 1.0, 256);
    EXPECT_THROW(conditioned_wavepacket(QubitState::up_x(), basis_from_angle(pi / 2), Outcome::f, c, kUnit),
                 GridUnderresolved);
}

TEST(ClockNumeric, DiceWithinOnePercent) {
    ClockNumericsConfig c = ClockNumericsConfig::from_ratio(0.01, kUnit);
    ClockWavepacket w = conditioned_wavepacket(QubitState::up_x(), basis_from_angle(kDiceTheta), Outcome::f, c, kUnit);
    ShiftReport r = clock_shift_numeric(w, c, kUnit);
    EXPECT_EQ(r.method, Method::numeric);
    EXPECT_NEAR(r.shift, kDiceShiftF, 0.01 * std::fabs(kDiceShiftF));
}

TEST(ClockNumeric, AnomalousWithinTwoPercent) {
    ClockNumericsConfig c = ClockNumericsConfig::from_ratio(1e-3, kUnit);
    MeasurementBasis b = basis_from_angle(eps_theta(0.1));
    EXPECT_NEAR(clock_shift_analytic(QubitState::up_x(), b, Outcome::f, kUnit).shift, kEpsShift, 1e-12);
    ClockWavepacket w = conditioned_wavepacket(QubitState::up_x(), b, Outcome::f, c, kUnit);
    EXPECT_NEAR(clock_shift_numeric(w, c, kUnit).shift, kEpsShift, 0.02 * std::fabs(kEpsShift));
}

TEST(ClockNumeric, ErrorDecreasesAsPacketNarrows) {
    Sampler s(17);
    for (int trial = 0; trial < 5; ++trial) {
        QubitState i = s.state();
        MeasurementBasis b = basis_from_angle(s.angle());
        for (Outcome o : {Outcome::f, Outcome::perp}) {
            if (std::norm(inner(b.state(o), i)) < 0.05) {
                continue;
            }
            double exact = clock_shift_analytic(i, b, o, kUnit).shift;
            double previous = INFINITY;
            // The narrowest packet needs a finer grid to stay above the difference-stencil floor.
            for (double ratio : {0.3, 0.1, 0.03, 0.01, 0.003}) {
                ClockNumericsConfig c = ClockNumericsConfig::from_ratio(ratio, kUnit, 1.0, ratio < 0.01 ? 16384 : 4096);
                double err = std::fabs(clock_shift_numeric(conditioned_wavepacket(i, b, o, c, kUnit), c, kUnit).shift - exact);
                ASSERT_LE(err, previous + 1e-9) << "ratio " << ratio;
                previous = err;
            }
        }
    }
}

TEST(ClockDecoherence, ClosedFormMatchesQuadrature) {
    for (double ratio : {0.01, 0.1, 1.0, 2.0}) {
        for (double theta : {0.3, pi / 2, 2.0}) {
            ClockNumericsConfig c = ClockNumericsConfig::from_ratio(ratio, kUnit);
            OffDiagonalDecay d = clock_offdiagonal_decay(basis_from_angle(theta), c, kUnit);
            ASSERT_NEAR(d.quadrature, d.closed_form, 1e-8 * d.closed_form);
        }
    }
}

TEST(ClockDecoherence, ReferenceValues) {
    OffDiagonalDecay d = clock_offdiagonal_decay(basis_from_angle(pi / 2), ClockNumericsConfig::from_ratio(1.0, kUnit), kUnit);
    EXPECT_NEAR(d.closed_form, 0.303265329856316711801899767495590226721, 1e-15);
    OffDiagonalDecay narrow =
        clock_offdiagonal_decay(basis_from_angle(pi / 2), ClockNumericsConfig::from_ratio(1e-6, kUnit), kUnit);
    EXPECT_NEAR(narrow.closed_form, 0.5, 1e-12);
    OffDiagonalDecay wide =
        clock_offdiagonal_decay(basis_from_angle(pi / 2), ClockNumericsConfig::from_ratio(10.0, kUnit), kUnit);
    EXPECT_LE(wide.closed_form, 1e-21 * 0.5);
}

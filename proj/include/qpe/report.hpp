#pragma once

#include <map>
#include <string>
#include <string_view>

#include "qpe/qubit.hpp"

namespace qpe {

enum class Model { clock, jc, degenerate };
enum class Method { analytic, numeric };

constexpr std::string_view to_string(Model m) {
    switch (m) {
        case Model::clock: return "clock";
        case Model::jc: return "jc";
        case Model::degenerate: return "degenerate";
    }
    return "unknown";
}

constexpr std::string_view to_string(Method m) {
    return m == Method::analytic ? "analytic" : "numeric";
}

/// Conditional apparatus shift for one post-selection outcome.
/// Clock shifts are in units of omega0; oscillator shifts in photon quanta.
struct ShiftReport {
    Model model = Model::clock;
    Method method = Method::analytic;
    Outcome outcome = Outcome::f;
    double shift = 0.0;
    double probability = 0.0;
    std::map<std::string, double> residuals;
};

}  // namespace qpe

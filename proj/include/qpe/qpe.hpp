#pragma once

#include "qpe/clock.hpp"
#include "qpe/common_form.hpp"
#include "qpe/degenerate.hpp"
#include "qpe/errors.hpp"
#include "qpe/jc.hpp"
#include "qpe/oscillator.hpp"
#include "qpe/output.hpp"
#include "qpe/parallel.hpp"
#include "qpe/qubit.hpp"
#include "qpe/report.hpp"
#include "qpe/scenarios.hpp"
#include "qpe/selftest.hpp"
#include "qpe/summation.hpp"
#include "qpe/version.hpp"

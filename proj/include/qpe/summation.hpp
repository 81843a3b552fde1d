#pragma once

#include <cmath>
#include <complex>

namespace qpe {

/// Neumaier's variant of Kahan summation. Error is bounded independently of
/// the number of terms, which matters for the 1e5..1e6 term Fock windows.
class CompensatedSum {
   public:
    void add(double x) noexcept {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum &operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    double value() const noexcept {
        return sum_ + comp_;
    }

   private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedComplexSum {
   public:
    void add(std::complex<double> z) noexcept {
        re_.add(z.real());
        im_.add(z.imag());
    }
    CompensatedComplexSum &operator+=(std::complex<double> z) noexcept {
        add(z);
        return *this;
    }
    std::complex<double> value() const noexcept {
        return {re_.value(), im_.value()};
    }

   private:
    CompensatedSum re_;
    CompensatedSum im_;
};

}  // namespace qpe

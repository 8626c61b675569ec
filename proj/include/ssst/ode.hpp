#pragma once

#include <functional>
#include <vector>

#include "ssst/errors.hpp"

namespace ssst {

// Dormand-Prince 5(4) embedded Runge-Kutta with the standard order-4
// continuous extension, after Hairer & Wanner's DOPRI5. The system size is
// fixed at construction; rhs(r, y, dydr) fills dydr.
class Dopri5 {
  public:
    using Rhs = std::function<void(double, const double*, double*)>;

    struct DenseStep {
        double r0 = 0.0;
        double h = 0.0;
        std::vector<double> c1, c2, c3, c4, c5;

        // Interpolates the solution inside [r0, r0+h].
        void eval(double r, double* y) const;
        double begin() const { return h >= 0.0 ? r0 : r0 + h; }
        double end() const { return h >= 0.0 ? r0 + h : r0; }
    };

    // Called after every accepted step. Return false to stop integration.
    using StepSink = std::function<bool(double r_prev, double r_new, const std::vector<double>& y,
                                        const DenseStep& dense)>;

    Dopri5(int dim, double rtol, double atol);

    // Integrates from (r0, y0) to r_end (either direction). Throws
    // StepFailure if the tolerance cannot be met.
    void integrate(const Rhs& rhs, double r0, std::vector<double> y0, double r_end,
                   const StepSink& sink);

    long long steps_accepted() const { return accepted_; }
    long long steps_rejected() const { return rejected_; }

  private:
    int n_;
    double rtol_, atol_;
    long long accepted_ = 0, rejected_ = 0;
};

}  // namespace ssst

#include "ssst/ode.hpp"

#include <algorithm>
#include <cmath>

namespace ssst {

namespace {

// Dormand-Prince coefficients (DOPRI5).
constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
constexpr double a21 = 0.2;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

void Dopri5::DenseStep::eval(double r, double* y) const {
    const std::size_t n = c1.size();
    double theta = (r - r0) / h;
    double theta1 = 1.0 - theta;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = c1[i] + theta * (c2[i] + theta1 * (c3[i] + theta * (c4[i] + theta1 * c5[i])));
    }
}

Dopri5::Dopri5(int dim, double rtol, double atol) : n_(dim), rtol_(rtol), atol_(atol) {}

void Dopri5::integrate(const Rhs& rhs, double r0, std::vector<double> y, double r_end,
                       const StepSink& sink) {
    if (static_cast<int>(y.size()) != n_) throw Error("ode: state size mismatch");
    if (r_end == r0) return;
    const double dir = r_end > r0 ? 1.0 : -1.0;

    std::vector<double> k1(n_), k2(n_), k3(n_), k4(n_), k5(n_), k6(n_), k7(n_), ytmp(n_),
        ynew(n_);
    double r = r0;
    rhs(r, y.data(), k1.data());

    // initial step size from the scale of the first derivative
    double h = 0.0;
    {
        double dnf = 0.0, dny = 0.0;
        for (int i = 0; i < n_; ++i) {
            double sk = atol_ + rtol_ * std::abs(y[i]);
            dnf += (k1[i] / sk) * (k1[i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
        h = std::min(h, std::abs(r_end - r0));
        h *= dir;
    }

    const double safe = 0.9, fac_min = 0.2, fac_max = 10.0;
    double facold = 1e-4;
    long long nstep = 0;
    const long long max_steps = 20'000'000;

    while (dir * (r_end - r) > 0.0) {
        if (++nstep > max_steps) throw StepFailure("ode: step budget exhausted");
        if (std::abs(h) < 1e-14 * (1.0 + std::abs(r)))
            throw StepFailure("ode: step size underflow at r = " + std::to_string(r));
        if (dir * (r + h - r_end) > 0.0) h = r_end - r;

        for (int i = 0; i < n_; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(r + c2 * h, ytmp.data(), k2.data());
        for (int i = 0; i < n_; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(r + c3 * h, ytmp.data(), k3.data());
        for (int i = 0; i < n_; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(r + c4 * h, ytmp.data(), k4.data());
        for (int i = 0; i < n_; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(r + c5 * h, ytmp.data(), k5.data());
        for (int i = 0; i < n_; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        rhs(r + h, ytmp.data(), k6.data());
        for (int i = 0; i < n_; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                  a76 * k6[i]);
        rhs(r + h, ynew.data(), k7.data());

        double err = 0.0;
        for (int i = 0; i < n_; ++i) {
            double sk = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(ynew[i]));
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
            err += (ei / sk) * (ei / sk);
        }
        err = std::sqrt(err / n_);

        // PI step-size control as in DOPRI5: fac = err^0.2 / facold^0.08 / safe
        double fac = std::pow(err, 0.2) / std::pow(facold, 0.08) / safe;
        fac = std::clamp(fac, 1.0 / fac_max, 1.0 / fac_min);

        if (err <= 1.0) {
            ++accepted_;
            facold = std::max(err, 1e-4);

            DenseStep dense;
            dense.r0 = r;
            dense.h = h;
            dense.c1.resize(n_);
            dense.c2.resize(n_);
            dense.c3.resize(n_);
            dense.c4.resize(n_);
            dense.c5.resize(n_);
            for (int i = 0; i < n_; ++i) {
                double ydiff = ynew[i] - y[i];
                double bspl = h * k1[i] - ydiff;
                dense.c1[i] = y[i];
                dense.c2[i] = ydiff;
                dense.c3[i] = bspl;
                dense.c4[i] = ydiff - h * k7[i] - bspl;
                dense.c5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                   d6 * k6[i] + d7 * k7[i]);
            }

            double r_prev = r;
            r += h;
            std::swap(y, ynew);
            std::swap(k1, k7);  // FSAL

            if (!sink(r_prev, r, y, dense)) return;
            h /= fac;
        } else {
            ++rejected_;
            h /= std::min(1.0 / fac_min, fac);
        }
    }
}

}  // namespace ssst

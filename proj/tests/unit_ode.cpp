#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ssst/ode.hpp"

using namespace ssst;

TEST_CASE("exponential growth to machine-level accuracy") {
    Dopri5 solver(1, 1e-10, 1e-12);
    std::vector<double> y0 = {1.0};
    double last = 0.0;
    solver.integrate([](double, const double* y, double* dy) { dy[0] = y[0]; }, 0.0, y0, 2.0,
                     [&](double, double, const std::vector<double>& y, const Dopri5::DenseStep&) {
                         last = y[0];
                         return true;
                     });
    CHECK(last == doctest::Approx(std::exp(2.0)).epsilon(1e-9));
}

TEST_CASE("dense output interpolates to the method order") {
    // harmonic oscillator; dense values checked mid-step against closed form
    Dopri5 solver(2, 1e-9, 1e-12);
    std::vector<double> y0 = {1.0, 0.0};
    double worst = 0.0;
    solver.integrate(
        [](double, const double* y, double* dy) {
            dy[0] = y[1];
            dy[1] = -y[0];
        },
        0.0, y0, 10.0,
        [&](double r0, double r1, const std::vector<double>&, const Dopri5::DenseStep& d) {
            double buf[2];
            for (double th : {0.1, 0.37, 0.5, 0.77, 0.93}) {
                double r = r0 + (r1 - r0) * th;
                d.eval(r, buf);
                worst = std::max(worst, std::abs(buf[0] - std::cos(r)));
                worst = std::max(worst, std::abs(buf[1] + std::sin(r)));
            }
            return true;
        });
    CHECK(worst <= 1e-8);
}

TEST_CASE("dense output is continuous at step ends") {
    Dopri5 solver(1, 1e-6, 1e-9);
    std::vector<double> y0 = {0.5};
    double prev_end = 0.5;
    solver.integrate(
        [](double r, const double* y, double* dy) { dy[0] = std::sin(r) * y[0]; }, 0.0, y0, 5.0,
        [&](double r0, double r1, const std::vector<double>& y, const Dopri5::DenseStep& d) {
            double at_start, at_end;
            d.eval(r0, &at_start);
            d.eval(r1, &at_end);
            CHECK(at_start == doctest::Approx(prev_end).epsilon(1e-14));
            CHECK(at_end == doctest::Approx(y[0]).epsilon(1e-14));
            prev_end = y[0];
            return true;
        });
}

TEST_CASE("backward integration") {
    Dopri5 solver(1, 1e-10, 1e-12);
    std::vector<double> y0 = {1.0};
    double last = 1.0;
    solver.integrate([](double, const double* y, double* dy) { dy[0] = y[0]; }, 0.0, y0, -1.0,
                     [&](double, double, const std::vector<double>& y, const Dopri5::DenseStep&) {
                         last = y[0];
                         return true;
                     });
    CHECK(last == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("tolerance drives the error") {
    auto run = [](double rtol) {
        Dopri5 solver(2, rtol, rtol * 1e-2);
        std::vector<double> y0 = {1.0, 0.0};
        double last = 1.0;
        solver.integrate(
            [](double, const double* y, double* dy) {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0, y0, 20.0,
            [&](double, double, const std::vector<double>& y, const Dopri5::DenseStep&) {
                last = y[0];
                return true;
            });
        return std::abs(last - std::cos(20.0));
    };
    double loose = run(1e-5);
    double tight = run(1e-10);
    CHECK(tight < loose);
    CHECK(tight <= 1e-8);
}

TEST_CASE("early stop via the sink") {
    Dopri5 solver(1, 1e-9, 1e-12);
    std::vector<double> y0 = {0.0};
    int steps = 0;
    solver.integrate([](double, const double*, double* dy) { dy[0] = 1.0; }, 0.0, y0, 100.0,
                     [&](double, double, const std::vector<double>&, const Dopri5::DenseStep&) {
                         return ++steps < 3;
                     });
    CHECK(steps == 3);
}

TEST_CASE("step failure surfaces as an exception") {
    Dopri5 solver(1, 1e-12, 1e-14);
    std::vector<double> y0 = {1.0};
    // blow-up: y' = y^2 reaches infinity at r = 1
    CHECK_THROWS_AS(
        solver.integrate([](double, const double* y, double* dy) { dy[0] = y[0] * y[0]; }, 0.0,
                         y0, 2.0,
                         [](double, double, const std::vector<double>&, const Dopri5::DenseStep&) {
                             return true;
                         }),
        StepFailure);
}

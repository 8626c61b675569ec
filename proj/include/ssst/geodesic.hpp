#pragma once

#include "ssst/ode.hpp"
#include "ssst/spacetime.hpp"

namespace ssst {

struct TrajectoryPoint {
    double r = 0.0;
    Vec event;
    Vec velocity;
    double g_dot = 0.0;     // g(gamma', gamma') at this point
    double energy = 0.0;    // f^2 dt/dr (static space-times; Killing dt)
};

// Affinely parametrized geodesic with dense output. r = 0 at the initial
// event; the realized span may be shorter than requested when the
// trajectory leaves the chart box (exit parameters are recorded).
struct GeodesicTrajectory {
    const Spacetime* spacetime = nullptr;
    ParamMap params;
    Vec event0, velocity0;
    CausalKind start_kind = CausalKind::Spacelike;
    double g_dot0 = 0.0;

    std::vector<TrajectoryPoint> points;      // ascending in r
    std::vector<Dopri5::DenseStep> dense;     // ascending in r

    bool exited_backward = false, exited_forward = false;
    double exit_backward = 0.0, exit_forward = 0.0;

    double r_min() const { return points.front().r; }
    double r_max() const { return points.back().r; }
    void state_at(double r, Vec& event, Vec& velocity) const;

    // max_k |g(gamma',gamma')_k - g(gamma',gamma')_0|
    double conserved_drift() const;
    // max relative drift of the Killing energy f^2 dt/dr (static only)
    double energy_drift() const;
};

struct Span {
    double lo = 0.0;
    double hi = 0.0;
};

GeodesicTrajectory integrate_geodesic(const Spacetime& st, const Vec& event0,
                                      const Vec& velocity0, Span r_span, const ParamMap& params,
                                      double rtol = 1e-9, double atol = 1e-11);

// Null initial velocity from a spatial direction:
//   w = +- sqrt(g_sp(v,v)/(-g_00)) dt + v.
Vec null_initial(const Spacetime& st, const Vec& event, const Vec& v, bool future,
                 const ParamMap& params);

struct ConjugateScanResult {
    std::vector<double> crossings;              // parameters with det sign change
    std::vector<std::pair<double, double>> determinant;  // (r, det) trace
    std::vector<Vec> frame;                     // initial orthogonal frame used
    int frame_size = 0;
    double frame_drift = 0.0;  // max deviation of the frame Gram matrix
};

// Integrates the Jacobi equation J'' + R(J, gamma')gamma' = 0 for a frame of
// initial conditions J=0, J'=E_i spanning the complement of gamma' (screen
// space for null geodesics) and records zeros of det g(J_j, E_i).
ConjugateScanResult jacobi_scan(const GeodesicTrajectory& traj, double rtol = 1e-9,
                                double atol = 1e-11);

// Integral of Ric(gamma', gamma') dr over the realized span (per-step
// Gauss-Legendre on the dense output).
double ricci_line_integral(const GeodesicTrajectory& traj);

struct DiameterBound {
    double c = 0.0;                 // min over the grid of (lap f)/f
    std::optional<double> bound;    // pi sqrt((n-1)/c) when c > tol
};

DiameterBound diameter_bound(const Spacetime& st, int grid_per_axis, const ParamMap& params,
                             double tol = 1e-9);

}  // namespace ssst

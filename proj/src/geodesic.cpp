#include "ssst/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ssst {

namespace {

double metric_dot(const Mat& g, const Vec& a, const Vec& b) { return a.dot(g * b); }

struct GeodesicRhs {
    const Spacetime* st;
    const ParamMap* params;
    int n;

    void operator()(double, const double* y, double* dy) const {
        Vec x = Eigen::Map<const Eigen::VectorXd>(y, n);
        Vec u = Eigen::Map<const Eigen::VectorXd>(y + n, n);
        auto jets = st->product_chart().metric_jet1(x, *params);
        Tensor3 gamma;
        christoffel_from_jets(jets, n, gamma);
        for (int a = 0; a < n; ++a) {
            dy[a] = u[a];
            double acc = 0.0;
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) acc += gamma(a, b, c) * u[b] * u[c];
            dy[n + a] = -acc;
        }
    }
};

// Bisects the dense step for the last parameter still inside the chart box.
double locate_exit(const ChartManifold& chart, const Dopri5::DenseStep& dense, double r_in,
                   double r_out, int n) {
    std::vector<double> buf(2 * n);
    for (int it = 0; it < 200 && std::abs(r_out - r_in) > 1e-12 * (1.0 + std::abs(r_in)); ++it) {
        double mid = 0.5 * (r_in + r_out);
        dense.eval(mid, buf.data());
        Vec x = Eigen::Map<const Eigen::VectorXd>(buf.data(), n);
        (chart.contains(x) ? r_in : r_out) = mid;
    }
    return r_in;
}

}  // namespace

void GeodesicTrajectory::state_at(double r, Vec& event, Vec& velocity) const {
    const int n = static_cast<int>(event0.size());
    if (dense.empty() || r <= points.front().r || r >= points.back().r) {
        if (std::abs(r) < 1e-300 || dense.empty()) {
            event = event0;
            velocity = velocity0;
            return;
        }
    }
    auto it = std::lower_bound(dense.begin(), dense.end(), r,
                               [](const Dopri5::DenseStep& d, double rr) { return d.end() < rr; });
    if (it == dense.end()) it = dense.end() - 1;
    std::vector<double> buf(2 * n);
    it->eval(r, buf.data());
    event = Eigen::Map<const Eigen::VectorXd>(buf.data(), n);
    velocity = Eigen::Map<const Eigen::VectorXd>(buf.data() + n, n);
}

double GeodesicTrajectory::conserved_drift() const {
    double worst = 0.0;
    for (const auto& p : points) worst = std::max(worst, std::abs(p.g_dot - g_dot0));
    return worst;
}

double GeodesicTrajectory::energy_drift() const {
    if (points.empty()) return 0.0;
    double e0 = points.front().energy;
    for (const auto& p : points)
        if (std::abs(p.r) < 1e-300) e0 = p.energy;
    double worst = 0.0;
    for (const auto& p : points) worst = std::max(worst, std::abs(p.energy - e0));
    return worst / (1.0 + std::abs(e0));
}

GeodesicTrajectory integrate_geodesic(const Spacetime& st, const Vec& event0,
                                      const Vec& velocity0, Span r_span, const ParamMap& params,
                                      double rtol, double atol) {
    const int n = st.dim();
    const ChartManifold& chart = st.product_chart();
    chart.require_inside(event0);
    if (!(r_span.lo <= 0.0 && r_span.hi >= 0.0))
        throw SpecError("geodesic span must contain r = 0");
    if (!std::isfinite(r_span.lo) || !std::isfinite(r_span.hi))
        throw SpecError("geodesic span must be finite");

    GeodesicTrajectory traj;
    traj.spacetime = &st;
    traj.params = params;
    traj.event0 = event0;
    traj.velocity0 = velocity0;

    Mat g0 = chart.metric_value(event0, params);
    traj.g_dot0 = metric_dot(g0, velocity0, velocity0);
    traj.start_kind = causal_classify(st, event0, velocity0, params);

    auto record = [&](double r, const Vec& x, const Vec& u) {
        TrajectoryPoint p;
        p.r = r;
        p.event = x;
        p.velocity = u;
        Mat g = chart.metric_value(x, params);
        p.g_dot = metric_dot(g, u, u);
        if (st.is_static()) {
            double f = st.warp_value(x, params);
            p.energy = f * f * u[0];
        }
        return p;
    };

    std::vector<TrajectoryPoint> fwd, bwd;
    std::vector<Dopri5::DenseStep> dense_fwd, dense_bwd;

    GeodesicRhs rhs{&st, &params, n};
    auto run_leg = [&](double r_end, std::vector<TrajectoryPoint>& pts,
                       std::vector<Dopri5::DenseStep>& dsteps, bool& exited, double& exit_r) {
        if (r_end == 0.0) return;
        std::vector<double> y0(2 * n);
        for (int i = 0; i < n; ++i) {
            y0[i] = event0[i];
            y0[n + i] = velocity0[i];
        }
        Dopri5 solver(2 * n, rtol, atol);
        solver.integrate(
            [&](double r, const double* y, double* dy) { rhs(r, y, dy); }, 0.0, y0, r_end,
            [&](double, double r_new, const std::vector<double>& y,
                const Dopri5::DenseStep& dense) {
                Vec x = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
                Vec u = Eigen::Map<const Eigen::VectorXd>(y.data() + n, n);
                if (!chart.contains(x)) {
                    double r_exit = locate_exit(chart, dense, dense.r0, r_new, n);
                    std::vector<double> buf(2 * n);
                    dense.eval(r_exit, buf.data());
                    Vec xe = Eigen::Map<const Eigen::VectorXd>(buf.data(), n);
                    Vec ue = Eigen::Map<const Eigen::VectorXd>(buf.data() + n, n);
                    pts.push_back(record(r_exit, xe, ue));
                    dsteps.push_back(dense);
                    exited = true;
                    exit_r = r_exit;
                    return false;
                }
                pts.push_back(record(r_new, x, u));
                dsteps.push_back(dense);
                return true;
            });
    };

    run_leg(r_span.hi, fwd, dense_fwd, traj.exited_forward, traj.exit_forward);
    run_leg(r_span.lo, bwd, dense_bwd, traj.exited_backward, traj.exit_backward);

    std::reverse(bwd.begin(), bwd.end());
    std::reverse(dense_bwd.begin(), dense_bwd.end());
    traj.points = std::move(bwd);
    traj.points.push_back(record(0.0, event0, velocity0));
    traj.points.insert(traj.points.end(), fwd.begin(), fwd.end());
    traj.dense = std::move(dense_bwd);
    traj.dense.insert(traj.dense.end(), dense_fwd.begin(), dense_fwd.end());
    return traj;
}

Vec null_initial(const Spacetime& st, const Vec& event, const Vec& v, bool future,
                 const ParamMap& params) {
    const int n = st.dim();
    if (v.size() != n - 1) throw SpecError("spatial direction has wrong dimension");
    Mat g = st.product_chart().metric_value(event, params);
    Mat g_sp = g.block(1, 1, n - 1, n - 1);
    double q = v.dot(g_sp * v);
    if (!(q > 0.0)) throw DomainError("zero spatial direction for a null vector");
    Vec w = Vec::Zero(n);
    w[0] = (future ? 1.0 : -1.0) * std::sqrt(q / -g(0, 0));
    w.tail(n - 1) = v;
    return w;
}

namespace {

// Signature-aware Gram-Schmidt producing a basis of the complement of the
// given directions (the screen space for null tangents).
std::vector<Vec> orthogonal_frame(const Mat& g, const Vec& tangent, CausalKind kind, int n) {
    std::vector<Vec> held;  // directions to project out (not necessarily unit)
    if (kind == CausalKind::Null) {
        Vec T = Vec::Zero(n);
        T[0] = 1.0 / std::sqrt(-g(0, 0));
        // u_hat: spatial projection of the tangent within the T-complement
        Vec u_hat = tangent + metric_dot(g, tangent, T) * T;  // g(T,T) = -1
        held.push_back(T);
        held.push_back(u_hat);
    } else {
        held.push_back(tangent);
    }

    std::vector<Vec> frame;
    const int want = n - static_cast<int>(held.size());
    for (int a = 0; a < n && static_cast<int>(frame.size()) < want; ++a) {
        Vec cand = Vec::Zero(n);
        cand[a] = 1.0;
        for (const Vec& h : held) {
            double hh = metric_dot(g, h, h);
            if (std::abs(hh) < 1e-14) continue;  // null direction: handled via u_hat
            cand -= (metric_dot(g, cand, h) / hh) * h;
        }
        for (const Vec& e : frame) cand -= metric_dot(g, cand, e) / metric_dot(g, e, e) * e;
        double q = metric_dot(g, cand, cand);
        if (std::abs(q) < 1e-10 * (1.0 + cand.squaredNorm())) continue;
        frame.push_back(cand / std::sqrt(std::abs(q)));
    }
    if (static_cast<int>(frame.size()) != want)
        throw Error("could not build an orthogonal frame along the geodesic");
    return frame;
}

}  // namespace

ConjugateScanResult jacobi_scan(const GeodesicTrajectory& traj, double rtol, double atol) {
    const Spacetime& st = *traj.spacetime;
    const ParamMap& params = traj.params;
    const int n = st.dim();
    const ChartManifold& chart = st.product_chart();

    Mat g0 = chart.metric_value(traj.event0, params);
    std::vector<Vec> frame = orthogonal_frame(g0, traj.velocity0, traj.start_kind, n);
    const int m = static_cast<int>(frame.size());

    ConjugateScanResult out;
    out.frame = frame;
    out.frame_size = m;

    // State: [x(n), u(n), E_1..E_m (n each), (J_i, K_i)(2n each)]
    const int dim = 2 * n + m * n + 2 * m * n;
    auto x_of = [&](const double* y) { return Eigen::Map<const Eigen::VectorXd>(y, n); };

    auto rhs = [&](double, const double* y, double* dy) {
        Vec x = x_of(y);
        Vec u = Eigen::Map<const Eigen::VectorXd>(y + n, n);
        auto jets = chart.metric_jet2(x, params);
        CurvatureData c = curvature_from_jets(jets, n, x);
        const Tensor3& G = c.christoffel;
        const Tensor4& R = c.riemann;

        auto gamma_mix = [&](const double* vec, double* dst) {
            // dst^a = -Gamma^a_bc u^b vec^c
            for (int a = 0; a < n; ++a) {
                double acc = 0.0;
                for (int b = 0; b < n; ++b)
                    for (int cc = 0; cc < n; ++cc) acc += G(a, b, cc) * u[b] * vec[cc];
                dst[a] = -acc;
            }
        };

        for (int a = 0; a < n; ++a) dy[a] = u[a];
        gamma_mix(y + n, dy + n);

        int off = 2 * n;
        for (int i = 0; i < m; ++i, off += n) gamma_mix(y + off, dy + off);

        for (int i = 0; i < m; ++i) {
            const double* J = y + off;
            const double* K = y + off + n;
            double* dJ = dy + off;
            double* dK = dy + off + n;
            // dJ = K - Gamma(u, J); dK = -Gamma(u, K) - R(. , u, J, u)
            for (int a = 0; a < n; ++a) {
                double gam = 0.0;
                for (int b = 0; b < n; ++b)
                    for (int cc = 0; cc < n; ++cc) gam += G(a, b, cc) * u[b] * J[cc];
                dJ[a] = K[a] - gam;
            }
            gamma_mix(K, dK);
            for (int a = 0; a < n; ++a) {
                double curv = 0.0;
                for (int b = 0; b < n; ++b)
                    for (int cc = 0; cc < n; ++cc)
                        for (int d = 0; d < n; ++d) curv += R(a, b, cc, d) * u[b] * J[cc] * u[d];
                dK[a] -= curv;
            }
            off += 2 * n;
        }
    };

    auto det_of = [&](const double* y) {
        Vec x = x_of(y);
        Mat g = chart.metric_value(x, params);
        Mat A(m, m);
        for (int j = 0; j < m; ++j) {
            Eigen::Map<const Eigen::VectorXd> J(y + 2 * n + m * n + j * 2 * n, n);
            for (int i = 0; i < m; ++i) {
                Eigen::Map<const Eigen::VectorXd> E(y + 2 * n + i * n, n);
                A(i, j) = J.dot(g * Vec(E));
            }
        }
        return A.determinant();
    };

    auto gram_drift = [&](const double* y) {
        Vec x = x_of(y);
        Mat g = chart.metric_value(x, params);
        double worst = 0.0;
        for (int i = 0; i < m; ++i) {
            Eigen::Map<const Eigen::VectorXd> Ei(y + 2 * n + i * n, n);
            for (int j = 0; j < m; ++j) {
                Eigen::Map<const Eigen::VectorXd> Ej(y + 2 * n + j * n, n);
                double now = Vec(Ei).dot(g * Vec(Ej));
                double want = (i == j) ? metric_dot(g0, frame[i], frame[i]) : 0.0;
                // frame vectors are unit up to sign of g(e,e)
                if (i == j) want = want > 0 ? 1.0 : -1.0;
                worst = std::max(worst, std::abs(now - want));
            }
        }
        return worst;
    };

    auto scan_leg = [&](double r_end) {
        if (r_end == 0.0) return;
        std::vector<double> y0(dim, 0.0);
        for (int a = 0; a < n; ++a) {
            y0[a] = traj.event0[a];
            y0[n + a] = traj.velocity0[a];
        }
        for (int i = 0; i < m; ++i)
            for (int a = 0; a < n; ++a) y0[2 * n + i * n + a] = frame[i][a];
        for (int i = 0; i < m; ++i)
            for (int a = 0; a < n; ++a) y0[2 * n + m * n + i * 2 * n + n + a] = frame[i][a];

        std::vector<std::pair<double, double>> trace;  // (r, det) at step ends
        std::vector<Dopri5::DenseStep> dsteps;

        Dopri5 solver(dim, rtol, atol);
        solver.integrate(rhs, 0.0, y0, r_end,
                         [&](double, double r_new, const std::vector<double>& y,
                             const Dopri5::DenseStep& dense) {
                             trace.emplace_back(r_new, det_of(y.data()));
                             dsteps.push_back(dense);
                             out.frame_drift = std::max(out.frame_drift, gram_drift(y.data()));
                             return chart.contains(x_of(y.data()));
                         });

        if (trace.empty()) return;
        double max_abs_det = 0.0;
        for (const auto& [r, d] : trace) max_abs_det = std::max(max_abs_det, std::abs(d));
        if (max_abs_det == 0.0) return;

        auto det_at = [&](double r) {
            auto it = std::lower_bound(
                dsteps.begin(), dsteps.end(), r,
                [](const Dopri5::DenseStep& d, double rr) { return d.end() < rr; });
            if (it == dsteps.end()) it = dsteps.end() - 1;
            std::vector<double> buf(dim);
            it->eval(r, buf.data());
            return det_of(buf.data());
        };

        // simple zeros: bracketed sign changes, refined by bisection
        for (std::size_t k = 1; k < trace.size(); ++k) {
            auto [r0, d0] = trace[k - 1];
            auto [r1, d1] = trace[k];
            if (d0 == 0.0 || d1 == 0.0 || std::signbit(d0) == std::signbit(d1)) continue;
            double lo = r0, hi = r1, dlo = d0;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                if (std::abs(hi - lo) <= 1e-10 * (1.0 + std::abs(mid))) break;
                double dm = det_at(mid);
                if (dm == 0.0 || std::abs(dm) <= 1e-10 * max_abs_det) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(dm) == std::signbit(dlo)) {
                    lo = mid;
                    dlo = dm;
                } else {
                    hi = mid;
                }
            }
            out.crossings.push_back(0.5 * (lo + hi));
        }

        // even-multiplicity zeros: |det| dips to ~0 without changing sign
        for (std::size_t k = 1; k + 1 < trace.size(); ++k) {
            double dm1 = trace[k - 1].second, d = trace[k].second, dp1 = trace[k + 1].second;
            if (std::signbit(dm1) != std::signbit(d) || std::signbit(d) != std::signbit(dp1))
                continue;  // handled as a sign change
            if (!(std::abs(d) < std::abs(dm1) && std::abs(d) <= std::abs(dp1))) continue;
            // golden-section minimize |det| over [r_{k-1}, r_{k+1}]
            double a = trace[k - 1].first, b = trace[k + 1].first;
            const double gr = 0.6180339887498949;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            double f1 = std::abs(det_at(x1)), f2 = std::abs(det_at(x2));
            for (int it = 0; it < 120 && (b - a) > 1e-10 * (1.0 + std::abs(a)); ++it) {
                if (f1 <= f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - gr * (b - a);
                    f1 = std::abs(det_at(x1));
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + gr * (b - a);
                    f2 = std::abs(det_at(x2));
                }
            }
            double rmin = 0.5 * (a + b);
            if (std::abs(det_at(rmin)) <= 1e-8 * max_abs_det) out.crossings.push_back(rmin);
        }

        for (const auto& [r, d] : trace) out.determinant.emplace_back(r, d);
    };

    scan_leg(traj.r_max());
    scan_leg(traj.r_min());
    std::sort(out.crossings.begin(), out.crossings.end());
    std::sort(out.determinant.begin(), out.determinant.end());
    return out;
}

double ricci_line_integral(const GeodesicTrajectory& traj) {
    const Spacetime& st = *traj.spacetime;
    static const double nodes[] = {-0.8611363115940526, -0.3399810435848563,
                                   0.3399810435848563, 0.8611363115940526};
    static const double weights[] = {0.3478548451374538, 0.6521451548625461,
                                     0.6521451548625461, 0.3478548451374538};
    double total = 0.0;
    const int n = st.dim();
    std::vector<double> buf(2 * n);
    for (const auto& d : traj.dense) {
        double a = d.begin(), b = d.end();
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < 4; ++q) {
            double r = mid + half * nodes[q];
            d.eval(r, buf.data());
            Vec x = Eigen::Map<const Eigen::VectorXd>(buf.data(), n);
            Vec u = Eigen::Map<const Eigen::VectorXd>(buf.data() + n, n);
            LorentzGeometryAt lg = lorentz_geometry_at(st, x, traj.params);
            total += weights[q] * half * u.dot(lg.ricci * u);
        }
    }
    return total;
}

DiameterBound diameter_bound(const Spacetime& st, int grid_per_axis, const ParamMap& params,
                             double tol) {
    if (!st.is_static()) throw WrongKind("the diameter bound applies to static space-times");
    DiameterBound out;
    double c = std::numeric_limits<double>::infinity();
    for (const Vec& x : make_grid(st.base().sampling_box(), grid_per_axis)) {
        auto sc = scalar_calculus_at(st.base(), st.warp_field(), x, params);
        c = std::min(c, sc.laplacian / sc.value);
    }
    out.c = c;
    if (c > tol) out.bound = std::numbers::pi * std::sqrt((st.dim() - 1) / c);
    return out;
}

}  // namespace ssst

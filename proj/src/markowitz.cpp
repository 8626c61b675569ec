#include "ssst/markowitz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ssst/rng.hpp"

namespace ssst {

double poincare_distance(double u0, double u1) {
    if (!(std::abs(u0) < 1.0 && std::abs(u1) < 1.0))
        throw DomainError("poincare_distance: arguments must lie in (-1,1)");
    return 0.5 * std::abs(std::log((1.0 + u1) / (1.0 - u1) * (1.0 - u0) / (1.0 + u0)));
}

const char* range_flag_name(RangeFlag f) {
    switch (f) {
        case RangeFlag::FiniteBoth: return "finite-both";
        case RangeFlag::InfiniteLeft: return "infinite-left";
        case RangeFlag::InfiniteRight: return "infinite-right";
        case RangeFlag::InfiniteBoth: return "infinite-both";
    }
    return "?";
}

const char* segment_quality_name(SegmentQuality q) {
    return q == SegmentQuality::ExactRange ? "exact-range" : "span-limited";
}

void ProjectiveParam::y_at(double r, double out[4]) const {
    if (dense.empty()) {
        out[0] = r - r0;
        out[1] = 1.0;
        out[2] = 1.0;
        out[3] = 0.0;
        return;
    }
    auto it = std::lower_bound(dense.begin(), dense.end(), r,
                               [](const Dopri5::DenseStep& d, double rr) { return d.end() < rr; });
    if (it == dense.end()) it = dense.end() - 1;
    it->eval(r, out);
}

double ProjectiveParam::p_at(double r) const {
    double y[4];
    y_at(r, y);
    if (y[2] == 0.0) throw DomainError("projective parameter pole");
    return y[0] / y[2];
}

double ProjectiveParam::wronsk(double a, double b) const {
    double ya[4], yb[4];
    y_at(a, ya);
    y_at(b, yb);
    return yb[0] * ya[2] - ya[0] * yb[2];
}

std::vector<double> ProjectiveParam::conjugates_of(double a, double lo, double hi) const {
    double ya[4];
    y_at(a, ya);
    auto w_of = [&](double y1, double y2) { return y1 * ya[2] - ya[0] * y2; };

    std::vector<double> zeros;
    double prev_r = 0.0, prev_w = 0.0;
    bool have_prev = false;
    for (const auto& s : ygrid) {
        double r = s[0];
        if (r < lo || r > hi) continue;
        if (std::abs(r - a) < 1e-12 * (1.0 + std::abs(a))) {
            have_prev = false;  // skip the trivial zero at a itself
            continue;
        }
        double w = w_of(s[1], s[2]);
        if (have_prev && w != 0.0 && prev_w != 0.0 &&
            std::signbit(w) != std::signbit(prev_w)) {
            double l = prev_r, h = r, wl = prev_w;
            for (int it = 0; it < 100 && std::abs(h - l) > 1e-12 * (1.0 + std::abs(l)); ++it) {
                double mid = 0.5 * (l + h);
                double wm = wronsk(a, mid);
                if (wm == 0.0) {
                    l = h = mid;
                    break;
                }
                if (std::signbit(wm) == std::signbit(wl)) {
                    l = mid;
                    wl = wm;
                } else {
                    h = mid;
                }
            }
            zeros.push_back(0.5 * (l + h));
        }
        prev_r = r;
        prev_w = w;
        have_prev = true;
    }
    return zeros;
}

double ProjectiveParam::potential(double r) const {
    const Spacetime& st = *traj->spacetime;
    const int n = st.dim();
    Vec x, u;
    traj->state_at(r, x, u);
    // interpolation can land epsilon outside the box; nudge back in
    const auto& dom = st.product_chart().domain();
    for (int i = 0; i < n; ++i) x[i] = std::clamp(x[i], dom[i].lo, dom[i].hi);
    LorentzGeometryAt lg = lorentz_geometry_at(st, x, traj->params);
    return u.dot(lg.ricci * u) / (n - 2);
}

ProjectiveParam projective_parameter(const GeodesicTrajectory& traj, double r0, double rtol,
                                     double atol) {
    const Spacetime& st = *traj.spacetime;
    if (st.dim() < 3)
        throw SpecError("projective parameters need space-time dimension >= 3");
    {
        Vec x, u;
        traj.state_at(r0, x, u);
        Mat g = st.product_chart().metric_value(x, traj.params);
        double q = u.dot(g * u);
        if (std::abs(q) > 1e-10 * u.squaredNorm())
            throw SpecError("projective parameters are defined along null geodesics");
    }

    ProjectiveParam pp;
    pp.traj = &traj;
    pp.r0 = r0;
    pp.r_begin = traj.r_min();
    pp.r_end = traj.r_max();

    auto rhs = [&pp](double r, const double* y, double* dy) {
        double q = pp.potential(r);
        dy[0] = y[1];
        dy[1] = -q * y[0];
        dy[2] = y[3];
        dy[3] = -q * y[2];
    };

    std::vector<std::pair<double, double>> fwd_samples, bwd_samples;
    std::vector<Dopri5::DenseStep> fwd_dense, bwd_dense;
    std::vector<double> poles;

    auto run = [&](double r_target, std::vector<std::pair<double, double>>& samples,
                   std::vector<Dopri5::DenseStep>& dsteps) {
        if (r_target == r0) return;
        std::vector<double> y0 = {0.0, 1.0, 1.0, 0.0};
        double prev_y2 = 1.0;
        double prev_r = r0;
        Dopri5 solver(4, rtol, atol);
        solver.integrate(rhs, r0, y0, r_target,
                         [&](double, double r_new, const std::vector<double>& y,
                             const Dopri5::DenseStep& dense) {
                             if (y[2] != 0.0) samples.emplace_back(r_new, y[0] / y[2]);
                             dsteps.push_back(dense);
                             if (prev_y2 != 0.0 && y[2] != 0.0 &&
                                 std::signbit(prev_y2) != std::signbit(y[2])) {
                                 // bracket the pole of p (zero of y2)
                                 double lo = prev_r, hi = r_new, ylo = prev_y2;
                                 double buf[4];
                                 for (int it = 0; it < 200; ++it) {
                                     double mid = 0.5 * (lo + hi);
                                     dense.eval(mid, buf);
                                     if (std::abs(hi - lo) <= 1e-12 * (1.0 + std::abs(mid)))
                                         break;
                                     if (buf[2] == 0.0) {
                                         lo = hi = mid;
                                         break;
                                     }
                                     if (std::signbit(buf[2]) == std::signbit(ylo)) {
                                         lo = mid;
                                         ylo = buf[2];
                                     } else {
                                         hi = mid;
                                     }
                                 }
                                 poles.push_back(0.5 * (lo + hi));
                             }
                             prev_y2 = y[2];
                             prev_r = r_new;
                             return true;
                         });
    };

    run(pp.r_end, fwd_samples, fwd_dense);
    run(pp.r_begin, bwd_samples, bwd_dense);

    std::reverse(bwd_samples.begin(), bwd_samples.end());
    std::reverse(bwd_dense.begin(), bwd_dense.end());
    pp.samples = std::move(bwd_samples);
    pp.samples.emplace_back(r0, 0.0);
    pp.samples.insert(pp.samples.end(), fwd_samples.begin(), fwd_samples.end());
    pp.dense = std::move(bwd_dense);
    pp.dense.insert(pp.dense.end(), fwd_dense.begin(), fwd_dense.end());
    std::sort(poles.begin(), poles.end());
    pp.poles = std::move(poles);

    // Fine (r, y1, y2) grid for W-zero scans: a few samples per dense step.
    for (const auto& d : pp.dense) {
        double a = d.begin(), b = d.end();
        for (int k = 0; k < 4; ++k) {
            double r = a + (b - a) * k / 4.0;
            double buf[4];
            d.eval(r, buf);
            pp.ygrid.push_back({r, buf[0], buf[2]});
        }
    }
    {
        double buf[4];
        pp.y_at(pp.r_end, buf);
        pp.ygrid.push_back({pp.r_end, buf[0], buf[2]});
    }
    std::sort(pp.ygrid.begin(), pp.ygrid.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });

    // Detected p-range of the branch containing r0: bounded by the nearest
    // poles, otherwise by the span ends.
    const double kHuge = 1e8;
    double left_pole = -std::numeric_limits<double>::infinity();
    double right_pole = std::numeric_limits<double>::infinity();
    for (double rp : pp.poles) {
        if (rp < r0) left_pole = std::max(left_pole, rp);
        if (rp > r0) right_pole = std::min(right_pole, rp);
    }
    bool inf_left, inf_right;
    if (std::isfinite(left_pole)) {
        inf_left = true;
        pp.alpha = -std::numeric_limits<double>::infinity();
    } else {
        pp.alpha = pp.p_at(pp.r_begin);
        inf_left = std::abs(pp.alpha) > kHuge;
        if (inf_left) pp.alpha = -std::numeric_limits<double>::infinity();
    }
    if (std::isfinite(right_pole)) {
        inf_right = true;
        pp.beta = std::numeric_limits<double>::infinity();
    } else {
        pp.beta = pp.p_at(pp.r_end);
        inf_right = std::abs(pp.beta) > kHuge;
        if (inf_right) pp.beta = std::numeric_limits<double>::infinity();
    }
    pp.flag = inf_left ? (inf_right ? RangeFlag::InfiniteBoth : RangeFlag::InfiniteLeft)
                       : (inf_right ? RangeFlag::InfiniteRight : RangeFlag::FiniteBoth);
    return pp;
}

SegmentDistance segment_distance(const ProjectiveParam& pp, double r_a, double r_b) {
    if (r_a > r_b) std::swap(r_a, r_b);
    const double rlo = pp.r_begin, rhi = pp.r_end;
    if (r_a < rlo - 1e-12 * (1.0 + std::abs(rlo)) || r_b > rhi + 1e-12 * (1.0 + std::abs(rhi)))
        throw SpecError("segment endpoints outside the integrated span");

    // Poincare length of [A,B] in the chart covering (c, d):
    //   1/2 |log of the cross-ratio of (c, A, B, d) through W|.
    auto chart_value = [&](double c, double d) {
        double num = pp.wronsk(c, r_b) * pp.wronsk(r_a, d);
        double den = pp.wronsk(c, r_a) * pp.wronsk(r_b, d);
        if (den == 0.0 || num == 0.0 || !std::isfinite(num / den))
            return std::numeric_limits<double>::infinity();
        return 0.5 * std::abs(std::log(std::abs(num / den)));
    };

    SegmentDistance out;
    out.quality =
        pp.flag == RangeFlag::InfiniteBoth ? SegmentQuality::ExactRange : SegmentQuality::SpanLimited;

    // A chart must have a zero-free denominator solution, i.e. its window may
    // not contain a conjugate pair of the y-equation.
    if (!pp.conjugates_of(r_a, r_a, r_b).empty())
        throw SpecError("segment endpoints are conjugate-separated along the y-equation; "
                        "split the chain between them");

    std::vector<double> from_begin = pp.conjugates_of(rlo, rlo, rhi);
    if (from_begin.empty()) {
        // Disconjugate span: the maximal chart is the whole integrated span.
        out.value = chart_value(rlo, rhi);
        return out;
    }

    // Oscillatory span: slide the chart window (c, eta(c)) over [A,B] and
    // take the smallest bound. Every chart value is a valid upper bound.
    double best = std::numeric_limits<double>::infinity();
    const int K = 33;
    for (int k = 0; k < K; ++k) {
        double c = rlo + (r_a - rlo) * k / (K - 1);
        auto zeros = pp.conjugates_of(c, c, rhi);
        double eta = rhi;
        bool admissible = true;
        for (double z : zeros) {
            if (z <= r_b + 1e-14) {
                admissible = false;  // the window closes before reaching B
                break;
            }
            eta = std::min(eta, z);
            break;
        }
        if (!admissible) continue;
        best = std::min(best, chart_value(c, eta));
    }
    if (!std::isfinite(best))
        throw SpecError("no admissible projective chart covers the segment");
    out.value = best;
    return out;
}

double schwarzian_fd(const ProjectiveParam& pp, double r, double window) {
    // Degree-8 polynomial fit of p on Chebyshev nodes in [r-w, r+w],
    // differentiated at the center.
    constexpr int M = 9;
    Eigen::MatrixXd V(M, M);
    Eigen::VectorXd rhs(M);
    for (int k = 0; k < M; ++k) {
        double xi = std::cos(std::numbers::pi * k / (M - 1));  // in [-1, 1]
        double rk = r + window * xi;
        rhs[k] = pp.p_at(rk);
        double pw = 1.0;
        for (int j = 0; j < M; ++j) {
            V(k, j) = pw;
            pw *= xi;
        }
    }
    Eigen::VectorXd c = V.colPivHouseholderQr().solve(rhs);
    double p1 = c[1] / window;
    double p2 = 2.0 * c[2] / (window * window);
    double p3 = 6.0 * c[3] / (window * window * window);
    if (p1 == 0.0) throw DomainError("schwarzian_fd: vanishing p'");
    return 0.5 * p3 / p1 - 0.75 * (p2 / p1) * (p2 / p1);
}

ChainDistance chain_distance(const Spacetime& st, const ChainSpec& chain, const ParamMap& params,
                             double rtol, double atol) {
    if (chain.segments.empty()) throw SpecError("empty chain");
    ChainDistance out;
    Vec expected_next;
    for (std::size_t i = 0; i < chain.segments.size(); ++i) {
        const ChainSegment& seg = chain.segments[i];
        GeodesicTrajectory traj =
            integrate_geodesic(st, seg.event, seg.velocity, seg.span, params, rtol, atol);
        if (i > 0) {
            double scale = 1.0 + expected_next.norm();
            if ((seg.event - expected_next).norm() > 1e-6 * scale)
                throw SpecError("chain segments do not join: event " + std::to_string(i));
        }
        Vec xe, ue;
        traj.state_at(seg.r_to, xe, ue);
        expected_next = xe;
        ProjectiveParam pp = projective_parameter(traj);
        SegmentDistance sd = segment_distance(pp, seg.r_from, seg.r_to);
        out.total += sd.value;
        out.segments.push_back(sd);
    }
    return out;
}

ProbeResult hyperbolicity_probe(const Spacetime& st, int n_geodesics, double span,
                                std::uint64_t seed, const GridSpec& grid, double tol,
                                const ParamMap& params, Exec exec) {
    if (!st.is_static()) throw WrongKind("the hyperbolicity probe requires a static space-time");
    ProbeResult out;
    out.scan = hypothesis_scan(st, grid, tol, params, exec);

    const int s = st.base_dim();
    auto box = st.base().sampling_box();
    double t_ref = st.representative_t();

    out.geodesics.resize(n_geodesics);
    for_each_index(static_cast<std::size_t>(n_geodesics), exec, [&](std::size_t gi) {
        Rng rng(mix_seed(seed, gi));
        ProbeGeodesic pg;
        // Interior event: stay away from the box walls so geodesics have room.
        Vec x(s);
        for (int i = 0; i < s; ++i)
            x[i] = box[i].lo + (box[i].hi - box[i].lo) * (0.2 + 0.6 * rng.uniform01());
        Vec event = st.event(t_ref, x);
        Mat g = st.product_chart().metric_value(event, params);
        Mat g_sp = g.block(1, 1, s, s);
        Eigen::LLT<Mat> llt(g_sp);
        Vec z(s);
        for (int i = 0; i < s; ++i) z[i] = rng.normal();
        if (z.norm() == 0.0) z[0] = 1.0;
        Vec v = llt.matrixU().solve(z);
        v /= std::sqrt(v.dot(g_sp * v));
        Vec w = null_initial(st, event, v, gi % 2 == 0, params);

        pg.event = event;
        pg.velocity = w;
        GeodesicTrajectory traj = integrate_geodesic(st, event, w, {-span, span}, params);
        pg.exited_backward = traj.exited_backward;
        pg.exited_forward = traj.exited_forward;
        double lo = traj.r_min(), hi = traj.r_max();
        if (hi - lo < 1e-6) {
            out.geodesics[gi] = pg;
            return;
        }
        ProjectiveParam pp = projective_parameter(traj);
        pg.usable = true;
        pg.flag = pp.flag;
        pg.alpha = pp.alpha;
        pg.beta = pp.beta;
        pg.poles = static_cast<int>(pp.poles.size());
        pg.mid_segment = segment_distance(pp, 0.5 * lo, 0.5 * hi);

        double max_ric = 0.0;
        for (int k = 0; k <= 16; ++k) {
            double r = lo + (hi - lo) * k / 16.0;
            max_ric = std::max(max_ric, std::abs(pp.potential(r)) * (st.dim() - 2));
        }
        pg.max_abs_ricci = max_ric;

        // Schwarzian self-check at an interior point away from poles.
        double rc = 0.5 * (lo + hi);
        double room = 0.2 * (hi - lo);
        for (double rp : pp.poles) room = std::min(room, 0.45 * std::abs(rp - rc));
        if (room > 1e-6) {
            double q_here = pp.potential(rc);
            double s_fd = schwarzian_fd(pp, rc, room);
            pg.schwarzian_residual = std::abs(s_fd - q_here);
        }
        out.geodesics[gi] = pg;
    });

    for (const auto& pg : out.geodesics) {
        if (!pg.usable) continue;
        if (pg.flag == RangeFlag::FiniteBoth)
            ++out.bounded_ranges;
        else
            ++out.unbounded_ranges;
        if (pg.max_abs_ricci > tol) ++out.generic_count;
    }

    auto fired = [&](const std::string& id) {
        for (const auto& f : out.scan.fired)
            if (f.id == id) return true;
        return false;
    };
    std::ostringstream os;
    if (fired("conformally-hyperbolic-from-ricci-psd-q-pd") ||
        fired("conformally-hyperbolic-from-lstar-nsd-ngc") ||
        fired("conformally-hyperbolic-from-concircular-positive") ||
        fired("conformally-hyperbolic-from-hessian-potential")) {
        os << "hyperbolicity route: sufficient conditions fired on the sampled grid; "
           << out.bounded_ranges << "/" << (out.bounded_ranges + out.unbounded_ranges)
           << " sampled projective ranges are bounded (finite spans can only under-detect).";
        out.conclusions.push_back(os.str());
        os.str("");
    }
    if (fired("trivial-pseudodistance-from-lstar-psd") ||
        fired("trivial-pseudodistance-from-concircular-nonpositive")) {
        os << "triviality route: reverse-curvature conditions fired; " << out.unbounded_ranges
           << "/" << (out.bounded_ranges + out.unbounded_ranges)
           << " sampled projective ranges are unbounded within the span.";
        out.conclusions.push_back(os.str());
        os.str("");
    }
    os << "null generic condition: " << out.generic_count << "/"
       << (out.bounded_ranges + out.unbounded_ranges)
       << " sampled null geodesics have Ric(gamma',gamma') != 0 somewhere "
          "(sampled evidence only; the condition quantifies over all inextendible "
          "null geodesics).";
    out.conclusions.push_back(os.str());
    return out;
}

}  // namespace ssst

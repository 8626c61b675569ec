#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ssst/catalog.hpp"
#include "ssst/markowitz.hpp"

using namespace ssst;

namespace {
Vec pt(std::initializer_list<double> xs) {
    Vec v(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}
}  // namespace

TEST_CASE("poincare distance") {
    CHECK(poincare_distance(0.0, 0.0) == 0.0);
    CHECK(poincare_distance(0.0, 0.5) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(poincare_distance(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(poincare_distance(0.2, -1.5), DomainError);
    // symmetry properties
    for (double a : {-0.7, 0.1, 0.6}) {
        for (double b : {-0.3, 0.4, 0.9}) {
            CHECK(poincare_distance(a, b) == doctest::Approx(poincare_distance(b, a)));
            CHECK(poincare_distance(-a, -b) == doctest::Approx(poincare_distance(a, b)));
        }
    }
}

namespace {
ProjectiveParam minkowski_pp(double span, double box = 30000.0) {
    static std::map<double, Spacetime> cache;
    if (!cache.count(box))
        cache.emplace(box, catalog_spacetime("minkowski", {{"s", 2}, {"L", box}}));
    const Spacetime& st = cache.at(box);
    Vec e0 = st.event(0.0, pt({0.0, 0.0}));
    Vec w = null_initial(st, e0, pt({1.0, 0.0}), true, st.default_params());
    auto traj = integrate_geodesic(st, e0, w, {-span, span}, st.default_params());
    static std::vector<GeodesicTrajectory> keep;
    keep.push_back(std::move(traj));
    return projective_parameter(keep.back());
}
}  // namespace

TEST_CASE("flat case: projective parameter is affine") {
    auto pp = minkowski_pp(50.0);
    CHECK(pp.flag == RangeFlag::FiniteBoth);
    CHECK(pp.poles.empty());
    for (double r : {-30.0, -3.0, 0.7, 20.0})
        CHECK(pp.p_at(r) == doctest::Approx(r).epsilon(1e-12));
    auto sd = segment_distance(pp, 0.0, 1.0);
    // chart (-50, 50): value = rho of the affine images
    double u0 = 0.0, u1 = 1.0 / 50.0;  // approximately
    (void)u0;
    (void)u1;
    double exact = 0.5 * std::log((50.0 + 1.0) * 50.0 / ((50.0 - 1.0) * 50.0));
    CHECK(sd.value == doctest::Approx(exact).epsilon(1e-9));
    CHECK(sd.quality == SegmentQuality::SpanLimited);
}

TEST_CASE("flat case: distance decreases with span and reaches triviality scale") {
    double prev = std::numeric_limits<double>::infinity();
    for (double span : {10.0, 100.0, 1000.0, 10000.0}) {
        auto pp = minkowski_pp(span);
        double v = segment_distance(pp, 0.0, 1.0).value;
        CHECK(v <= prev + 1e-12);
        prev = v;
        if (span >= 10000.0) CHECK(v <= 1e-3);
    }
}

TEST_CASE("constant positive potential: tan projective parameter") {
    auto st = catalog_spacetime("static-over-sphere", {});
    ParamMap params = st.default_params();
    Vec e0 = st.event(0.0, pt({std::numbers::pi / 2, 0.2}));
    Vec w = null_initial(st, e0, pt({0.0, 1.0}), true, params);

    SUBCASE("within one branch: closed-form cross-ratio") {
        auto traj = integrate_geodesic(st, e0, w, {-1.2, 1.2}, params);
        auto pp = projective_parameter(traj);
        CHECK(pp.poles.empty());
        CHECK(pp.flag == RangeFlag::FiniteBoth);
        // potential q = Ric(w,w)/(n-2) = 1: p = tan(r)
        for (double r : {-0.9, -0.3, 0.5, 1.0})
            CHECK(pp.p_at(r) == doctest::Approx(std::tan(r)).epsilon(1e-9));
        double A = -0.5, B = 0.8, lo = traj.r_min(), hi = traj.r_max();
        auto sd = segment_distance(pp, A, B);
        double cr = (std::sin(B - lo) * std::sin(hi - A)) /
                    (std::sin(A - lo) * std::sin(hi - B));
        CHECK(sd.value == doctest::Approx(0.5 * std::log(std::abs(cr))).epsilon(1e-8));
    }
    SUBCASE("span across the poles: range covers all of R, distance collapses") {
        auto traj = integrate_geodesic(st, e0, w, {-6.0, 6.0}, params);
        auto pp = projective_parameter(traj);
        REQUIRE(pp.poles.size() >= 2);
        // poles of y2 = cos at +-pi/2 (then every pi)
        double closest = 1e9;
        for (double rp : pp.poles) closest = std::min(closest, std::abs(rp - std::numbers::pi / 2));
        CHECK(closest <= 1e-9);
        CHECK(pp.flag == RangeFlag::InfiniteBoth);
        auto sd = segment_distance(pp, -0.5, 0.8);
        CHECK(sd.value <= 1e-6);  // triviality mechanism
        CHECK(sd.quality == SegmentQuality::ExactRange);
    }
}

TEST_CASE("schwarzian self-check fixes the reduction") {
    SUBCASE("flat: schwarzian vanishes") {
        auto pp = minkowski_pp(50.0);
        CHECK(std::abs(schwarzian_fd(pp, 3.0, 2.0)) <= 1e-10);
    }
    SUBCASE("constant potential: half-classical schwarzian equals q") {
        auto st = catalog_spacetime("static-over-sphere", {});
        ParamMap params = st.default_params();
        Vec e0 = st.event(0.0, pt({std::numbers::pi / 2, 0.2}));
        Vec w = null_initial(st, e0, pt({0.0, 1.0}), true, params);
        auto traj = integrate_geodesic(st, e0, w, {-1.3, 1.3}, params);
        auto pp = projective_parameter(traj);
        for (double r : {-0.4, 0.0, 0.3}) {
            double q = pp.potential(r);
            CHECK(q == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(schwarzian_fd(pp, r, 0.25) == doctest::Approx(q).epsilon(1e-5));
        }
    }
}

TEST_CASE("segment distance is invariant under a change of fundamental pair") {
    auto st = catalog_spacetime("static-over-sphere", {});
    ParamMap params = st.default_params();
    Vec e0 = st.event(0.0, pt({std::numbers::pi / 2, 0.2}));
    Vec w = null_initial(st, e0, pt({0.0, 1.0}), true, params);
    auto traj = integrate_geodesic(st, e0, w, {-1.2, 1.2}, params);

    // bases normalized at different r0 differ by an invertible linear map
    auto pp0 = projective_parameter(traj, 0.0);
    auto pp1 = projective_parameter(traj, 0.4);
    double v0 = segment_distance(pp0, -0.5, 0.8).value;
    double v1 = segment_distance(pp1, -0.5, 0.8).value;
    CHECK(v0 == doctest::Approx(v1).epsilon(1e-8));

    // exact algebraic invariance of the W cross-ratio under (y1,y2) -> M(y1,y2)
    auto W = [&](double a, double b, double m11, double m12, double m21, double m22) {
        double ya[4], yb[4];
        pp0.y_at(a, ya);
        pp0.y_at(b, yb);
        double y1a = m11 * ya[0] + m12 * ya[2], y2a = m21 * ya[0] + m22 * ya[2];
        double y1b = m11 * yb[0] + m12 * yb[2], y2b = m21 * yb[0] + m22 * yb[2];
        return y1b * y2a - y1a * y2b;
    };
    double c = -1.1, d = 1.15, A = -0.5, B = 0.8;
    auto cr = [&](double m11, double m12, double m21, double m22) {
        return (W(c, B, m11, m12, m21, m22) * W(A, d, m11, m12, m21, m22)) /
               (W(c, A, m11, m12, m21, m22) * W(B, d, m11, m12, m21, m22));
    };
    double base = cr(1, 0, 0, 1);
    CHECK(cr(2.0, 0.3, -1.0, 0.7) == doctest::Approx(base).epsilon(1e-12));
    CHECK(cr(0.0, 1.0, -1.0, 0.0) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("segment distance symmetry and span monotonicity") {
    auto st = catalog_spacetime("paraboloid-static", {});
    ParamMap params = st.default_params();
    Vec e0 = st.event(0.0, pt({0.0, 0.0}));
    Vec w = null_initial(st, e0, pt({0.6, 0.8}), true, params);
    auto t1 = integrate_geodesic(st, e0, w, {-0.4, 0.4}, params);
    auto t2 = integrate_geodesic(st, e0, w, {-2.0, 2.0}, params);  // exits the ball
    auto pp1 = projective_parameter(t1);
    auto pp2 = projective_parameter(t2);
    double a = -0.2, b = 0.3;
    CHECK(segment_distance(pp1, a, b).value ==
          doctest::Approx(segment_distance(pp1, b, a).value).epsilon(1e-15));
    CHECK(segment_distance(pp2, a, b).value <= segment_distance(pp1, a, b).value + 1e-12);
}

TEST_CASE("chain distance: single segment and a two-hop split") {
    auto st = catalog_spacetime("paraboloid-static", {});
    ParamMap params = st.default_params();
    Vec e0 = st.event(0.0, pt({0.0, 0.0}));
    Vec w = null_initial(st, e0, pt({0.6, 0.8}), true, params);
    auto traj = integrate_geodesic(st, e0, w, {-0.5, 0.5}, params);

    ChainSpec single;
    single.segments.push_back({e0, w, {-0.5, 0.5}, -0.2, 0.4});
    auto cd = chain_distance(st, single, params);
    auto pp = projective_parameter(traj);
    CHECK(cd.total == doctest::Approx(segment_distance(pp, -0.2, 0.4).value).epsilon(1e-10));

    Vec em, um;
    traj.state_at(0.1, em, um);
    ChainSpec two;
    two.segments.push_back({e0, w, {-0.5, 0.5}, -0.2, 0.1});
    two.segments.push_back({em, um, {-0.5, 0.4}, 0.0, 0.3});
    auto cd2 = chain_distance(st, two, params);
    CHECK(cd2.total >= 0.0);
    CHECK(cd2.segments.size() == 2);

    // mismatching chain events are rejected
    ChainSpec bad;
    bad.segments.push_back({e0, w, {-0.5, 0.5}, -0.2, 0.1});
    Vec off = em;
    off[1] += 0.1;
    bad.segments.push_back({off, um, {-0.5, 0.4}, 0.0, 0.3});
    CHECK_THROWS_AS(chain_distance(st, bad, params), SpecError);
}

TEST_CASE("einstein-de sitter closed form (moderate spans)") {
    auto st = catalog_spacetime("einstein-de-sitter", {});
    ParamMap params = st.default_params();
    Vec e0 = pt({1.0, 0.0, 0.0, 0.0});
    Vec w = null_initial(st, e0, pt({1.0, 0.0, 0.0}), true, params);
    // forward to t ~ 1e6 and backward into the big-bang exit
    double r_fwd = 0.6 * std::pow(1e6, 5.0 / 3.0);
    auto traj = integrate_geodesic(st, e0, w, {-2.0, r_fwd}, params);
    CHECK(traj.exited_backward);  // hits the t floor of the chart
    auto pp = projective_parameter(traj);
    // r(t) = (3/5)(t^(5/3) - 1); events at t = 1 and t = 8
    double rB = 0.6 * (std::pow(8.0, 5.0 / 3.0) - 1.0);
    auto sd = segment_distance(pp, 0.0, rB);
    CHECK(sd.value == doctest::Approx(0.5 * std::log(2.0)).epsilon(0.05));
}

TEST_CASE("hyperbolicity probe: routes and determinism") {
    SUBCASE("paraboloid fires the hyperbolic route") {
        auto st = catalog_spacetime("paraboloid-static", {});
        auto probe =
            hyperbolicity_probe(st, 6, 3.0, 99, GridSpec{3}, 1e-9, st.default_params());
        bool has_hyp = false;
        for (const auto& c : probe.conclusions)
            if (c.find("hyperbolicity route") != std::string::npos) has_hyp = true;
        CHECK(has_hyp);
        int usable = 0;
        for (const auto& g : probe.geodesics)
            if (g.usable) {
                ++usable;
                CHECK(g.schwarzian_residual <= 1e-5);
                CHECK(g.max_abs_ricci > 1e-9);  // null generic on samples
            }
        CHECK(usable >= 4);
        CHECK(probe.generic_count == usable);

        auto probe2 =
            hyperbolicity_probe(st, 6, 3.0, 99, GridSpec{3}, 1e-9, st.default_params());
        REQUIRE(probe2.geodesics.size() == probe.geodesics.size());
        for (std::size_t i = 0; i < probe.geodesics.size(); ++i)
            CHECK(probe.geodesics[i].mid_segment.value ==
                  probe2.geodesics[i].mid_segment.value);
    }
    SUBCASE("minkowski fires the trivial route with zero potential") {
        auto st = catalog_spacetime("minkowski", {{"s", 2}});
        auto probe =
            hyperbolicity_probe(st, 4, 5.0, 7, GridSpec{3}, 1e-9, st.default_params());
        bool has_trivial = false;
        for (const auto& c : probe.conclusions)
            if (c.find("triviality route") != std::string::npos) has_trivial = true;
        CHECK(has_trivial);
        CHECK(probe.generic_count == 0);
    }
}

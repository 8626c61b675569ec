#include "ssst/spacetime.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace ssst {

const char* causal_kind_name(CausalKind k) {
    switch (k) {
        case CausalKind::Timelike: return "timelike";
        case CausalKind::Null: return "null";
        case CausalKind::Spacelike: return "spacelike";
    }
    return "?";
}

Spacetime Spacetime::make_static(ChartManifold base, std::string warp_field, Interval interval,
                                 ParamMap defaults) {
    if (!base.has_field(warp_field)) throw UnknownField(warp_field);
    if (!(interval.lo < interval.hi)) throw SpecError("empty time interval");
    Spacetime st;
    st.kind_ = SpacetimeKind::Static;
    st.interval_ = interval;
    st.base_ = std::move(base);
    st.warp_field_ = std::move(warp_field);
    st.defaults_ = std::move(defaults);
    st.build_product();
    return st;
}

Spacetime Spacetime::make_grw(ChartManifold base, Expr warp_of_t, Interval interval,
                              ParamMap defaults) {
    if (!(interval.lo < interval.hi)) throw SpecError("empty time interval");
    Spacetime st;
    st.kind_ = SpacetimeKind::GRW;
    st.interval_ = interval;
    st.base_ = std::move(base);
    st.grw_warp_ = std::move(warp_of_t);
    st.defaults_ = std::move(defaults);
    st.build_product();
    return st;
}

void Spacetime::build_product() {
    const int s = base_.dim();
    std::vector<std::string> coords;
    coords.reserve(s + 1);
    coords.push_back("t");
    for (const auto& c : base_.coords()) {
        if (c == "t") throw SpecError("base coordinate name 't' collides with the time coordinate");
        coords.push_back(c);
    }
    std::vector<Interval> domain;
    domain.push_back(interval_);
    for (const auto& iv : base_.domain()) domain.push_back(iv);

    const auto& params = base_.params();
    auto lift = [&](const Expr& e) { return e.rebind(coords, params); };

    std::vector<std::vector<Expr>> upper(s + 1);
    Expr zero = Expr::literal(0.0, coords, params);
    if (kind_ == SpacetimeKind::Static) {
        Expr f = lift(base_.field(warp_field_));
        upper[0].push_back(-f.squared());
        for (int j = 1; j <= s; ++j) upper[0].push_back(zero);
        for (int i = 1; i <= s; ++i)
            for (int j = i; j <= s; ++j)
                upper[i].push_back(lift(base_.metric_expr(i - 1, j - 1)));
    } else {
        Expr b = grw_warp_->rebind(coords, params);
        Expr b2 = b.squared();
        upper[0].push_back(Expr::literal(-1.0, coords, params));
        for (int j = 1; j <= s; ++j) upper[0].push_back(zero);
        for (int i = 1; i <= s; ++i)
            for (int j = i; j <= s; ++j)
                upper[i].push_back(b2 * lift(base_.metric_expr(i - 1, j - 1)));
    }
    product_ = ChartManifold(coords, domain, upper, params);
}

double Spacetime::representative_t() const {
    double lo = interval_.lo, hi = interval_.hi;
    if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
    if (std::isfinite(lo)) return lo + 1.0;
    if (std::isfinite(hi)) return hi - 1.0;
    return 0.0;
}

std::vector<Interval> Spacetime::event_box() const {
    std::vector<Interval> box;
    Interval t = interval_;
    if (!std::isfinite(t.lo)) t.lo = std::isfinite(t.hi) ? t.hi - 20.0 : -10.0;
    if (!std::isfinite(t.hi)) t.hi = t.lo + 20.0;
    box.push_back(t);
    for (const auto& iv : base_.sampling_box()) box.push_back(iv);
    return box;
}

Vec Spacetime::event(double t, const Vec& x) const {
    Vec e(x.size() + 1);
    e[0] = t;
    e.tail(x.size()) = x;
    return e;
}

double Spacetime::warp_value(const Vec& event, const ParamMap& params) const {
    if (kind_ == SpacetimeKind::Static)
        return base_.field(warp_field_).eval(spatial_of(event), params);
    Vec t(1);
    t[0] = event[0];
    return grw_warp_->eval(t, params);
}

void Spacetime::validate(int grid_per_axis) const { validate(defaults_, grid_per_axis); }

void Spacetime::validate(const ParamMap& params, int grid_per_axis) const {
    base_.validate_spd(params, grid_per_axis);
    if (kind_ == SpacetimeKind::Static) {
        for (const Vec& x : make_grid(base_.sampling_box(), grid_per_axis)) {
            double f = base_.field(warp_field_).eval(x, params);
            if (!(f > 0.0)) {
                std::ostringstream os;
                os << "warping function must be positive; got " << f << " at a sample point";
                throw MetricError(os.str());
            }
        }
    } else {
        Interval t = event_box()[0];
        for (int k = 0; k < grid_per_axis; ++k) {
            double tt = t.lo + (t.hi - t.lo) *
                                   (grid_per_axis == 1 ? 0.5
                                                       : static_cast<double>(k) / (grid_per_axis - 1));
            Vec tv(1);
            tv[0] = tt;
            double b = grw_warp_->eval(tv, params);
            if (!(b > 0.0)) throw MetricError("scale factor must be positive on the interval");
        }
    }
}

namespace {

void check_lorentz_signature(const Mat& g, const Vec& event) {
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    int neg = 0, zero = 0;
    double scale = 1.0 + sup_norm(g);
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double l = es.eigenvalues()[i];
        if (std::abs(l) <= 1e-14 * scale) ++zero;
        else if (l < 0.0) ++neg;
    }
    if (zero > 0 || neg != 1) {
        std::ostringstream os;
        os << "metric degenerate or not Lorentzian at (";
        for (int i = 0; i < event.size(); ++i) os << (i ? ", " : "") << event[i];
        os << ")";
        throw MetricError(os.str());
    }
}

}  // namespace

LorentzGeometryAt lorentz_geometry_at(const Spacetime& st, const Vec& event,
                                      const ParamMap& params) {
    const ChartManifold& chart = st.product_chart();
    chart.require_inside(event);
    auto jets = chart.metric_jet2(event, params);
    const int n = chart.dim();
    {
        Mat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = jets[i * n + j].v;
        check_lorentz_signature(g, event);
    }
    CurvatureData c = curvature_from_jets(jets, n, event);
    LorentzGeometryAt out;
    out.event = event;
    out.g = std::move(c.g);
    out.g_inv = std::move(c.g_inv);
    out.christoffel = c.christoffel;
    out.riemann = c.riemann;
    out.ricci = std::move(c.ricci);
    out.scalar = c.scalar;
    return out;
}

RicciWarpedForms ricci_warped_forms(const Spacetime& st, const Vec& event, const ParamMap& params) {
    if (!st.is_static()) throw WrongKind("warped Ricci formula applies to static space-times");
    const Vec x = st.spatial_of(event);
    const int s = st.base_dim();
    const int n = s + 1;

    GeometryAt geo = geometry_at(st.base(), x, params);
    ScalarCalculusAt sc = scalar_calculus_at(st.base(), st.warp_field(), x, params);
    const double f = sc.value;

    RicciWarpedForms out;
    out.block_form = Mat::Zero(n, n);
    out.block_form(0, 0) = f * sc.laplacian;
    out.block_form.block(1, 1, s, s) = geo.ricci - (1.0 / f) * sc.hessian;

    Mat lstar = -f * geo.ricci - sc.laplacian * geo.g + sc.hessian;
    out.lstar_form = Mat::Zero(n, n);
    out.lstar_form(0, 0) = -(1.0 / f) * sc.laplacian * (-f * f);
    out.lstar_form.block(1, 1, s, s) =
        -(1.0 / f) * lstar - (1.0 / f) * sc.laplacian * geo.g;
    return out;
}

Mat ricci_warped_at(const Spacetime& st, const Vec& event, const ParamMap& params) {
    return ricci_warped_forms(st, event, params).block_form;
}

double scalar_warped_at(const Spacetime& st, const Vec& event, const ParamMap& params) {
    if (!st.is_static()) throw WrongKind("warped scalar formula applies to static space-times");
    const Vec x = st.spatial_of(event);
    GeometryAt geo = geometry_at(st.base(), x, params);
    ScalarCalculusAt sc = scalar_calculus_at(st.base(), st.warp_field(), x, params);
    return geo.scalar - 2.0 * sc.laplacian / sc.value;
}

StressEnergyAt stress_energy_at(const Spacetime& st, const Vec& event, const ParamMap& params) {
    LorentzGeometryAt lg = lorentz_geometry_at(st, event, params);
    StressEnergyAt out;
    out.event = event;
    out.T = (lg.ricci - 0.5 * lg.scalar * lg.g) / (8.0 * std::numbers::pi);
    out.trace = (lg.g_inv.cwiseProduct(out.T)).sum();
    return out;
}

Mat stress_energy_warped_at(const Spacetime& st, const Vec& event, const ParamMap& params) {
    if (!st.is_static()) throw WrongKind("warped stress-energy applies to static space-times");
    const Vec x = st.spatial_of(event);
    const int s = st.base_dim();
    const int n = s + 1;

    GeometryAt geo = geometry_at(st.base(), x, params);
    ScalarCalculusAt sc = scalar_calculus_at(st.base(), st.warp_field(), x, params);
    const double f = sc.value;
    Mat lstar = -f * geo.ricci - sc.laplacian * geo.g + sc.hessian;

    Mat g_full = Mat::Zero(n, n);
    g_full(0, 0) = -f * f;
    g_full.block(1, 1, s, s) = geo.g;

    Mat eightPiT = -0.5 * geo.scalar * g_full;
    eightPiT.block(1, 1, s, s) -= (1.0 / f) * lstar;
    return eightPiT / (8.0 * std::numbers::pi);
}

CausalKind causal_classify(const Spacetime& st, const Vec& event, const Vec& w,
                           const ParamMap& params, double tol) {
    Mat g = st.product_chart().metric_value(event, params);
    double q = w.dot(g * w);
    double aux = w.squaredNorm();
    if (std::abs(q) <= tol * aux) return CausalKind::Null;
    return q < 0.0 ? CausalKind::Timelike : CausalKind::Spacelike;
}

}  // namespace ssst

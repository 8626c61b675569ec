#include "ssst/auditor.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ssst/rng.hpp"

namespace ssst {

const char* condition_id_name(ConditionId id) {
    switch (id) {
        case ConditionId::SEC: return "SEC";
        case ConditionId::NCC: return "NCC";
        case ConditionId::WEC: return "WEC";
        case ConditionId::DEC: return "DEC";
        case ConditionId::HESEC: return "HE-SEC";
        case ConditionId::RSEC: return "RSEC";
        case ConditionId::RNCC: return "RNCC";
        case ConditionId::SubharmonicityNecessary: return "subharmonicity-necessary";
        case ConditionId::ScalarNonnegNecessary: return "scalar-nonneg-necessary";
        case ConditionId::SkidResidual: return "skid-residual";
    }
    return "?";
}

std::optional<ConditionId> condition_id_from(const std::string& name) {
    for (ConditionId id : {ConditionId::SEC, ConditionId::NCC, ConditionId::WEC, ConditionId::DEC,
                           ConditionId::HESEC, ConditionId::RSEC, ConditionId::RNCC,
                           ConditionId::SubharmonicityNecessary,
                           ConditionId::ScalarNonnegNecessary, ConditionId::SkidResidual}) {
        if (name == condition_id_name(id)) return id;
    }
    return std::nullopt;
}

bool condition_is_static_only(ConditionId id) {
    return id == ConditionId::SubharmonicityNecessary ||
           id == ConditionId::ScalarNonnegNecessary || id == ConditionId::SkidResidual;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::HoldsOnSamples: return "holds-on-samples";
        case Verdict::Violated: return "violated";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

// Unit spatial direction with respect to the spatial block of the full
// metric at the event.
Vec draw_unit_spatial(const Mat& g_sp, Rng& rng) {
    const int s = static_cast<int>(g_sp.rows());
    Eigen::LLT<Mat> llt(g_sp);
    Vec z(s);
    for (int i = 0; i < s; ++i) z[i] = rng.normal();
    if (z.norm() == 0.0) z[0] = 1.0;
    // v = L^{-T} z has g-norm |z|; normalize to the g-unit sphere.
    Vec v = llt.matrixU().solve(z);
    double q = std::sqrt(v.dot(g_sp * v));
    return v / q;
}

Vec assemble(const Spacetime& st, double r, const Vec& v, double g00) {
    const int n = st.dim();
    Vec w = Vec::Zero(n);
    w[0] = r / std::sqrt(-g00);  // g_sp(v,v) = 1 by construction
    w.tail(n - 1) = v;
    return w;
}

}  // namespace

std::vector<CausalSample> sample_causal(const Spacetime& st, const Vec& event, int count,
                                        CausalKind kind, std::uint64_t seed,
                                        const ParamMap& params) {
    if (count < 1) throw SpecError("sample count must be >= 1");
    if (kind == CausalKind::Spacelike) throw SpecError("causal samples are timelike or null");
    const int n = st.dim();
    Mat g = st.product_chart().metric_value(event, params);
    Mat g_sp = g.block(1, 1, n - 1, n - 1);
    double g00 = g(0, 0);

    Rng rng(seed);
    std::vector<CausalSample> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        CausalSample s;
        s.event = event;
        s.v = draw_unit_spatial(g_sp, rng);
        double sign = (i % 2 == 0) ? 1.0 : -1.0;
        double mag = (kind == CausalKind::Null) ? 1.0 : 1.0 + 2.0 * (1.0 - rng.uniform01());
        s.r = sign * mag;
        s.w = assemble(st, s.r, s.v, g00);
        s.kind = kind;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Vec> audit_events(const Spacetime& st, const GridSpec& grid) {
    std::vector<Vec> events;
    if (st.is_static()) {
        double t = st.representative_t();
        for (const Vec& x : make_grid(st.base().sampling_box(), grid.per_axis))
            events.push_back(st.event(t, x));
    } else {
        events = make_grid(st.event_box(), grid.per_axis);
    }
    return events;
}

namespace {

struct EventOutcome {
    double min_margin = std::numeric_limits<double>::infinity();
    std::vector<Witness> worst;
    std::optional<Witness> canonical;  // the w = dt sample at this event
    std::size_t samples = 0;
};

void consider(EventOutcome& out, const Vec& event, const Vec& w1, const std::optional<Vec>& w2,
              double margin, bool canonical = false) {
    ++out.samples;
    out.min_margin = std::min(out.min_margin, margin);
    Witness wit{event, w1, w2, margin, canonical};
    if (canonical) out.canonical = wit;
    out.worst.push_back(std::move(wit));
    std::sort(out.worst.begin(), out.worst.end(),
              [](const Witness& a, const Witness& b) { return a.margin < b.margin; });
    if (out.worst.size() > 3) out.worst.resize(3);
}

// Margins are defined so that "condition holds" is margin >= -tol.
EventOutcome evaluate_event(const Spacetime& st, ConditionId id, const Vec& event,
                            int samples_per_event, std::uint64_t event_seed,
                            const ParamMap& params) {
    EventOutcome out;
    const int n = st.dim();

    if (condition_is_static_only(id)) {
        const Vec x = st.spatial_of(event);
        switch (id) {
            case ConditionId::SubharmonicityNecessary: {
                auto sc = scalar_calculus_at(st.base(), st.warp_field(), x, params);
                consider(out, event, Vec(), std::nullopt, sc.laplacian);
                break;
            }
            case ConditionId::ScalarNonnegNecessary: {
                auto geo = geometry_at(st.base(), x, params);
                consider(out, event, Vec(), std::nullopt, geo.scalar);
                break;
            }
            case ConditionId::SkidResidual: {
                Mat l = lstar_at(st.base(), st.warp_field(), x, params);
                consider(out, event, Vec(), std::nullopt, -sup_norm(l));
                break;
            }
            default: break;
        }
        return out;
    }

    LorentzGeometryAt lg = lorentz_geometry_at(st, event, params);
    Mat T = (lg.ricci - 0.5 * lg.scalar * lg.g) / (8.0 * std::numbers::pi);
    double trace_T = (lg.g_inv.cwiseProduct(T)).sum();

    Vec dt = Vec::Zero(n);
    dt[0] = 1.0;

    auto ric_of = [&](const Vec& w) { return w.dot(lg.ricci * w); };
    auto T_of = [&](const Vec& a, const Vec& b) { return a.dot(T * b); };
    auto g_of = [&](const Vec& a, const Vec& b) { return a.dot(lg.g * b); };

    const int half = std::max(1, samples_per_event / 2);

    switch (id) {
        case ConditionId::SEC:
        case ConditionId::RSEC: {
            double flip = (id == ConditionId::RSEC) ? -1.0 : 1.0;
            consider(out, event, dt, std::nullopt, flip * ric_of(dt), true);
            auto tl = sample_causal(st, event, half, CausalKind::Timelike, event_seed, params);
            auto nl = sample_causal(st, event, half, CausalKind::Null, mix_seed(event_seed, 1),
                                    params);
            for (const auto& s : tl) consider(out, event, s.w, std::nullopt, flip * ric_of(s.w));
            for (const auto& s : nl) consider(out, event, s.w, std::nullopt, flip * ric_of(s.w));
            break;
        }
        case ConditionId::NCC:
        case ConditionId::RNCC: {
            double flip = (id == ConditionId::RNCC) ? -1.0 : 1.0;
            auto nl = sample_causal(st, event, samples_per_event, CausalKind::Null, event_seed,
                                    params);
            for (const auto& s : nl) consider(out, event, s.w, std::nullopt, flip * ric_of(s.w));
            break;
        }
        case ConditionId::WEC: {
            consider(out, event, dt, std::nullopt, T_of(dt, dt), true);
            auto tl = sample_causal(st, event, samples_per_event, CausalKind::Timelike, event_seed,
                                    params);
            for (const auto& s : tl) consider(out, event, s.w, std::nullopt, T_of(s.w, s.w));
            break;
        }
        case ConditionId::HESEC: {
            auto margin = [&](const Vec& w) { return T_of(w, w) - 0.5 * trace_T * g_of(w, w); };
            consider(out, event, dt, std::nullopt, margin(dt), true);
            auto tl = sample_causal(st, event, samples_per_event, CausalKind::Timelike, event_seed,
                                    params);
            for (const auto& s : tl) consider(out, event, s.w, std::nullopt, margin(s.w));
            break;
        }
        case ConditionId::DEC: {
            consider(out, event, dt, dt, T_of(dt, dt), true);
            auto first = sample_causal(st, event, half, CausalKind::Timelike, event_seed, params);
            auto firstn = sample_causal(st, event, half, CausalKind::Null,
                                        mix_seed(event_seed, 1), params);
            first.insert(first.end(), firstn.begin(), firstn.end());
            Rng rng(mix_seed(event_seed, 2));
            Mat g_sp = lg.g.block(1, 1, n - 1, n - 1);
            for (const auto& s1 : first) {
                // partner in the same time-cone: same r sign, g(w1,w2) <= 0
                Vec w2;
                for (int attempt = 0; attempt < 16; ++attempt) {
                    Vec v2 = draw_unit_spatial(g_sp, rng);
                    double mag = (rng.uniform01() < 0.5) ? 1.0 : 1.0 + 2.0 * (1.0 - rng.uniform01());
                    double r2 = (s1.r >= 0.0 ? 1.0 : -1.0) * mag;
                    Vec cand = assemble(st, r2, v2, lg.g(0, 0));
                    if (g_of(s1.w, cand) <= 0.0) {
                        w2 = cand;
                        break;
                    }
                }
                if (w2.size() == 0) continue;  // no same-cone partner found
                consider(out, event, s1.w, w2, T_of(s1.w, w2));
            }
            break;
        }
        default: break;
    }
    return out;
}

}  // namespace

ConditionReport check_condition(const Spacetime& st, ConditionId id, const GridSpec& grid,
                                int samples_per_event, std::uint64_t seed, double tol,
                                const ParamMap& params, Exec exec) {
    if (condition_is_static_only(id) && !st.is_static())
        throw WrongKind(std::string(condition_id_name(id)) + " requires a static space-time");

    std::vector<Vec> events = audit_events(st, grid);
    std::vector<EventOutcome> outcomes(events.size());
    for_each_index(events.size(), exec, [&](std::size_t i) {
        outcomes[i] = evaluate_event(st, id, events[i], samples_per_event,
                                     mix_seed(seed, static_cast<std::uint64_t>(i)), params);
    });

    ConditionReport rep;
    rep.id = id;
    rep.seed = seed;
    rep.tol = tol;
    rep.event_count = events.size();
    rep.min_margin = std::numeric_limits<double>::infinity();

    std::vector<Witness> all;
    for (const auto& o : outcomes) {
        rep.sample_count += o.samples;
        rep.min_margin = std::min(rep.min_margin, o.min_margin);
        all.insert(all.end(), o.worst.begin(), o.worst.end());
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const Witness& a, const Witness& b) { return a.margin < b.margin; });
    if (rep.sample_count == 0) {
        rep.verdict = Verdict::Inconclusive;
        return rep;
    }
    if (rep.min_margin < -tol) {
        rep.verdict = Verdict::Violated;
        for (const auto& w : all)
            if (w.margin < -tol && rep.witnesses.size() < 3) rep.witnesses.push_back(w);
        // keep the deterministic dt witness visible when it also violates
        std::optional<Witness> worst_dt;
        for (const auto& o : outcomes)
            if (o.canonical && o.canonical->margin < -tol &&
                (!worst_dt || o.canonical->margin < worst_dt->margin))
                worst_dt = o.canonical;
        if (worst_dt) {
            bool present = false;
            for (const auto& w : rep.witnesses) present |= w.canonical_dt;
            if (!present) rep.witnesses.push_back(*worst_dt);
        }
    } else {
        rep.verdict = Verdict::HoldsOnSamples;
        if (!all.empty()) rep.witnesses.push_back(all.front());  // tightest margin, as evidence
    }
    return rep;
}

namespace {

bool in(DefClass c, std::initializer_list<DefClass> set) {
    for (DefClass x : set)
        if (x == c) return true;
    return false;
}

struct DefAggregate {
    bool all_psd = true, all_pd = true, all_nsd = true, all_nd = true, all_zero = true;
    void add(DefClass c) {
        all_psd &= in(c, {DefClass::PositiveDefinite, DefClass::PositiveSemi, DefClass::Zero});
        all_pd &= c == DefClass::PositiveDefinite;
        all_nsd &= in(c, {DefClass::NegativeDefinite, DefClass::NegativeSemi, DefClass::Zero});
        all_nd &= c == DefClass::NegativeDefinite;
        all_zero &= c == DefClass::Zero;
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

HypothesisScan hypothesis_scan(const Spacetime& st, const GridSpec& grid, double tol,
                               const ParamMap& params, Exec exec) {
    if (!st.is_static()) throw WrongKind("hypothesis scan requires a static space-time");
    const int s = st.base_dim();
    const int n = s + 1;

    std::vector<Vec> pts = make_grid(st.base().sampling_box(), grid.per_axis);
    std::vector<PointClasses> classes(pts.size());

    for_each_index(pts.size(), exec, [&](std::size_t i) {
        const Vec& x = pts[i];
        GeometryAt geo = geometry_at(st.base(), x, params);
        ScalarCalculusAt sc = scalar_calculus_at(st.base(), st.warp_field(), x, params);
        Mat q = sc.laplacian * geo.g - sc.hessian;
        Mat lstar = -sc.value * geo.ricci - q;

        PointClasses pc;
        pc.x = x;
        pc.ricci = definiteness(geo.ricci, tol).cls;
        pc.q = definiteness(q, tol).cls;
        pc.lstar = definiteness(lstar, tol).cls;
        pc.lap_f = sc.laplacian;
        pc.tau = geo.scalar;
        pc.f = sc.value;
        pc.lstar_norm = sup_norm(lstar);
        pc.phi = sc.laplacian / s;
        Mat conc = sc.hessian - pc.phi * geo.g;
        pc.concircular_residual = sup_norm(conc);
        double flat = 0.0;
        for (int a = 0; a < s; ++a)
            for (int b = 0; b < s; ++b)
                for (int c = 0; c < s; ++c)
                    for (int d = 0; d < s; ++d)
                        flat = std::max(flat, std::abs(geo.riemann(a, b, c, d)));
        pc.flatness = flat;
        classes[i] = std::move(pc);
    });

    HypothesisScan out;
    out.grid = grid;
    out.tol = tol;
    out.points = std::move(classes);

    DefAggregate ric, q, lstar;
    out.lap_min = out.tau_min = out.f_min = out.ratio_min = out.phi_min =
        std::numeric_limits<double>::infinity();
    out.lap_max = out.tau_max = out.f_max = out.phi_max =
        -std::numeric_limits<double>::infinity();
    for (const auto& pc : out.points) {
        ric.add(pc.ricci);
        q.add(pc.q);
        lstar.add(pc.lstar);
        out.lap_min = std::min(out.lap_min, pc.lap_f);
        out.lap_max = std::max(out.lap_max, pc.lap_f);
        out.tau_min = std::min(out.tau_min, pc.tau);
        out.tau_max = std::max(out.tau_max, pc.tau);
        out.f_min = std::min(out.f_min, pc.f);
        out.f_max = std::max(out.f_max, pc.f);
        out.ratio_min = std::min(out.ratio_min, pc.lap_f / pc.f);
        out.phi_min = std::min(out.phi_min, pc.phi);
        out.phi_max = std::max(out.phi_max, pc.phi);
        out.lstar_residual_max = std::max(out.lstar_residual_max, pc.lstar_norm);
        out.concircular_residual_max =
            std::max(out.concircular_residual_max, pc.concircular_residual);
        out.flatness_max = std::max(out.flatness_max, pc.flatness);
    }
    out.ric_all_psd = ric.all_psd;
    out.ric_all_pd = ric.all_pd;
    out.ric_all_nsd = ric.all_nsd;
    out.ric_all_nd = ric.all_nd;
    out.ric_all_zero = ric.all_zero;
    out.q_all_psd = q.all_psd;
    out.q_all_pd = q.all_pd;
    out.q_all_nsd = q.all_nsd;
    out.q_all_nd = q.all_nd;
    out.q_all_zero = q.all_zero;
    out.lstar_all_psd = lstar.all_psd;
    out.lstar_all_pd = lstar.all_pd;
    out.lstar_all_nsd = lstar.all_nsd;
    out.lstar_all_nd = lstar.all_nd;
    out.lstar_all_zero = lstar.all_zero;

    auto fire = [&](std::string id, std::string desc, std::vector<std::string> user = {}) {
        out.fired.push_back({std::move(id), std::move(desc), std::move(user)});
    };

    const double conc_tol = tol * (1.0 + std::abs(out.lap_max));

    if (out.lstar_all_nsd)
        fire("ncc-from-lstar-nsd",
             "L*f is negative semidefinite at every sampled point, so the null convergence "
             "condition holds on the sampled region (and this is also necessary).");
    if (out.lstar_all_psd)
        fire("rncc-from-lstar-psd",
             "L*f is positive semidefinite at every sampled point, so the reverse null "
             "convergence condition holds on the sampled region.");
    if (out.ric_all_psd && out.q_all_psd)
        fire("tcc-ncc-from-ricci-q-psd",
             "Ric_F and Q^f are positive semidefinite everywhere sampled: the timelike and null "
             "convergence conditions hold.");
    if (out.ric_all_nsd && out.q_all_nsd)
        fire("rtcc-rncc-from-ricci-q-nsd",
             "Ric_F and Q^f are negative semidefinite everywhere sampled: the reverse timelike "
             "and null convergence conditions hold.");
    if (out.ric_all_zero && out.q_all_psd)
        fire("ncc-iff-q-psd-ricci-flat",
             "The base is Ricci-flat on the sampled grid, so Q^f positive semidefinite is "
             "equivalent to the null convergence condition.");
    if (out.lap_min < -tol)
        fire("sec-impossible-from-superharmonic-point",
             "lap f = " + fmt(out.lap_min) +
                 " < 0 at a sampled point; subharmonicity of f is necessary, so the strong "
                 "energy condition cannot hold.");
    if (out.tau_min < -tol)
        fire("wec-impossible-from-negative-scalar",
             "tau_F = " + fmt(out.tau_min) +
                 " < 0 at a sampled point; nonnegative base scalar curvature is necessary, so "
                 "the weak energy condition cannot hold.");
    if (out.ric_all_psd && out.q_all_psd)
        fire("causal-T-nonneg-from-ricci-q-psd",
             "Ric_F and Q^f positive semidefinite: T(w,w) >= 0 for every causal w (implies the "
             "weak energy condition).");
    if (out.lstar_all_nsd && out.tau_min >= -tol)
        fire("causal-T-nonneg-from-lstar-nsd-scalar-nonneg",
             "L*f negative semidefinite and tau_F >= 0 on the grid: T(w,w) >= 0 for every "
             "causal w.");
    if (out.lstar_residual_max <= tol && out.tau_min >= -tol)
        fire("dec-from-lstar-kernel-scalar-nonneg",
             "L*f vanishes on the grid (residual " + fmt(out.lstar_residual_max) +
                 ") and tau_F >= 0: the dominant energy condition is satisfied.");
    if (out.lstar_all_psd)
        fire("trivial-pseudodistance-from-lstar-psd",
             "L*f positive semidefinite everywhere sampled: the Lorentzian pseudo-distance is "
             "trivial (d == 0).",
             {"interval = R", "base complete (or compact)", "inf f > 0 in the noncompact case"});
    if (out.ric_all_psd && out.q_all_pd)
        fire("conformally-hyperbolic-from-ricci-psd-q-pd",
             "Ric_F positive semidefinite and Q^f positive definite everywhere sampled: the "
             "space-time is conformally hyperbolic.");
    if (out.lstar_all_nsd)
        fire("conformally-hyperbolic-from-lstar-nsd-ngc",
             "L*f negative semidefinite everywhere sampled: conformal hyperbolicity follows if "
             "the null generic condition also holds.",
             {"null generic condition (only sampled evidence available)"});
    if (out.ric_all_psd && out.q_all_pd)
        fire("conjugate-pairs-from-ricci-psd-q-pd",
             "Ric_F positive semidefinite and Q^f positive definite: every complete causal "
             "geodesic contains a pair of conjugate points.",
             {"geodesic completeness of the sampled region"});
    if (out.lstar_all_nd && out.lap_min >= -tol)
        fire("conjugate-pairs-from-lstar-nd-subharmonic-ngc",
             "L*f negative definite and f subharmonic on the grid: complete causal geodesics "
             "contain conjugate pairs if the null generic condition holds.",
             {"null generic condition (only sampled evidence available)",
              "geodesic completeness"});
    if (out.ric_all_psd && out.q_all_psd && out.ratio_min > tol) {
        double c = out.ratio_min;
        double bound = std::numbers::pi * std::sqrt((n - 1) / c);
        fire("timelike-diameter-bound",
             "Ric_F and Q^f positive semidefinite with lap f / f >= c = " + fmt(c) +
                 " > 0: timelike geodesics of length >= pi sqrt((n-1)/c) = " + fmt(bound) +
                 " contain conjugate pairs; the timelike diameter is bounded by this value.",
             {"interval = R, base complete and sup f < infinity for the diameter statement"});
    }
    if (out.concircular_residual_max <= conc_tol) {
        if (out.ric_all_nsd && out.phi_min > tol)
            fire("conformally-hyperbolic-from-concircular-positive",
                 "f is a concircular field (H^f = phi g_F, residual " +
                     fmt(out.concircular_residual_max) + ") with phi >= " + fmt(out.phi_min) +
                     " > 0 and Ric_F negative semidefinite: conformally hyperbolic.");
        if (out.ric_all_nsd && out.phi_max <= tol)
            fire("trivial-pseudodistance-from-concircular-nonpositive",
                 "f is a concircular field with nonpositive characteristic function and Ric_F "
                 "negative semidefinite: the pseudo-distance is trivial.",
                 {"base complete", "inf f > 0", "interval = R"});
        if (out.flatness_max <= tol && std::abs(out.phi_min - 1.0) <= tol &&
            std::abs(out.phi_max - 1.0) <= tol)
            fire("conformally-hyperbolic-from-hessian-potential",
                 "The base is flat and H^f = g_F (f is a global Hessian potential): "
                 "conformally hyperbolic.");
    }

    return out;
}

SkidResidualScan skid_residual(const Spacetime& st, const GridSpec& grid, const ParamMap& params,
                               Exec exec) {
    if (!st.is_static()) throw WrongKind("L*f residual requires a static space-time");
    std::vector<Vec> pts = make_grid(st.base().sampling_box(), grid.per_axis);
    std::vector<double> vals(pts.size());
    for_each_index(pts.size(), exec, [&](std::size_t i) {
        vals[i] = sup_norm(lstar_at(st.base(), st.warp_field(), pts[i], params));
    });
    SkidResidualScan out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out.per_point.emplace_back(pts[i], vals[i]);
        out.max_residual = std::max(out.max_residual, vals[i]);
    }
    return out;
}

}  // namespace ssst

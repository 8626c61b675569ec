#pragma once

#include <limits>
#include <optional>

#include "ssst/geometry.hpp"

namespace ssst {

enum class SpacetimeKind { Static, GRW };
enum class CausalKind { Timelike, Null, Spacelike };

const char* causal_kind_name(CausalKind k);

struct LorentzGeometryAt {
    Vec event;  // (t, x^1..x^s)
    Mat g;
    Mat g_inv;
    Tensor3 christoffel;
    Tensor4 riemann;
    Mat ricci;
    double scalar = 0.0;
};

struct StressEnergyAt {
    Vec event;
    Mat T;            // (Ric - tau g / 2) / 8 pi
    double trace = 0.0;  // g^{ab} T_ab
};

// Lorentzian warped product over a Riemannian base chart: either the static
// form -f(x)^2 dt^2 + g_F with f a field on the base, or the
// Robertson-Walker form -dt^2 + b(t)^2 g_F with b a function of t alone.
class Spacetime {
  public:
    Spacetime() = default;  // empty shell; assign from make_static/make_grw

    static Spacetime make_static(ChartManifold base, std::string warp_field, Interval interval,
                                 ParamMap defaults = {});
    static Spacetime make_grw(ChartManifold base, Expr warp_of_t, Interval interval,
                              ParamMap defaults = {});

    SpacetimeKind kind() const { return kind_; }
    bool is_static() const { return kind_ == SpacetimeKind::Static; }
    int base_dim() const { return base_.dim(); }
    int dim() const { return base_.dim() + 1; }
    const Interval& interval() const { return interval_; }
    const ChartManifold& base() const { return base_; }
    const std::string& warp_field() const { return warp_field_; }
    const Expr& grw_warp() const { return *grw_warp_; }
    const ParamMap& default_params() const { return defaults_; }

    // Product chart (t, x^1..x^s) carrying the full Lorentzian metric.
    const ChartManifold& product_chart() const { return product_; }

    // Representative t for sampling the static metric (which is
    // t-independent); midpoint of the interval clamped to finite values.
    double representative_t() const;

    // Sampling box of the product chart: [interval (clamped)] x spatial box.
    std::vector<Interval> event_box() const;

    Vec event(double t, const Vec& x) const;
    double time_of(const Vec& event) const { return event[0]; }
    Vec spatial_of(const Vec& event) const { return event.tail(event.size() - 1); }

    double warp_value(const Vec& event, const ParamMap& params) const;

    // Checks f > 0 (static) or b > 0 (GRW) on the sampling grid and the base
    // metric SPD; throws on violation.
    void validate(int grid_per_axis = 5) const;
    void validate(const ParamMap& params, int grid_per_axis = 5) const;

  private:
    void build_product();

    SpacetimeKind kind_ = SpacetimeKind::Static;
    Interval interval_{-std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity()};
    ChartManifold base_ = ChartManifold::euclidean({"x1"}, {{-1.0, 1.0}});
    std::string warp_field_;
    std::optional<Expr> grw_warp_;
    ParamMap defaults_;
    ChartManifold product_ = ChartManifold::euclidean({"t"}, {{-1.0, 1.0}});
};

// Full curvature of the product chart, computed directly from the
// (1+s)-dimensional metric expressions. Signature (-,+,...,+) is enforced.
LorentzGeometryAt lorentz_geometry_at(const Spacetime& st, const Vec& event,
                                      const ParamMap& params);

// Ricci tensor of a static space-time from the warped-product block formula:
//   Ric(U+V, U+V) = Ric_F(V,V) + f (lap f) dt^2(U,U) - (1/f) Hess f(V,V).
Mat ricci_warped_at(const Spacetime& st, const Vec& event, const ParamMap& params);

// Both algebraically equal forms of the block formula (the second is
//   -(1/f) L*f(V,V) - (1/f)(lap f) g(U+V,U+V));
// exposed so tests can confirm their agreement independently.
struct RicciWarpedForms {
    Mat block_form;
    Mat lstar_form;
};
RicciWarpedForms ricci_warped_forms(const Spacetime& st, const Vec& event, const ParamMap& params);

// Scalar curvature of a static space-time: tau = tau_F - 2 (lap f) / f.
double scalar_warped_at(const Spacetime& st, const Vec& event, const ParamMap& params);

// T = (Ric - tau g / 2) / 8 pi from the direct pipeline.
StressEnergyAt stress_energy_at(const Spacetime& st, const Vec& event, const ParamMap& params);

// Static-only warped form of 8 pi T (first equality of the energy-momentum
// expansion): -(1/f) L*f on the spatial block minus (tau_F / 2) g.
Mat stress_energy_warped_at(const Spacetime& st, const Vec& event, const ParamMap& params);

CausalKind causal_classify(const Spacetime& st, const Vec& event, const Vec& w,
                           const ParamMap& params, double tol = 1e-9);

}  // namespace ssst

#pragma once

#include <map>
#include <string>
#include <vector>

#include "ssst/expr.hpp"

namespace ssst {

// Open interval; bounds may be +-infinity.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

// Coordinate chart with symbolic metric components (upper triangle stored,
// symmetry by construction) and optional named scalar fields. Immutable
// after construction apart from add_field; all evaluations are pure.
class ChartManifold {
  public:
    ChartManifold(std::vector<std::string> coords,
                  std::vector<Interval> domain,
                  std::vector<std::vector<Expr>> metric_upper,
                  std::vector<std::string> params = {});

    // Euclidean chart (identity metric) on the given box.
    static ChartManifold euclidean(const std::vector<std::string>& coords,
                                   const std::vector<Interval>& domain,
                                   const std::vector<std::string>& params = {});

    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<std::string>& params() const { return params_; }
    const std::vector<Interval>& domain() const { return domain_; }

    // Finite box used by sampling grids; infinite domain bounds are clamped.
    std::vector<Interval> sampling_box() const;

    void add_field(const std::string& name, Expr e);
    void add_field(const std::string& name, std::string_view text);
    bool has_field(const std::string& name) const;
    const Expr& field(const std::string& name) const;
    const std::map<std::string, Expr>& fields() const { return fields_; }

    const Expr& metric_expr(int i, int j) const;

    bool contains(const Vec& point) const;
    void require_inside(const Vec& point) const;

    Mat metric_value(const Vec& point, const ParamMap& params) const;
    // Full symmetric matrix of order-2 jets; out[i*dim+j].
    std::vector<Jet2> metric_jet2(const Vec& point, const ParamMap& params) const;
    std::vector<Jet1> metric_jet1(const Vec& point, const ParamMap& params) const;

    // Checks symmetric positive-definiteness on the sampling grid; throws
    // MetricError at the first failing point. A signature change invalidates
    // every downstream formula, so this is a hard error, not a warning.
    void validate_spd(const ParamMap& params, int grid_per_axis = 5) const;

  private:
    std::vector<std::string> coords_;
    std::vector<std::string> params_;
    std::vector<Interval> domain_;
    std::vector<std::vector<Expr>> metric_upper_;  // metric_upper_[i][j-i], j >= i
    std::map<std::string, Expr> fields_;
};

// Inclusive tensor-product grid over a finite box; first axis slowest.
std::vector<Vec> make_grid(const std::vector<Interval>& box, int per_axis);

}  // namespace ssst

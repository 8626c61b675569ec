#include "ssst/chart.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace ssst {

namespace {
std::string point_str(const Vec& p) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}
}  // namespace

ChartManifold::ChartManifold(std::vector<std::string> coords,
                             std::vector<Interval> domain,
                             std::vector<std::vector<Expr>> metric_upper,
                             std::vector<std::string> params)
    : coords_(std::move(coords)),
      params_(std::move(params)),
      domain_(std::move(domain)),
      metric_upper_(std::move(metric_upper)) {
    const int s = dim();
    if (s < 1 || s > kMaxDim) throw SpecError("chart dimension out of range");
    if (static_cast<int>(domain_.size()) != s) throw SpecError("domain box size != dim");
    if (static_cast<int>(metric_upper_.size()) != s) throw SpecError("metric rows != dim");
    for (int i = 0; i < s; ++i) {
        if (static_cast<int>(metric_upper_[i].size()) != s - i)
            throw SpecError("metric upper triangle row " + std::to_string(i) + " malformed");
    }
    for (const auto& iv : domain_) {
        if (!(iv.lo < iv.hi)) throw SpecError("empty domain interval");
    }
}

ChartManifold ChartManifold::euclidean(const std::vector<std::string>& coords,
                                       const std::vector<Interval>& domain,
                                       const std::vector<std::string>& params) {
    const int s = static_cast<int>(coords.size());
    std::vector<std::vector<Expr>> upper(s);
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j)
            upper[i].push_back(Expr::literal(i == j ? 1.0 : 0.0, coords, params));
    return ChartManifold(coords, domain, upper, params);
}

std::vector<Interval> ChartManifold::sampling_box() const {
    std::vector<Interval> box = domain_;
    for (auto& iv : box) {
        if (!std::isfinite(iv.lo) && !std::isfinite(iv.hi)) {
            iv = {-10.0, 10.0};
        } else if (!std::isfinite(iv.lo)) {
            iv.lo = iv.hi - 20.0;
        } else if (!std::isfinite(iv.hi)) {
            iv.hi = iv.lo + 20.0;
        }
    }
    return box;
}

void ChartManifold::add_field(const std::string& name, Expr e) {
    fields_.insert_or_assign(name, std::move(e));
}

void ChartManifold::add_field(const std::string& name, std::string_view text) {
    add_field(name, Expr::parse(text, coords_, params_));
}

bool ChartManifold::has_field(const std::string& name) const { return fields_.count(name) > 0; }

const Expr& ChartManifold::field(const std::string& name) const {
    auto it = fields_.find(name);
    if (it == fields_.end()) throw UnknownField(name);
    return it->second;
}

const Expr& ChartManifold::metric_expr(int i, int j) const {
    return i <= j ? metric_upper_[i][j - i] : metric_upper_[j][i - j];
}

bool ChartManifold::contains(const Vec& point) const {
    if (point.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (!domain_[i].contains(point[i])) return false;
    return true;
}

void ChartManifold::require_inside(const Vec& point) const {
    if (!contains(point)) throw DomainError("point " + point_str(point) + " outside chart domain");
}

Mat ChartManifold::metric_value(const Vec& point, const ParamMap& params) const {
    const int s = dim();
    Mat g(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) g(i, j) = g(j, i) = metric_expr(i, j).eval(point, params);
    return g;
}

std::vector<Jet2> ChartManifold::metric_jet2(const Vec& point, const ParamMap& params) const {
    const int s = dim();
    std::vector<Jet2> out(static_cast<std::size_t>(s) * s);
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) {
            Jet2 jij = metric_expr(i, j).eval_jet2(point, params);
            out[j * s + i] = jij;
            out[i * s + j] = std::move(jij);
        }
    return out;
}

std::vector<Jet1> ChartManifold::metric_jet1(const Vec& point, const ParamMap& params) const {
    const int s = dim();
    std::vector<Jet1> out(static_cast<std::size_t>(s) * s);
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) {
            Jet1 jij = metric_expr(i, j).eval_jet1(point, params);
            out[j * s + i] = jij;
            out[i * s + j] = std::move(jij);
        }
    return out;
}

void ChartManifold::validate_spd(const ParamMap& params, int grid_per_axis) const {
    for (const Vec& p : make_grid(sampling_box(), grid_per_axis)) {
        Mat g = metric_value(p, params);
        Eigen::SelfAdjointEigenSolver<Mat> es(g);
        double lmin = es.eigenvalues().minCoeff();
        if (!(lmin > 0.0)) {
            std::ostringstream os;
            os << "metric not positive definite at " << point_str(p)
               << " (smallest eigenvalue " << lmin << ")";
            throw MetricError(os.str());
        }
    }
}

std::vector<Vec> make_grid(const std::vector<Interval>& box, int per_axis) {
    const int s = static_cast<int>(box.size());
    if (per_axis < 1) throw SpecError("grid must have at least one point per axis");
    std::size_t total = 1;
    for (int i = 0; i < s; ++i) total *= static_cast<std::size_t>(per_axis);
    std::vector<Vec> grid(total, Vec::Zero(s));
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (int i = s - 1; i >= 0; --i) {
            int k = static_cast<int>(rem % per_axis);
            rem /= per_axis;
            double t = per_axis == 1 ? 0.5 : static_cast<double>(k) / (per_axis - 1);
            grid[idx][i] = box[i].lo + (box[i].hi - box[i].lo) * t;
        }
    }
    return grid;
}

}  // namespace ssst

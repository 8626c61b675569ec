#include "ssst/catalog.hpp"

#include <cmath>
#include <sstream>

namespace ssst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> coord_names(const std::string& stem, int s) {
    std::vector<std::string> names;
    for (int i = 1; i <= s; ++i) names.push_back(stem + std::to_string(i));
    return names;
}

int int_param(const ParamMap& p, const std::string& name) {
    return static_cast<int>(std::llround(p.at(name)));
}

// sum of squares "x1^2 + ... + xs^2"
std::string sum_sq(const std::vector<std::string>& coords) {
    std::ostringstream os;
    for (std::size_t i = 0; i < coords.size(); ++i) os << (i ? " + " : "") << coords[i] << "^2";
    return os.str();
}

ChartManifold euclidean_chart(int s, double half_width, std::vector<std::string> params = {}) {
    auto coords = coord_names("x", s);
    std::vector<Interval> box(s, Interval{-half_width, half_width});
    return ChartManifold::euclidean(coords, box, params);
}

// Round sphere of the given dimension in nested spherical coordinates;
// the last coordinate is azimuthal and left wide for wrap-around tests.
ChartManifold sphere_chart(int s, std::vector<std::string> params) {
    auto coords = coord_names("th", s);
    std::vector<Interval> box;
    for (int i = 0; i < s - 1; ++i) box.push_back({0.15, 3.14159265358979 - 0.15});
    box.push_back({-7.0, 7.0});
    std::vector<std::vector<Expr>> upper(s);
    for (int i = 0; i < s; ++i) {
        for (int j = i; j < s; ++j) {
            if (i != j) {
                upper[i].push_back(Expr::literal(0.0, coords, params));
                continue;
            }
            std::ostringstream os;
            os << "radius^2";
            for (int k = 0; k < i; ++k) os << "*sin(" << coords[k] << ")^2";
            upper[i].push_back(Expr::parse(os.str(), coords, params));
        }
    }
    return ChartManifold(coords, box, upper, params);
}

// Upper half-space model: g = (dx1^2 + ... + dxs^2) / xs^2.
ChartManifold hyperbolic_chart(int s, std::vector<std::string> params = {}) {
    auto coords = coord_names("x", s);
    std::vector<Interval> box(s - 1, Interval{-2.0, 2.0});
    box.push_back({0.5, 4.0});
    std::vector<std::vector<Expr>> upper(s);
    std::string inv = "1/" + coords[s - 1] + "^2";
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j)
            upper[i].push_back(i == j ? Expr::parse(inv, coords, params)
                                      : Expr::literal(0.0, coords, params));
    return ChartManifold(coords, box, upper, params);
}

std::vector<CatalogEntry> build_entries() {
    std::vector<CatalogEntry> entries;

    entries.push_back(CatalogEntry{
        "minkowski",
        "static",
        "flat space-time: f = 1 over a Euclidean base of half-width L",
        {{"s", 3, 1, 5, true}, {"L", 10.0, 1e-6, 1e9, false}},
        {{"ricci_sup", 0.0}, {"scalar", 0.0}},
        [](const ParamMap& p) -> CatalogObject {
            int s = int_param(p, "s");
            ChartManifold base = euclidean_chart(s, p.at("L"));
            base.add_field("f", "1");
            return Spacetime::make_static(std::move(base), "f", {-kInf, kInf});
        }});

    entries.push_back(CatalogEntry{
        "paraboloid-static",
        "static",
        "Euclidean base with convex warping f = |x|^2/2 + eps on a box inscribed in ball(R)",
        {{"s", 2, 1, 5, true}, {"eps", 1.0, 1e-8, 1e6, false}, {"R", 1.0, 1e-8, 1e6, false}},
        {{"hessian_identity", 1.0}, {"q_factor", 1.0}, {"lstar_factor", -1.0}},
        [](const ParamMap& p) -> CatalogObject {
            int s = int_param(p, "s");
            double R = p.at("R");
            auto coords = coord_names("x", s);
            std::vector<Interval> box(s, Interval{-R / std::sqrt(double(s)),
                                                  R / std::sqrt(double(s))});
            ChartManifold base = ChartManifold::euclidean(coords, box, {"eps"});
            base.add_field("f", "0.5*(" + sum_sq(coords) + ") + eps");
            return Spacetime::make_static(std::move(base), "f", {-kInf, kInf},
                                          {{"eps", p.at("eps")}});
        }});

    entries.push_back(CatalogEntry{
        "quadrant-concircular",
        "static",
        "open quadrant with concircular warping u = x1^2+x2^2+x1+x2+1 (char. function 2)",
        {},
        {{"phi", 2.0}, {"q_factor", 2.0}},
        [](const ParamMap&) -> CatalogObject {
            std::vector<std::string> coords = {"x1", "x2"};
            std::vector<Interval> box(2, Interval{0.1, 3.0});
            ChartManifold base = ChartManifold::euclidean(coords, box);
            base.add_field("u", "x1^2 + x2^2 + x1 + x2 + 1");
            return Spacetime::make_static(std::move(base), "u", {-kInf, kInf});
        }});

    entries.push_back(CatalogEntry{
        "full-plane-concircular",
        "static",
        "plane with concircular warping u = x1^2+x2^2+1 (char. function 2)",
        {{"L", 3.0, 1e-6, 1e6, false}},
        {{"phi", 2.0}, {"q_factor", 2.0}},
        [](const ParamMap& p) -> CatalogObject {
            ChartManifold base = euclidean_chart(2, p.at("L"));
            base.add_field("u", "x1^2 + x2^2 + 1");
            return Spacetime::make_static(std::move(base), "u", {-kInf, kInf});
        }});

    entries.push_back(CatalogEntry{
        "sphere",
        "chart",
        "round sphere of the given radius (chart only)",
        {{"s", 2, 1, 3, true}, {"radius", 1.0, 1e-8, 1e8, false}},
        {{"ricci_factor", 1.0}, {"scalar", 2.0}},
        [](const ParamMap& p) -> CatalogObject {
            return sphere_chart(int_param(p, "s"), {"radius"});
        }});

    entries.push_back(CatalogEntry{
        "hyperbolic",
        "chart",
        "hyperbolic space, upper half-space model (chart only)",
        {{"s", 2, 2, 5, true}},
        {{"ricci_factor", -1.0}, {"scalar", -2.0}},
        [](const ParamMap& p) -> CatalogObject { return hyperbolic_chart(int_param(p, "s")); }});

    entries.push_back(CatalogEntry{
        "static-over-sphere",
        "static",
        "constant warping f = c over a round 2-sphere",
        {{"c", 1.0, 1e-8, 1e8, false}, {"radius", 1.0, 1e-8, 1e8, false}},
        {{"skid_residual", 1.0}},
        [](const ParamMap& p) -> CatalogObject {
            ChartManifold base = sphere_chart(2, {"radius", "c"});
            base.add_field("f", "c");
            return Spacetime::make_static(std::move(base), "f", {-kInf, kInf},
                                          {{"radius", p.at("radius")}, {"c", p.at("c")}});
        }});

    entries.push_back(CatalogEntry{
        "static-over-hyperbolic",
        "static",
        "constant warping f = c over the hyperbolic plane",
        {{"c", 1.0, 1e-8, 1e8, false}},
        {{"lstar_psd", 1.0}},
        [](const ParamMap& p) -> CatalogObject {
            ChartManifold base = hyperbolic_chart(2, {"c"});
            base.add_field("f", "c");
            return Spacetime::make_static(std::move(base), "f", {-kInf, kInf},
                                          {{"c", p.at("c")}});
        }});

    entries.push_back(CatalogEntry{
        "einstein-de-sitter",
        "grw",
        "dust cosmology (0,inf) x_{t^(2/3)} R^3; conformal time tau = 3 t^(1/3)",
        {},
        {{"scalar_at_t1", 4.0 / 3.0}},
        [](const ParamMap&) -> CatalogObject {
            ChartManifold base = euclidean_chart(3, 1e11);
            Expr b = Expr::parse("t^(2/3)", {"t"}, {});
            return Spacetime::make_grw(std::move(base), std::move(b), {1e-9, 1e10});
        }});

    entries.push_back(CatalogEntry{
        "interior-max-static",
        "static",
        "warping with a strict interior maximum (f = 2 - tanh(x1)^2): lap f < 0 at 0",
        {{"s", 2, 1, 5, true}},
        {{"lap_at_origin", -2.0}, {"ric_tt_at_origin", -4.0}},
        [](const ParamMap& p) -> CatalogObject {
            ChartManifold base = euclidean_chart(int_param(p, "s"), 3.0);
            base.add_field("f", "2 - tanh(x1)^2");
            return Spacetime::make_static(std::move(base), "f", {-kInf, kInf});
        }});

    return entries;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = build_entries();
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : catalog_entries())
        if (e.name == name) return e;
    throw UnknownEntry(name);
}

CatalogObject catalog_get(const std::string& name, const ParamMap& overrides) {
    const CatalogEntry& e = catalog_entry(name);
    ParamMap merged;
    for (const auto& ps : e.params) merged[ps.name] = ps.def;
    for (const auto& [k, v] : overrides) {
        auto it = merged.find(k);
        if (it == merged.end())
            throw BadParam("entry '" + name + "' has no parameter '" + k + "'");
        const ParamSchema* schema = nullptr;
        for (const auto& ps : e.params)
            if (ps.name == k) schema = &ps;
        if (v < schema->min || v > schema->max)
            throw BadParam("parameter '" + k + "' out of range for entry '" + name + "'");
        if (schema->integral && std::abs(v - std::llround(v)) > 1e-9)
            throw BadParam("parameter '" + k + "' must be an integer");
        it->second = v;
    }
    CatalogObject obj = e.build(merged);
    if (auto* st = std::get_if<Spacetime>(&obj)) {
        st->validate();
    } else {
        std::get<ChartManifold>(obj).validate_spd(merged);
    }
    return obj;
}

Spacetime catalog_spacetime(const std::string& name, const ParamMap& overrides) {
    CatalogObject obj = catalog_get(name, overrides);
    if (auto* st = std::get_if<Spacetime>(&obj)) return std::move(*st);
    throw WrongKind("catalog entry '" + name + "' is a chart, not a space-time");
}

}  // namespace ssst

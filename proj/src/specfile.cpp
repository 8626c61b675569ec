#include "ssst/specfile.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ssst/catalog.hpp"

namespace ssst {

namespace {

double interval_end(const Json& v, const char* which) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw SpecError(std::string("interval ") + which + " must be a number or \"+-inf\"");
}

const Json& require(const Json& j, const char* key) {
    if (!j.contains(key)) throw SpecError(std::string("spec is missing \"") + key + "\"");
    return j.at(key);
}

}  // namespace

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

Json canonical_spec_json(const Spacetime& st) {
    Json j;
    j["kind"] = st.is_static() ? "static" : "grw";
    auto end_json = [](double v) -> Json {
        if (v == std::numeric_limits<double>::infinity()) return "inf";
        if (v == -std::numeric_limits<double>::infinity()) return "-inf";
        return v;
    };
    j["interval"] = Json::array({end_json(st.interval().lo), end_json(st.interval().hi)});
    const ChartManifold& base = st.base();
    j["dim"] = base.dim();
    j["coords"] = base.coords();
    Json dom = Json::array();
    for (const auto& iv : base.domain()) dom.push_back(Json::array({end_json(iv.lo), end_json(iv.hi)}));
    j["domain"] = dom;
    Json metric = Json::array();
    for (int i = 0; i < base.dim(); ++i) {
        Json row = Json::array();
        for (int k = i; k < base.dim(); ++k) row.push_back(base.metric_expr(i, k).str());
        metric.push_back(row);
    }
    j["metric"] = metric;
    j["warping"] = st.is_static() ? base.field(st.warp_field()).str() : st.grw_warp().str();
    Json params = Json::object();
    for (const auto& [k, v] : st.default_params()) params[k] = v;
    j["params"] = params;
    return j;
}

Spacetime spacetime_from_json(const Json& j) {
    if (!j.is_object()) throw SpecError("spec root must be a JSON object");
    std::string kind = require(j, "kind").get<std::string>();
    if (kind != "static" && kind != "grw")
        throw SpecError("\"kind\" must be \"static\" or \"grw\"");

    const Json& ij = require(j, "interval");
    if (!ij.is_array() || ij.size() != 2) throw SpecError("\"interval\" must be [t1, t2]");
    Interval interval{interval_end(ij[0], "start"), interval_end(ij[1], "end")};
    if (!(interval.lo < interval.hi)) throw SpecError("interval must be nonempty");

    int s = require(j, "dim").get<int>();
    if (s < 1 || s > kMaxDim - 1) throw SpecError("\"dim\" out of supported range");

    const Json& cj = require(j, "coords");
    if (!cj.is_array() || static_cast<int>(cj.size()) != s)
        throw SpecError("\"coords\" must list exactly dim names");
    std::vector<std::string> coords;
    for (const auto& c : cj) coords.push_back(c.get<std::string>());

    const Json& dj = require(j, "domain");
    if (!dj.is_array() || static_cast<int>(dj.size()) != s)
        throw SpecError("\"domain\" must list one [lo, hi] per coordinate");
    std::vector<Interval> domain;
    for (const auto& iv : dj) {
        if (!iv.is_array() || iv.size() != 2) throw SpecError("domain entries are [lo, hi]");
        domain.push_back({interval_end(iv[0], "lo"), interval_end(iv[1], "hi")});
    }

    ParamMap params;
    std::vector<std::string> param_names;
    if (j.contains("params")) {
        for (const auto& [k, v] : j.at("params").items()) {
            params[k] = v.get<double>();
            param_names.push_back(k);
        }
    }

    const Json& mj = require(j, "metric");
    if (!mj.is_array() || static_cast<int>(mj.size()) != s)
        throw SpecError("\"metric\" must have dim rows (upper triangle)");
    std::vector<std::vector<Expr>> upper(s);
    for (int i = 0; i < s; ++i) {
        const Json& row = mj[i];
        if (!row.is_array() || static_cast<int>(row.size()) != s - i)
            throw SpecError("metric row " + std::to_string(i) + " must have dim-" +
                            std::to_string(i) + " entries");
        for (const auto& cell : row)
            upper[i].push_back(Expr::parse(cell.get<std::string>(), coords, param_names));
    }

    ChartManifold base(coords, domain, upper, param_names);
    std::string warp_text = require(j, "warping").get<std::string>();

    Spacetime st = [&]() {
        if (kind == "static") {
            base.add_field("f", Expr::parse(warp_text, coords, param_names));
            return Spacetime::make_static(std::move(base), "f", interval, params);
        }
        Expr b = Expr::parse(warp_text, {"t"}, param_names);
        return Spacetime::make_grw(std::move(base), std::move(b), interval, params);
    }();
    st.validate();
    return st;
}

LoadedSpec resolve_spec(const std::string& arg) {
    LoadedSpec out;
    out.source = arg;
    if (arg.rfind("catalog:", 0) == 0) {
        std::string rest = arg.substr(8);
        std::string name = rest;
        ParamMap overrides;
        auto qpos = rest.find('?');
        if (qpos != std::string::npos) {
            name = rest.substr(0, qpos);
            std::string query = rest.substr(qpos + 1);
            std::istringstream qs(query);
            std::string item;
            while (std::getline(qs, item, ',')) {
                auto eq = item.find('=');
                if (eq == std::string::npos)
                    throw SpecError("catalog parameter overrides look like name=value");
                overrides[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            }
        }
        out.spacetime = catalog_spacetime(name, overrides);
    } else {
        std::ifstream in(arg);
        if (!in) throw SpecError("cannot open spec file '" + arg + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        Json j = Json::parse(buf.str(), nullptr, true, true);  // allow comments
        out.spacetime = spacetime_from_json(j);
    }
    out.canonical = canonical_spec_json(out.spacetime);
    out.digest = fnv1a64_hex(out.canonical.dump());
    return out;
}

}  // namespace ssst

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "ssst/expr.hpp"
#include "ssst/rng.hpp"

using namespace ssst;

namespace {
Vec pt(std::initializer_list<double> xs) {
    Vec v(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}
}  // namespace

TEST_CASE("parse and evaluate polynomials") {
    Expr e = Expr::parse("x1^2 + x2^2", {"x1", "x2"}, {});
    CHECK(e.eval(pt({1, 2}), {}) == doctest::Approx(5.0));

    Expr w = Expr::parse("0.5*(x1^2+x2^2) + eps", {"x1", "x2"}, {"eps"});
    CHECK(w.eval(pt({1, 1}), {{"eps", 1.0}}) == doctest::Approx(2.0));

    Expr u = Expr::parse("x1^2+x2^2+x1+x2+1", {"x1", "x2"}, {});
    CHECK(u.eval(pt({1, 1}), {}) == doctest::Approx(5.0));
}

TEST_CASE("syntax and symbol errors carry positions") {
    CHECK_THROWS_AS(Expr::parse("", {"x"}, {}), SyntaxError);
    CHECK_THROWS_AS(Expr::parse("x +", {"x"}, {}), SyntaxError);
    CHECK_THROWS_AS(Expr::parse("2 x", {"x"}, {}), SyntaxError);  // implicit product
    CHECK_THROWS_AS(Expr::parse("x1 + y", {"x1"}, {}), UnknownSymbol);
    CHECK_THROWS_AS(Expr::parse("abs(x)", {"x"}, {}), UnknownSymbol);
    try {
        Expr::parse("x1 + (x2", {"x1", "x2"}, {});
        CHECK(false);
    } catch (const SyntaxError& err) {
        CHECK(err.offset == 8);
    }
    CHECK_THROWS_AS(Expr::parse("x", {"x"}, {"x"}), SpecError);  // coord/param clash
}

TEST_CASE("jet values match analytic derivatives") {
    SUBCASE("bilinear") {
        Expr e = Expr::parse("x1*x2", {"x1", "x2"}, {});
        Jet2 j = e.eval_jet2(pt({3, 4}), {});
        CHECK(j.v == doctest::Approx(12.0));
        CHECK(j.g[0] == doctest::Approx(4.0));
        CHECK(j.g[1] == doctest::Approx(3.0));
        CHECK(j.h(0, 1) == doctest::Approx(1.0));
        CHECK(j.h(0, 0) == doctest::Approx(0.0));
    }
    SUBCASE("paraboloid warping") {
        Expr e = Expr::parse("0.5*(x1^2+x2^2)+eps", {"x1", "x2"}, {"eps"});
        Jet2 j = e.eval_jet2(pt({1, 1}), {{"eps", 1.0}});
        CHECK(j.v == doctest::Approx(2.0));
        CHECK(j.g[0] == doctest::Approx(1.0));
        CHECK(j.g[1] == doctest::Approx(1.0));
        CHECK(j.h(0, 0) == doctest::Approx(1.0));
        CHECK(j.h(1, 1) == doctest::Approx(1.0));
        CHECK(j.h(0, 1) == doctest::Approx(0.0));
    }
    SUBCASE("exp times sin against finite differences") {
        Expr e = Expr::parse("exp(x1)*sin(x2)", {"x1", "x2"}, {});
        Vec x = pt({0.0, std::numbers::pi / 2});
        Jet2 j = e.eval_jet2(x, {});
        auto f = [&](const Vec& p) { return e.eval(p, {}); };
        Vec g = oracles::fd_grad(f, x);
        Mat H = oracles::fd_hess(f, x);
        for (int i = 0; i < 2; ++i) CHECK(j.g[i] == doctest::Approx(g[i]).epsilon(1e-6));
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
                CHECK(j.h(i, k) == doctest::Approx(H(i, k)).epsilon(1e-6));
    }
}

TEST_CASE("constant jets are exactly constant") {
    Expr e = Expr::parse("exp(eps)*2 + eps^2", {"x1"}, {"eps"});
    Jet2 j = e.eval_jet2(pt({0.7}), {{"eps", 0.3}});
    CHECK(j.g.isZero(0.0));
    CHECK(j.h.isZero(0.0));
    CHECK(j.is_constant());
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(Expr::parse("log(x)", {"x"}, {}).eval_jet2(pt({-1.0}), {}), DomainError);
    CHECK_THROWS_AS(Expr::parse("sqrt(x)", {"x"}, {}).eval_jet2(pt({0.0}), {}), DomainError);
    CHECK_THROWS_AS(Expr::parse("1/x", {"x"}, {}).eval_jet2(pt({0.0}), {}), DomainError);
    CHECK_THROWS_AS(Expr::parse("x^0.5", {"x"}, {}).eval_jet2(pt({-2.0}), {}), DomainError);
    // integer powers of negative bases are fine
    CHECK(Expr::parse("x^3", {"x"}, {}).eval_jet2(pt({-2.0}), {}).v == doctest::Approx(-8.0));
    CHECK(Expr::parse("x^-2", {"x"}, {}).eval(pt({-2.0}), {}) == doctest::Approx(0.25));
    // rational exponents written as literal quotients
    CHECK(Expr::parse("t^(2/3)", {"t"}, {}).eval(pt({8.0}), {}) == doctest::Approx(4.0));
}

TEST_CASE("power tower is right-associative") {
    Expr e = Expr::parse("2^3^2", {}, {});
    CHECK(e.eval(Vec(0), {}) == doctest::Approx(512.0));
}

namespace {

// Random smooth expression over x1, x2 that is safe to evaluate everywhere.
std::string random_expr(Rng& rng) {
    std::ostringstream os;
    int terms = 1 + static_cast<int>(rng.uniform01() * 3);
    for (int t = 0; t < terms; ++t) {
        if (t) os << (rng.uniform01() < 0.5 ? " + " : " - ");
        double c = std::round((rng.uniform01() * 4 - 2) * 8) / 8.0;
        os << (std::abs(c) < 0.125 ? 0.5 : c);
        int p1 = static_cast<int>(rng.uniform01() * 3);
        int p2 = static_cast<int>(rng.uniform01() * 3);
        if (p1) os << "*x1^" << p1;
        if (p2) os << "*x2^" << p2;
        double pick = rng.uniform01();
        if (pick < 0.25)
            os << "*sin(x1)";
        else if (pick < 0.5)
            os << "*cos(x2)";
        else if (pick < 0.65)
            os << "*exp(0.3*x1)";
        else if (pick < 0.8)
            os << "*tanh(x2)";
    }
    return os.str();
}

}  // namespace

TEST_CASE("finite-difference agreement on a random corpus") {
    Rng rng(20240814);
    for (int k = 0; k < 24; ++k) {
        std::string text = random_expr(rng);
        CAPTURE(text);
        Expr e = Expr::parse(text, {"x1", "x2"}, {});
        auto f = [&](const Vec& p) { return e.eval(p, {}); };
        for (int q = 0; q < 10; ++q) {
            Vec x = pt({rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)});
            Jet2 j = e.eval_jet2(x, {});
            Vec g = oracles::fd_grad(f, x);
            Mat H = oracles::fd_hess(f, x);
            double scale = 1.0 + std::abs(j.v) + j.g.cwiseAbs().maxCoeff() +
                           j.h.cwiseAbs().maxCoeff();
            CHECK((j.g - g).cwiseAbs().maxCoeff() / scale <= 1e-6);
            CHECK(ssst::sup_norm(Mat(j.h - H)) / scale <= 1e-6);
        }
    }
}

TEST_CASE("jet linearity and product rule") {
    Rng rng(77);
    for (int k = 0; k < 12; ++k) {
        Expr e1 = Expr::parse(random_expr(rng), {"x1", "x2"}, {});
        Expr e2 = Expr::parse(random_expr(rng), {"x1", "x2"}, {});
        Vec x = pt({rng.uniform(-1, 1), rng.uniform(-1, 1)});
        Jet2 j1 = e1.eval_jet2(x, {});
        Jet2 j2 = e2.eval_jet2(x, {});

        // linearity through the AST combinators: 2.5*e1 + e2
        Expr lin = Expr::literal(2.5, {"x1", "x2"}, {}) * e1 + e2;
        Jet2 jl = lin.eval_jet2(x, {});
        double scale = 1.0 + std::abs(jl.v) + jl.g.cwiseAbs().maxCoeff();
        CHECK(std::abs(jl.v - (2.5 * j1.v + j2.v)) <= 1e-14 * scale);
        CHECK((jl.g - (2.5 * j1.g + j2.g)).cwiseAbs().maxCoeff() <= 1e-13 * scale);
        CHECK(ssst::sup_norm(Mat(jl.h - (2.5 * j1.h + j2.h))) <= 1e-13 * scale);

        // product rule
        Jet2 jp = (e1 * e2).eval_jet2(x, {});
        Vec want_g = j1.v * j2.g + j2.v * j1.g;
        CHECK((jp.g - want_g).cwiseAbs().maxCoeff() <=
              1e-13 * (1.0 + want_g.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("print-parse round trip evaluates identically") {
    Rng rng(4242);
    for (int k = 0; k < 20; ++k) {
        std::string text = random_expr(rng);
        Expr e = Expr::parse(text, {"x1", "x2"}, {});
        Expr e2 = Expr::parse(e.str(), {"x1", "x2"}, {});
        for (int q = 0; q < 5; ++q) {
            Vec x = pt({rng.uniform(-2, 2), rng.uniform(-2, 2)});
            CHECK(e.eval(x, {}) == doctest::Approx(e2.eval(x, {})).epsilon(1e-15));
        }
    }
    // hessians exactly symmetric by construction
    Expr e = Expr::parse("exp(x1*x2)*sin(x1+2*x2)/(1+x1^2)", {"x1", "x2"}, {});
    Jet2 j = e.eval_jet2(pt({0.3, -0.7}), {});
    CHECK(j.h(0, 1) == j.h(1, 0));
}

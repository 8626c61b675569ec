#pragma once

#include <cmath>
#include <concepts>

#include "ssst/errors.hpp"
#include "ssst/linalg.hpp"

namespace ssst {

// Order-2 truncated Taylor jet: value, gradient and Hessian with respect to
// the chart coordinates. All arithmetic propagates exact chain rules, so the
// Hessian is symmetric by construction (every update is of the form
// a*h + (g1 g2^T + g2 g1^T) whose entries are componentwise symmetric).
struct Jet2 {
    double v = 0.0;
    Vec g;
    Mat h;

    Jet2() = default;
    Jet2(double value, int dim) : v(value), g(Vec::Zero(dim)), h(Mat::Zero(dim, dim)) {}

    int dim() const { return static_cast<int>(g.size()); }
    bool is_constant() const { return g.isZero(0.0) && h.isZero(0.0); }

    static Jet2 constant(double c, int dim) { return Jet2(c, dim); }
    static Jet2 coordinate(int slot, double x, int dim) {
        Jet2 j(x, dim);
        j.g[slot] = 1.0;
        return j;
    }
};

// Order-1 jet (value + gradient). Cheaper evaluation path for code that only
// needs Christoffel symbols (geodesic right-hand sides).
struct Jet1 {
    double v = 0.0;
    Vec g;

    Jet1() = default;
    Jet1(double value, int dim) : v(value), g(Vec::Zero(dim)) {}

    int dim() const { return static_cast<int>(g.size()); }
    bool is_constant() const { return g.isZero(0.0); }

    static Jet1 constant(double c, int dim) { return Jet1(c, dim); }
    static Jet1 coordinate(int slot, double x, int dim) {
        Jet1 j(x, dim);
        j.g[slot] = 1.0;
        return j;
    }
};

// Order-0 "jet": plain value. Lets the expression evaluator be written once.
struct Jet0 {
    double v = 0.0;

    Jet0() = default;
    Jet0(double value, int) : v(value) {}

    bool is_constant() const { return false; }  // dependence unknown at order 0

    static Jet0 constant(double c, int dim) { return Jet0(c, dim); }
    static Jet0 coordinate(int, double x, int dim) { return Jet0(x, dim); }
};

// ---- addition / subtraction / negation ----

inline Jet0 operator+(const Jet0& a, const Jet0& b) { return {a.v + b.v, 0}; }
inline Jet0 operator-(const Jet0& a, const Jet0& b) { return {a.v - b.v, 0}; }
inline Jet0 operator-(const Jet0& a) { return {-a.v, 0}; }

inline Jet1 operator+(const Jet1& a, const Jet1& b) {
    Jet1 r = a;
    r.v += b.v;
    r.g += b.g;
    return r;
}
inline Jet1 operator-(const Jet1& a, const Jet1& b) {
    Jet1 r = a;
    r.v -= b.v;
    r.g -= b.g;
    return r;
}
inline Jet1 operator-(const Jet1& a) {
    Jet1 r = a;
    r.v = -r.v;
    r.g = -r.g;
    return r;
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
    Jet2 r = a;
    r.v += b.v;
    r.g += b.g;
    r.h += b.h;
    return r;
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
    Jet2 r = a;
    r.v -= b.v;
    r.g -= b.g;
    r.h -= b.h;
    return r;
}
inline Jet2 operator-(const Jet2& a) {
    Jet2 r = a;
    r.v = -r.v;
    r.g = -r.g;
    r.h = -r.h;
    return r;
}

// ---- multiplication ----

inline Jet0 operator*(const Jet0& a, const Jet0& b) { return {a.v * b.v, 0}; }

inline Jet1 operator*(const Jet1& a, const Jet1& b) {
    Jet1 r;
    r.v = a.v * b.v;
    r.g = a.v * b.g + b.v * a.g;
    return r;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.v = a.v * b.v;
    r.g = a.v * b.g + b.v * a.g;
    r.h = a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose();
    return r;
}

// ---- univariate composition: phi(value), phi'(value), phi''(value) ----

inline Jet0 compose(const Jet0&, double f0, double, double) { return {f0, 0}; }

inline Jet1 compose(const Jet1& u, double f0, double f1, double) {
    Jet1 r;
    r.v = f0;
    r.g = f1 * u.g;
    return r;
}

inline Jet2 compose(const Jet2& u, double f0, double f1, double f2) {
    Jet2 r;
    r.v = f0;
    r.g = f1 * u.g;
    r.h = f1 * u.h + f2 * (u.g * u.g.transpose());
    return r;
}

// ---- division ----

template <class J>
concept JetType = std::same_as<J, Jet0> || std::same_as<J, Jet1> || std::same_as<J, Jet2>;

template <JetType J>
inline J jet_recip(const J& u) {
    if (u.v == 0.0) throw DomainError("division by zero");
    double iv = 1.0 / u.v;
    return compose(u, iv, -iv * iv, 2.0 * iv * iv * iv);
}

template <JetType J>
inline J operator/(const J& a, const J& b) {
    return a * jet_recip(b);
}

// ---- elementary functions ----

template <JetType J>
inline J jet_exp(const J& u) {
    double e = std::exp(u.v);
    return compose(u, e, e, e);
}

template <JetType J>
inline J jet_log(const J& u) {
    if (!(u.v > 0.0)) throw DomainError("log of nonpositive argument");
    double iv = 1.0 / u.v;
    return compose(u, std::log(u.v), iv, -iv * iv);
}

template <JetType J>
inline J jet_sqrt(const J& u) {
    if (!(u.v > 0.0)) throw DomainError("sqrt of nonpositive argument");
    double s = std::sqrt(u.v);
    return compose(u, s, 0.5 / s, -0.25 / (s * u.v));
}

template <JetType J>
inline J jet_sin(const J& u) {
    return compose(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v));
}

template <JetType J>
inline J jet_cos(const J& u) {
    return compose(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v));
}

template <JetType J>
inline J jet_sinh(const J& u) {
    return compose(u, std::sinh(u.v), std::cosh(u.v), std::sinh(u.v));
}

template <JetType J>
inline J jet_cosh(const J& u) {
    return compose(u, std::cosh(u.v), std::sinh(u.v), std::cosh(u.v));
}

template <JetType J>
inline J jet_tanh(const J& u) {
    double t = std::tanh(u.v);
    double sech2 = 1.0 - t * t;
    return compose(u, t, sech2, -2.0 * t * sech2);
}

// u^k for integer k; valid for any base sign (except 0 with k < 0).
template <JetType J>
inline J jet_pow_int(const J& u, long long k) {
    if (k == 0) return J::constant(1.0, jet_dim(u));
    if (u.v == 0.0) {
        if (k < 0) throw DomainError("zero base raised to a negative power");
        // k >= 1: value and first derivative vanish for k >= 2.
        double f0 = 0.0, f1 = (k == 1) ? 1.0 : 0.0, f2 = (k == 2) ? 2.0 : 0.0;
        return compose(u, f0, f1, f2);
    }
    double kk = static_cast<double>(k);
    double f0 = std::pow(u.v, kk);
    double f1 = kk * std::pow(u.v, kk - 1.0);
    double f2 = kk * (kk - 1.0) * std::pow(u.v, kk - 2.0);
    return compose(u, f0, f1, f2);
}

// u^q for constant real exponent q; base must be positive.
template <JetType J>
inline J jet_pow_real(const J& u, double q) {
    if (!(u.v > 0.0)) throw DomainError("fractional power of a nonpositive base");
    double f0 = std::pow(u.v, q);
    double f1 = q * f0 / u.v;
    double f2 = q * (q - 1.0) * f0 / (u.v * u.v);
    return compose(u, f0, f1, f2);
}

inline int jet_dim(const Jet0&) { return 0; }
inline int jet_dim(const Jet1& j) { return j.dim(); }
inline int jet_dim(const Jet2& j) { return j.dim(); }

// General power. A constant exponent that is (numerically) an integer uses
// the sign-agnostic integer rule; everything else goes through exp(b log a),
// which requires a positive base.
template <JetType J>
inline J jet_pow(const J& a, const J& b) {
    if (b.is_constant()) {
        double q = b.v;
        double r = std::nearbyint(q);
        if (std::abs(q - r) <= 1e-12 && std::abs(r) < 1e15) {
            return jet_pow_int(a, static_cast<long long>(r));
        }
        return jet_pow_real(a, q);
    }
    return jet_exp(b * jet_log(a));
}

// Jet0 exponents cannot be identified as constant; resolve by value.
inline Jet0 jet_pow(const Jet0& a, const Jet0& b) {
    double q = b.v;
    double r = std::nearbyint(q);
    if (std::abs(q - r) <= 1e-12 && std::abs(r) < 1e15) {
        return jet_pow_int(a, static_cast<long long>(r));
    }
    if (!(a.v > 0.0)) throw DomainError("fractional power of a nonpositive base");
    return {std::pow(a.v, q), 0};
}

}  // namespace ssst

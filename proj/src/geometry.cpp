#include "ssst/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace ssst {

CurvatureData curvature_from_jets(const std::vector<Jet2>& comp, int n, const Vec& point) {
    CurvatureData out;
    out.point = point;
    out.g = Mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.g(i, j) = comp[i * n + j].v;

    out.g_inv = out.g.inverse();

    // dg(k,i,j) = d_k g_ij ; ddg(m,k,i,j) = d_m d_k g_ij
    auto dg = [&](int k, int i, int j) { return comp[i * n + j].g[k]; };
    auto ddg = [&](int m, int k, int i, int j) { return comp[i * n + j].h(m, k); };

    // C(l,i,j) = d_i g_jl + d_j g_il - d_l g_ij
    Tensor3 C(n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) C(l, i, j) = dg(i, j, l) + dg(j, i, l) - dg(l, i, j);

    out.christoffel = Tensor3(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double sum = 0.0;
                for (int l = 0; l < n; ++l) sum += out.g_inv(k, l) * C(l, i, j);
                out.christoffel(k, i, j) = out.christoffel(k, j, i) = 0.5 * sum;
            }

    // d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}
    std::vector<Mat> dginv(n);
    for (int m = 0; m < n; ++m) {
        Mat dgm(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) dgm(a, b) = dg(m, a, b);
        dginv[m] = -(out.g_inv * dgm * out.g_inv);
    }

    out.dchristoffel = Tensor4(n);
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    double sum = 0.0;
                    for (int l = 0; l < n; ++l) {
                        double dC = ddg(m, i, j, l) + ddg(m, j, i, l) - ddg(m, l, i, j);
                        sum += dginv[m](k, l) * C(l, i, j) + out.g_inv(k, l) * dC;
                    }
                    out.dchristoffel(m, k, i, j) = out.dchristoffel(m, k, j, i) = 0.5 * sum;
                }

    // R^l_{ijk} = d_j Gamma^l_{ki} - d_k Gamma^l_{ji}
    //             + Gamma^l_{ja} Gamma^a_{ki} - Gamma^l_{ka} Gamma^a_{ji}
    out.riemann = Tensor4(n);
    const Tensor3& G = out.christoffel;
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double r = out.dchristoffel(j, l, k, i) - out.dchristoffel(k, l, j, i);
                    for (int a = 0; a < n; ++a)
                        r += G(l, j, a) * G(a, k, i) - G(l, k, a) * G(a, j, i);
                    out.riemann(l, i, j, k) = r;
                }

    // Ric_ik = R^j_{ijk}
    out.ricci = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double r = 0.0;
            for (int j = 0; j < n; ++j) r += out.riemann(j, i, j, k);
            out.ricci(i, k) = r;
        }

    out.scalar = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) out.scalar += out.g_inv(i, k) * out.ricci(i, k);

    return out;
}

void christoffel_from_jets(const std::vector<Jet1>& comp, int n, Tensor3& gamma, Mat* g_out,
                           Mat* g_inv_out) {
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = comp[i * n + j].v;
    Mat g_inv = g.inverse();

    auto dg = [&](int k, int i, int j) { return comp[i * n + j].g[k]; };

    gamma = Tensor3(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double sum = 0.0;
                for (int l = 0; l < n; ++l)
                    sum += g_inv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
                gamma(k, i, j) = gamma(k, j, i) = 0.5 * sum;
            }
    if (g_out) *g_out = g;
    if (g_inv_out) *g_inv_out = g_inv;
}

namespace {

void check_spd(const Mat& g, const Vec& point) {
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    double lmin = es.eigenvalues().minCoeff();
    if (!(lmin > 0.0)) {
        std::ostringstream os;
        os << "metric not positive definite at (";
        for (int i = 0; i < point.size(); ++i) os << (i ? ", " : "") << point[i];
        os << "), smallest eigenvalue " << lmin;
        throw MetricError(os.str());
    }
}

}  // namespace

GeometryAt geometry_at(const ChartManifold& m, const Vec& point, const ParamMap& params) {
    m.require_inside(point);
    auto jets = m.metric_jet2(point, params);
    const int s = m.dim();
    {
        Mat g(s, s);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) g(i, j) = jets[i * s + j].v;
        check_spd(g, point);
    }
    CurvatureData c = curvature_from_jets(jets, s, point);
    GeometryAt out;
    out.point = point;
    out.g = std::move(c.g);
    out.g_inv = std::move(c.g_inv);
    out.christoffel = c.christoffel;
    out.riemann = c.riemann;
    out.ricci = std::move(c.ricci);
    out.scalar = c.scalar;
    return out;
}

ScalarCalculusAt scalar_calculus_at(const ChartManifold& m, const std::string& field,
                                    const Vec& point, const ParamMap& params) {
    GeometryAt geo = geometry_at(m, point, params);
    Jet2 f = m.field(field).eval_jet2(point, params);
    const int s = m.dim();

    ScalarCalculusAt out;
    out.point = point;
    out.value = f.v;
    out.grad = f.g;
    out.hessian = Mat(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            double corr = 0.0;
            for (int k = 0; k < s; ++k) corr += geo.christoffel(k, i, j) * f.g[k];
            out.hessian(i, j) = f.h(i, j) - corr;
        }
    out.laplacian = (geo.g_inv.cwiseProduct(out.hessian)).sum();
    return out;
}

Mat q_tensor_at(const ChartManifold& m, const std::string& field, const Vec& point,
                const ParamMap& params) {
    ScalarCalculusAt sc = scalar_calculus_at(m, field, point, params);
    Mat g = m.metric_value(point, params);
    return sc.laplacian * g - sc.hessian;
}

Mat lstar_at(const ChartManifold& m, const std::string& field, const Vec& point,
             const ParamMap& params) {
    GeometryAt geo = geometry_at(m, point, params);
    ScalarCalculusAt sc = scalar_calculus_at(m, field, point, params);
    return -sc.value * geo.ricci - sc.laplacian * geo.g + sc.hessian;
}

const char* def_class_name(DefClass c) {
    switch (c) {
        case DefClass::PositiveDefinite: return "positive-definite";
        case DefClass::PositiveSemi: return "positive-semidefinite";
        case DefClass::NegativeDefinite: return "negative-definite";
        case DefClass::NegativeSemi: return "negative-semidefinite";
        case DefClass::Indefinite: return "indefinite";
        case DefClass::Zero: return "zero";
    }
    return "?";
}

Definiteness definiteness(const Mat& t, double tol) {
    double scale = 1.0 + sup_norm(t);
    if (sup_norm(Mat(t - t.transpose())) > 1e-10 * scale)
        throw Error("definiteness: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (t + t.transpose())));

    Definiteness out;
    out.eigenvalues = es.eigenvalues();
    out.tol = tol;
    double thr = tol * scale;
    int pos = 0, neg = 0, zero = 0;
    for (int i = 0; i < out.eigenvalues.size(); ++i) {
        double l = out.eigenvalues[i];
        if (l > thr)
            ++pos;
        else if (l < -thr)
            ++neg;
        else
            ++zero;
    }
    if (pos == 0 && neg == 0)
        out.cls = DefClass::Zero;
    else if (neg == 0)
        out.cls = zero == 0 ? DefClass::PositiveDefinite : DefClass::PositiveSemi;
    else if (pos == 0)
        out.cls = zero == 0 ? DefClass::NegativeDefinite : DefClass::NegativeSemi;
    else
        out.cls = DefClass::Indefinite;
    return out;
}

Vec divergence_q_fd(const ChartManifold& m, const std::string& field, const Vec& point,
                    const ParamMap& params, double step) {
    const int s = m.dim();
    GeometryAt geo = geometry_at(m, point, params);

    // dQ[k] = central difference of the Q field along coordinate k
    std::vector<Mat> dQ(s);
    for (int k = 0; k < s; ++k) {
        double h = step * (1.0 + std::abs(point[k]));
        Vec pp = point, pm = point;
        pp[k] += h;
        pm[k] -= h;
        if (!m.contains(pp) || !m.contains(pm))
            throw DomainError("divergence stencil leaves the chart domain");
        dQ[k] = (q_tensor_at(m, field, pp, params) - q_tensor_at(m, field, pm, params)) / (2.0 * h);
    }

    Mat Q = q_tensor_at(m, field, point, params);

    // (div Q)_j = g^{ik} nabla_i Q_kj,
    // nabla_i Q_kj = d_i Q_kj - Gamma^l_{ik} Q_lj - Gamma^l_{ij} Q_kl
    Vec div = Vec::Zero(s);
    for (int j = 0; j < s; ++j) {
        double sum = 0.0;
        for (int i = 0; i < s; ++i)
            for (int k = 0; k < s; ++k) {
                double cov = dQ[i](k, j);
                for (int l = 0; l < s; ++l)
                    cov -= geo.christoffel(l, i, k) * Q(l, j) + geo.christoffel(l, i, j) * Q(k, l);
                sum += geo.g_inv(i, k) * cov;
            }
        div[j] = sum;
    }
    return div;
}

}  // namespace ssst

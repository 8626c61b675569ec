#pragma once

// Test-only finite-difference oracles, independent of the jet pipeline:
// derivatives come from value-only evaluation on stencils.

#include <cmath>
#include <functional>

#include "ssst/chart.hpp"
#include "ssst/linalg.hpp"

namespace oracles {

using ssst::Mat;
using ssst::Vec;

inline Vec fd_grad(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-5) {
    Vec g(x.size());
    for (int i = 0; i < x.size(); ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

inline Mat fd_hess(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-4) {
    const int n = static_cast<int>(x.size());
    Mat H(n, n);
    double f0 = f(x);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        H(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
        for (int j = i + 1; j < n; ++j) {
            Vec xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[i] += h;
            xpp[j] += h;
            xpm[i] += h;
            xpm[j] -= h;
            xmp[i] -= h;
            xmp[j] += h;
            xmm[i] -= h;
            xmm[j] -= h;
            H(i, j) = H(j, i) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h);
        }
    }
    return H;
}

// Curvature by nested finite differences of the metric values only. Slow and
// mildly accurate; used to cross-check the analytic-jet pipeline.
struct FdCurvature {
    Mat ricci;
    double scalar = 0.0;
};

inline FdCurvature fd_curvature(const std::function<Mat(const Vec&)>& metric, const Vec& x,
                                double h = 1e-5) {
    const int n = static_cast<int>(x.size());
    auto gamma_at = [&](const Vec& p) {
        Mat g = metric(p);
        Mat gi = g.inverse();
        ssst::Tensor3 G(n);
        std::vector<Mat> dg(n);
        for (int k = 0; k < n; ++k) {
            Vec pp = p, pm = p;
            pp[k] += h;
            pm[k] -= h;
            dg[k] = (metric(pp) - metric(pm)) / (2.0 * h);
        }
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double sum = 0.0;
                    for (int l = 0; l < n; ++l)
                        sum += gi(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                    G(k, i, j) = 0.5 * sum;
                }
        return G;
    };

    ssst::Tensor3 G0 = gamma_at(x);
    std::vector<ssst::Tensor3> dG(n, ssst::Tensor3(n));
    for (int m = 0; m < n; ++m) {
        Vec xp = x, xm = x;
        xp[m] += h;
        xm[m] -= h;
        ssst::Tensor3 Gp = gamma_at(xp), Gm = gamma_at(xm);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) dG[m](k, i, j) = (Gp(k, i, j) - Gm(k, i, j)) / (2.0 * h);
    }

    FdCurvature out;
    out.ricci = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double r = 0.0;
            for (int j = 0; j < n; ++j) {
                r += dG[j](j, k, i) - dG[k](j, j, i);
                for (int a = 0; a < n; ++a)
                    r += G0(j, j, a) * G0(a, k, i) - G0(j, k, a) * G0(a, j, i);
            }
            out.ricci(i, k) = r;
        }
    Mat gi = metric(x).inverse();
    out.scalar = (gi.cwiseProduct(out.ricci)).sum();
    return out;
}

}  // namespace oracles

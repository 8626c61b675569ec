#pragma once

#include "ssst/chart.hpp"

namespace ssst {

// Curvature data at a point, signature-agnostic. The same pipeline serves
// the Riemannian base and the Lorentzian product chart.
struct CurvatureData {
    Vec point;
    Mat g;
    Mat g_inv;
    Tensor3 christoffel;  // Gamma^k_{ij}, symmetric in (i,j)
    Tensor4 dchristoffel; // d_m Gamma^k_{ij} stored as (m,k,i,j)
    Tensor4 riemann;      // R^l_{ijk}
    Mat ricci;
    double scalar = 0.0;
};

// Builds Gamma, dGamma, Riemann, Ricci, scalar from order-2 metric jets.
// comp is the full symmetric matrix of jets, comp[i*n+j].
CurvatureData curvature_from_jets(const std::vector<Jet2>& comp, int n, const Vec& point);

// Christoffel symbols only (order-1 jets). Used by ODE right-hand sides.
void christoffel_from_jets(const std::vector<Jet1>& comp, int n, Tensor3& gamma,
                           Mat* g_out = nullptr, Mat* g_inv_out = nullptr);

struct GeometryAt {
    Vec point;
    Mat g;
    Mat g_inv;
    Tensor3 christoffel;
    Tensor4 riemann;
    Mat ricci;
    double scalar = 0.0;
};

struct ScalarCalculusAt {
    Vec point;
    double value = 0.0;
    Vec grad;       // coordinate components of df
    Mat hessian;    // H_ij = d_i d_j f - Gamma^k_ij d_k f
    double laplacian = 0.0;
};

enum class DefClass { PositiveDefinite, PositiveSemi, NegativeDefinite, NegativeSemi, Indefinite, Zero };

const char* def_class_name(DefClass c);

struct Definiteness {
    DefClass cls = DefClass::Zero;
    Vec eigenvalues;  // ascending
    double tol = 0.0;
};

// Riemannian-side operations. geometry_at enforces positive-definiteness of
// the metric at the point and throws MetricError otherwise.
GeometryAt geometry_at(const ChartManifold& m, const Vec& point, const ParamMap& params);

ScalarCalculusAt scalar_calculus_at(const ChartManifold& m, const std::string& field,
                                    const Vec& point, const ParamMap& params);

// Q^f = (lap f) g - Hess f
Mat q_tensor_at(const ChartManifold& m, const std::string& field, const Vec& point,
                const ParamMap& params);

// L*f = -f Ric - (lap f) g + Hess f = -f Ric - Q^f
Mat lstar_at(const ChartManifold& m, const std::string& field, const Vec& point,
             const ParamMap& params);

// Symmetric eigenvalue classification; |lambda| <= tol*(1+sup|t|) counts as
// zero. Throws Error if t is not symmetric to 1e-10 relative.
Definiteness definiteness(const Mat& t, double tol = 1e-8);

// div Q by central finite differences of the Q field with Christoffel
// corrections at the center; step is scaled per coordinate by (1+|x_k|).
Vec divergence_q_fd(const ChartManifold& m, const std::string& field, const Vec& point,
                    const ParamMap& params, double step = 1e-4);

}  // namespace ssst

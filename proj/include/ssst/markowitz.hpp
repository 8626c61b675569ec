#pragma once

#include "ssst/auditor.hpp"
#include "ssst/geodesic.hpp"

namespace ssst {

// Poincare distance on (-1,1): rho = |log((1+u1)/(1-u1) * (1-u0)/(1+u0))| / 2.
double poincare_distance(double u0, double u1);

enum class RangeFlag { FiniteBoth, InfiniteLeft, InfiniteRight, InfiniteBoth };
const char* range_flag_name(RangeFlag f);

// Projective parameter p = y1/y2 along a null geodesic, where y1, y2 solve
// the linear reduction
//   y'' + (Ric(gamma',gamma')/(n-2)) y = 0
// with y1(r0)=0, y1'(r0)=1, y2(r0)=1, y2'(r0)=0. The sign of the potential is
// pinned by the Schwarzian self-check (schwarzian_fd below): the classical
// Schwarzian of p equals twice the potential, and this normalization is the
// one that reproduces the closed-form dust-cosmology pseudo-distance.
class ProjectiveParam {
  public:
    const GeodesicTrajectory* traj = nullptr;
    double r0 = 0.0;

    double r_begin = 0.0, r_end = 0.0;    // integrated span
    std::vector<std::pair<double, double>> samples;  // (r, p(r)) at step ends
    std::vector<double> poles;            // bracketed zeros of y2 inside the span

    double alpha = 0.0, beta = 0.0;       // detected p-range over the r0-branch
    RangeFlag flag = RangeFlag::FiniteBoth;

    // y-state (y1, y1', y2, y2') and p at arbitrary r within the span.
    void y_at(double r, double out[4]) const;
    double p_at(double r) const;

    // W(a,b) = y1(b) y2(a) - y1(a) y2(b): the solution vanishing at a,
    // evaluated at b. Invariant up to one overall factor under any change of
    // the fundamental pair, so cross-ratios of W values are basis-free.
    double wronsk(double a, double b) const;

    // Zeros of x -> W(a, x) on (lo, hi], bracketed on the fine grid and
    // refined by bisection. Zeros of W(a, .) after a are the parameters
    // conjugate to a along the underlying y-equation.
    std::vector<double> conjugates_of(double a, double lo, double hi) const;

    // Potential q(r) = Ric(gamma'(r), gamma'(r)) / (n-2), evaluated on the
    // underlying trajectory (events clamped to the chart box).
    double potential(double r) const;

    std::vector<Dopri5::DenseStep> dense;  // ascending in r; state (y1,y1',y2,y2')
    std::vector<std::array<double, 3>> ygrid;  // fine (r, y1, y2) grid for scans
};

ProjectiveParam projective_parameter(const GeodesicTrajectory& traj, double r0 = 0.0,
                                     double rtol = 1e-11, double atol = 1e-13);

enum class SegmentQuality { ExactRange, SpanLimited };
const char* segment_quality_name(SegmentQuality q);

struct SegmentDistance {
    double value = 0.0;
    SegmentQuality quality = SegmentQuality::SpanLimited;
};

// Poincare length of the projective segment [r_a, r_b] in the best
// projective chart available over the integrated span: an upper bound on the
// pseudo-distance between the endpoint events. The value is a cross-ratio of
// W values, so it is exactly invariant under a change of the (y1, y2) basis.
// When the span is disconjugate the chart is the whole span; otherwise the
// chart window slides to minimize the bound (oscillatory potentials drive it
// toward zero, the triviality mechanism). Ranges unbounded on both sides
// within the span report (near-)zero values.
SegmentDistance segment_distance(const ProjectiveParam& pp, double r_a, double r_b);

// Half the classical Schwarzian derivative of p at r, computed by local
// polynomial differentiation of sampled p values (window w on each side).
// Matches the potential Ric/(n-2) for a correctly reduced p.
double schwarzian_fd(const ProjectiveParam& pp, double r, double window);

struct ChainSegment {
    Vec event;
    Vec velocity;   // null
    Span span;      // integration span around r = 0
    double r_from = 0.0, r_to = 0.0;
};

struct ChainSpec {
    std::vector<ChainSegment> segments;
};

struct ChainDistance {
    double total = 0.0;
    std::vector<SegmentDistance> segments;
};

// Sum of segment distances: an upper bound on the pseudo-distance between
// the first and last chain events. Consecutive events must match.
ChainDistance chain_distance(const Spacetime& st, const ChainSpec& chain, const ParamMap& params,
                             double rtol = 1e-9, double atol = 1e-11);

struct ProbeGeodesic {
    Vec event;
    Vec velocity;
    bool usable = false;
    RangeFlag flag = RangeFlag::FiniteBoth;
    double alpha = 0.0, beta = 0.0;
    SegmentDistance mid_segment;   // distance across the middle half of the span
    double max_abs_ricci = 0.0;    // null-generic evidence along this geodesic
    int poles = 0;                 // bracketed projective poles within the span
    bool exited_backward = false, exited_forward = false;
    double schwarzian_residual = 0.0;
};

struct ProbeResult {
    HypothesisScan scan;
    std::vector<ProbeGeodesic> geodesics;
    int unbounded_ranges = 0;
    int bounded_ranges = 0;
    int generic_count = 0;  // geodesics with Ric(gamma',gamma') != 0 somewhere
    std::vector<std::string> conclusions;
};

// Samples null geodesics, computes projective ranges and segment values, and
// combines them with the hypothesis scan into triviality/hyperbolicity
// evidence. Deterministic in seed.
ProbeResult hyperbolicity_probe(const Spacetime& st, int n_geodesics, double span,
                                std::uint64_t seed, const GridSpec& grid, double tol,
                                const ParamMap& params, Exec exec = Exec::Parallel);

}  // namespace ssst

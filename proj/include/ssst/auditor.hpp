#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ssst/parallel.hpp"
#include "ssst/spacetime.hpp"

namespace ssst {

// Causal tangent vector built from a unit spatial direction v and a time
// multiplier r: w = r * sqrt(g_sp(v,v)/(-g_00)) dt + v, so that
// g(w,w) = (1 - r^2) g_sp(v,v). |r| = 1 gives null, |r| > 1 timelike.
// canonical_dt marks the extra deterministic sample w = dt.
struct CausalSample {
    Vec event;
    Vec v;
    double r = 0.0;
    Vec w;
    CausalKind kind = CausalKind::Timelike;
    bool canonical_dt = false;
};

// Draws `count` samples; spatial directions are uniform on the g-unit sphere
// (Cholesky transform of an isotropic Gaussian, normalized), time
// orientations alternate with the sample index. Deterministic in seed.
std::vector<CausalSample> sample_causal(const Spacetime& st, const Vec& event, int count,
                                        CausalKind kind, std::uint64_t seed,
                                        const ParamMap& params);

enum class ConditionId {
    SEC,   // Ric >= 0 on causal vectors (equivalently the TCC)
    NCC,
    WEC,
    DEC,
    HESEC,
    RSEC,  // reverses flip the inequality
    RNCC,
    SubharmonicityNecessary,  // lap f >= 0 on the grid (necessary for SEC)
    ScalarNonnegNecessary,    // tau_F >= 0 on the grid (necessary for WEC)
    SkidResidual,             // ||L*f|| == 0 certifies the kernel hypothesis
};

const char* condition_id_name(ConditionId id);
std::optional<ConditionId> condition_id_from(const std::string& name);
bool condition_is_static_only(ConditionId id);

enum class Verdict { HoldsOnSamples, Violated, Inconclusive };
const char* verdict_name(Verdict v);

struct Witness {
    Vec event;
    Vec w1;                  // empty for grid-only conditions
    std::optional<Vec> w2;   // second vector of a DEC pair
    double margin = 0.0;
    bool canonical_dt = false;  // the deterministic w = dt sample
};

struct GridSpec {
    int per_axis = 5;
};

struct ConditionReport {
    ConditionId id = ConditionId::SEC;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<Witness> witnesses;  // worst margins first
    std::size_t event_count = 0;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    double min_margin = 0.0;
};

// Events the audit grid evaluates: static metrics are t-independent, so the
// grid covers the spatial box at a representative t; GRW grids cover t too.
std::vector<Vec> audit_events(const Spacetime& st, const GridSpec& grid);

ConditionReport check_condition(const Spacetime& st, ConditionId id, const GridSpec& grid,
                                int samples_per_event, std::uint64_t seed, double tol,
                                const ParamMap& params, Exec exec = Exec::Parallel);

// ---- hypothesis scan ----

struct PointClasses {
    Vec x;
    DefClass ricci = DefClass::Zero;
    DefClass q = DefClass::Zero;
    DefClass lstar = DefClass::Zero;
    double lap_f = 0.0;
    double tau = 0.0;
    double f = 0.0;
    double lstar_norm = 0.0;        // sup |(L*f)_ij|
    double concircular_residual = 0.0;  // sup |H_ij - (lap f / s) g_ij|
    double phi = 0.0;               // lap f / s
    double flatness = 0.0;          // sup |R^l_ijk| of the base
};

struct FiredImplication {
    std::string id;
    std::string description;
    std::vector<std::string> user_asserted;  // global hypotheses the tool cannot check
};

struct HypothesisScan {
    GridSpec grid;
    double tol = 0.0;
    bool ric_all_psd = false, ric_all_pd = false, ric_all_nsd = false, ric_all_nd = false,
         ric_all_zero = false;
    bool q_all_psd = false, q_all_pd = false, q_all_nsd = false, q_all_nd = false,
         q_all_zero = false;
    bool lstar_all_psd = false, lstar_all_pd = false, lstar_all_nsd = false,
         lstar_all_nd = false, lstar_all_zero = false;
    double lap_min = 0.0, lap_max = 0.0;
    double tau_min = 0.0, tau_max = 0.0;
    double f_min = 0.0, f_max = 0.0;
    double ratio_min = 0.0;  // min lap f / f (the diameter-bound constant c)
    double lstar_residual_max = 0.0;
    double concircular_residual_max = 0.0;
    double phi_min = 0.0, phi_max = 0.0;
    double flatness_max = 0.0;
    std::vector<FiredImplication> fired;
    std::vector<PointClasses> points;
};

HypothesisScan hypothesis_scan(const Spacetime& st, const GridSpec& grid, double tol,
                               const ParamMap& params, Exec exec = Exec::Parallel);

struct SkidResidualScan {
    double max_residual = 0.0;
    std::vector<std::pair<Vec, double>> per_point;
};

SkidResidualScan skid_residual(const Spacetime& st, const GridSpec& grid, const ParamMap& params,
                               Exec exec = Exec::Parallel);

}  // namespace ssst

#pragma once

#include <utility>
#include <vector>

#include "distmin/functionals.hpp"
#include "distmin/maps.hpp"

namespace distmin {

struct OptimizerConfig {
    int max_iters = 20000;
    double step = 0.0;       // initial step size; 0 picks one from the geometry
    double backtrack = 0.5;  // backtracking shrink factor
    double armijo = 1e-4;
    double grad_tol = 1e-9;  // stop when the reduced gradient sup-norm drops below this
    double eps_mono_scale = kEpsMonoScale;
    unsigned long long seed = 1;
};

struct MinimizationTrace {
    std::vector<double> energies;  // non-increasing by construction
    std::vector<double> grad_norms;
    bool converged = false;
};

struct CurveMapMinimization {
    MinimizationTrace trace;
    CurveMap map;
};

struct ScheduleMinimization {
    MinimizationTrace trace;
    VolumeSchedule schedule;
};

// The two closed-form Phi_2 minimizers between closed curves with
// L(N) >= L(M): the orientation-preserving linear lift anchored at
// (p_idx, q_idx) and its orientation-reversing counterpart.
std::pair<CurveMap, CurveMap> closed_form_phi2_minimizers(const ClosedCurve& M,
                                                          const ClosedCurve& N, int p_idx,
                                                          int q_idx);

// k-th element of a minimizing sequence for L(N) < L(M): slope +-1 except
// in two cubic-blended transition zones of width L(M)/(4k). The result is
// a smooth-class (non-monotone) map; Phi_2 decays like O(1/k).
CurveMap wrapping_sequence(const ClosedCurve& M, const ClosedCurve& N, int k);

CurveMapMinimization minimize_phi1(const ClosedCurve& M, const ClosedCurve& N,
                                   const CurveMap& init, const OptimizerConfig& cfg);

CurveMapMinimization minimize_phi2_curve(const ClosedCurve& M, const ClosedCurve& N,
                                         const CurveMap& init, const OptimizerConfig& cfg);

// phi*(t) = ((1-t) sqrt(a) + t sqrt(b))^2 sampled on n points.
VolumeSchedule optimal_schedule(double a, double b, int n);

// Independent numerical minimizer of Xi over schedules with pinned
// endpoints (damped Newton on the tridiagonal system).
ScheduleMinimization minimize_xi_numeric(double a, double b, int n, const OptimizerConfig& cfg);

struct SphereFamilyEntry {
    double s;
    double phi2;
};

// Phi_2 of h_R composed with the stereographic dilation by e^s, evaluated
// over the given parameter grid on an icosphere.
std::vector<SphereFamilyEntry> sphere_family_phi2(const SurfaceMesh& m, double R,
                                                  const std::vector<double>& s_grid);

// Random strictly monotone degree-1 map used as an optimizer start.
CurveMap random_monotone_map(const ClosedCurve& M, const ClosedCurve& N,
                             unsigned long long seed);

}  // namespace distmin

#pragma once

#include <vector>

#include "distmin/functionals.hpp"
#include "distmin/maps.hpp"

namespace distmin {

// Time-indexed family of closed curves on a uniform grid over [0,1].
// frames[0] is the source geometry (f^0 = identity); connectivity (vertex
// count and correspondence) is shared across frames.
struct Morph {
    std::vector<ClosedCurve> frames;

    int frame_count() const { return static_cast<int>(frames.size()); }
    double time(int j) const { return static_cast<double>(j) / (frames.size() - 1); }
};

struct MeshMorph {
    std::vector<SurfaceMesh> frames;

    int frame_count() const { return static_cast<int>(frames.size()); }
    double time(int j) const { return static_cast<double>(j) / (frames.size() - 1); }
};

// Validates frame compatibility (same vertex count / connectivity).
Morph make_morph(std::vector<ClosedCurve> frames);
MeshMorph make_mesh_morph(std::vector<SurfaceMesh> frames);

// Per-time deviation of J(f^t) Vol(M) / Vol(M^t) from 1.
struct PairwiseReport {
    std::vector<double> deviation;  // max over elements, per frame
    double max_deviation = 0.0;
    bool verdict = false;
    double tol = 0.0;
};

// Convex interpolation F(t,p) = (1-t) p + t h(p) with K+1 frames. Throws
// MorphFoldError naming the offending time if a frame degenerates.
Morph make_linear_morph(const CurveMap& h, int frame_intervals);
MeshMorph make_linear_morph(const MeshMap& h, int frame_intervals);

PairwiseReport is_pairwise_minimal(const Morph& F, double tol = 1e-6);
PairwiseReport is_pairwise_minimal(const MeshMorph& F, double tol = 1e-6);

// One-dimensional Moser step: resample every frame along its polyline so
// that f^t maps uniform arc fractions of M to uniform arc fractions of
// M^t. Image polylines are unchanged up to resampling tolerance.
Morph pairwise_minimalize_curve(const Morph& F);

// Pairwise minimalization followed by time reparametrization onto the
// optimal volume schedule. Requires a strictly monotone volume path.
Morph optimal_morph_curve(const ClosedCurve& M, const ClosedCurve& N, const Morph& base);

// psi_total(F) - psi_total(pairwise_minimalize_curve(F)); nonnegative up
// to quadrature tolerance.
double psi_gap(const Morph& F);

// Vol(M^t) per frame.
std::vector<double> volume_path(const Morph& F);
std::vector<double> volume_path(const MeshMorph& F);

}  // namespace distmin

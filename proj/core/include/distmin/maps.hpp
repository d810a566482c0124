#pragma once

#include <vector>

#include "distmin/geometry.hpp"

namespace distmin {

// Relative monotonicity floor for circle-map lifts, scaled by the target
// length.
inline constexpr double kEpsMonoScale = 1e-9;

// Admissible class of a circle map. Diffeomorphisms carry a strictly
// monotone lift of degree +-1. Smooth maps only satisfy the degree
// condition; they may fold (used by minimizing sequences where the
// infimum is not attained by a diffeomorphism).
enum class MapClass { diffeomorphism, smooth };

// Circle map h : M -> N represented by a lift u on the arc-length knots of
// the source. u is sampled at arc positions arc_table()[0..n]; evaluation
// wraps modulo L(N) onto the target curve. The endpoint condition
// |u(L_M) - u(0)| = L(N) holds exactly (degree +-1).
class CurveMap {
public:
    static CurveMap from_lift(ClosedCurve source, ClosedCurve target, std::vector<double> lift,
                              int orientation, MapClass cls = MapClass::diffeomorphism);

    static CurveMap identity(const ClosedCurve& c);
    // Linear lift anchored so that source arc 0 maps to target arc `offset`.
    static CurveMap linear(ClosedCurve source, ClosedCurve target, double offset = 0.0,
                           int orientation = +1);

    const ClosedCurve& source() const { return source_; }
    const ClosedCurve& target() const { return target_; }
    const std::vector<double>& lift() const { return lift_; }
    int orientation() const { return orientation_; }
    MapClass map_class() const { return cls_; }

    int knot_count() const { return static_cast<int>(lift_.size()); }

    // Lift extended to the whole line: u(s + L_M) = u(s) +- L_N.
    double eval_lift(double s) const;
    // Inverse of the extended lift (diffeomorphisms only).
    double invert_lift(double u) const;

    // Image of the source point at arc s.
    Vec2 image_of_arc(double s) const { return target_.point_at_arc(eval_lift(s)); }

private:
    CurveMap() = default;

    ClosedCurve source_, target_;
    std::vector<double> lift_;
    int orientation_ = +1;
    MapClass cls_ = MapClass::diffeomorphism;
};

// Simplicial correspondence between meshes with identical connectivity:
// vertex i of the source maps to vertex i of the target.
class MeshMap {
public:
    static MeshMap from_meshes(SurfaceMesh source, SurfaceMesh target);

    const SurfaceMesh& source() const { return source_; }
    const SurfaceMesh& target() const { return target_; }

private:
    MeshMap() = default;
    SurfaceMesh source_, target_;
};

// Per-element strain S(h) = h* g_N - g_M relative to the source metric:
// the scalar u'^2 - 1 per segment for curves, a symmetric 2x2 matrix in
// the source triangle frame for meshes.
struct CurveStrainField {
    std::vector<double> values;
};

struct MeshStrainField {
    std::vector<Mat2> values;
};

// Time-dependent tangent field on a curve: scalar velocities along the
// curve direction, sampled per vertex on a uniform time grid over [0,1].
class TimeVectorField {
public:
    static TimeVectorField from_samples(ClosedCurve curve,
                                        std::vector<std::vector<double>> values);

    const ClosedCurve& curve() const { return curve_; }
    const std::vector<std::vector<double>>& values() const { return values_; }
    int time_sample_count() const { return static_cast<int>(values_.size()); }

    // Linear interpolation in time and (periodic) arc position.
    double eval(double s, double t) const;

private:
    TimeVectorField() = default;
    ClosedCurve curve_;
    std::vector<std::vector<double>> values_;  // [time][vertex]
};

std::vector<double> jacobian_curve(const CurveMap& h);
std::vector<double> jacobian_mesh(const MeshMap& h);

CurveStrainField strain_curve(const CurveMap& h);

std::vector<Mat2> pullback_metric_mesh(const MeshMap& h);
MeshStrainField strain_mesh(const MeshMap& h);

// Composition a o b (b maps X -> Y, a maps Y -> Z), resampled at the
// source knots of b.
CurveMap compose_curve_maps(const CurveMap& a, const CurveMap& b);
CurveMap invert_curve_map(const CurveMap& h);

// Evolution operator of the nonautonomous ODE dq/dt = v(q,t) on the circle
// of circumference L, integrated with fixed-step classic RK4. Positions are
// kept unwrapped; the field is evaluated modulo L.
std::vector<double> evolve(const TimeVectorField& v, double s, double t,
                           const std::vector<double>& initial_positions, double dt = 1e-3);

// Clamp increments to the monotonicity floor and rescale so they sum to
// `total` (alternating, at most 50 rounds). Shared by the flow projection
// and the projected-gradient optimizers.
std::vector<double> project_monotone_increments(std::vector<double> increments, double total,
                                                double floor_value);

struct FlowMapResult {
    CurveMap map;
    // True when small numerical monotonicity defects were projected out.
    bool monotonicity_projected = false;
};

FlowMapResult time_one_map(const TimeVectorField& v, double dt = 1e-3);

}  // namespace distmin

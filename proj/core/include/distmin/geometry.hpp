#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "distmin/errors.hpp"

namespace distmin {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

// Relative degeneracy floor, scaled by the shape diameter (or squared
// diameter for areas) so that validity checks are scale invariant.
inline constexpr double kEpsGeom = 1e-12;

// Closed planar polyline. The cyclic vertex order defines the orientation;
// the induced metric is arc length per segment.
class ClosedCurve {
public:
    // Validates and builds the arc-length table. Throws InvalidGeometryError
    // on fewer than 3 vertices or a degenerate segment.
    static ClosedCurve from_vertices(std::vector<Vec2> vertices);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }

    // Cumulative arc length; arc_table()[i] is the arc position of vertex i
    // and arc_table()[vertex_count()] equals length().
    const std::vector<double>& arc_table() const { return arc_; }

    double length() const { return arc_.back(); }
    double diameter() const { return diameter_; }
    double signed_area() const { return signed_area_; }
    double orientation_sign() const { return signed_area_ >= 0.0 ? 1.0 : -1.0; }

    double segment_length(int i) const { return arc_[i + 1] - arc_[i]; }

    // Point on the polyline at arc position s, wrapped modulo length().
    Vec2 point_at_arc(double s) const;

    // Default-constructed curves are empty; every valid curve comes from
    // from_vertices.
    ClosedCurve() = default;

private:
    std::vector<Vec2> vertices_;
    std::vector<double> arc_;
    double signed_area_ = 0.0;
    double diameter_ = 0.0;
};

// Closed oriented triangle mesh in 3-space with per-triangle orthonormal
// tangent frames.
class SurfaceMesh {
public:
    using Triangle = std::array<int, 3>;
    using Frame = Eigen::Matrix<double, 3, 2>;

    // Validates: non-degenerate triangles, every edge shared by exactly two
    // consistently oriented triangles, positive enclosed volume.
    static SurfaceMesh from_vertices_and_triangles(std::vector<Vec3> vertices,
                                                  std::vector<Triangle> triangles);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const std::vector<Frame>& frames() const { return frames_; }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int triangle_count() const { return static_cast<int>(triangles_.size()); }

    double area() const { return area_; }
    double diameter() const { return diameter_; }
    double enclosed_volume() const { return enclosed_volume_; }
    double triangle_area(int t) const { return tri_areas_[t]; }

    // Default-constructed meshes are empty; every valid mesh comes from
    // from_vertices_and_triangles.
    SurfaceMesh() = default;

private:
    std::vector<Vec3> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<Frame> frames_;
    std::vector<double> tri_areas_;
    double area_ = 0.0;
    double diameter_ = 0.0;
    double enclosed_volume_ = 0.0;
};

// Per-element positive measure: segment lengths for curves, triangle areas
// for meshes. Sums to the total volume.
struct VolumeFormWeights {
    std::vector<double> weights;
    double total = 0.0;
};

// Per-vertex signed curvature of a closed curve (turning angle divided by
// the dual edge length).
struct CurvatureField {
    std::vector<double> kappa;
};

double curve_length(const ClosedCurve& c);
double mesh_area(const SurfaceMesh& m);

CurvatureField curvature(const ClosedCurve& c);

VolumeFormWeights volume_weights(const ClosedCurve& c);
VolumeFormWeights volume_weights(const SurfaceMesh& m);

// Shape factories used by fixtures and tests.
ClosedCurve make_regular_polygon(int n, double circumradius, bool counterclockwise = true,
                                 const Vec2& center = Vec2::Zero(), double phase = 0.0);
SurfaceMesh make_icosphere(int subdivisions, double radius = 1.0);

}  // namespace distmin

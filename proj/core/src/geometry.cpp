#include "distmin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

namespace distmin {

namespace {

double polygon_diameter_bbox(const std::vector<Vec2>& pts) {
    Vec2 lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

double mesh_diameter_bbox(const std::vector<Vec3>& pts) {
    Vec3 lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

}  // namespace

ClosedCurve ClosedCurve::from_vertices(std::vector<Vec2> vertices) {
    if (vertices.size() < 3)
        throw InvalidGeometryError("closed curve needs at least 3 vertices, got " +
                                   std::to_string(vertices.size()));

    ClosedCurve c;
    c.vertices_ = std::move(vertices);
    c.diameter_ = polygon_diameter_bbox(c.vertices_);
    if (c.diameter_ <= 0.0)
        throw InvalidGeometryError("all curve vertices coincide");

    const int n = static_cast<int>(c.vertices_.size());
    const double eps = kEpsGeom * c.diameter_;
    c.arc_.resize(n + 1);
    c.arc_[0] = 0.0;
    double area2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& a = c.vertices_[i];
        const Vec2& b = c.vertices_[(i + 1) % n];
        const double len = (b - a).norm();
        if (len <= eps)
            throw InvalidGeometryError("degenerate segment at vertex " + std::to_string(i));
        c.arc_[i + 1] = c.arc_[i] + len;
        area2 += a.x() * b.y() - b.x() * a.y();
    }
    c.signed_area_ = 0.5 * area2;
    return c;
}

Vec2 ClosedCurve::point_at_arc(double s) const {
    const double L = length();
    double r = std::fmod(s, L);
    if (r < 0.0) r += L;
    // binary search for the segment containing r
    const auto it = std::upper_bound(arc_.begin(), arc_.end(), r);
    int i = static_cast<int>(it - arc_.begin()) - 1;
    i = std::clamp(i, 0, vertex_count() - 1);
    const double t = (r - arc_[i]) / (arc_[i + 1] - arc_[i]);
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % vertex_count()];
    return a + t * (b - a);
}

SurfaceMesh SurfaceMesh::from_vertices_and_triangles(std::vector<Vec3> vertices,
                                                     std::vector<Triangle> triangles) {
    if (vertices.size() < 4 || triangles.size() < 4)
        throw InvalidGeometryError("closed surface needs at least 4 vertices and 4 triangles");

    SurfaceMesh m;
    m.vertices_ = std::move(vertices);
    m.triangles_ = std::move(triangles);
    m.diameter_ = mesh_diameter_bbox(m.vertices_);
    if (m.diameter_ <= 0.0)
        throw InvalidGeometryError("all mesh vertices coincide");

    const int nv = m.vertex_count();
    const double eps_area = kEpsGeom * m.diameter_ * m.diameter_;

    m.tri_areas_.reserve(m.triangles_.size());
    m.frames_.reserve(m.triangles_.size());
    double area = 0.0;
    double vol6 = 0.0;
    for (int t = 0; t < m.triangle_count(); ++t) {
        const Triangle& tri = m.triangles_[t];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] < 0 || tri[k] >= nv)
                throw InvalidGeometryError("triangle " + std::to_string(t) +
                                           " references vertex out of range");
        }
        const Vec3& p0 = m.vertices_[tri[0]];
        const Vec3& p1 = m.vertices_[tri[1]];
        const Vec3& p2 = m.vertices_[tri[2]];
        const Vec3 e1 = p1 - p0;
        const Vec3 e2 = p2 - p0;
        const Vec3 cr = e1.cross(e2);
        const double a = 0.5 * cr.norm();
        if (a <= eps_area)
            throw InvalidGeometryError("degenerate triangle " + std::to_string(t));
        m.tri_areas_.push_back(a);
        area += a;
        vol6 += p0.dot(e1.cross(e2));  // equals p0.(p1 x p2) up to shift-invariant terms

        Frame f;
        f.col(0) = e1.normalized();
        f.col(1) = (e2 - e2.dot(f.col(0)) * f.col(0)).normalized();
        m.frames_.push_back(f);
    }
    m.area_ = area;
    m.enclosed_volume_ = vol6 / 6.0;

    // Closedness and orientation consistency: every directed edge must
    // appear exactly once, and its reverse exactly once.
    std::map<std::pair<int, int>, int> directed;
    for (int t = 0; t < m.triangle_count(); ++t) {
        const Triangle& tri = m.triangles_[t];
        for (int k = 0; k < 3; ++k) {
            const int a = tri[k];
            const int b = tri[(k + 1) % 3];
            if (a == b)
                throw InvalidGeometryError("triangle " + std::to_string(t) + " repeats a vertex");
            if (!directed.emplace(std::make_pair(a, b), t).second)
                throw InvalidGeometryError(
                    "non-manifold or inconsistently oriented edge (" + std::to_string(a) + "," +
                    std::to_string(b) + ")");
        }
    }
    for (const auto& [edge, t] : directed) {
        if (directed.find({edge.second, edge.first}) == directed.end())
            throw InvalidGeometryError("boundary edge (" + std::to_string(edge.first) + "," +
                                       std::to_string(edge.second) + "), mesh is not closed");
    }

    if (m.enclosed_volume_ <= 0.0)
        throw InvalidGeometryError("mesh orientation gives non-positive enclosed volume");

    return m;
}

double curve_length(const ClosedCurve& c) { return c.length(); }

double mesh_area(const SurfaceMesh& m) { return m.area(); }

CurvatureField curvature(const ClosedCurve& c) {
    const int n = c.vertex_count();
    CurvatureField field;
    field.kappa.resize(n);
    for (int i = 0; i < n; ++i) {
        const Vec2& prev = c.vertices()[(i + n - 1) % n];
        const Vec2& cur = c.vertices()[i];
        const Vec2& next = c.vertices()[(i + 1) % n];
        const Vec2 e_in = cur - prev;
        const Vec2 e_out = next - cur;
        // signed turning angle at the vertex
        const double cross = e_in.x() * e_out.y() - e_in.y() * e_out.x();
        const double dot = e_in.dot(e_out);
        const double angle = std::atan2(cross, dot);
        const double dual = 0.5 * (e_in.norm() + e_out.norm());
        field.kappa[i] = angle / dual;
    }
    return field;
}

VolumeFormWeights volume_weights(const ClosedCurve& c) {
    VolumeFormWeights w;
    w.weights.resize(c.vertex_count());
    for (int i = 0; i < c.vertex_count(); ++i) {
        w.weights[i] = c.segment_length(i);
        w.total += w.weights[i];
    }
    return w;
}

VolumeFormWeights volume_weights(const SurfaceMesh& m) {
    VolumeFormWeights w;
    w.weights.resize(m.triangle_count());
    for (int t = 0; t < m.triangle_count(); ++t) {
        w.weights[t] = m.triangle_area(t);
        w.total += w.weights[t];
    }
    return w;
}

ClosedCurve make_regular_polygon(int n, double circumradius, bool counterclockwise,
                                 const Vec2& center, double phase) {
    if (n < 3) throw InvalidParameterError("polygon needs n >= 3");
    if (circumradius <= 0.0) throw InvalidParameterError("polygon needs positive circumradius");
    std::vector<Vec2> pts;
    pts.reserve(n);
    const double dir = counterclockwise ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
        const double th = phase + dir * 2.0 * std::numbers::pi * i / n;
        pts.emplace_back(center.x() + circumradius * std::cos(th),
                         center.y() + circumradius * std::sin(th));
    }
    return ClosedCurve::from_vertices(std::move(pts));
}

SurfaceMesh make_icosphere(int subdivisions, double radius) {
    if (subdivisions < 0) throw InvalidParameterError("subdivisions must be nonnegative");
    if (radius <= 0.0) throw InvalidParameterError("radius must be positive");

    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1},
    };
    for (auto& v : verts) v.normalize();

    std::vector<SurfaceMesh::Triangle> tris = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = (verts[a] + verts[b]).normalized();
            verts.push_back(m);
            const int idx = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<SurfaceMesh::Triangle> next;
        next.reserve(tris.size() * 4);
        for (const auto& t : tris) {
            const int a = mid(t[0], t[1]);
            const int b = mid(t[1], t[2]);
            const int c = mid(t[2], t[0]);
            next.push_back({t[0], a, c});
            next.push_back({t[1], b, a});
            next.push_back({t[2], c, b});
            next.push_back({a, b, c});
        }
        tris = std::move(next);
    }

    for (auto& v : verts) v *= radius;
    return SurfaceMesh::from_vertices_and_triangles(std::move(verts), std::move(tris));
}

}  // namespace distmin

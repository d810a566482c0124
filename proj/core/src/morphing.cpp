#include "distmin/morphing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace distmin {

namespace {

std::string time_label(int j, int frames) {
    return "t=" + std::to_string(static_cast<double>(j) / (frames - 1));
}

double point_to_polyline_distance(const Vec2& p, const ClosedCurve& c) {
    double best = std::numeric_limits<double>::infinity();
    const int n = c.vertex_count();
    for (int i = 0; i < n; ++i) {
        const Vec2& a = c.vertices()[i];
        const Vec2& b = c.vertices()[(i + 1) % n];
        const Vec2 ab = b - a;
        double t = ab.squaredNorm() > 0.0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, (p - (a + t * ab)).norm());
    }
    return best;
}

}  // namespace

Morph make_morph(std::vector<ClosedCurve> frames) {
    if (frames.size() < 2)
        throw InsufficientResolutionError("morph needs at least 2 frames");
    const int n = frames.front().vertex_count();
    for (const auto& f : frames)
        if (f.vertex_count() != n)
            throw DomainMismatchError("morph frames must share one vertex count");
    return Morph{std::move(frames)};
}

MeshMorph make_mesh_morph(std::vector<SurfaceMesh> frames) {
    if (frames.size() < 2)
        throw InsufficientResolutionError("morph needs at least 2 frames");
    const auto& first = frames.front();
    for (const auto& f : frames) {
        if (f.vertex_count() != first.vertex_count() ||
            f.triangles() != first.triangles())
            throw DomainMismatchError("mesh morph frames must share connectivity");
    }
    return MeshMorph{std::move(frames)};
}

Morph make_linear_morph(const CurveMap& h, int frame_intervals) {
    if (frame_intervals < 1) throw InvalidParameterError("morph needs at least 1 frame interval");
    const ClosedCurve& src = h.source();
    const int n = src.vertex_count();

    std::vector<Vec2> images(n);
    for (int i = 0; i < n; ++i) images[i] = h.target().point_at_arc(h.lift()[i]);

    std::vector<ClosedCurve> frames;
    frames.reserve(frame_intervals + 1);
    for (int j = 0; j <= frame_intervals; ++j) {
        const double t = static_cast<double>(j) / frame_intervals;
        std::vector<Vec2> verts(n);
        for (int i = 0; i < n; ++i) verts[i] = (1.0 - t) * src.vertices()[i] + t * images[i];
        try {
            frames.push_back(ClosedCurve::from_vertices(std::move(verts)));
        } catch (const InvalidGeometryError& e) {
            throw MorphFoldError("morph frame at " + time_label(j, frame_intervals + 1) +
                                 " degenerates: " + e.what());
        }
    }
    return make_morph(std::move(frames));
}

MeshMorph make_linear_morph(const MeshMap& h, int frame_intervals) {
    if (frame_intervals < 1) throw InvalidParameterError("morph needs at least 1 frame interval");
    const SurfaceMesh& src = h.source();
    const SurfaceMesh& dst = h.target();

    std::vector<SurfaceMesh> frames;
    frames.reserve(frame_intervals + 1);
    for (int j = 0; j <= frame_intervals; ++j) {
        const double t = static_cast<double>(j) / frame_intervals;
        std::vector<Vec3> verts(src.vertex_count());
        for (int i = 0; i < src.vertex_count(); ++i)
            verts[i] = (1.0 - t) * src.vertices()[i] + t * dst.vertices()[i];
        try {
            frames.push_back(
                SurfaceMesh::from_vertices_and_triangles(std::move(verts), src.triangles()));
        } catch (const InvalidGeometryError& e) {
            throw MorphFoldError("morph frame at " + time_label(j, frame_intervals + 1) +
                                 " degenerates: " + e.what());
        }
    }
    return make_mesh_morph(std::move(frames));
}

namespace {

template <typename MorphT, typename MeasureFn, typename TotalFn>
PairwiseReport pairwise_report(const MorphT& F, double tol, MeasureFn measure, TotalFn total,
                               int element_count) {
    PairwiseReport r;
    r.tol = tol;
    r.deviation.resize(F.frame_count());
    const double v0 = total(F.frames[0]);
    for (int j = 0; j < F.frame_count(); ++j) {
        const double vt = total(F.frames[j]);
        double dev = 0.0;
        for (int e = 0; e < element_count; ++e) {
            const double jac = measure(F.frames[j], e) / measure(F.frames[0], e);
            dev = std::max(dev, std::abs(jac * v0 / vt - 1.0));
        }
        r.deviation[j] = dev;
        r.max_deviation = std::max(r.max_deviation, dev);
    }
    r.verdict = r.max_deviation < tol;
    return r;
}

}  // namespace

PairwiseReport is_pairwise_minimal(const Morph& F, double tol) {
    return pairwise_report(
        F, tol, [](const ClosedCurve& c, int e) { return c.segment_length(e); },
        [](const ClosedCurve& c) { return c.length(); }, F.frames[0].vertex_count());
}

PairwiseReport is_pairwise_minimal(const MeshMorph& F, double tol) {
    return pairwise_report(
        F, tol, [](const SurfaceMesh& m, int e) { return m.triangle_area(e); },
        [](const SurfaceMesh& m) { return m.area(); }, F.frames[0].triangle_count());
}

Morph pairwise_minimalize_curve(const Morph& F) {
    const ClosedCurve& src = F.frames[0];
    const int n = src.vertex_count();
    const double lm = src.length();

    std::vector<ClosedCurve> frames;
    frames.reserve(F.frame_count());
    for (int j = 0; j < F.frame_count(); ++j) {
        const ClosedCurve& frame = F.frames[j];
        const double lt = frame.length();

        // Start from arc-length-proportional resampling, then iterate so the
        // resampled chord lengths become proportional to the source's: the
        // chords, not the arc positions, carry the discrete metric, and they
        // disagree wherever a resample segment cuts a polyline corner.
        std::vector<double> arc(n);
        for (int i = 0; i < n; ++i) arc[i] = src.arc_table()[i] / lm * lt;

        std::vector<Vec2> verts(n);
        std::vector<double> chord(n), inc(n);
        for (int round = 0; round < 100; ++round) {
            for (int i = 0; i < n; ++i) verts[i] = frame.point_at_arc(arc[i]);
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                chord[i] = (verts[(i + 1) % n] - verts[i]).norm();
                total += chord[i];
            }
            double err = 0.0;
            for (int i = 0; i < n; ++i)
                err = std::max(err,
                               std::abs(chord[i] / total * lm / src.segment_length(i) - 1.0));
            if (err < 1e-12) break;

            double inc_total = 0.0;
            for (int i = 0; i < n; ++i) {
                const double a = arc[(i + 1) % n] - arc[i];
                inc[i] = (i + 1 == n ? a + lt : a) * (src.segment_length(i) / lm) /
                         (chord[i] / total);
                inc_total += inc[i];
            }
            const double scale = lt / inc_total;
            for (int i = 1; i < n; ++i) arc[i] = arc[i - 1] + inc[i - 1] * scale;
        }
        frames.push_back(ClosedCurve::from_vertices(std::move(verts)));
    }
    return make_morph(std::move(frames));
}

std::vector<double> volume_path(const Morph& F) {
    std::vector<double> v(F.frame_count());
    for (int j = 0; j < F.frame_count(); ++j) v[j] = F.frames[j].length();
    return v;
}

std::vector<double> volume_path(const MeshMorph& F) {
    std::vector<double> v(F.frame_count());
    for (int j = 0; j < F.frame_count(); ++j) v[j] = F.frames[j].area();
    return v;
}

namespace {

ClosedCurve lerp_frames(const ClosedCurve& a, const ClosedCurve& b, double lambda) {
    std::vector<Vec2> verts(a.vertex_count());
    for (int i = 0; i < a.vertex_count(); ++i)
        verts[i] = (1.0 - lambda) * a.vertices()[i] + lambda * b.vertices()[i];
    return ClosedCurve::from_vertices(std::move(verts));
}

// Frame at the (fractional) position where the interpolated length equals
// target_volume, bracketed between frames m and m+1.
ClosedCurve frame_with_volume(const ClosedCurve& a, const ClosedCurve& b, double target_volume) {
    double lo = 0.0, hi = 1.0;
    double glo = a.length() - target_volume;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const ClosedCurve c = lerp_frames(a, b, mid);
        const double g = c.length() - target_volume;
        if ((g <= 0.0) == (glo <= 0.0)) {
            lo = mid;
            glo = g;
        } else {
            hi = mid;
        }
    }
    return lerp_frames(a, b, 0.5 * (lo + hi));
}

ClosedCurve rescale_to_length(const ClosedCurve& c, double target_length) {
    Vec2 centroid = Vec2::Zero();
    for (const auto& v : c.vertices()) centroid += v;
    centroid /= c.vertex_count();
    const double scale = target_length / c.length();
    std::vector<Vec2> verts(c.vertex_count());
    for (int i = 0; i < c.vertex_count(); ++i)
        verts[i] = centroid + scale * (c.vertices()[i] - centroid);
    return ClosedCurve::from_vertices(std::move(verts));
}

}  // namespace

Morph optimal_morph_curve(const ClosedCurve& M, const ClosedCurve& N, const Morph& base) {
    if (base.frames[0].vertex_count() != M.vertex_count())
        throw DomainMismatchError("base morph does not start on M");
    {
        const double tol = 1e-6 * M.diameter();
        for (int i = 0; i < M.vertex_count(); ++i)
            if ((base.frames[0].vertices()[i] - M.vertices()[i]).norm() > tol)
                throw DomainMismatchError("base morph frame 0 differs from M");
        const double tol_n = 1e-6 * N.diameter();
        for (const auto& p : base.frames.back().vertices())
            if (point_to_polyline_distance(p, N) > tol_n)
                throw DomainMismatchError("base morph frame 1 does not lie on N");
    }

    const Morph pm = pairwise_minimalize_curve(base);
    const auto vols = volume_path(pm);
    const int nk = static_cast<int>(vols.size());
    const double a = vols.front();
    const double b = vols.back();

    // Constant volume path: the optimal schedule is constant and the
    // pairwise-minimal morph is already optimal.
    double vmin = a, vmax = a;
    for (double v : vols) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (vmax - vmin <= 1e-9 * vmax) return pm;

    const double dir = b > a ? 1.0 : -1.0;
    for (int j = 0; j + 1 < nk; ++j)
        if ((vols[j + 1] - vols[j]) * dir <= 0.0)
            throw NonMonotoneVolumeError("volume path is not strictly monotone at frame " +
                                         std::to_string(j));

    // Resample the morph in time so that Vol(M^t) follows the optimal
    // schedule ((1-t) sqrt(a) + t sqrt(b))^2.
    std::vector<ClosedCurve> frames;
    frames.reserve(nk);
    for (int j = 0; j < nk; ++j) {
        const double t = static_cast<double>(j) / (nk - 1);
        const double target = std::pow((1.0 - t) * std::sqrt(a) + t * std::sqrt(b), 2);
        int m = 0;
        while (m + 2 < nk && (vols[m + 1] - target) * dir < 0.0) ++m;
        frames.push_back(frame_with_volume(pm.frames[m], pm.frames[m + 1], target));
    }

    // Re-minimalize (time interpolation perturbs the uniform-fraction
    // property slightly), then pin the volumes exactly by uniform scaling,
    // which preserves pairwise minimality.
    Morph out = pairwise_minimalize_curve(make_morph(std::move(frames)));
    for (int j = 0; j < nk; ++j) {
        const double t = static_cast<double>(j) / (nk - 1);
        const double target = std::pow((1.0 - t) * std::sqrt(a) + t * std::sqrt(b), 2);
        out.frames[j] = rescale_to_length(out.frames[j], target);
    }
    return out;
}

double psi_gap(const Morph& F) { return psi_total(F) - psi_total(pairwise_minimalize_curve(F)); }

}  // namespace distmin

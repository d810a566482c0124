#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "distmin/functionals.hpp"
#include "distmin/morphing.hpp"
#include "test_support.hpp"

using namespace distmin;
using testsupport::circle_polygon;
using testsupport::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;

// Circle morph whose right half stretches by a factor growing in time.
Morph half_stretch_morph(int n, int frames) {
    std::vector<ClosedCurve> fs;
    for (int j = 0; j <= frames; ++j) {
        const double t = static_cast<double>(j) / frames;
        std::vector<Vec2> verts(n);
        for (int i = 0; i < n; ++i) {
            const double theta = 2.0 * kPi * i / n;
            const double r = 1.0 + 0.5 * t * std::max(0.0, std::cos(theta));
            verts[i] = r * Vec2(std::cos(theta), std::sin(theta));
        }
        fs.push_back(ClosedCurve::from_vertices(std::move(verts)));
    }
    return make_morph(std::move(fs));
}

Morph radial_morph(int n, int frames, double r0, double r1) {
    std::vector<ClosedCurve> fs;
    for (int j = 0; j <= frames; ++j) {
        const double t = static_cast<double>(j) / frames;
        fs.push_back(make_regular_polygon(n, r0 + t * (r1 - r0)));
    }
    return make_morph(std::move(fs));
}

double min_distance_to_polyline(const Vec2& p, const ClosedCurve& c) {
    double best = 1e300;
    const int n = c.vertex_count();
    for (int i = 0; i < n; ++i) {
        const Vec2& a = c.vertices()[i];
        const Vec2 ab = c.vertices()[(i + 1) % n] - a;
        double t = (p - a).dot(ab) / ab.squaredNorm();
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, (p - (a + t * ab)).norm());
    }
    return best;
}

}  // namespace

TEST_CASE("morph construction validates frames") {
    const ClosedCurve c = circle_polygon(32, 2.0 * kPi);
    CHECK_THROWS_AS(make_morph({c}), InsufficientResolutionError);
    CHECK_THROWS_AS(make_morph({c, circle_polygon(16, 2.0 * kPi)}), DomainMismatchError);
}

TEST_CASE("linear morph of the identity is static") {
    const ClosedCurve c = circle_polygon(64, 2.0 * kPi);
    const Morph F = make_linear_morph(CurveMap::identity(c), 8);
    CHECK(F.frame_count() == 9);
    for (const auto& f : F.frames)
        for (int i = 0; i < 64; ++i)
            CHECK((f.vertices()[i] - c.vertices()[i]).norm() < 1e-12);
    CHECK(is_pairwise_minimal(F).verdict);
    CHECK(psi_total(F) < 1e-15);
}

TEST_CASE("folding interpolation raises a morph-fold error") {
    // Mapping a polygon onto its mirror image with a horizontal edge across
    // the axis: the interpolation midpoint collapses that edge.
    const int n = 64;
    const ClosedCurve src = circle_polygon(n, 2.0 * kPi, kPi / 2.0 - kPi / n);
    std::vector<Vec2> reflected(n);
    for (int i = 0; i < n; ++i)
        reflected[i] = Vec2(-src.vertices()[i].x(), src.vertices()[i].y());
    const ClosedCurve dst = ClosedCurve::from_vertices(std::move(reflected));
    std::vector<double> lift(dst.arc_table());
    const CurveMap h = CurveMap::from_lift(src, dst, std::move(lift), +1);
    CHECK_THROWS_AS(make_linear_morph(h, 16), MorphFoldError);
}

TEST_CASE("pairwise minimality verdicts") {
    CHECK(is_pairwise_minimal(radial_morph(128, 16, 1.0, 2.0), 1e-9).verdict);

    const PairwiseReport bad = is_pairwise_minimal(half_stretch_morph(128, 16));
    CHECK_FALSE(bad.verdict);
    CHECK(bad.max_deviation > 0.1);
}

TEST_CASE("pairwise minimalization enforces the constant-Jacobian condition") {
    const Morph F = half_stretch_morph(256, 16);
    const Morph G = pairwise_minimalize_curve(F);

    CHECK(is_pairwise_minimal(G, 1e-6).verdict);

    // Volume path preserved up to corner cutting: resampled vertices lie on
    // the old polyline, so the enclosed area changes by the slivers cut at
    // the original corners, second order in the edge length. A morph whose
    // knots are already uniform is a fixed point with the volumes untouched.
    auto volume_deviation = [](const Morph& before, const Morph& after) {
        const auto vb = volume_path(before);
        const auto va = volume_path(after);
        double dev = 0.0;
        for (size_t j = 0; j < vb.size(); ++j) dev = std::max(dev, rel_err(va[j], vb[j]));
        return dev;
    };
    const double dev_coarse = volume_deviation(F, G);
    CHECK(dev_coarse < 1e-3);
    const Morph Ffine = half_stretch_morph(1024, 16);
    CHECK(volume_deviation(Ffine, pairwise_minimalize_curve(Ffine)) < dev_coarse / 4.0);

    const Morph R = radial_morph(128, 8, 1.0, 2.0);
    CHECK(volume_deviation(R, pairwise_minimalize_curve(R)) < 1e-12);

    // image polylines unchanged: every resampled vertex lies on the frame
    const double tol = 1e-9 * F.frames[0].diameter();
    for (int j = 0; j < F.frame_count(); ++j)
        for (const auto& p : G.frames[j].vertices())
            CHECK(min_distance_to_polyline(p, F.frames[j]) < tol);

    // idempotent
    const Morph H = pairwise_minimalize_curve(G);
    for (int j = 0; j < G.frame_count(); ++j)
        for (int i = 0; i < G.frames[j].vertex_count(); ++i)
            CHECK((H.frames[j].vertices()[i] - G.frames[j].vertices()[i]).norm() < 1e-9);
}

TEST_CASE("psi_gap is nonnegative and detects nonuniform stretch") {
    CHECK(psi_gap(half_stretch_morph(128, 12)) > 1e-3);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> amp(0.0, 0.2);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 96;
        std::vector<ClosedCurve> fs;
        const double a1 = amp(rng), a2 = amp(rng), ph = amp(rng) * 30.0;
        for (int j = 0; j <= 10; ++j) {
            const double t = j / 10.0;
            std::vector<Vec2> verts(n);
            for (int i = 0; i < n; ++i) {
                const double theta = 2.0 * kPi * i / n;
                const double r =
                    1.0 + t * (a1 * std::cos(theta + ph) + a2 * std::cos(2.0 * theta)) + 0.3 * t;
                verts[i] = r * Vec2(std::cos(theta), std::sin(theta));
            }
            fs.push_back(ClosedCurve::from_vertices(std::move(verts)));
        }
        CHECK(psi_gap(make_morph(std::move(fs))) >= -1e-9);
    }
}

TEST_CASE("optimal morph for growing circles") {
    const Morph base = radial_morph(256, 32, 1.0, 2.0);
    const ClosedCurve& M = base.frames.front();
    const ClosedCurve& N = base.frames.back();
    const Morph F = optimal_morph_curve(M, N, base);

    CHECK(is_pairwise_minimal(F, 1e-6).verdict);
    const double a = M.length(), b = N.length();
    const double closed = 4.0 * std::pow(std::sqrt(b) - std::sqrt(a), 2);
    CHECK(rel_err(psi_total(F), closed) < 1e-3);

    // volumes follow the optimal schedule exactly at grid times
    const auto vols = volume_path(F);
    for (size_t j = 0; j < vols.size(); ++j) {
        const double t = static_cast<double>(j) / (vols.size() - 1);
        const double target = std::pow((1.0 - t) * std::sqrt(a) + t * std::sqrt(b), 2);
        CHECK(rel_err(vols[j], target) < 1e-12);
    }
}

TEST_CASE("optimal morph of a static base is static") {
    const Morph base = radial_morph(64, 8, 1.0, 1.0);
    const Morph F = optimal_morph_curve(base.frames.front(), base.frames.back(), base);
    CHECK(psi_total(F) < 1e-15);
}

TEST_CASE("optimal morph rejects oscillating volume paths") {
    const int n = 64;
    std::vector<ClosedCurve> fs;
    for (int j = 0; j <= 8; ++j) {
        const double t = j / 8.0;
        fs.push_back(make_regular_polygon(n, 1.0 + t + 0.8 * std::sin(2.0 * kPi * t)));
    }
    const Morph base = make_morph(std::move(fs));
    CHECK_THROWS_AS(optimal_morph_curve(base.frames.front(), base.frames.back(), base),
                    NonMonotoneVolumeError);
}

TEST_CASE("optimal morph validates its endpoints") {
    const Morph base = radial_morph(64, 8, 1.0, 2.0);
    const ClosedCurve other = circle_polygon(64, 7.0);
    CHECK_THROWS_AS(optimal_morph_curve(other, base.frames.back(), base), DomainMismatchError);
    CHECK_THROWS_AS(optimal_morph_curve(base.frames.front(), other, base), DomainMismatchError);
}

TEST_CASE("time refinement of psi_total converges") {
    const ClosedCurve c = circle_polygon(128, 2.0 * kPi);
    const ClosedCurve d = circle_polygon(128, 4.0 * kPi);
    const CurveMap h = CurveMap::linear(c, d);
    const double p1 = psi_total(make_linear_morph(h, 8));
    const double p2 = psi_total(make_linear_morph(h, 16));
    const double p3 = psi_total(make_linear_morph(h, 32));
    CHECK(std::abs(p3 - p2) < 4.0 * std::abs(p2 - p1));
}

TEST_CASE("mesh morph checks work on dilating spheres") {
    const SurfaceMesh m = make_icosphere(1);
    std::vector<SurfaceMesh> frames;
    for (int j = 0; j <= 4; ++j) {
        const double f = 1.0 + 0.25 * j;
        std::vector<Vec3> verts(m.vertex_count());
        for (int i = 0; i < m.vertex_count(); ++i) verts[i] = f * m.vertices()[i];
        frames.push_back(SurfaceMesh::from_vertices_and_triangles(std::move(verts), m.triangles()));
    }
    const MeshMorph F = make_mesh_morph(std::move(frames));
    CHECK(is_pairwise_minimal(F, 1e-9).verdict);
    bool warn = true;
    const double pw = psi_pairwise(F, &warn);
    CHECK_FALSE(warn);
    CHECK(std::abs(psi_total(F) - pw) <= 1e-6 * (1.0 + psi_total(F)));
}

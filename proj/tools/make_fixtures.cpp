// Generates the bundled fixture set into the directory given as argv[1]:
// circle polygons with perimeters 2*pi, 4*pi and pi, an icosphere, the
// canonical circle-pair map, a folding reflection map, and a morph that
// stretches only half of a circle.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "distmin/io.hpp"

using namespace distmin;
namespace fs = std::filesystem;

namespace {

// Regular n-gon whose perimeter equals the given value.
ClosedCurve circle_polygon(int n, double perimeter, double phase = 0.0) {
    const double r = perimeter / (2.0 * n * std::sin(std::numbers::pi / n));
    return make_regular_polygon(n, r, true, Vec2::Zero(), phase);
}

ClosedCurve reflect_x(const ClosedCurve& c) {
    std::vector<Vec2> verts(c.vertex_count());
    for (int i = 0; i < c.vertex_count(); ++i)
        verts[i] = Vec2(-c.vertices()[i].x(), c.vertices()[i].y());
    return ClosedCurve::from_vertices(std::move(verts));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures OUTPUT_DIR\n";
        return 2;
    }
    const fs::path dir = argv[1];
    fs::create_directories(dir);
    auto at = [&](const std::string& name) { return (dir / name).string(); };

    const double pi = std::numbers::pi;
    const ClosedCurve c2pi = circle_polygon(2048, 2.0 * pi);
    const ClosedCurve c4pi = circle_polygon(2048, 4.0 * pi);
    io::write_curve(at("circle_2pi.json"), c2pi);
    io::write_curve(at("circle_4pi.json"), c4pi);
    io::write_curve(at("circle_pi.json"), circle_polygon(2048, pi));

    io::write_curve_map(at("identity_map.json"), CurveMap::identity(c2pi), "circle_2pi.json",
                        "circle_2pi.json");
    io::write_curve_map(at("pair_map.json"), CurveMap::linear(c2pi, c4pi), "circle_2pi.json",
                        "circle_4pi.json");

    io::write_mesh_obj(at("icosphere.obj"), make_icosphere(3));

    // Folding case: mapping a polygon onto its mirror image by matching
    // vertex indices. The phase puts a horizontal edge across the mirror
    // axis, so the midpoint of the linear interpolation collapses it.
    {
        const int n = 64;
        const ClosedCurve src = circle_polygon(n, 2.0 * pi, pi / 2.0 - pi / n);
        const ClosedCurve dst = reflect_x(src);
        io::write_curve(at("fold_source.json"), src);
        io::write_curve(at("fold_target.json"), dst);
        std::vector<double> lift(dst.arc_table());
        io::write_curve_map(at("fold_map.json"),
                            CurveMap::from_lift(src, dst, std::move(lift), +1),
                            "fold_source.json", "fold_target.json");
    }

    // Morph that stretches only the right half of a circle: not pairwise
    // minimal, strictly positive psi_gap.
    {
        const int n = 256, frames = 16;
        std::vector<ClosedCurve> morph_frames;
        for (int j = 0; j <= frames; ++j) {
            const double t = static_cast<double>(j) / frames;
            std::vector<Vec2> verts(n);
            for (int i = 0; i < n; ++i) {
                const double theta = 2.0 * pi * i / n;
                const double r = 1.0 + 0.5 * t * std::max(0.0, std::cos(theta));
                verts[i] = r * Vec2(std::cos(theta), std::sin(theta));
            }
            morph_frames.push_back(ClosedCurve::from_vertices(std::move(verts)));
        }
        io::write_morph(at("half_stretch_morph.json"), make_morph(std::move(morph_frames)));
    }

    // Smooth time-dependent tangent field on the 2*pi circle.
    {
        const int grid_t = 11;
        const double L = c2pi.length();
        std::vector<std::vector<double>> values(grid_t,
                                                std::vector<double>(c2pi.vertex_count()));
        for (int j = 0; j < grid_t; ++j) {
            const double t = static_cast<double>(j) / (grid_t - 1);
            for (int i = 0; i < c2pi.vertex_count(); ++i) {
                const double s = c2pi.arc_table()[i];
                values[j][i] = 0.1 * std::sin(2.0 * pi * s / L) * std::cos(pi * t);
            }
        }
        io::write_field(at("field.json"), TimeVectorField::from_samples(c2pi, std::move(values)));
    }

    io::write_schedule(at("schedule_opt.json"), optimal_schedule(2.0 * pi, 4.0 * pi, 200));
    return 0;
}

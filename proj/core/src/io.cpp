#include "distmin/io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace distmin::io {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    return j;
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

void save_json(const std::string& path, const json& j) { save_text(path, j.dump(2) + "\n"); }

json curve_payload(const ClosedCurve& c) {
    json verts = json::array();
    for (const auto& v : c.vertices()) verts.push_back({v.x(), v.y()});
    return json{{"vertices", std::move(verts)}, {"closed", true}};
}

ClosedCurve curve_from_payload(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw IoError(path + ": expected an object with a \"vertices\" array");
    if (j.contains("closed") && !j["closed"].get<bool>())
        throw IoError(path + ": only closed curves are supported");
    std::vector<Vec2> verts;
    verts.reserve(j["vertices"].size());
    for (const auto& p : j["vertices"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw IoError(path + ": vertices must be [x, y] number pairs");
        verts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return ClosedCurve::from_vertices(std::move(verts));
}

}  // namespace

ClosedCurve read_curve(const std::string& path) {
    return curve_from_payload(load_json(path), path);
}

void write_curve(const std::string& path, const ClosedCurve& c) {
    save_json(path, curve_payload(c));
}

SurfaceMesh read_mesh_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<Vec3> verts;
    std::vector<SurfaceMesh::Triangle> tris;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z))
                throw IoError(path + ":" + std::to_string(line_no) + ": malformed vertex line");
            verts.emplace_back(x, y, z);
        } else if (tag == "f") {
            SurfaceMesh::Triangle t;
            std::string tok;
            for (int k = 0; k < 3; ++k) {
                if (!(ls >> tok))
                    throw IoError(path + ":" + std::to_string(line_no) +
                                  ": faces must have 3 vertices");
                // accept v, v/vt, v/vt/vn references; only the vertex index is used
                const int idx = std::stoi(tok.substr(0, tok.find('/')));
                if (idx < 1 || idx > static_cast<int>(verts.size()))
                    throw IoError(path + ":" + std::to_string(line_no) +
                                  ": face index out of range");
                t[k] = idx - 1;
            }
            std::string extra;
            if (ls >> extra)
                throw IoError(path + ":" + std::to_string(line_no) + ": faces must be triangles");
            tris.push_back(t);
        }
        // other OBJ tags (vn, vt, o, g, s, mtllib, usemtl) are ignored
    }
    return SurfaceMesh::from_vertices_and_triangles(std::move(verts), std::move(tris));
}

void write_mesh_obj(const std::string& path, const SurfaceMesh& m) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& v : m.vertices())
        out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : m.triangles())
        out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
    save_text(path, out.str());
}

CurveMap read_curve_map(const std::string& path) {
    const json j = load_json(path);
    for (const char* key : {"source", "target", "lift", "orientation"})
        if (!j.contains(key)) throw IoError(path + ": missing \"" + key + "\"");
    const fs::path dir = fs::path(path).parent_path();
    ClosedCurve source = read_curve((dir / j["source"].get<std::string>()).string());
    ClosedCurve target = read_curve((dir / j["target"].get<std::string>()).string());
    std::vector<double> lift = j["lift"].get<std::vector<double>>();
    const int orientation = j["orientation"].get<int>();
    if (orientation != 1 && orientation != -1)
        throw IoError(path + ": orientation must be +1 or -1");
    return CurveMap::from_lift(std::move(source), std::move(target), std::move(lift), orientation);
}

void write_curve_map(const std::string& path, const CurveMap& h,
                     const std::string& source_path, const std::string& target_path) {
    save_json(path, json{{"source", source_path},
                         {"target", target_path},
                         {"lift", h.lift()},
                         {"orientation", h.orientation()}});
}

TimeVectorField read_field(const std::string& path, ClosedCurve curve) {
    const json j = load_json(path);
    if (!j.contains("grid_t") || !j.contains("values"))
        throw IoError(path + ": expected \"grid_t\" and \"values\"");
    auto values = j["values"].get<std::vector<std::vector<double>>>();
    if (static_cast<int>(values.size()) != j["grid_t"].get<int>())
        throw IoError(path + ": grid_t does not match the number of value rows");
    return TimeVectorField::from_samples(std::move(curve), std::move(values));
}

void write_field(const std::string& path, const TimeVectorField& v) {
    save_json(path,
              json{{"grid_t", v.time_sample_count()}, {"values", v.values()}});
}

VolumeSchedule read_schedule(const std::string& path) {
    const json j = load_json(path);
    if (!j.contains("samples")) throw IoError(path + ": expected \"samples\"");
    VolumeSchedule phi{j["samples"].get<std::vector<double>>()};
    validate_schedule(phi);
    return phi;
}

void write_schedule(const std::string& path, const VolumeSchedule& phi) {
    save_json(path, json{{"samples", phi.samples}});
}

Morph read_morph(const std::string& path) {
    const json j = load_json(path);
    if (!j.contains("grid_t") || !j.contains("frames"))
        throw IoError(path + ": expected \"grid_t\" and \"frames\"");
    if (static_cast<int>(j["frames"].size()) != j["grid_t"].get<int>())
        throw IoError(path + ": grid_t does not match the number of frames");
    std::vector<ClosedCurve> frames;
    frames.reserve(j["frames"].size());
    for (const auto& f : j["frames"]) frames.push_back(curve_from_payload(f, path));
    return make_morph(std::move(frames));
}

void write_morph(const std::string& path, const Morph& F) {
    json frames = json::array();
    for (const auto& f : F.frames) frames.push_back(curve_payload(f));
    save_json(path, json{{"grid_t", F.frame_count()}, {"frames", std::move(frames)}});
}

void write_energy_report_json(const std::string& path, const EnergyReport& r) {
    save_json(path, json{{"value", r.value},
                         {"densities", r.densities},
                         {"element_count", r.element_count},
                         {"time_sample_count", r.time_sample_count}});
}

void write_energy_report_csv(const std::string& path, const EnergyReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << "element,density\n";
    for (size_t i = 0; i < r.densities.size(); ++i) out << i << "," << r.densities[i] << "\n";
    save_text(path, out.str());
}

void write_trace_csv(const std::string& path, const MinimizationTrace& t) {
    std::ostringstream out;
    out.precision(17);
    out << "iter,energy,grad_norm\n";
    for (size_t i = 0; i < t.energies.size(); ++i) {
        const double g = i < t.grad_norms.size() ? t.grad_norms[i] : 0.0;
        out << i << "," << t.energies[i] << "," << g << "\n";
    }
    save_text(path, out.str());
}

void write_csv_column(const std::string& path, const std::string& header,
                      const std::vector<double>& values) {
    std::ostringstream out;
    out.precision(17);
    out << "index," << header << "\n";
    for (size_t i = 0; i < values.size(); ++i) out << i << "," << values[i] << "\n";
    save_text(path, out.str());
}

}  // namespace distmin::io

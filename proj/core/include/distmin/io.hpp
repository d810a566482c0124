#pragma once

#include <string>
#include <vector>

#include "distmin/functionals.hpp"
#include "distmin/maps.hpp"
#include "distmin/minimizers.hpp"
#include "distmin/morphing.hpp"

namespace distmin::io {

// Curve file: {"vertices": [[x,y],...], "closed": true}.
ClosedCurve read_curve(const std::string& path);
void write_curve(const std::string& path, const ClosedCurve& c);

// Wavefront OBJ subset: v / f lines, triangles only, 1-based indices.
SurfaceMesh read_mesh_obj(const std::string& path);
void write_mesh_obj(const std::string& path, const SurfaceMesh& m);

// Map file: {"source": path, "target": path, "lift": [...], "orientation": +-1}.
// Curve paths are resolved relative to the map file's directory.
CurveMap read_curve_map(const std::string& path);
void write_curve_map(const std::string& path, const CurveMap& h,
                     const std::string& source_path, const std::string& target_path);

// Field file: {"grid_t": n, "values": [[per-knot]...per-time...]}; the
// carrier curve is supplied separately.
TimeVectorField read_field(const std::string& path, ClosedCurve curve);
void write_field(const std::string& path, const TimeVectorField& v);

// Schedule file: {"samples": [...]}.
VolumeSchedule read_schedule(const std::string& path);
void write_schedule(const std::string& path, const VolumeSchedule& phi);

// Morph file: {"grid_t": K+1, "frames": [curve payloads...]}.
Morph read_morph(const std::string& path);
void write_morph(const std::string& path, const Morph& F);

void write_energy_report_json(const std::string& path, const EnergyReport& r);
void write_energy_report_csv(const std::string& path, const EnergyReport& r);

// CSV columns: iter, energy, grad_norm.
void write_trace_csv(const std::string& path, const MinimizationTrace& t);

void write_csv_column(const std::string& path, const std::string& header,
                      const std::vector<double>& values);

}  // namespace distmin::io

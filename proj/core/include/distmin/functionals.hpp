#pragma once

#include <vector>

#include "distmin/maps.hpp"

namespace distmin {

struct Morph;
struct MeshMorph;

// Sampled positive volume schedule phi on a uniform grid over [0,1].
struct VolumeSchedule {
    std::vector<double> samples;

    int sample_count() const { return static_cast<int>(samples.size()); }
    double time(int j) const { return static_cast<double>(j) / (samples.size() - 1); }
};

// Checks positivity and grid size; throws InvalidScheduleError.
void validate_schedule(const VolumeSchedule& phi);

// Scalar energy with its per-element density breakdown. value is the
// deterministic weighted sum of the densities.
struct EnergyReport {
    double value = 0.0;
    std::vector<double> densities;
    int element_count = 0;
    int time_sample_count = 0;
};

// Phi_1(h) = integral over M of (|J(h)| - 1)^2 w_M.
EnergyReport phi1(const CurveMap& h);
EnergyReport phi1(const MeshMap& h);

// max over elements of |J - Vol(N)/Vol(M)|; zero iff discretely critical.
double phi1_critical_residual(const CurveMap& h);
double phi1_critical_residual(const MeshMap& h);

// Phi_2 for curves: integral of (u'^2 - 1)^2 in arc length.
EnergyReport phi2_curve(const CurveMap& h);

// Phi_2 for meshes with fiber norm ||S||^2 = trace(S^2) in the orthonormal
// source frame.
EnergyReport phi2_mesh(const MeshMap& h);

// Analytic discrete directional derivative d/dt Phi_2(h o phi_t^Y) at t=0,
// for per-knot tangent scalars Y on the source knots.
double phi2_first_variation_curve(const CurveMap& h, const std::vector<double>& Y);

// Discrete residual of d/dt(u'^2 - 1) + (u''/u')(u'^2 - 1) per interior
// knot, central differences. Requires at least 4 knots.
std::vector<double> el_residual_curve(const CurveMap& h);

// Second derivative of t -> Phi_2(h o phi_t^Y) at 0 via 5-point central
// differences, Richardson extrapolated.
double phi2_second_variation_curve(const CurveMap& h, const std::vector<double>& Y);

// Distortion energy E(v): discrete first-order norm of v plus strain and
// bending of the time-one map as a correspondence (M,g1) -> (M,g2).
EnergyReport energy_E_curve(const TimeVectorField& v, const ClosedCurve& g1,
                            const ClosedCurve& g2, double dt = 1e-3);

// Infinitesimal distortion of a morph at time index j:
// integral of (d/dt J(f^t))^2 / J(f^t) w_M.
double epsilon_F(const Morph& F, int j);
double epsilon_F(const MeshMorph& F, int j);

// Total distortion Psi: trapezoidal time quadrature of epsilon_F.
double psi_total(const Morph& F);
double psi_total(const MeshMorph& F);

// Psi via the volume path only (valid for pairwise minimal morphs). If the
// morph is not pairwise minimal at tolerance 1e-6 the value is still
// returned and *pairwise_warning is set.
double psi_pairwise(const Morph& F, bool* pairwise_warning = nullptr);
double psi_pairwise(const MeshMorph& F, bool* pairwise_warning = nullptr);

// Auxiliary schedule functional Xi(phi) = integral of phidot^2 / phi,
// midpoint rule with forward-difference phidot per cell.
double xi(const VolumeSchedule& phi);

}  // namespace distmin

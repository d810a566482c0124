#include "distmin/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "distmin/morphing.hpp"

namespace distmin {

namespace {

// Per-element measures of each frame relative to the source frame.
// rows: frames, cols: elements.
std::vector<std::vector<double>> frame_measures(const Morph& F) {
    std::vector<std::vector<double>> m(F.frame_count());
    for (int j = 0; j < F.frame_count(); ++j) {
        const auto& c = F.frames[j];
        m[j].resize(c.vertex_count());
        for (int i = 0; i < c.vertex_count(); ++i) m[j][i] = c.segment_length(i);
    }
    return m;
}

std::vector<std::vector<double>> frame_measures(const MeshMorph& F) {
    std::vector<std::vector<double>> m(F.frame_count());
    for (int j = 0; j < F.frame_count(); ++j) {
        const auto& mesh = F.frames[j];
        m[j].resize(mesh.triangle_count());
        for (int t = 0; t < mesh.triangle_count(); ++t) m[j][t] = mesh.triangle_area(t);
    }
    return m;
}

// Second-order time derivative of per-frame samples at index j (central in
// the interior, one-sided at the endpoints).
double time_derivative(const std::vector<double>& samples, int j, double dt) {
    const int last = static_cast<int>(samples.size()) - 1;
    if (last < 1)
        throw InsufficientResolutionError("time derivative needs at least 2 frames");
    if (j < 0 || j > last) throw InvalidParameterError("time index out of range");
    if (j > 0 && j < last) return (samples[j + 1] - samples[j - 1]) / (2.0 * dt);
    if (last == 1) return (samples[1] - samples[0]) / dt;
    if (j == 0) return (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * dt);
    return (3.0 * samples[last] - 4.0 * samples[last - 1] + samples[last - 2]) / (2.0 * dt);
}

template <typename MorphT>
double epsilon_impl(const MorphT& F, int j) {
    if (F.frame_count() < 2)
        throw InsufficientResolutionError("infinitesimal distortion needs at least 2 frames");
    const auto measures = frame_measures(F);
    const int ne = static_cast<int>(measures[0].size());
    const double dt = 1.0 / (F.frame_count() - 1);

    double sum = 0.0;
    std::vector<double> per_frame(F.frame_count());
    for (int e = 0; e < ne; ++e) {
        const double w0 = measures[0][e];
        for (int f = 0; f < F.frame_count(); ++f) per_frame[f] = measures[f][e] / w0;
        const double dj = time_derivative(per_frame, j, dt);
        sum += dj * dj / per_frame[j] * w0;
    }
    return sum;
}

template <typename MorphT>
double psi_total_impl(const MorphT& F) {
    const int nk = F.frame_count();
    if (nk < 2)
        throw InsufficientResolutionError("total distortion needs at least 2 frames");
    const double dt = 1.0 / (nk - 1);
    double sum = 0.0;
    for (int j = 0; j < nk; ++j) {
        const double w = (j == 0 || j == nk - 1) ? 0.5 : 1.0;
        sum += w * epsilon_F(F, j) * dt;
    }
    return sum;
}

template <typename MorphT>
double psi_pairwise_impl(const MorphT& F, bool* pairwise_warning) {
    if (pairwise_warning) {
        const auto report = is_pairwise_minimal(F, 1e-6);
        *pairwise_warning = !report.verdict;
    }
    const auto vols = volume_path(F);
    const int nk = static_cast<int>(vols.size());
    if (nk < 2)
        throw InsufficientResolutionError("volume-path distortion needs at least 2 frames");
    const double dt = 1.0 / (nk - 1);
    double sum = 0.0;
    for (int j = 0; j < nk; ++j) {
        const double w = (j == 0 || j == nk - 1) ? 0.5 : 1.0;
        const double dv = time_derivative(vols, j, dt);
        sum += w * dv * dv / vols[j] * dt;
    }
    return sum;
}

}  // namespace

void validate_schedule(const VolumeSchedule& phi) {
    if (phi.sample_count() < 2)
        throw InvalidScheduleError("volume schedule needs at least 2 samples");
    for (int j = 0; j < phi.sample_count(); ++j)
        if (!(phi.samples[j] > 0.0))
            throw InvalidScheduleError("volume schedule sample " + std::to_string(j) +
                                       " is not positive");
}

EnergyReport phi1(const CurveMap& h) {
    const auto jac = jacobian_curve(h);
    EnergyReport r;
    r.element_count = static_cast<int>(jac.size());
    r.densities.resize(jac.size());
    for (size_t i = 0; i < jac.size(); ++i) {
        const double d = std::abs(jac[i]) - 1.0;
        r.densities[i] = d * d;
        r.value += r.densities[i] * h.source().segment_length(static_cast<int>(i));
    }
    return r;
}

EnergyReport phi1(const MeshMap& h) {
    const auto jac = jacobian_mesh(h);
    EnergyReport r;
    r.element_count = static_cast<int>(jac.size());
    r.densities.resize(jac.size());
    for (size_t t = 0; t < jac.size(); ++t) {
        const double d = std::abs(jac[t]) - 1.0;
        r.densities[t] = d * d;
        r.value += r.densities[t] * h.source().triangle_area(static_cast<int>(t));
    }
    return r;
}

double phi1_critical_residual(const CurveMap& h) {
    const double ratio = h.target().length() / h.source().length();
    double res = 0.0;
    for (double j : jacobian_curve(h)) res = std::max(res, std::abs(std::abs(j) - ratio));
    return res;
}

double phi1_critical_residual(const MeshMap& h) {
    const double ratio = h.target().area() / h.source().area();
    double res = 0.0;
    for (double j : jacobian_mesh(h)) res = std::max(res, std::abs(j - ratio));
    return res;
}

EnergyReport phi2_curve(const CurveMap& h) {
    const auto jac = jacobian_curve(h);
    EnergyReport r;
    r.element_count = static_cast<int>(jac.size());
    r.densities.resize(jac.size());
    for (size_t i = 0; i < jac.size(); ++i) {
        const double s = jac[i] * jac[i] - 1.0;
        r.densities[i] = s * s;
        r.value += r.densities[i] * h.source().segment_length(static_cast<int>(i));
    }
    return r;
}

EnergyReport phi2_mesh(const MeshMap& h) {
    const auto strain = strain_mesh(h);
    EnergyReport r;
    r.element_count = static_cast<int>(strain.values.size());
    r.densities.resize(strain.values.size());
    for (size_t t = 0; t < strain.values.size(); ++t) {
        const Mat2& s = strain.values[t];
        r.densities[t] = (s * s).trace();
        r.value += r.densities[t] * h.source().triangle_area(static_cast<int>(t));
    }
    return r;
}

double phi2_first_variation_curve(const CurveMap& h, const std::vector<double>& Y) {
    const int n = h.source().vertex_count();
    if (static_cast<int>(Y.size()) != n)
        throw DomainMismatchError("variation field must have one value per source vertex");

    const auto jac = jacobian_curve(h);
    // delta u_i = Y_i (J_{i-1} + J_i)/2: the two-sided derivative of the
    // piecewise-linear lift at the knot, averaged.
    std::vector<double> du(n + 1);
    for (int i = 0; i < n; ++i) du[i] = Y[i] * 0.5 * (jac[(i + n - 1) % n] + jac[i]);
    du[n] = du[0];  // the endpoint condition is preserved along the variation

    double dphi = 0.0;
    for (int i = 0; i < n; ++i) dphi += 4.0 * jac[i] * (jac[i] * jac[i] - 1.0) * (du[i + 1] - du[i]);
    return dphi;
}

std::vector<double> el_residual_curve(const CurveMap& h) {
    const int n = h.source().vertex_count();
    if (h.knot_count() < 4)
        throw InsufficientResolutionError("Euler-Lagrange residual needs at least 4 knots");

    const auto jac = jacobian_curve(h);
    std::vector<double> res(n);
    for (int i = 0; i < n; ++i) {
        const int prev = (i + n - 1) % n;
        const double ds_prev = h.source().segment_length(prev);
        const double ds_next = h.source().segment_length(i);
        const double d = 0.5 * (ds_prev + ds_next);
        const double jp = jac[prev];
        const double jn = jac[i];
        const double dstrain = (jn * jn - jp * jp) / d;
        const double up = (jp * ds_prev + jn * ds_next) / (ds_prev + ds_next);
        const double upp = (jn - jp) / d;
        res[i] = dstrain + upp / up * (up * up - 1.0);
    }
    return res;
}

namespace {

// Phi_2 along the variation path t -> h o phi_t^Y, where phi_t^Y displaces
// the source knots by t Y.
double phi2_along_variation(const CurveMap& h, const std::vector<double>& Y, double t) {
    const ClosedCurve& c = h.source();
    const int n = c.vertex_count();
    std::vector<double> lift(n + 1);
    for (int i = 0; i < n; ++i) lift[i] = c.arc_table()[i] + t * Y[i];
    lift[n] = lift[0] + c.length();
    const CurveMap phi = CurveMap::from_lift(c, c, std::move(lift), +1);
    return phi2_curve(compose_curve_maps(h, phi)).value;
}

double second_difference_5pt(const CurveMap& h, const std::vector<double>& Y, double f0,
                             double eps) {
    const double fp1 = phi2_along_variation(h, Y, eps);
    const double fm1 = phi2_along_variation(h, Y, -eps);
    const double fp2 = phi2_along_variation(h, Y, 2.0 * eps);
    const double fm2 = phi2_along_variation(h, Y, -2.0 * eps);
    return (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * eps * eps);
}

}  // namespace

double phi2_second_variation_curve(const CurveMap& h, const std::vector<double>& Y) {
    const int n = h.source().vertex_count();
    if (static_cast<int>(Y.size()) != n)
        throw DomainMismatchError("variation field must have one value per source vertex");

    const double eps = 1e-3;
    const double f0 = phi2_curve(h).value;
    const double d_full = second_difference_5pt(h, Y, f0, eps);
    const double d_half = second_difference_5pt(h, Y, f0, 0.5 * eps);
    return (16.0 * d_half - d_full) / 15.0;
}

EnergyReport energy_E_curve(const TimeVectorField& v, const ClosedCurve& g1,
                            const ClosedCurve& g2, double dt) {
    if (v.curve().vertex_count() != g1.vertex_count() ||
        g1.vertex_count() != g2.vertex_count())
        throw DomainMismatchError("field and curves must share one vertex count");

    const int n = g1.vertex_count();

    // ||v||^2 term: discrete first-order norm, trapezoid in time.
    double norm_term = 0.0;
    const int nt = v.time_sample_count();
    for (int j = 0; j < nt; ++j) {
        const auto& row = v.values()[j];
        double a = 0.0;
        for (int i = 0; i < n; ++i) {
            const double ds = g1.segment_length(i);
            const double vm = 0.5 * (row[i] + row[(i + 1) % n]);
            const double dv = (row[(i + 1) % n] - row[i]) / ds;
            a += (vm * vm + dv * dv) * ds;
        }
        const double w = (j == 0 || j == nt - 1) ? 0.5 : 1.0;
        norm_term += w * a / (nt - 1);
    }

    // Strain and bending of the correspondence (M,g1) -> (M,g2) composed
    // with the time-one map of the flow.
    const FlowMapResult flow = time_one_map(v, dt);
    std::vector<double> corr_lift(g2.arc_table());
    const CurveMap corr = CurveMap::from_lift(g1, g2, std::move(corr_lift), +1);
    const CurveMap composite = compose_curve_maps(corr, flow.map);

    const auto jac = jacobian_curve(composite);
    const auto k1 = curvature(g1);
    const auto k2 = curvature(g2);
    const auto& lift = composite.lift();
    const auto& arc2 = g2.arc_table();
    const double l2 = g2.length();

    auto kappa2_at = [&](double s) {
        double r = std::fmod(s, l2);
        if (r < 0.0) r += l2;
        const auto it = std::upper_bound(arc2.begin(), arc2.end(), r);
        int i = std::clamp(static_cast<int>(it - arc2.begin()) - 1, 0, n - 1);
        const double t = (r - arc2[i]) / (arc2[i + 1] - arc2[i]);
        return k2.kappa[i] + t * (k2.kappa[(i + 1) % n] - k2.kappa[i]);
    };

    EnergyReport r;
    r.element_count = n;
    r.time_sample_count = nt;
    r.densities.resize(n);
    double strain_term = 0.0, bending_term = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ds = g1.segment_length(i);
        const double s2 = jac[i] * jac[i] - 1.0;
        const double um = 0.5 * (lift[i] + lift[i + 1]);
        const double k1seg = 0.5 * (k1.kappa[i] + k1.kappa[(i + 1) % n]);
        const double db = kappa2_at(um) * jac[i] * jac[i] - k1seg;
        r.densities[i] = s2 * s2 + db * db;
        strain_term += s2 * s2 * ds;
        bending_term += db * db * ds;
    }
    r.value = norm_term + strain_term + bending_term;
    return r;
}

double epsilon_F(const Morph& F, int j) { return epsilon_impl(F, j); }
double epsilon_F(const MeshMorph& F, int j) { return epsilon_impl(F, j); }

double psi_total(const Morph& F) { return psi_total_impl(F); }
double psi_total(const MeshMorph& F) { return psi_total_impl(F); }

double psi_pairwise(const Morph& F, bool* pairwise_warning) {
    return psi_pairwise_impl(F, pairwise_warning);
}
double psi_pairwise(const MeshMorph& F, bool* pairwise_warning) {
    return psi_pairwise_impl(F, pairwise_warning);
}

double xi(const VolumeSchedule& phi) {
    validate_schedule(phi);
    const int n = phi.sample_count();
    const double dt = 1.0 / (n - 1);
    double sum = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
        const double rate = (phi.samples[j + 1] - phi.samples[j]) / dt;
        const double mid = 0.5 * (phi.samples[j] + phi.samples[j + 1]);
        sum += rate * rate / mid * dt;
    }
    return sum;
}

}  // namespace distmin

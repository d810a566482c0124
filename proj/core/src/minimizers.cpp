#include "distmin/minimizers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace distmin {

namespace {

// Projected gradient descent over positive lift increments d with the
// constraints sum(d) = total and d_i >= floor_value. energy and gradient
// are functions of the increment vector.
struct IncrementDescentResult {
    std::vector<double> increments;
    MinimizationTrace trace;
};

IncrementDescentResult descend_increments(
    std::vector<double> d, double total, double floor_value, const OptimizerConfig& cfg,
    const std::function<double(const std::vector<double>&)>& energy,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& gradient,
    double initial_step) {
    const int n = static_cast<int>(d.size());
    IncrementDescentResult out;
    d = project_monotone_increments(std::move(d), total, floor_value);

    double e = energy(d);
    std::vector<double> g(n), trial(n);
    double tau = cfg.step > 0.0 ? cfg.step : initial_step;

    out.trace.energies.push_back(e);
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        gradient(d, g);
        const double mean = std::accumulate(g.begin(), g.end(), 0.0) / n;
        double gnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = g[i] - mean;
            // clamped increments that want to shrink further satisfy the
            // first-order conditions
            if (d[i] <= floor_value * (1.0 + 1e-9) && r > 0.0) r = 0.0;
            gnorm = std::max(gnorm, std::abs(r));
        }
        out.trace.grad_norms.push_back(gnorm);
        if (gnorm <= cfg.grad_tol) {
            out.trace.converged = true;
            break;
        }

        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (int i = 0; i < n; ++i) trial[i] = d[i] - tau * (g[i] - mean);
            trial = project_monotone_increments(std::move(trial), total, floor_value);
            const double et = energy(trial);
            double step_sq = 0.0;
            for (int i = 0; i < n; ++i) {
                const double diff = d[i] - trial[i];
                step_sq += diff * diff;
            }
            if (et <= e - cfg.armijo / std::max(tau, 1e-300) * step_sq && et <= e) {
                d.swap(trial);
                e = et;
                accepted = true;
                break;
            }
            tau *= cfg.backtrack;
        }
        out.trace.energies.push_back(e);
        if (!accepted) {
            // The line search found no representable descent step: the
            // iterate is stationary to machine precision.
            out.trace.converged = true;
            break;
        }
        tau *= 1.3;  // cautious growth after a successful step
    }
    if (out.trace.grad_norms.empty()) out.trace.grad_norms.push_back(0.0);
    out.increments = std::move(d);
    return out;
}

CurveMap map_from_increments(const ClosedCurve& M, const ClosedCurve& N, double offset,
                             int orientation, const std::vector<double>& increments) {
    std::vector<double> lift(increments.size() + 1);
    lift[0] = offset;
    for (size_t i = 0; i < increments.size(); ++i)
        lift[i + 1] = lift[i] + orientation * increments[i];
    return CurveMap::from_lift(M, N, std::move(lift), orientation);
}

}  // namespace

std::pair<CurveMap, CurveMap> closed_form_phi2_minimizers(const ClosedCurve& M,
                                                          const ClosedCurve& N, int p_idx,
                                                          int q_idx) {
    if (p_idx < 0 || p_idx >= M.vertex_count() || q_idx < 0 || q_idx >= N.vertex_count())
        throw InvalidParameterError("base point index out of range");
    const double lm = M.length();
    const double ln = N.length();
    if (ln < lm * (1.0 - 1e-12))
        throw HypothesisViolationError(
            "closed-form minimizers require L(N) >= L(M); for L(N) < L(M) the infimum is not "
            "attained (see wrapping_sequence)");

    const double ratio = ln / lm;
    const double p_arc = M.arc_table()[p_idx];
    const double q_arc = N.arc_table()[q_idx];

    std::vector<double> lift1(M.vertex_count() + 1), lift2(M.vertex_count() + 1);
    for (int i = 0; i <= M.vertex_count(); ++i) {
        const double s = M.arc_table()[i];
        lift1[i] = q_arc + ratio * (s - p_arc);
        lift2[i] = q_arc - ratio * (s - p_arc);
    }
    return {CurveMap::from_lift(M, N, std::move(lift1), +1),
            CurveMap::from_lift(M, N, std::move(lift2), -1)};
}

CurveMap wrapping_sequence(const ClosedCurve& M, const ClosedCurve& N, int k) {
    if (k < 1) throw InvalidParameterError("wrapping sequence index must be >= 1");
    const double lm = M.length();
    const double ln = N.length();
    if (ln >= lm * (1.0 - 1e-12))
        throw HypothesisViolationError("wrapping sequence requires L(N) < L(M)");

    // Slope +1 except on a retraction plateau of slope -1 in the middle,
    // entered and left through cubic-blended transition zones.
    const double retract = 0.5 * (lm - ln);              // length at slope -1 (plus zones)
    const double w = std::min(lm / (4.0 * k), retract);  // transition width
    const double c1 = 0.25 * (lm + ln);                  // centers of the two transitions
    const double c2 = c1 + retract;

    auto lift_at = [&](double s) {
        // integral of the slope profile up to s
        if (s <= c1 - 0.5 * w) return s;
        const double base1 = c1 - 0.5 * w;
        if (s <= c1 + 0.5 * w) {
            const double t = (s - base1) / w;
            return base1 + w * (t - 2.0 * t * t * t + t * t * t * t);
        }
        if (s <= c2 - 0.5 * w) return base1 - (s - (c1 + 0.5 * w));
        const double base2 = base1 - (retract - w);
        if (s <= c2 + 0.5 * w) {
            const double t = (s - (c2 - 0.5 * w)) / w;
            return base2 + w * (-t + 2.0 * t * t * t - t * t * t * t);
        }
        return base2 + (s - (c2 + 0.5 * w));
    };

    std::vector<double> lift(M.vertex_count() + 1);
    for (int i = 0; i <= M.vertex_count(); ++i) lift[i] = lift_at(M.arc_table()[i]);
    lift.back() = lift.front() + ln;
    return CurveMap::from_lift(M, N, std::move(lift), +1, MapClass::smooth);
}

CurveMapMinimization minimize_phi1(const ClosedCurve& M, const ClosedCurve& N,
                                   const CurveMap& init, const OptimizerConfig& cfg) {
    const int n = M.vertex_count();
    const double ln = N.length();
    const double floor_value = cfg.eps_mono_scale * ln;
    const int orientation = init.orientation();

    std::vector<double> d(n), ds(n);
    for (int i = 0; i < n; ++i) {
        d[i] = orientation * (init.lift()[i + 1] - init.lift()[i]);
        ds[i] = M.segment_length(i);
    }

    auto energy = [&](const std::vector<double>& inc) {
        double e = 0.0;
        for (int i = 0; i < n; ++i) {
            const double dev = inc[i] / ds[i] - 1.0;
            e += dev * dev * ds[i];
        }
        return e;
    };
    auto gradient = [&](const std::vector<double>& inc, std::vector<double>& g) {
        for (int i = 0; i < n; ++i) g[i] = 2.0 * (inc[i] / ds[i] - 1.0);
    };

    const double tau0 = 0.45 * *std::min_element(ds.begin(), ds.end());
    auto res = descend_increments(std::move(d), ln, floor_value, cfg, energy, gradient, tau0);
    return {std::move(res.trace),
            map_from_increments(M, N, init.lift()[0], orientation, res.increments)};
}

CurveMapMinimization minimize_phi2_curve(const ClosedCurve& M, const ClosedCurve& N,
                                         const CurveMap& init, const OptimizerConfig& cfg) {
    const int n = M.vertex_count();
    const double ln = N.length();
    const double floor_value = cfg.eps_mono_scale * ln;
    const int orientation = init.orientation();

    std::vector<double> d(n), ds(n);
    for (int i = 0; i < n; ++i) {
        d[i] = orientation * (init.lift()[i + 1] - init.lift()[i]);
        ds[i] = M.segment_length(i);
    }

    auto energy = [&](const std::vector<double>& inc) {
        double e = 0.0;
        for (int i = 0; i < n; ++i) {
            const double j = inc[i] / ds[i];
            const double s = j * j - 1.0;
            e += s * s * ds[i];
        }
        return e;
    };
    auto gradient = [&](const std::vector<double>& inc, std::vector<double>& g) {
        for (int i = 0; i < n; ++i) {
            const double j = inc[i] / ds[i];
            g[i] = 4.0 * j * (j * j - 1.0);
        }
    };

    const double ratio = ln / M.length();
    const double curvature_scale = 4.0 * std::max(1.0, 3.0 * ratio * ratio);
    const double tau0 = 0.45 * *std::min_element(ds.begin(), ds.end()) / curvature_scale;
    auto res = descend_increments(std::move(d), ln, floor_value, cfg, energy, gradient, tau0);
    return {std::move(res.trace),
            map_from_increments(M, N, init.lift()[0], orientation, res.increments)};
}

VolumeSchedule optimal_schedule(double a, double b, int n) {
    if (a <= 0.0 || b <= 0.0) throw InvalidParameterError("volumes must be positive");
    if (n < 2) throw InvalidParameterError("schedule needs at least 2 samples");
    VolumeSchedule phi;
    phi.samples.resize(n);
    const double sa = std::sqrt(a), sb = std::sqrt(b);
    for (int j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) / (n - 1);
        const double r = (1.0 - t) * sa + t * sb;
        phi.samples[j] = r * r;
    }
    return phi;
}

ScheduleMinimization minimize_xi_numeric(double a, double b, int n, const OptimizerConfig& cfg) {
    if (a <= 0.0 || b <= 0.0) throw InvalidParameterError("volumes must be positive");
    if (n < 8) throw InvalidParameterError("schedule grid must have at least 8 samples");

    const double dt = 1.0 / (n - 1);
    VolumeSchedule phi;
    phi.samples.resize(n);
    for (int j = 0; j < n; ++j)  // linear start
        phi.samples[j] = a + (b - a) * j * dt;

    ScheduleMinimization out;
    out.trace.energies.push_back(xi(phi));

    std::vector<double> grad(n, 0.0), diag(n, 0.0), off(n, 0.0), delta(n, 0.0);
    std::vector<double> cdiag(n), coff(n), rhs(n);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const auto& p = phi.samples;
        std::fill(grad.begin(), grad.end(), 0.0);
        std::fill(diag.begin(), diag.end(), 0.0);
        std::fill(off.begin(), off.end(), 0.0);
        for (int j = 0; j + 1 < n; ++j) {
            const double u = p[j + 1] - p[j];
            const double v = p[j] + p[j + 1];
            grad[j] += (-4.0 * u * v - 2.0 * u * u) / (dt * v * v);
            grad[j + 1] += (4.0 * u * v - 2.0 * u * u) / (dt * v * v);
            const double h = 16.0 / (dt * v * v * v);
            diag[j] += h * p[j + 1] * p[j + 1];
            diag[j + 1] += h * p[j] * p[j];
            off[j] = -h * p[j] * p[j + 1];  // coupling (j, j+1)
        }

        double gnorm = 0.0;
        for (int j = 1; j + 1 < n; ++j) gnorm = std::max(gnorm, std::abs(grad[j]));
        out.trace.grad_norms.push_back(gnorm);
        if (gnorm <= cfg.grad_tol) {
            out.trace.converged = true;
            break;
        }

        // Newton direction for the interior samples (Thomas algorithm),
        // with a small diagonal damping for definiteness.
        const double damping = 1e-12 * (1.0 + diag[1]);
        for (int j = 1; j + 1 < n; ++j) {
            cdiag[j] = diag[j] + damping;
            coff[j] = off[j];
            rhs[j] = -grad[j];
        }
        for (int j = 2; j + 1 < n; ++j) {
            const double m = coff[j - 1] / cdiag[j - 1];
            cdiag[j] -= m * coff[j - 1];
            rhs[j] -= m * rhs[j - 1];
        }
        delta[n - 2] = rhs[n - 2] / cdiag[n - 2];
        for (int j = n - 3; j >= 1; --j) delta[j] = (rhs[j] - coff[j] * delta[j + 1]) / cdiag[j];

        const double e = out.trace.energies.back();
        double alpha = 1.0;
        bool accepted = false;
        VolumeSchedule trial = phi;
        for (int bt = 0; bt < 60; ++bt) {
            bool positive = true;
            for (int j = 1; j + 1 < n; ++j) {
                trial.samples[j] = p[j] + alpha * delta[j];
                if (trial.samples[j] <= 0.0) positive = false;
            }
            if (positive) {
                double decrease = 0.0;
                for (int j = 1; j + 1 < n; ++j) decrease += grad[j] * alpha * delta[j];
                const double et = xi(trial);
                if (et <= e + cfg.armijo * decrease && et <= e) {
                    phi = trial;
                    accepted = true;
                    break;
                }
            }
            alpha *= cfg.backtrack;
        }
        out.trace.energies.push_back(accepted ? xi(phi) : e);
        if (!accepted) break;
    }
    if (out.trace.grad_norms.empty()) out.trace.grad_norms.push_back(0.0);
    out.schedule = std::move(phi);
    return out;
}

namespace {

Vec3 stereographic_dilation(const Vec3& p_unit, double factor) {
    // Both poles are fixed points of the dilation.
    if (p_unit.z() >= 1.0 - 1e-12) return Vec3(0, 0, 1);
    if (p_unit.z() <= -1.0 + 1e-12) return Vec3(0, 0, -1);
    const double denom = 1.0 - p_unit.z();
    const double wx = factor * p_unit.x() / denom;
    const double wy = factor * p_unit.y() / denom;
    const double r2 = wx * wx + wy * wy;
    return Vec3(2.0 * wx, 2.0 * wy, r2 - 1.0) / (r2 + 1.0);
}

}  // namespace

std::vector<SphereFamilyEntry> sphere_family_phi2(const SurfaceMesh& m, double R,
                                                  const std::vector<double>& s_grid) {
    if (R <= 0.0) throw InvalidParameterError("radial scale must be positive");
    std::vector<SphereFamilyEntry> out;
    out.reserve(s_grid.size());
    for (double s : s_grid) {
        const double factor = std::exp(s);
        std::vector<Vec3> verts(m.vertex_count());
        for (int i = 0; i < m.vertex_count(); ++i) {
            const Vec3& v = m.vertices()[i];
            const double r = v.norm();
            verts[i] = R * r * stereographic_dilation(v / r, factor);
        }
        try {
            SurfaceMesh target =
                SurfaceMesh::from_vertices_and_triangles(std::move(verts), m.triangles());
            const MeshMap h = MeshMap::from_meshes(m, std::move(target));
            out.push_back({s, phi2_mesh(h).value});
        } catch (const InvalidGeometryError& e) {
            throw InvalidMapError("sphere family degenerates at s=" + std::to_string(s) + ": " +
                                  e.what());
        }
    }
    return out;
}

CurveMap random_monotone_map(const ClosedCurve& M, const ClosedCurve& N,
                             unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> inc_dist(0.25, 1.75);
    std::uniform_real_distribution<double> offset_dist(0.0, N.length());

    const int n = M.vertex_count();
    std::vector<double> d(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        d[i] = inc_dist(rng) * M.segment_length(i);
        sum += d[i];
    }
    const double scale = N.length() / sum;
    for (double& x : d) x *= scale;

    std::vector<double> lift(n + 1);
    lift[0] = offset_dist(rng);
    for (int i = 0; i < n; ++i) lift[i + 1] = lift[i] + d[i];
    return CurveMap::from_lift(M, N, std::move(lift), +1);
}

}  // namespace distmin

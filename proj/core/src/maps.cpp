#include "distmin/maps.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace distmin {

namespace {

bool curves_match(const ClosedCurve& a, const ClosedCurve& b) {
    if (a.vertex_count() != b.vertex_count()) return false;
    const double tol = 1e-9 * std::max(a.diameter(), b.diameter());
    for (int i = 0; i < a.vertex_count(); ++i)
        if ((a.vertices()[i] - b.vertices()[i]).norm() > tol) return false;
    return true;
}

// Piecewise-linear interpolation of samples over knots, r in [knots.front(), knots.back()].
double lerp_table(const std::vector<double>& knots, const std::vector<double>& samples, double r) {
    const auto it = std::upper_bound(knots.begin(), knots.end(), r);
    int i = static_cast<int>(it - knots.begin()) - 1;
    i = std::clamp(i, 0, static_cast<int>(knots.size()) - 2);
    const double t = (r - knots[i]) / (knots[i + 1] - knots[i]);
    return samples[i] + t * (samples[i + 1] - samples[i]);
}

}  // namespace

CurveMap CurveMap::from_lift(ClosedCurve source, ClosedCurve target, std::vector<double> lift,
                             int orientation, MapClass cls) {
    if (orientation != +1 && orientation != -1)
        throw InvalidParameterError("orientation must be +1 or -1");
    const int n = source.vertex_count();
    if (static_cast<int>(lift.size()) != n + 1)
        throw InvalidMapError("lift must have one sample per source knot (" +
                              std::to_string(n + 1) + "), got " + std::to_string(lift.size()));

    const double ln = target.length();
    const double rise = lift.back() - lift.front();
    if (std::abs(std::abs(rise) - ln) > 1e-9 * ln)
        throw InvalidMapError("lift endpoint condition |u(L_M) - u(0)| = L(N) violated");
    if (rise * orientation <= 0.0)
        throw InvalidMapError("lift direction contradicts orientation sign");
    lift.back() = lift.front() + orientation * ln;  // pin the degree condition exactly

    if (cls == MapClass::diffeomorphism) {
        const double floor_value = kEpsMonoScale * ln;
        for (int i = 0; i < n; ++i) {
            const double inc = (lift[i + 1] - lift[i]) * orientation;
            if (inc < 0.5 * floor_value)
                throw InvalidMapError("lift not strictly monotone at knot " + std::to_string(i));
        }
    }

    CurveMap h;
    h.source_ = std::move(source);
    h.target_ = std::move(target);
    h.lift_ = std::move(lift);
    h.orientation_ = orientation;
    h.cls_ = cls;
    return h;
}

CurveMap CurveMap::identity(const ClosedCurve& c) {
    std::vector<double> lift(c.arc_table());
    return from_lift(c, c, std::move(lift), +1);
}

CurveMap CurveMap::linear(ClosedCurve source, ClosedCurve target, double offset, int orientation) {
    const double ratio = target.length() / source.length();
    std::vector<double> lift;
    lift.reserve(source.vertex_count() + 1);
    for (double s : source.arc_table()) lift.push_back(offset + orientation * ratio * s);
    return from_lift(std::move(source), std::move(target), std::move(lift), orientation);
}

double CurveMap::eval_lift(double s) const {
    const double L = source_.length();
    const double k = std::floor(s / L);
    double r = s - k * L;
    if (r < 0.0) r = 0.0;
    if (r > L) r = L;
    const double per = lift_.back() - lift_.front();
    return lerp_table(source_.arc_table(), lift_, r) + k * per;
}

double CurveMap::invert_lift(double u) const {
    if (cls_ != MapClass::diffeomorphism)
        throw InvalidMapError("cannot invert a non-monotone map");
    const double per = lift_.back() - lift_.front();
    const double k = std::floor((u - lift_.front()) / per);
    const double r = u - k * per;  // within the base branch of the lift
    const int n = static_cast<int>(lift_.size());

    int lo = 0, hi = n - 2;
    while (lo < hi) {
        const int mid = (lo + hi + 1) / 2;
        const bool before = orientation_ > 0 ? (lift_[mid] <= r) : (lift_[mid] >= r);
        if (before)
            lo = mid;
        else
            hi = mid - 1;
    }
    const double denom = lift_[lo + 1] - lift_[lo];
    double t = (r - lift_[lo]) / denom;
    t = std::clamp(t, 0.0, 1.0);
    const auto& arc = source_.arc_table();
    const double s = arc[lo] + t * (arc[lo + 1] - arc[lo]);
    return s + k * source_.length();
}

MeshMap MeshMap::from_meshes(SurfaceMesh source, SurfaceMesh target) {
    if (source.vertex_count() != target.vertex_count() ||
        source.triangle_count() != target.triangle_count())
        throw DomainMismatchError("mesh map requires identical connectivity");
    for (int t = 0; t < source.triangle_count(); ++t)
        if (source.triangles()[t] != target.triangles()[t])
            throw DomainMismatchError("mesh map triangle lists differ at triangle " +
                                      std::to_string(t));
    MeshMap h;
    h.source_ = std::move(source);
    h.target_ = std::move(target);
    return h;
}

TimeVectorField TimeVectorField::from_samples(ClosedCurve curve,
                                              std::vector<std::vector<double>> values) {
    if (values.size() < 2)
        throw InvalidParameterError("time vector field needs at least 2 time samples");
    for (const auto& row : values)
        if (static_cast<int>(row.size()) != curve.vertex_count())
            throw DomainMismatchError("time vector field row size does not match vertex count");
    TimeVectorField f;
    f.curve_ = std::move(curve);
    f.values_ = std::move(values);
    return f;
}

double TimeVectorField::eval(double s, double t) const {
    const int nt = time_sample_count();
    double x = std::clamp(t, 0.0, 1.0) * (nt - 1);
    int j = std::min(static_cast<int>(x), nt - 2);
    const double wt = x - j;

    const double L = curve_.length();
    double r = std::fmod(s, L);
    if (r < 0.0) r += L;
    const auto& arc = curve_.arc_table();
    const auto it = std::upper_bound(arc.begin(), arc.end(), r);
    int i = std::clamp(static_cast<int>(it - arc.begin()) - 1, 0, curve_.vertex_count() - 1);
    const double ws = (r - arc[i]) / (arc[i + 1] - arc[i]);
    const int inext = (i + 1) % curve_.vertex_count();

    const double v0 = values_[j][i] + ws * (values_[j][inext] - values_[j][i]);
    const double v1 = values_[j + 1][i] + ws * (values_[j + 1][inext] - values_[j + 1][i]);
    return v0 + wt * (v1 - v0);
}

std::vector<double> jacobian_curve(const CurveMap& h) {
    const auto& lift = h.lift();
    const int n = h.source().vertex_count();
    std::vector<double> jac(n);
    for (int i = 0; i < n; ++i)
        jac[i] = (lift[i + 1] - lift[i]) / h.source().segment_length(i);
    return jac;
}

std::vector<double> jacobian_mesh(const MeshMap& h) {
    const int n = h.source().triangle_count();
    std::vector<double> jac(n);
    for (int t = 0; t < n; ++t)
        jac[t] = h.target().triangle_area(t) / h.source().triangle_area(t);
    return jac;
}

CurveStrainField strain_curve(const CurveMap& h) {
    const auto jac = jacobian_curve(h);
    CurveStrainField s;
    s.values.resize(jac.size());
    for (size_t i = 0; i < jac.size(); ++i) s.values[i] = jac[i] * jac[i] - 1.0;
    return s;
}

std::vector<Mat2> pullback_metric_mesh(const MeshMap& h) {
    const auto& src = h.source();
    const auto& dst = h.target();
    std::vector<Mat2> out(src.triangle_count());
    for (int t = 0; t < src.triangle_count(); ++t) {
        const auto& tri = src.triangles()[t];
        const Vec3 se1 = src.vertices()[tri[1]] - src.vertices()[tri[0]];
        const Vec3 se2 = src.vertices()[tri[2]] - src.vertices()[tri[0]];
        const Vec3 te1 = dst.vertices()[tri[1]] - dst.vertices()[tri[0]];
        const Vec3 te2 = dst.vertices()[tri[2]] - dst.vertices()[tri[0]];

        Mat2 E, T;
        E.col(0) = src.frames()[t].transpose() * se1;
        E.col(1) = src.frames()[t].transpose() * se2;
        T.col(0) = dst.frames()[t].transpose() * te1;
        T.col(1) = dst.frames()[t].transpose() * te2;

        const Mat2 A = T * E.inverse();
        out[t] = A.transpose() * A;
    }
    return out;
}

MeshStrainField strain_mesh(const MeshMap& h) {
    MeshStrainField s;
    s.values = pullback_metric_mesh(h);
    for (auto& m : s.values) m -= Mat2::Identity();
    return s;
}

CurveMap compose_curve_maps(const CurveMap& a, const CurveMap& b) {
    if (!curves_match(b.target(), a.source()))
        throw DomainMismatchError("compose: target of inner map differs from source of outer map");

    const int n = b.source().vertex_count();
    std::vector<double> lift(n + 1);
    for (int i = 0; i < n; ++i) lift[i] = a.eval_lift(b.lift()[i]);
    const int orientation = a.orientation() * b.orientation();
    lift[n] = lift[0] + orientation * a.target().length();

    const MapClass cls =
        (a.map_class() == MapClass::diffeomorphism && b.map_class() == MapClass::diffeomorphism)
            ? MapClass::diffeomorphism
            : MapClass::smooth;
    return CurveMap::from_lift(b.source(), a.target(), std::move(lift), orientation, cls);
}

CurveMap invert_curve_map(const CurveMap& h) {
    const auto& arc = h.target().arc_table();
    const int n = h.target().vertex_count();
    std::vector<double> lift(n + 1);
    for (int j = 0; j < n; ++j) lift[j] = h.invert_lift(arc[j]);
    lift[n] = lift[0] + h.orientation() * h.source().length();
    return CurveMap::from_lift(h.target(), h.source(), std::move(lift), h.orientation());
}

std::vector<double> evolve(const TimeVectorField& v, double s, double t,
                           const std::vector<double>& initial_positions, double dt) {
    if (dt <= 0.0) throw InvalidParameterError("flow step size must be positive");
    if (s < 0.0 || s > 1.0 || t < 0.0 || t > 1.0)
        throw InvalidParameterError("flow times must lie in [0,1]");

    std::vector<double> q = initial_positions;
    if (s == t) return q;

    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t - s) / dt - 1e-12)));
    const double h = (t - s) / steps;
    for (int step = 0; step < steps; ++step) {
        const double tcur = s + step * h;
        for (double& qi : q) {
            const double k1 = v.eval(qi, tcur);
            const double k2 = v.eval(qi + 0.5 * h * k1, tcur + 0.5 * h);
            const double k3 = v.eval(qi + 0.5 * h * k2, tcur + 0.5 * h);
            const double k4 = v.eval(qi + h * k3, tcur + h);
            qi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    return q;
}

std::vector<double> project_monotone_increments(std::vector<double> increments, double total,
                                                double floor_value) {
    // Alternate clamping and renormalization until the endpoint condition
    // holds together with the monotonicity floor.
    for (int round = 0; round < 50; ++round) {
        double sum = 0.0;
        for (double& d : increments) {
            d = std::max(d, floor_value);
            sum += d;
        }
        const double scale = total / sum;
        for (double& d : increments) d *= scale;
        if (std::abs(sum - total) <= 1e-14 * total) break;
    }
    return increments;
}

FlowMapResult time_one_map(const TimeVectorField& v, double dt) {
    const ClosedCurve& c = v.curve();
    const double L = c.length();
    const int n = c.vertex_count();

    std::vector<double> starts(c.arc_table().begin(), c.arc_table().begin() + n);
    std::vector<double> ends = evolve(v, 0.0, 1.0, starts, dt);

    std::vector<double> lift(n + 1);
    for (int i = 0; i < n; ++i) lift[i] = ends[i];
    lift[n] = ends[0] + L;

    const double eps_mono = kEpsMonoScale * L;
    const double fold_tol = 1e-6 * L;
    bool projected = false;
    std::vector<double> inc(n);
    for (int i = 0; i < n; ++i) {
        inc[i] = lift[i + 1] - lift[i];
        if (inc[i] < -fold_tol)
            throw FlowFoldError("flow folds at knot " + std::to_string(i) +
                                " (increment " + std::to_string(inc[i]) + ")");
        if (inc[i] < eps_mono) projected = true;
    }
    if (projected) {
        inc = project_monotone_increments(std::move(inc), L, eps_mono);
        for (int i = 0; i < n; ++i) lift[i + 1] = lift[i] + inc[i];
    }

    FlowMapResult result{CurveMap::from_lift(c, c, std::move(lift), +1), projected};
    return result;
}

}  // namespace distmin

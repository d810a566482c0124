// Command-line driver: geometry ingestion, energy evaluation, minimization,
// and morph construction. Every subcommand writes its reports under --out
// and emits a single-line JSON error on stderr on failure.
//
// Exit codes: 0 success (and converged, for minimizers), 2 input/parse
// failure, 3 minimizer did not converge, 4 fold (morph or flow), 1 any
// other invariant violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "distmin/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace distmin;

namespace {

struct Options {
    std::string input;
    std::string target;
    std::string field;
    std::string out = ".";
    int frames = 16;
    int grid = 200;
    unsigned long long seed = 1;
    double tol = 1e-9;
    double a = 1.0;
    double b = 4.0;
    double radius = 2.0;
};

int max_threads() {
    // Parallelism cap; all current kernels are single-threaded, so any
    // positive value is honored trivially.
    const char* env = std::getenv("DISTMIN_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    if (n < 1) throw InvalidParameterError("DISTMIN_THREADS must be a positive integer");
    return n;
}

fs::path out_path(const Options& opt, const std::string& name) {
    return fs::path(opt.out) / name;
}

void save_json_file(const fs::path& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << j.dump(2) << "\n";
}

bool is_obj(const std::string& path) { return fs::path(path).extension() == ".obj"; }

// eval-phi1 / eval-phi2 accept either a curve-map JSON (--input alone) or
// a pair of OBJ meshes with shared connectivity (--input + --target).
int cmd_eval_phi(const Options& opt, bool second_functional) {
    EnergyReport r;
    if (is_obj(opt.input)) {
        if (opt.target.empty()) throw InvalidParameterError("mesh evaluation needs --target");
        MeshMap h = MeshMap::from_meshes(io::read_mesh_obj(opt.input),
                                         io::read_mesh_obj(opt.target));
        r = second_functional ? phi2_mesh(h) : phi1(h);
    } else {
        CurveMap h = io::read_curve_map(opt.input);
        r = second_functional ? phi2_curve(h) : phi1(h);
    }
    const std::string stem = second_functional ? "phi2" : "phi1";
    io::write_energy_report_json(out_path(opt, stem + ".json").string(), r);
    io::write_energy_report_csv(out_path(opt, stem + "_densities.csv").string(), r);
    return 0;
}

int cmd_eval_xi(const Options& opt) {
    const VolumeSchedule phi = io::read_schedule(opt.input);
    save_json_file(out_path(opt, "xi.json"),
                   json{{"value", xi(phi)}, {"sample_count", phi.sample_count()}});
    return 0;
}

int cmd_minimize_map(const Options& opt, bool second_functional, int max_iters) {
    const ClosedCurve M = io::read_curve(opt.input);
    const ClosedCurve N = io::read_curve(opt.target);
    const CurveMap init = random_monotone_map(M, N, opt.seed);

    OptimizerConfig cfg;
    cfg.grad_tol = opt.tol;
    cfg.max_iters = max_iters;
    const CurveMapMinimization res = second_functional ? minimize_phi2_curve(M, N, init, cfg)
                                                       : minimize_phi1(M, N, init, cfg);

    io::write_trace_csv(out_path(opt, "trace.csv").string(), res.trace);
    io::write_curve_map(out_path(opt, "map.json").string(), res.map, opt.input, opt.target);
    save_json_file(out_path(opt, "summary.json"),
                   json{{"final_energy", res.trace.energies.back()},
                        {"iterations", res.trace.energies.size() - 1},
                        {"converged", res.trace.converged},
                        {"critical_residual", phi1_critical_residual(res.map)}});
    return res.trace.converged ? 0 : 3;
}

int cmd_minimize_xi(const Options& opt, int max_iters) {
    OptimizerConfig cfg;
    cfg.grad_tol = opt.tol;
    cfg.max_iters = max_iters;
    const ScheduleMinimization res = minimize_xi_numeric(opt.a, opt.b, opt.grid, cfg);

    const double reference =
        4.0 * std::pow(std::sqrt(opt.b) - std::sqrt(opt.a), 2);
    io::write_trace_csv(out_path(opt, "trace.csv").string(), res.trace);
    io::write_schedule(out_path(opt, "schedule.json").string(), res.schedule);
    save_json_file(out_path(opt, "summary.json"),
                   json{{"final_energy", res.trace.energies.back()},
                        {"closed_form", reference},
                        {"converged", res.trace.converged}});
    return res.trace.converged ? 0 : 3;
}

int cmd_wrap_sequence(const Options& opt) {
    const ClosedCurve M = io::read_curve(opt.input);
    const ClosedCurve N = io::read_curve(opt.target);
    std::vector<double> energies;
    for (int k = 1; k <= opt.frames; ++k)
        energies.push_back(phi2_curve(wrapping_sequence(M, N, k)).value);
    io::write_csv_column(out_path(opt, "wrap_energies.csv").string(), "phi2", energies);
    return 0;
}

int cmd_sphere_check(const Options& opt) {
    const SurfaceMesh m = io::read_mesh_obj(opt.input);
    std::vector<double> s_grid(opt.grid);
    for (int i = 0; i < opt.grid; ++i)
        s_grid[i] = -0.5 + static_cast<double>(i) / (opt.grid - 1);
    const auto family = sphere_family_phi2(m, opt.radius, s_grid);

    int argmin = 0;
    double phi2_at_zero = 0.0;
    std::vector<double> values(family.size());
    for (size_t i = 0; i < family.size(); ++i) {
        values[i] = family[i].phi2;
        if (family[i].phi2 < family[argmin].phi2) argmin = static_cast<int>(i);
        if (std::abs(family[i].s) < 1e-12) phi2_at_zero = family[i].phi2;
    }
    const double r2 = opt.radius * opt.radius;
    io::write_csv_column(out_path(opt, "sphere_phi2.csv").string(), "phi2", values);
    save_json_file(out_path(opt, "summary.json"),
                   json{{"argmin_s", family[argmin].s},
                        {"phi2_at_zero", phi2_at_zero},
                        {"round_sphere_value", 2.0 * (r2 - 1.0) * (r2 - 1.0) * m.area()}});
    return 0;
}

int cmd_morph_make(const Options& opt) {
    const CurveMap h = io::read_curve_map(opt.input);
    const Morph F = make_linear_morph(h, opt.frames);
    io::write_morph(out_path(opt, "morph.json").string(), F);
    io::write_csv_column(out_path(opt, "volume_path.csv").string(), "volume", volume_path(F));
    return 0;
}

int cmd_morph_pairwise(const Options& opt) {
    const Morph F = io::read_morph(opt.input);
    const PairwiseReport before = is_pairwise_minimal(F, opt.tol);
    const Morph G = pairwise_minimalize_curve(F);
    const PairwiseReport after = is_pairwise_minimal(G, opt.tol);

    io::write_morph(out_path(opt, "morph_min.json").string(), G);
    save_json_file(out_path(opt, "summary.json"),
                   json{{"input_max_deviation", before.max_deviation},
                        {"input_verdict", before.verdict},
                        {"output_max_deviation", after.max_deviation},
                        {"output_verdict", after.verdict},
                        {"psi_total_input", psi_total(F)},
                        {"psi_total_output", psi_total(G)},
                        {"psi_gap", psi_gap(F)}});
    return 0;
}

int cmd_morph_optimal(const Options& opt) {
    const Morph base = io::read_morph(opt.input);
    const ClosedCurve& M = base.frames.front();
    const ClosedCurve& N = base.frames.back();
    const Morph F = optimal_morph_curve(M, N, base);

    const double a = M.length();
    const double b = N.length();
    const double reference = 4.0 * std::pow(std::sqrt(b) - std::sqrt(a), 2);
    bool warn = false;
    const double psi = psi_total(F);
    io::write_morph(out_path(opt, "morph.json").string(), F);
    io::write_csv_column(out_path(opt, "volume_path.csv").string(), "volume", volume_path(F));
    save_json_file(out_path(opt, "summary.json"),
                   json{{"psi_total", psi},
                        {"psi_pairwise", psi_pairwise(F, &warn)},
                        {"pairwise_warning", warn},
                        {"closed_form", reference}});
    return 0;
}

int cmd_flow_energy(const Options& opt) {
    const ClosedCurve g1 = io::read_curve(opt.input);
    const ClosedCurve g2 = opt.target.empty() ? g1 : io::read_curve(opt.target);
    const TimeVectorField v = io::read_field(opt.field, g1);
    const EnergyReport r = energy_E_curve(v, g1, g2);
    io::write_energy_report_json(out_path(opt, "flow_energy.json").string(), r);
    io::write_energy_report_csv(out_path(opt, "flow_energy_densities.csv").string(), r);
    return 0;
}

void emit_error(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimal-distortion bending and morphing of closed curves and surfaces"};
    app.require_subcommand(1);

    Options opt;
    int max_iters = 20000;
    std::string subcommand;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", opt.out, "output directory");
        cmd->callback([&, cmd] { subcommand = cmd->get_name(); });
        return cmd;
    };

    auto* eval_phi1 = add_common(app.add_subcommand("eval-phi1", "evaluate the volume functional"));
    eval_phi1->add_option("--input", opt.input)->required();
    eval_phi1->add_option("--target", opt.target);

    auto* eval_phi2 = add_common(app.add_subcommand("eval-phi2", "evaluate the strain functional"));
    eval_phi2->add_option("--input", opt.input)->required();
    eval_phi2->add_option("--target", opt.target);

    auto* eval_xi = add_common(app.add_subcommand("eval-xi", "evaluate the schedule functional"));
    eval_xi->add_option("--input", opt.input)->required();

    auto* min_phi1 = add_common(app.add_subcommand("minimize-phi1", "minimize the volume functional"));
    min_phi1->add_option("--input", opt.input)->required();
    min_phi1->add_option("--target", opt.target)->required();
    min_phi1->add_option("--seed", opt.seed);
    min_phi1->add_option("--tol", opt.tol);
    min_phi1->add_option("--max-iters", max_iters);

    auto* min_phi2 = add_common(app.add_subcommand("minimize-phi2", "minimize the strain functional"));
    min_phi2->add_option("--input", opt.input)->required();
    min_phi2->add_option("--target", opt.target)->required();
    min_phi2->add_option("--seed", opt.seed);
    min_phi2->add_option("--tol", opt.tol);
    min_phi2->add_option("--max-iters", max_iters);

    auto* min_xi = add_common(app.add_subcommand("minimize-xi", "minimize the schedule functional"));
    min_xi->add_option("--a", opt.a, "start volume")->required();
    min_xi->add_option("--b", opt.b, "end volume")->required();
    min_xi->add_option("--grid", opt.grid);
    min_xi->add_option("--tol", opt.tol);
    min_xi->add_option("--max-iters", max_iters);

    auto* wrap = add_common(app.add_subcommand("wrap-sequence", "wrapping minimizing sequence"));
    wrap->add_option("--input", opt.input)->required();
    wrap->add_option("--target", opt.target)->required();
    wrap->add_option("--frames", opt.frames, "number of sequence elements");

    auto* sphere = add_common(app.add_subcommand("sphere-check", "dilation family on a sphere"));
    sphere->add_option("--input", opt.input)->required();
    sphere->add_option("--radius", opt.radius);
    sphere->add_option("--grid", opt.grid)->default_val(11);

    auto* mmake = add_common(app.add_subcommand("morph-make", "linear-interpolation morph"));
    mmake->add_option("--input", opt.input)->required();
    mmake->add_option("--frames", opt.frames);

    auto* mpair = add_common(app.add_subcommand("morph-pairwise", "pairwise minimality"));
    mpair->add_option("--input", opt.input)->required();
    mpair->add_option("--tol", opt.tol)->default_val(1e-6);

    auto* mopt = add_common(app.add_subcommand("morph-optimal", "optimal volume-schedule morph"));
    mopt->add_option("--input", opt.input)->required();

    auto* flow = add_common(app.add_subcommand("flow-energy", "distortion energy of a flow"));
    flow->add_option("--input", opt.input, "carrier curve")->required();
    flow->add_option("--field", opt.field, "time-dependent field")->required();
    flow->add_option("--target", opt.target, "end metric curve");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        emit_error("cli-parse", e.what());
        return 2;
    }

    bool wrote_output = false;
    try {
        (void)max_threads();
        if (!fs::exists(opt.out)) fs::create_directories(opt.out);
        wrote_output = true;
        if (subcommand == "eval-phi1") return cmd_eval_phi(opt, false);
        if (subcommand == "eval-phi2") return cmd_eval_phi(opt, true);
        if (subcommand == "eval-xi") return cmd_eval_xi(opt);
        if (subcommand == "minimize-phi1") return cmd_minimize_map(opt, false, max_iters);
        if (subcommand == "minimize-phi2") return cmd_minimize_map(opt, true, max_iters);
        if (subcommand == "minimize-xi") return cmd_minimize_xi(opt, max_iters);
        if (subcommand == "wrap-sequence") return cmd_wrap_sequence(opt);
        if (subcommand == "sphere-check") return cmd_sphere_check(opt);
        if (subcommand == "morph-make") return cmd_morph_make(opt);
        if (subcommand == "morph-pairwise") return cmd_morph_pairwise(opt);
        if (subcommand == "morph-optimal") return cmd_morph_optimal(opt);
        if (subcommand == "flow-energy") return cmd_flow_energy(opt);
        emit_error("cli-parse", "unknown subcommand");
        return 2;
    } catch (const Error& e) {
        emit_error(e.kind(), e.what());
        if (wrote_output) {
            std::ofstream marker(out_path(opt, "FAILED"));
            marker << json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
        }
        const std::string kind = e.kind();
        if (kind == "io") return 2;
        if (kind == "morph-fold" || kind == "flow-fold") return 4;
        return 1;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
}

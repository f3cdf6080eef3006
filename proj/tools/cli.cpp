#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "gqi/errors.hpp"
#include "gqi/extremal.hpp"
#include "gqi/gaussian.hpp"
#include "gqi/harness.hpp"
#include "gqi/interface_map.hpp"

namespace gqi::cli {

namespace {

struct ResourceFlags {
    std::optional<double> a, b, c_plus, c_minus;
    std::optional<double> s, d, g, lambda;
};

void add_resource_flags(CLI::App& app, ResourceFlags& f) {
    auto* a = app.add_option("--a", f.a, "mode-1 diagonal element");
    auto* b = app.add_option("--b", f.b, "mode-2 diagonal element");
    auto* cp = app.add_option("--cplus", f.c_plus, "correlation c+");
    auto* cm = app.add_option("--cminus", f.c_minus, "correlation c-");
    auto* s = app.add_option("--s", f.s, "mean marginal parameter");
    auto* d = app.add_option("--d", f.d, "marginal asymmetry");
    auto* g = app.add_option("--g", f.g, "sqrt(det V12)");
    auto* l = app.add_option("--lambda", f.lambda, "entanglement ordering in [-1, 1]");
    for (auto* x : {a, b, cp, cm}) {
        for (auto* y : {s, d, g, l}) x->excludes(y);
    }
}

struct Resource {
    StandardFormCM cm;
    std::optional<EntropicParams> params;
};

Resource resolve(const ResourceFlags& f) {
    const bool direct = f.a || f.b || f.c_plus || f.c_minus;
    const bool entropic = f.s || f.d || f.g || f.lambda;
    if (direct) {
        if (!(f.a && f.b && f.c_plus && f.c_minus)) throw InvalidInput("--a, --b, --cplus and --cminus must be given together");
        Resource r{{*f.a, *f.b, *f.c_plus, *f.c_minus}, std::nullopt};
        require_physical(r.cm);
        try {
            r.params = to_entropic_params(r.cm);
        } catch (const DomainError&) {
            // physical but outside the entangled parameterization
        }
        return r;
    }
    if (entropic) {
        if (!(f.s && f.d && f.g && f.lambda)) throw InvalidInput("--s, --d, --g and --lambda must be given together");
        const EntropicParams p{*f.s, *f.d, *f.g, *f.lambda};
        return {from_entropic_params(p), p};
    }
    throw InvalidInput("give either --a/--b/--cplus/--cminus or --s/--d/--g/--lambda");
}

nlohmann::json matrix_json(const Matrix4cd& m) {
    auto rows = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
        auto row = nlohmann::json::array();
        for (int c = 0; c < 4; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json map_json(const Resource& r) {
    const DiagnosticsRecord diag = compute_diagnostics(r.cm, r.params.value_or(EntropicParams{}));
    nlohmann::json j;
    j["input"] = {{"a", r.cm.a}, {"b", r.cm.b}, {"c_plus", r.cm.c_plus}, {"c_minus", r.cm.c_minus}};
    if (r.params) {
        j["params"] = {{"s", r.params->s}, {"d", r.params->d}, {"g", r.params->g}, {"lambda", r.params->lambda}};
    } else {
        j["params"] = nullptr;
    }
    j["steady_state"] = matrix_json(steady_state(r.cm).matrix());
    j["diagnostics"] = {
        {"field_entropy_global", diag.field_entropy_global},
        {"field_entropy_marginals", {diag.field_entropy_marginals.first, diag.field_entropy_marginals.second}},
        {"field_negativity", diag.field_negativity},
        {"qubit_entropy_global", diag.qubit_entropy_global},
        {"qubit_entropy_marginals", {diag.qubit_entropy_marginals.first, diag.qubit_entropy_marginals.second}},
        {"qubit_negativity", diag.qubit_negativity},
    };
    return j;
}

// Writes to the named file, or to `out` when path is empty or "-".
template <typename Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
    fn(file);
    if (!file) throw std::runtime_error(fmt::format("failed writing '{}'", path));
}

TwoQubitState initial_state(const std::string& name) {
    Matrix4cd m = Matrix4cd::Zero();
    if (name == "00") {
        m(0, 0) = 1.0;
    } else if (name == "11") {
        m(3, 3) = 1.0;
    } else if (name == "mixed") {
        m = Matrix4cd::Identity() / 4.0;
    } else {
        throw InvalidInput(fmt::format("unknown initial state '{}'", name));
    }
    return TwoQubitState(m);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian-to-qubit interface map: steady states, dynamics, sampling and boundaries", "gqmap"};
    app.require_subcommand(1, 1);

    ResourceFlags map_flags;
    auto* map_cmd = app.add_subcommand("map", "print the steady state and diagnostics of one resource as JSON");
    add_resource_flags(*map_cmd, map_flags);

    ResourceFlags evolve_flags;
    double tau_max = 10.0;
    int steps = 201;
    double gamma = 1.0;
    std::string initial = "00";
    std::string evolve_out;
    auto* evolve_cmd = app.add_subcommand("evolve", "integrate the master equation and write a trajectory CSV");
    add_resource_flags(*evolve_cmd, evolve_flags);
    evolve_cmd->add_option("--tau-max", tau_max, "final time")->capture_default_str();
    evolve_cmd->add_option("--steps", steps, "number of output samples")->capture_default_str();
    evolve_cmd->add_option("--gamma", gamma, "coupling; rescales the time axis")->capture_default_str();
    evolve_cmd->add_option("--initial", initial, "00 (|00><00|), 11 (|11><11|) or mixed (I/4)")->capture_default_str();
    evolve_cmd->add_option("--out", evolve_out, "output CSV (stdout if omitted)");

    ExperimentConfig config;
    std::string kind_name;
    auto* sample_cmd = app.add_subcommand("sample", "run a seeded sampling experiment and write CSV + JSON sidecar");
    sample_cmd->add_option("--kind", kind_name,
                           "fig1a_entropy_scatter, fig1b_negativity_scatter, fig2a_mems_plane, "
                           "fig2bc_entropy_surfaces, figS4_marginal_pyramid, trajS1_S3")
        ->required();
    sample_cmd->add_option("--n", config.n_samples, "number of samples")->capture_default_str();
    sample_cmd->add_option("--seed", config.seed, "64-bit seed")->capture_default_str();
    sample_cmd->add_option("--smax", config.s_max, "upper bound of s")->capture_default_str();
    sample_cmd->add_option("--threads", config.threads, "worker threads")->capture_default_str();
    sample_cmd->add_option("--werner-fraction", config.werner_fraction,
                           "fraction of samples from the d=0, lambda=-1, s>=5 corner")
        ->capture_default_str();
    sample_cmd->add_flag("--symmetric", config.symmetric_only, "force d = 0");
    sample_cmd->add_option("--tau-max", config.tau_max, "trajectory horizon")->capture_default_str();
    sample_cmd->add_option("--steps", config.steps, "trajectory samples")->capture_default_str();
    sample_cmd->add_option("--out", config.output_path, "output CSV path")->required();

    std::string curve_name;
    BoundaryOptions boundary_options;
    std::string boundary_out;
    auto* boundary_cmd = app.add_subcommand("boundary", "write an analytic boundary curve or surface as CSV");
    boundary_cmd->add_option("--curve", curve_name,
                             "qubit_entropy_max, qubit_entropy_min, nmax_vs_field_negativity, mems_werner, "
                             "qmems_surface, qlems_surface, gmemms_ridge")
        ->required();
    boundary_cmd->add_option("--points", boundary_options.points, "points per curve")->capture_default_str();
    boundary_cmd->add_option("--grid", boundary_options.grid, "points per surface axis")->capture_default_str();
    boundary_cmd->add_option("--nmax", boundary_options.field_negativity_max, "largest field negativity")
        ->capture_default_str();
    boundary_cmd->add_option("--out", boundary_out, "output CSV (stdout if omitted)");

    VerifyOptions verify_options;
    auto* verify_cmd = app.add_subcommand("verify", "run every oracle cross-check and print a JSON report");
    verify_cmd->add_option("--seed", verify_options.seed, "seed for sampled cases")->capture_default_str();
    verify_cmd->add_option("--samples", verify_options.samples, "sampled cases per check")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*map_cmd) {
            out << map_json(resolve(map_flags)).dump(2) << '\n';
        } else if (*evolve_cmd) {
            const Resource r = resolve(evolve_flags);
            const Trajectory traj = evolve(initial_state(initial), r.cm, gamma, tau_max, steps);
            with_output(evolve_out, out, [&](std::ostream& o) { write_trajectory_csv(o, traj); });
        } else if (*sample_cmd) {
            config.kind = experiment_kind_from_string(kind_name);
            const ExperimentResult result = run_and_write(config);
            err << fmt::format("wrote {} rows to {}\n", result.rows.size(), config.output_path);
        } else if (*boundary_cmd) {
            const BoundaryCurve curve = sample_boundary(curve_kind_from_string(curve_name), boundary_options);
            with_output(boundary_out, out, [&](std::ostream& o) { write_boundary_csv(o, curve); });
        } else if (*verify_cmd) {
            const VerifyReport report = verify_suite(verify_options);
            out << report.to_json().dump(2) << '\n';
            return report.all_passed() ? 0 : 1;
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace gqi::cli

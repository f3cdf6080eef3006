#include "gqi/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <thread>

#include <Eigen/LU>
#include <fmt/format.h>

#include "gqi/errors.hpp"
#include "gqi/extremal.hpp"
#include "gqi/interface_map.hpp"
#include "gqi/qubit.hpp"

namespace gqi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 6> kKindNames{{
    {ExperimentKind::fig1a_entropy_scatter, "fig1a_entropy_scatter"},
    {ExperimentKind::fig1b_negativity_scatter, "fig1b_negativity_scatter"},
    {ExperimentKind::fig2a_mems_plane, "fig2a_mems_plane"},
    {ExperimentKind::fig2bc_entropy_surfaces, "fig2bc_entropy_surfaces"},
    {ExperimentKind::figS4_marginal_pyramid, "figS4_marginal_pyramid"},
    {ExperimentKind::trajS1_S3, "trajS1_S3"},
}};

// Fills out[i] = fn(i) on `threads` workers using a static partition.
template <typename T, typename Fn>
void parallel_fill(std::vector<T>& out, int threads, Fn fn) {
    const std::size_t n = out.size();
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

SamplerConstraints constraints_for(const ExperimentConfig& config) {
    SamplerConstraints c;
    c.s_max = config.s_max;
    c.symmetric = config.symmetric_only || config.kind == ExperimentKind::fig2bc_entropy_surfaces;
    c.werner_fraction = config.werner_fraction;
    return c;
}

std::vector<std::string> record_header() {
    return {"index",
            "s",
            "d",
            "g",
            "lambda",
            "field_entropy_global",
            "field_entropy_marginal_1",
            "field_entropy_marginal_2",
            "field_negativity",
            "qubit_entropy_global",
            "qubit_entropy_marginal_a",
            "qubit_entropy_marginal_b",
            "qubit_negativity"};
}

std::vector<double> record_row(std::size_t index, const DiagnosticsRecord& r) {
    return {static_cast<double>(index),
            r.params.s,
            r.params.d,
            r.params.g,
            r.params.lambda,
            r.field_entropy_global,
            r.field_entropy_marginals.first,
            r.field_entropy_marginals.second,
            r.field_negativity,
            r.qubit_entropy_global,
            r.qubit_entropy_marginals.first,
            r.qubit_entropy_marginals.second,
            r.qubit_negativity};
}

double or_nan(const std::function<double()>& f) {
    try {
        return f();
    } catch (const DomainError&) {
        return kNaN;
    }
}

std::vector<std::string> extra_header(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::fig1a_entropy_scatter:
            return {"qubit_entropy_min_bound", "qubit_entropy_max_bound", "purified", "entangled"};
        case ExperimentKind::fig1b_negativity_scatter:
            return {"normalized_field_negativity", "qubit_negativity_max_bound", "entangled"};
        case ExperimentKind::fig2a_mems_plane:
            return {"mems_boundary"};
        case ExperimentKind::fig2bc_entropy_surfaces:
            return {"qmems_negativity", "qlems_negativity"};
        case ExperimentKind::figS4_marginal_pyramid:
            return {"gmemms_boundary"};
        case ExperimentKind::trajS1_S3:
            break;
    }
    return {};
}

std::vector<double> extra_columns(ExperimentKind kind, const DiagnosticsRecord& r) {
    switch (kind) {
        case ExperimentKind::fig1a_entropy_scatter:
            return {qubit_entropy_min(r.field_entropy_global), qubit_entropy_max(r.field_entropy_global),
                    r.qubit_entropy_global < r.field_entropy_global ? 1.0 : 0.0, r.qubit_negativity > 0.0 ? 1.0 : 0.0};
        case ExperimentKind::fig1b_negativity_scatter:
            return {r.field_negativity / (1.0 + r.field_negativity), nmax_vs_field_negativity(r.field_negativity),
                    r.qubit_negativity > 0.0 ? 1.0 : 0.0};
        case ExperimentKind::fig2a_mems_plane:
            return {mems_boundary(std::clamp(r.qubit_entropy_global, 0.0, 1.0))};
        case ExperimentKind::fig2bc_entropy_surfaces: {
            const double s_loc = r.qubit_entropy_marginals.first;
            const double s = std::max(r.qubit_entropy_global, 0.0);
            return {or_nan([&] { return qmems_negativity(s_loc, s); }),
                    or_nan([&] { return qlems_negativity(s_loc, s); })};
        }
        case ExperimentKind::figS4_marginal_pyramid:
            return {gmemms_image_boundary(std::clamp(r.qubit_entropy_marginals.first, 0.0, 1.0 - 1e-15),
                                          std::clamp(r.qubit_entropy_marginals.second, 0.0, 1.0 - 1e-15))};
        case ExperimentKind::trajS1_S3:
            break;
    }
    return {};
}

// Closed-form cross-check of stored rows (every 100th sample).
void spot_check(const std::vector<DiagnosticsRecord>& records) {
    for (std::size_t i = 0; i < records.size(); i += 100) {
        const auto& r = records[i];
        const StandardFormCM cm = from_entropic_params(r.params);
        const double residuals[] = {
            std::abs(mapped_negativity(cm) - r.qubit_negativity),
            std::abs(mapped_global_entropy(cm) - r.qubit_entropy_global),
            std::abs(mapped_marginal_entropy(r.field_entropy_marginals.first) - r.qubit_entropy_marginals.first),
            std::abs(mapped_marginal_entropy(r.field_entropy_marginals.second) - r.qubit_entropy_marginals.second),
        };
        for (double res : residuals) {
            if (!(res <= 1e-9)) {
                throw NumericalError(fmt::format("row {} fails the closed-form spot check (residual {:.3e})", i, res));
            }
        }
    }
}

ExperimentResult scatter_experiment(const ExperimentConfig& config) {
    const SamplerConstraints constraints = constraints_for(config);
    std::vector<DiagnosticsRecord> records(static_cast<std::size_t>(config.n_samples));
    parallel_fill(records, config.threads, [&](std::size_t i) {
        SampleStream rng(config.seed, i);
        return compute_diagnostics(sample_params(rng, constraints));
    });
    spot_check(records);

    ExperimentResult result;
    result.header = record_header();
    for (auto& h : extra_header(config.kind)) result.header.push_back(std::move(h));
    result.rows.resize(records.size());
    parallel_fill(result.rows, config.threads, [&](std::size_t i) {
        auto row = record_row(i, records[i]);
        for (double x : extra_columns(config.kind, records[i])) row.push_back(x);
        return row;
    });
    result.records = std::move(records);
    return result;
}

struct TrajectoryJob {
    EntropicParams params;
    double gamma;
    int source;  // 0: fixed lambda sweep, 1: sampled resource
};

ExperimentResult trajectory_experiment(const ExperimentConfig& config) {
    std::vector<TrajectoryJob> jobs;
    for (int k = 0; k <= 5; ++k) {
        jobs.push_back({{1.774, 0.07, 1.448, -1.0 + 0.4 * k}, 0.1, 0});
    }
    const SamplerConstraints constraints = constraints_for(config);
    for (long i = 0; i < config.n_samples; ++i) {
        SampleStream rng(config.seed, static_cast<std::uint64_t>(i));
        jobs.push_back({sample_params(rng, constraints), 1.0, 1});
    }

    std::vector<std::vector<std::vector<double>>> blocks(jobs.size());
    parallel_fill(blocks, config.threads, [&](std::size_t t) {
        const auto& job = jobs[t];
        const StandardFormCM cm = from_entropic_params(job.params);
        const XState steady = steady_state(cm);
        const double steady_n = negativity(steady);
        const double steady_s = linear_entropy(steady);
        const double field_n = gaussian_negativity(cm);
        XState start;
        start.populations = {1.0, 0.0, 0.0, 0.0};
        const Trajectory traj = evolve(start.to_state(), cm, job.gamma, config.tau_max, config.steps);
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            const auto& m = traj.states[k].matrix();
            rows.push_back({static_cast<double>(t), static_cast<double>(job.source), job.params.s, job.params.d,
                            job.params.g, job.params.lambda, job.gamma, traj.times[k], m(0, 0).real(),
                            m(1, 1).real(), m(2, 2).real(), m(3, 3).real(), m(0, 3).real(), m(0, 3).imag(),
                            m(1, 2).real(), m(1, 2).imag(), traj.states[k].anti_x_norm(),
                            negativity(traj.states[k]), linear_entropy(traj.states[k]), steady_n, steady_s, field_n,
                            field_n / (1.0 + field_n)});
        }
        return rows;
    });

    ExperimentResult result;
    result.header = {"trajectory", "source", "s", "d", "g", "lambda", "gamma", "time",
                     "rho_00_00", "rho_01_01", "rho_10_10", "rho_11_11", "re_rho_00_11", "im_rho_00_11",
                     "re_rho_01_10", "im_rho_01_10", "anti_x_leak", "negativity", "linear_entropy",
                     "steady_negativity", "steady_linear_entropy", "field_negativity",
                     "normalized_field_negativity"};
    for (auto& block : blocks)
        for (auto& row : block) result.rows.push_back(std::move(row));
    return result;
}

}  // namespace

std::uint64_t SampleStream::next_u64() {
    const std::uint64_t key = splitmix64(seed_ ^ splitmix64(index_ + 0x632BE59BD9B4E019ULL));
    return splitmix64(key + counter_++ * 0x9E3779B97F4A7C15ULL);
}

double SampleStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

EntropicParams sample_params(SampleStream& rng, const SamplerConstraints& c) {
    if (!(c.s_max > 1.0) || !std::isfinite(c.s_max)) throw DomainError("s_max must exceed 1");
    if (c.werner_fraction > 0.0 && rng.uniform() < c.werner_fraction) {
        const double lo = std::min(c.werner_s_min, c.s_max);
        const double s = rng.uniform(lo, c.s_max);
        return {s, 0.0, rng.uniform(1.0, 2.0 * s - 1.0), -1.0};
    }
    const double s = rng.uniform(1.0, c.s_max);
    const double d = c.symmetric ? 0.0 : rng.uniform(-(s - 1.0), s - 1.0);
    const double g = rng.uniform(2.0 * std::abs(d) + 1.0, 2.0 * s - 1.0);
    const double lambda = rng.uniform(-1.0, 1.0);
    return {s, d, g, lambda};
}

DiagnosticsRecord compute_diagnostics(const EntropicParams& params) {
    return compute_diagnostics(from_entropic_params(params), params);
}

DiagnosticsRecord compute_diagnostics(const StandardFormCM& cm, const EntropicParams& params) {
    DiagnosticsRecord r;
    r.params = params;
    const GaussianEntropies field = gaussian_entropies(cm);
    r.field_entropy_global = field.global;
    r.field_entropy_marginals = {field.marginal_1, field.marginal_2};
    r.field_negativity = gaussian_negativity(cm);

    const Matrix4cd rho = steady_state(cm).matrix();
    const auto [rho_a, rho_b] = marginals(rho);
    r.qubit_entropy_global = linear_entropy(rho);
    r.qubit_entropy_marginals = {linear_entropy(rho_a), linear_entropy(rho_b)};
    r.qubit_negativity = negativity(rho);
    return r;
}

std::string_view to_string(ExperimentKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) return k;
    }
    throw InvalidInput(fmt::format("unknown experiment kind '{}'", name));
}

void validate_config(const ExperimentConfig& config) {
    if (config.kind == ExperimentKind::trajS1_S3 ? config.n_samples < 0 : config.n_samples < 1) {
        throw DomainError(fmt::format("n_samples = {} is too small", config.n_samples));
    }
    if (!(config.s_max > 1.0) || !std::isfinite(config.s_max)) throw DomainError("s_max must exceed 1");
    if (config.werner_fraction < 0.0 || config.werner_fraction > 1.0) throw DomainError("werner_fraction outside [0, 1]");
    if (config.threads < 1) throw DomainError("threads must be positive");
    if (config.kind == ExperimentKind::fig2bc_entropy_surfaces && config.werner_fraction > 0.0) {
        throw DomainError("fig2bc uses symmetric resources only; werner_fraction must be 0");
    }
    if (config.kind == ExperimentKind::trajS1_S3 && (!(config.tau_max > 0.0) || config.steps < 2)) {
        throw DomainError("trajectories need tau_max > 0 and steps >= 2");
    }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate_config(config);
    if (config.kind == ExperimentKind::trajS1_S3) return trajectory_experiment(config);
    return scatter_experiment(config);
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
    for (std::size_t k = 0; k < result.header.size(); ++k) out << (k ? "," : "") << result.header[k];
    out << '\n';
    std::string line;
    for (const auto& row : result.rows) {
        line.clear();
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) line += ',';
            line += fmt::format("{:.17g}", row[k]);
        }
        line += '\n';
        out << line;
    }
}

nlohmann::json config_sidecar(const ExperimentConfig& config) {
    const SamplerConstraints c = constraints_for(config);
    nlohmann::json j;
    j["kind"] = std::string(to_string(config.kind));
    j["n_samples"] = config.n_samples;
    j["seed"] = config.seed;
    j["constraints"] = {{"s_max", c.s_max},
                        {"symmetric_only", c.symmetric},
                        {"werner_fraction", c.werner_fraction},
                        {"werner_s_min", c.werner_s_min}};
    if (config.kind == ExperimentKind::trajS1_S3) {
        j["constraints"]["tau_max"] = config.tau_max;
        j["constraints"]["steps"] = config.steps;
    }
    j["tool_version"] = std::string(kToolVersion);
    return j;
}

ExperimentResult run_and_write(const ExperimentConfig& config) {
    ExperimentResult result = run_experiment(config);
    if (config.output_path.empty()) return result;
    {
        std::ofstream csv(config.output_path, std::ios::binary);
        if (!csv) throw std::runtime_error(fmt::format("cannot open '{}' for writing", config.output_path));
        write_csv(csv, result);
        if (!csv) throw std::runtime_error(fmt::format("failed writing '{}'", config.output_path));
    }
    std::ofstream sidecar(config.output_path + ".json", std::ios::binary);
    if (!sidecar) throw std::runtime_error(fmt::format("cannot open '{}.json' for writing", config.output_path));
    sidecar << config_sidecar(config).dump(2) << '\n';
    return result;
}

// ---------------------------------------------------------------------------
// verification suite

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json j;
    j["passed"] = all_passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"worst_residual", c.worst_residual},
                               {"tolerance", c.tolerance},
                               {"cases", c.cases},
                               {"detail", c.detail}});
    }
    return j;
}

namespace {

class CheckAccumulator {
public:
    CheckAccumulator(std::string name, double tolerance) {
        result_.name = std::move(name);
        result_.tolerance = tolerance;
        result_.passed = true;
    }

    void residual(double r) {
        ++result_.cases;
        if (!(r <= result_.tolerance)) result_.passed = false;
        if (std::isnan(r) || r > result_.worst_residual) result_.worst_residual = r;
    }

    void require(bool ok, std::string_view what) {
        ++result_.cases;
        if (!ok) {
            if (result_.passed) result_.detail = std::string(what);
            result_.passed = false;
        }
    }

    CheckResult finish() && {
        if (std::isnan(result_.worst_residual)) result_.passed = false;
        return std::move(result_);
    }

private:
    CheckResult result_;
};

// Null vector of the superoperator with the trace row imposed.
Matrix4cd null_space_steady_state(const StandardFormCM& cm) {
    SuperOperator system = Liouvillian(kossakowski(cm)).superoperator();
    Eigen::Matrix<std::complex<double>, 16, 1> rhs = Eigen::Matrix<std::complex<double>, 16, 1>::Zero();
    system.row(0).setZero();
    for (int k = 0; k < 4; ++k) system(0, 5 * k) = 1.0;
    rhs(0) = 1.0;
    const Eigen::Matrix<std::complex<double>, 16, 1> x = system.fullPivLu().solve(rhs);
    Matrix4cd rho;
    Eigen::Map<Eigen::Matrix<std::complex<double>, 16, 1>>(rho.data()) = x;
    return rho;
}

// Smallest |eigenvalue| of i Omega V~, V~ = P V P with P = diag(1,1,1,-1).
double brute_force_ptranspose_symplectic(const StandardFormCM& cm) {
    Matrix4d p = Matrix4d::Identity();
    p(3, 3) = -1.0;
    const Matrix4d vt = p * cm.matrix() * p;
    const Matrix4cd m = std::complex<double>(0.0, 1.0) * (symplectic_form() * vt).cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Matrix4cd> solver(m, false);
    return solver.eigenvalues().cwiseAbs().minCoeff();
}

}  // namespace

VerifyReport verify_suite(const VerifyOptions& options) {
    VerifyReport report;
    std::vector<std::pair<EntropicParams, StandardFormCM>> physical;
    for (int i = 0; i < options.samples; ++i) {
        SampleStream rng(options.seed, static_cast<std::uint64_t>(i));
        const EntropicParams p = sample_params(rng);
        physical.emplace_back(p, from_entropic_params(p));
    }

    {
        CheckAccumulator check("steady_state_vs_liouvillian_null_space", 1e-9);
        for (const auto& [p, cm] : physical) {
            XState closed = steady_state(cm);
            closed.populations[0] += options.steady_state_perturbation;
            check.residual((closed.matrix() - null_space_steady_state(cm)).cwiseAbs().maxCoeff());
        }
        report.checks.push_back(std::move(check).finish());
    }
    {
        CheckAccumulator neg("mapped_negativity_vs_partial_transpose", 1e-9);
        CheckAccumulator ent("mapped_global_entropy_vs_purity", 1e-9);
        CheckAccumulator marg("marginal_entropy_transfer", 1e-9);
        for (const auto& [p, cm] : physical) {
            const Matrix4cd rho = steady_state(cm).matrix();
            neg.residual(std::abs(mapped_negativity(cm) - negativity(rho)));
            ent.residual(std::abs(mapped_global_entropy(cm) - linear_entropy(rho)));
            const auto [ra, rb] = marginals(rho);
            const GaussianEntropies field = gaussian_entropies(cm);
            marg.residual(std::abs(mapped_marginal_entropy(field.marginal_1) - linear_entropy(ra)));
            marg.residual(std::abs(mapped_marginal_entropy(field.marginal_2) - linear_entropy(rb)));
        }
        report.checks.push_back(std::move(neg).finish());
        report.checks.push_back(std::move(ent).finish());
        report.checks.push_back(std::move(marg).finish());
    }
    {
        CheckAccumulator check("complete_positivity_equivalence", 0.0);
        auto verdicts_agree = [](const StandardFormCM& cm, double gamma) {
            const bool uncertainty = validate_cm(cm, 1e-9).uncertainty_ok;
            const bool cp = kossakowski(cm, gamma).min_eigenvalue() >= -1e-9 * gamma;
            return uncertainty == cp;
        };
        check.require(verdicts_agree({1.0, 1.0, 0.5, 0.0}, 1.0), "unphysical (1,1,0.5,0)");
        for (int i = 0; i < options.samples; ++i) {
            SampleStream rng(options.seed ^ 0xC0FFEEULL, static_cast<std::uint64_t>(i));
            const StandardFormCM cm{rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0), rng.uniform(-5.0, 5.0),
                                    rng.uniform(-5.0, 5.0)};
            check.require(verdicts_agree(cm, rng.uniform(0.1, 10.0)), "random CM");
        }
        for (const auto& [p, cm] : physical) check.require(verdicts_agree(cm, 1.0), "sampled physical CM");
        report.checks.push_back(std::move(check).finish());
    }
    {
        CheckAccumulator check("ptranspose_symplectic_vs_brute_force", 1e-10);
        for (const auto& [p, cm] : physical) {
            const double nu = ptranspose_min_symplectic(cm);
            check.residual(std::abs(nu - brute_force_ptranspose_symplectic(cm)) / std::max(1.0, nu));
        }
        report.checks.push_back(std::move(check).finish());
    }
    {
        CheckAccumulator closure("x_block_closure", 1e-12);
        CheckAccumulator bloch("bloch_rhs_vs_liouvillian", 1e-12);
        for (std::size_t i = 0; i < physical.size(); ++i) {
            const auto& cm = physical[i].second;
            SampleStream rng(options.seed ^ 0xB10CULL, i);
            XState x;
            double total = 0.0;
            for (double& p : x.populations) total += (p = rng.uniform());
            for (double& p : x.populations) p /= total;
            x.coherence_outer = rng.uniform(-1.0, 1.0) * std::sqrt(x.populations[0] * x.populations[3]);
            x.coherence_inner = rng.uniform(-1.0, 1.0) * std::sqrt(x.populations[1] * x.populations[2]);
            const Matrix4cd image = Liouvillian(kossakowski(cm)).apply(x.matrix());
            closure.residual(TwoQubitState::unchecked(image).anti_x_norm());
            const XStateDerivative rate = bloch_rhs(x, cm);
            const double scale = std::max({1.0, cm.a, cm.b});
            for (int k = 0; k < 4; ++k) bloch.residual(std::abs(rate.populations[k] - image(k, k).real()) / scale);
            bloch.residual(std::abs(rate.coherence_outer - image(0, 3).real()) / scale);
            bloch.residual(std::abs(rate.coherence_inner - image(1, 2).real()) / scale);
            bloch.residual(std::max(std::abs(image(0, 3).imag()), std::abs(image(1, 2).imag())) / scale);
        }
        report.checks.push_back(std::move(closure).finish());
        report.checks.push_back(std::move(bloch).finish());
    }
    {
        CheckAccumulator entropy("qubit_entropy_envelope", 1e-9);
        CheckAccumulator neg("qubit_negativity_envelope", 1e-9);
        for (const auto& [p, cm] : physical) {
            const double field = gaussian_entropies(cm).global;
            const double s = mapped_global_entropy(cm);
            entropy.residual(std::max({0.0, qubit_entropy_min(field) - s, s - qubit_entropy_max(field)}));
            neg.residual(std::max(0.0, mapped_negativity(cm) - nmax_vs_field_negativity(gaussian_negativity(cm))));
        }
        report.checks.push_back(std::move(entropy).finish());
        report.checks.push_back(std::move(neg).finish());
    }
    {
        CheckAccumulator loop("qmems_closed_form_vs_steady_state", 1e-8);
        CheckAccumulator order("qlems_below_qmems", 1e-10);
        const int n = 30;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double s_loc = (i + 1.0) / (n + 1.0);
                const double s_global = static_cast<double>(j) / n;
                double g = 0.0;
                try {
                    g = qmems_g(s_loc, s_global);
                } catch (const DomainError&) {
                    continue;
                }
                const double closed = qmems_negativity(s_loc, s_global);
                const StandardFormCM cm = gmems(1.0 / std::sqrt(1.0 - s_loc), 0.0, g);
                loop.residual(std::abs(closed - negativity(steady_state(cm))));
                try {
                    order.residual(std::max(0.0, qlems_negativity(s_loc, s_global) - closed));
                } catch (const DomainError&) {
                }
            }
        }
        report.checks.push_back(std::move(loop).finish());
        report.checks.push_back(std::move(order).finish());
    }
    {
        CheckAccumulator check("entropic_parameter_round_trip", 1e-8);
        for (const auto& [p, cm] : physical) {
            const StandardFormCM back = from_entropic_params(to_entropic_params(cm));
            check.residual(std::max(std::abs(std::abs(back.c_plus) - std::abs(cm.c_plus)),
                                    std::abs(std::abs(back.c_minus) - std::abs(cm.c_minus))));
        }
        report.checks.push_back(std::move(check).finish());
    }
    {
        CheckAccumulator check("relaxation_to_closed_form", 1e-6);
        XState start;
        start.populations = {1.0, 0.0, 0.0, 0.0};
        const int n = std::min<int>(options.relaxation_samples, static_cast<int>(physical.size()));
        for (int i = 0; i < n; ++i) {
            const auto& cm = physical[i].second;
            const RelaxationResult run = relax_to_steady_state(start.to_state(), cm);
            check.residual(trace_distance(run.state.matrix(), steady_state(cm).matrix()));
        }
        report.checks.push_back(std::move(check).finish());
    }
    return report;
}

}  // namespace gqi

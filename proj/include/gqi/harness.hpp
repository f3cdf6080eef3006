#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gqi/gaussian.hpp"

namespace gqi {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Counter-based stream: draw k of sample i is a pure function of
// (seed, i, k), so results do not depend on how samples are scheduled.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t index) : seed_(seed), index_(index) {}

    std::uint64_t next_u64();
    // Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t seed_;
    std::uint64_t index_;
    std::uint64_t counter_ = 0;
};

struct SamplerConstraints {
    double s_max = 10.0;
    bool symmetric = false;
    // Fraction of samples drawn from the Werner-limit corner d = 0,
    // lambda = -1, s in [werner_s_min, s_max].
    double werner_fraction = 0.0;
    double werner_s_min = 5.0;
};

// s ~ U[1, s_max], d ~ U[-(s-1), s-1], g ~ U[2|d|+1, 2s-1], lambda ~ U[-1, 1].
EntropicParams sample_params(SampleStream& rng, const SamplerConstraints& constraints = {});

struct DiagnosticsRecord {
    EntropicParams params;
    double field_entropy_global = 0.0;
    std::pair<double, double> field_entropy_marginals{};
    double field_negativity = 0.0;
    double qubit_entropy_global = 0.0;
    std::pair<double, double> qubit_entropy_marginals{};
    double qubit_negativity = 0.0;
};

// Field side from the CM, qubit side from the steady-state matrix.
DiagnosticsRecord compute_diagnostics(const EntropicParams& params);
DiagnosticsRecord compute_diagnostics(const StandardFormCM& cm, const EntropicParams& params);

enum class ExperimentKind {
    fig1a_entropy_scatter,
    fig1b_negativity_scatter,
    fig2a_mems_plane,
    fig2bc_entropy_surfaces,
    figS4_marginal_pyramid,
    trajS1_S3,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::fig1a_entropy_scatter;
    long n_samples = 1000;
    std::uint64_t seed = 42;
    bool symmetric_only = false;
    std::string output_path;  // empty: no files written
    double s_max = 10.0;
    double werner_fraction = 0.0;
    int threads = 1;
    // trajectory kinds only
    double tau_max = 60.0;
    int steps = 301;
};

// Throws DomainError on inconsistent settings.
void validate_config(const ExperimentConfig& config);

struct ExperimentResult {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    // Scatter kinds only, one per row.
    std::vector<DiagnosticsRecord> records;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// 17 significant digits, rows in sample order.
void write_csv(std::ostream& out, const ExperimentResult& result);
nlohmann::json config_sidecar(const ExperimentConfig& config);

// Runs the experiment and writes output_path plus output_path + ".json".
ExperimentResult run_and_write(const ExperimentConfig& config);

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst_residual = 0.0;
    double tolerance = 0.0;
    long cases = 0;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    int samples = 2000;
    int relaxation_samples = 5;
    // Added to the closed-form rho_{00,00} before the oracle comparison;
    // nonzero values are a mutation test of the check itself.
    double steady_state_perturbation = 0.0;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
    nlohmann::json to_json() const;
};

VerifyReport verify_suite(const VerifyOptions& options = {});

}  // namespace gqi

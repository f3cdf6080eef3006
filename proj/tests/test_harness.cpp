#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "gqi/errors.hpp"
#include "gqi/extremal.hpp"
#include "gqi/harness.hpp"
#include "gqi/interface_map.hpp"

using namespace gqi;

namespace {

std::string csv_of(const ExperimentResult& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

std::string fmt_17g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::size_t column(const ExperimentResult& r, const std::string& name) {
    const auto it = std::find(r.header.begin(), r.header.end(), name);
    REQUIRE(it != r.header.end());
    return static_cast<std::size_t>(it - r.header.begin());
}

}  // namespace

TEST_CASE("sample stream") {
    SUBCASE("golden draws") {
        // Reference values from an independent SplitMix64 implementation.
        SampleStream first(42, 0);
        const EntropicParams p = sample_params(first);
        CHECK(p.s == doctest::Approx(2.8611835880769005).epsilon(1e-15));
        CHECK(p.d == doctest::Approx(-1.2859164354115291).epsilon(1e-15));
        CHECK(p.g == doctest::Approx(4.232271737676222).epsilon(1e-15));
        CHECK(p.lambda == doctest::Approx(-0.7929482070041403).epsilon(1e-15));
        SampleStream second(42, 1);
        const EntropicParams q = sample_params(second);
        CHECK(q.s == doctest::Approx(8.985870346717189).epsilon(1e-15));
        CHECK(q.lambda == doctest::Approx(-0.02068242074705262).epsilon(1e-13));
        CHECK(SampleStream(0, 0).uniform() == doctest::Approx(0.019661066587598475).epsilon(1e-15));
    }
    SUBCASE("streams are pure functions of seed and index") {
        SampleStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
        CHECK(x != d.next_u64());
        CHECK(a.next_u64() != x);
    }
    SUBCASE("uniform moments") {
        SampleStream s(1, 0);
        double sum = 0.0, sq = 0.0, lo = 1.0, hi = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double u = s.uniform();
            sum += u;
            sq += u * u;
            lo = std::min(lo, u);
            hi = std::max(hi, u);
        }
        CHECK(lo >= 0.0);
        CHECK(hi < 1.0);
        CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
        CHECK(sq / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
    }
}

TEST_CASE("sampler constraints") {
    for (int i = 0; i < 5000; ++i) {
        SampleStream rng(2, i);
        const EntropicParams p = sample_params(rng, {4.0});
        CHECK(region_check(p));
        CHECK(p.s <= 4.0);
        SampleStream sym(2, i);
        CHECK(sample_params(sym, {4.0, true}).d == 0.0);
        SampleStream w(2, i);
        const EntropicParams pw = sample_params(w, {10.0, false, 1.0, 5.0});
        CHECK(pw.lambda == -1.0);
        CHECK(pw.d == 0.0);
        CHECK(pw.s >= 5.0);
        CHECK(region_check(pw));
    }
    SampleStream rng(0, 0);
    CHECK_THROWS_AS(sample_params(rng, {1.0}), DomainError);
}

TEST_CASE("diagnostics") {
    const DiagnosticsRecord r = compute_diagnostics({2, 0, 2, 1});
    CHECK(r.field_entropy_global == doctest::Approx(0.5));
    CHECK(r.field_entropy_marginals.first == doctest::Approx(0.5));
    CHECK(r.field_negativity == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.qubit_negativity == doctest::Approx((std::sqrt(2.0) - 1) / 4).epsilon(1e-12));
    CHECK(r.qubit_entropy_global == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.qubit_entropy_marginals.first == doctest::Approx(0.75).epsilon(1e-12));
    CHECK_THROWS_AS(compute_diagnostics({2, 0, 5, 1}), DomainError);
}

TEST_CASE("experiment kinds and configs") {
    for (auto k : {ExperimentKind::fig1a_entropy_scatter, ExperimentKind::fig1b_negativity_scatter,
                   ExperimentKind::fig2a_mems_plane, ExperimentKind::fig2bc_entropy_surfaces,
                   ExperimentKind::figS4_marginal_pyramid, ExperimentKind::trajS1_S3}) {
        CHECK(experiment_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(experiment_kind_from_string("fig9"), InvalidInput);

    ExperimentConfig c;
    CHECK_NOTHROW(validate_config(c));
    c.n_samples = 0;
    CHECK_THROWS_AS(validate_config(c), DomainError);
    c = {};
    c.s_max = 1.0;
    CHECK_THROWS_AS(validate_config(c), DomainError);
    c = {};
    c.threads = 0;
    CHECK_THROWS_AS(validate_config(c), DomainError);
    c = {};
    c.kind = ExperimentKind::fig2bc_entropy_surfaces;
    c.werner_fraction = 0.5;
    CHECK_THROWS_AS(validate_config(c), DomainError);
}

TEST_CASE("scatter experiments") {
    ExperimentConfig c;
    c.n_samples = 400;
    c.kind = ExperimentKind::fig1a_entropy_scatter;
    const ExperimentResult a = run_experiment(c);
    REQUIRE(a.rows.size() == 400);
    CHECK(a.header.size() == 17);
    CHECK(a.header.front() == "index");
    for (const auto& row : a.rows) CHECK(row.size() == a.header.size());
    const auto lo = column(a, "qubit_entropy_min_bound"), hi = column(a, "qubit_entropy_max_bound");
    const auto s = column(a, "qubit_entropy_global");
    for (const auto& row : a.rows) {
        CHECK(row[s] >= row[lo] - 1e-10);
        CHECK(row[s] <= row[hi] + 1e-10);
    }
    // Row i is sample i of the stream.
    SampleStream rng(42, 0);
    CHECK(a.rows[0][column(a, "s")] == sample_params(rng).s);

    SUBCASE("fig1b") {
        c.kind = ExperimentKind::fig1b_negativity_scatter;
        const ExperimentResult b = run_experiment(c);
        const auto n = column(b, "qubit_negativity"), bound = column(b, "qubit_negativity_max_bound");
        const auto norm = column(b, "normalized_field_negativity");
        for (const auto& row : b.rows) {
            CHECK(row[n] <= row[bound] + 1e-10);
            CHECK(row[norm] >= 0.0);
            CHECK(row[norm] < 1.0);
        }
    }
    SUBCASE("fig2a with a Werner-corner share") {
        c.kind = ExperimentKind::fig2a_mems_plane;
        c.werner_fraction = 0.5;
        c.n_samples = 2000;
        const ExperimentResult m = run_experiment(c);
        const auto n = column(m, "qubit_negativity"), s_col = column(m, "qubit_entropy_global");
        const auto bound = column(m, "mems_boundary");
        int near = 0;
        for (const auto& row : m.rows) {
            CHECK(row[n] <= row[bound] + 1e-9);
            if (row[bound] > 0.05 && row[bound] - row[n] < 0.05) ++near;
            CHECK(row[s_col] >= -1e-12);
        }
        CHECK(near > 20);
    }
    SUBCASE("fig2bc") {
        c.kind = ExperimentKind::fig2bc_entropy_surfaces;
        const ExperimentResult m = run_experiment(c);
        const auto d = column(m, "d"), n = column(m, "qubit_negativity");
        const auto top = column(m, "qmems_negativity"), bottom = column(m, "qlems_negativity");
        int defined = 0;
        for (const auto& row : m.rows) {
            CHECK(row[d] == 0.0);
            if (std::isnan(row[top])) {
                CHECK(row[n] <= 1e-9);
                continue;
            }
            ++defined;
            CHECK(row[n] <= row[top] + 1e-8);
            if (!std::isnan(row[bottom])) CHECK(row[n] >= row[bottom] - 1e-8);
        }
        CHECK(defined > 0);
        CHECK(csv_of(m).find("nan") != std::string::npos);
    }
    SUBCASE("figS4") {
        c.kind = ExperimentKind::figS4_marginal_pyramid;
        const ExperimentResult m = run_experiment(c);
        const auto n = column(m, "qubit_negativity"), bound = column(m, "gmemms_boundary");
        for (const auto& row : m.rows) CHECK(row[n] <= row[bound] + 1e-9);
    }
}

TEST_CASE("trajectory experiment") {
    ExperimentConfig c;
    c.kind = ExperimentKind::trajS1_S3;
    c.n_samples = 2;
    c.steps = 11;
    c.tau_max = 20.0;
    const ExperimentResult t = run_experiment(c);
    CHECK(t.header.size() == 23);
    REQUIRE(t.rows.size() == 8 * 11);
    const auto leak = column(t, "anti_x_leak"), src = column(t, "source");
    const auto n = column(t, "negativity"), steady = column(t, "steady_negativity");
    for (const auto& row : t.rows) CHECK(row[leak] < 1e-10);
    CHECK(t.rows[0][src] == 0.0);
    CHECK(t.rows.back()[src] == 1.0);
    // Sampled trajectories (gamma = 1) end at the steady state; the fixed
    // lambda sweep at gamma = 0.1 is still relaxing at this horizon.
    for (std::size_t k = 10; k < t.rows.size(); k += 11) {
        if (t.rows[k][src] == 1.0) {
            CHECK(std::abs(t.rows[k][n] - t.rows[k][steady]) < 1e-6);
        } else {
            CHECK(std::abs(t.rows[k][n] - t.rows[k][steady]) > 1e-6);
        }
    }
}

TEST_CASE("determinism across thread counts") {
    for (auto kind : {ExperimentKind::fig1a_entropy_scatter, ExperimentKind::fig2bc_entropy_surfaces,
                      ExperimentKind::trajS1_S3}) {
        ExperimentConfig c;
        c.kind = kind;
        c.n_samples = kind == ExperimentKind::trajS1_S3 ? 3 : 500;
        c.steps = 21;
        const std::string one = csv_of(run_experiment(c));
        c.threads = 4;
        CHECK(csv_of(run_experiment(c)) == one);
        c.seed = 43;
        CHECK(csv_of(run_experiment(c)) != one);
    }
}

TEST_CASE("CSV and sidecar output") {
    ExperimentConfig c;
    c.n_samples = 3;
    const ExperimentResult r = run_experiment(c);
    const std::string text = csv_of(r);
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    CHECK(line.rfind("index,s,d,g,lambda,", 0) == 0);
    std::getline(is, line);
    CHECK(line.rfind("0,", 0) == 0);
    SampleStream rng(42, 0);
    CHECK(line.find(fmt_17g(sample_params(rng).s)) != std::string::npos);

    const nlohmann::json j = config_sidecar(c);
    CHECK(j["kind"] == "fig1a_entropy_scatter");
    CHECK(j["n_samples"] == 3);
    CHECK(j["seed"] == 42);
    CHECK(j["constraints"]["s_max"] == 10.0);
    CHECK(j["tool_version"] == std::string(kToolVersion));

    const auto dir = std::filesystem::temp_directory_path() / "gqi_test_harness";
    std::filesystem::create_directories(dir);
    c.output_path = (dir / "out.csv").string();
    run_and_write(c);
    std::ifstream csv(c.output_path), side(c.output_path + ".json");
    REQUIRE(csv);
    REQUIRE(side);
    std::stringstream buffer;
    buffer << csv.rdbuf();
    CHECK(buffer.str() == text);
    CHECK(nlohmann::json::parse(side) == j);
    std::filesystem::remove_all(dir);
}

TEST_CASE("verify suite") {
    VerifyOptions opts;
    opts.samples = 300;
    opts.relaxation_samples = 2;
    const VerifyReport good = verify_suite(opts);
    for (const auto& c : good.checks) {
        INFO(c.name, " ", c.detail, " worst ", c.worst_residual);
        CHECK(c.passed);
        CHECK(c.cases > 0);
    }
    CHECK(good.all_passed());
    CHECK(good.to_json()["passed"] == true);

    // A perturbed steady state must be caught.
    opts.steady_state_perturbation = 1e-6;
    const VerifyReport bad = verify_suite(opts);
    CHECK_FALSE(bad.all_passed());
    const auto it = std::find_if(bad.checks.begin(), bad.checks.end(),
                                 [](const CheckResult& c) { return c.name == "steady_state_vs_liouvillian_null_space"; });
    REQUIRE(it != bad.checks.end());
    CHECK_FALSE(it->passed);
}

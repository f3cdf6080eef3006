#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <doctest.h>

#include "gqi/errors.hpp"
#include "gqi/harness.hpp"
#include "gqi/interface_map.hpp"
#include "oracles.hpp"

using namespace gqi;
using cd = std::complex<double>;

namespace {

const StandardFormCM kWorked{2, 2, std::sqrt(2.0), -std::sqrt(2.0)};

StandardFormCM random_cm(std::uint64_t seed, std::uint64_t i, double s_max = 10.0) {
    SampleStream rng(seed, i);
    return from_entropic_params(sample_params(rng, {s_max}));
}

TwoQubitState ket11() {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(3) = 1.0;
    return pure_state(v);
}

double max_abs(const Matrix4cd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Kossakowski matrix") {
    const CoefficientMatrix c = kossakowski(kWorked, 0.5);
    CHECK(c.d(0, 1) == cd(0, 0.5));
    CHECK(c.d(0, 2) == cd(0.5 * std::sqrt(2.0), 0));
    CHECK((c.d - c.d.adjoint()).norm() == 0.0);
    for (int i = 0; i < 300; ++i) {
        const StandardFormCM cm = random_cm(1, i);
        CHECK(kossakowski(cm).min_eigenvalue() == doctest::Approx(oracle::min_eig_v_plus_i_omega(cm)).epsilon(1e-9));
        CHECK(kossakowski(cm).min_eigenvalue() >= -1e-10);
    }
    // Complete positivity fails exactly where the uncertainty principle does.
    CHECK(kossakowski({1, 1, 0.5, 0}).min_eigenvalue() < 0.0);
    CHECK_THROWS_AS(kossakowski(kWorked, -1.0), DomainError);
}

TEST_CASE("Lindblad operators") {
    const auto& ops = lindblad_operators();
    for (const auto& o : ops) {
        CHECK((o - o.adjoint()).norm() == 0.0);
        CHECK((o * o - Matrix4cd::Identity()).norm() < 1e-15);
    }
    // sx sy = i sz on the same qubit; operators on different qubits commute.
    CHECK(((ops[0] * ops[2]) - (ops[2] * ops[0])).norm() == 0.0);
    CHECK(((ops[0] * ops[1]) + (ops[1] * ops[0])).norm() == 0.0);
}

TEST_CASE("Liouvillian matches the Kronecker-product oracle") {
    for (int i = 0; i < 200; ++i) {
        const StandardFormCM cm = random_cm(2, i);
        const Liouvillian l(kossakowski(cm));
        const oracle::Mat16c ref = oracle::liouvillian(cm);
        CHECK((l.superoperator() - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("Liouvillian preserves trace and hermiticity") {
    const Liouvillian l(kossakowski(random_cm(3, 0)));
    SampleStream rng(3, 1);
    for (int k = 0; k < 50; ++k) {
        Matrix4cd h;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) h(i, j) = cd(rng.uniform(-1, 1), rng.uniform(-1, 1));
        h = h + h.adjoint().eval();
        const Matrix4cd out = l.apply(h);
        CHECK(std::abs(out.trace()) < 1e-12);
        CHECK((out - out.adjoint()).norm() < 1e-12);
    }
}

TEST_CASE("worked point") {
    const XState ss = steady_state(kWorked);
    CHECK(ss.populations[0] == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(ss.populations[1] == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(ss.populations[2] == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(ss.populations[3] == doctest::Approx(0.625).epsilon(1e-14));
    CHECK(ss.coherence_outer == doctest::Approx(-std::sqrt(2.0) / 8).epsilon(1e-14));
    CHECK(std::abs(ss.coherence_inner) < 1e-15);
    CHECK(mapped_negativity(kWorked) == doctest::Approx((std::sqrt(2.0) - 1) / 4).epsilon(1e-13));
    CHECK(mapped_global_entropy(kWorked) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(max_abs(ss.matrix() - oracle::steady_state(kWorked)) < 1e-12);
}

TEST_CASE("vacuum maps to the ground state") {
    const XState ss = steady_state({1, 1, 0, 0});
    CHECK(ss.populations[3] == doctest::Approx(1.0));
    CHECK(std::abs(ss.populations[0]) < 1e-15);
    CHECK(mapped_negativity({1, 1, 0, 0}) == 0.0);
    CHECK(mapped_global_entropy({1, 1, 0, 0}) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("steady state") {
    SUBCASE("closed form is the kernel of the Liouvillian") {
        for (int i = 0; i < 500; ++i) {
            const StandardFormCM cm = random_cm(4, i);
            const XState ss = steady_state(cm);
            CHECK(ss.valid(1e-12));
            CHECK(max_abs(ss.matrix() - oracle::steady_state(cm)) < 1e-9);
            const Liouvillian l(kossakowski(cm));
            CHECK(max_abs(l.apply(ss.matrix())) < 1e-12 * (cm.a + cm.b));
        }
    }
    SUBCASE("symmetric in mode exchange") {
        const StandardFormCM cm = random_cm(4, 999);
        const XState x = steady_state(cm);
        const XState y = steady_state({cm.b, cm.a, cm.c_plus, cm.c_minus});
        CHECK(x.populations[1] == doctest::Approx(y.populations[2]));
        CHECK(x.coherence_outer == doctest::Approx(y.coherence_outer));
    }
    CHECK_THROWS_AS(steady_state({1, 1, 0.5, 0}), DomainError);
}

TEST_CASE("mapped closed forms agree with the steady-state matrix") {
    for (int i = 0; i < 3000; ++i) {
        const StandardFormCM cm = random_cm(5, i, 30.0);
        const Matrix4cd rho = steady_state(cm).matrix();
        CHECK(std::abs(mapped_negativity(cm) - oracle::negativity(rho)) < 1e-10);
        CHECK(std::abs(mapped_global_entropy(cm) - oracle::linear_entropy(rho)) < 1e-10);
        const auto field = gaussian_entropies(cm);
        const auto [ra, rb] = marginals(rho);
        CHECK(std::abs(linear_entropy(ra) - mapped_marginal_entropy(field.marginal_1)) < 1e-10);
        CHECK(std::abs(linear_entropy(rb) - mapped_marginal_entropy(field.marginal_2)) < 1e-10);
    }
}

TEST_CASE("Bloch equations match the Liouvillian on X states") {
    for (int i = 0; i < 300; ++i) {
        const StandardFormCM cm = random_cm(6, i);
        SampleStream rng(6, 10000 + i);
        XState x;
        double total = 0.0;
        for (auto& p : x.populations) total += (p = rng.uniform());
        for (auto& p : x.populations) p /= total;
        x.coherence_outer = rng.uniform(-0.5, 0.5) * std::sqrt(x.populations[0] * x.populations[3]);
        x.coherence_inner = rng.uniform(-0.5, 0.5) * std::sqrt(x.populations[1] * x.populations[2]);
        const Matrix4cd lrho = oracle::apply(oracle::liouvillian(cm), x.matrix());
        const XStateDerivative dx = bloch_rhs(x, cm);
        const double scale = cm.a + cm.b;
        for (int k = 0; k < 4; ++k) CHECK(std::abs(dx.populations[k] - lrho(k, k).real()) < 1e-12 * scale);
        CHECK(std::abs(dx.coherence_outer - lrho(0, 3).real()) < 1e-12 * scale);
        CHECK(std::abs(dx.coherence_inner - lrho(1, 2).real()) < 1e-12 * scale);
        // X pattern is closed under the dynamics.
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (r != c && r + c != 3) CHECK(std::abs(lrho(r, c)) < 1e-12 * scale);
    }
}

TEST_CASE("evolve") {
    const TwoQubitState start = ket11();
    const Trajectory traj = evolve(start, kWorked, 1.0, 10.0, 101);
    REQUIRE(traj.times.size() == 101);
    REQUIRE(traj.states.size() == 101);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(10.0));
    CHECK(traj.states.front().matrix() == start.matrix());
    CHECK(max_abs(traj.states.back().matrix() - steady_state(kWorked).matrix()) < 1e-7);
    for (const auto& s : traj.states) CHECK(s.anti_x_norm() < 1e-12);

    SUBCASE("gamma rescales time") {
        const Trajectory fast = evolve(start, kWorked, 2.0, 0.5, 6);
        const Trajectory slow = evolve(start, kWorked, 1.0, 1.0, 6);
        for (int k = 0; k < 6; ++k) CHECK(max_abs(fast.states[k].matrix() - slow.states[k].matrix()) < 1e-8);
    }
    SUBCASE("agrees with the exact exponential") {
        const StandardFormCM cm = random_cm(7, 0);
        const Trajectory t = evolve(start, cm, 1.0, 0.3, 4);
        const oracle::Mat16c l = oracle::liouvillian(cm);
        for (int k = 0; k < 4; ++k) {
            // Taylor series of exp(t L); t * ||L|| stays modest here.
            Eigen::Matrix<cd, 16, 1> v = Eigen::Map<const Eigen::Matrix<cd, 16, 1>>(start.matrix().data());
            Eigen::Matrix<cd, 16, 1> term = v, sum = v;
            for (int n = 1; n < 200; ++n) {
                term = (l * term) * (t.times[k] / n);
                sum += term;
            }
            Matrix4cd ref;
            Eigen::Map<Eigen::Matrix<cd, 16, 1>>(ref.data()) = sum;
            CHECK(max_abs(t.states[k].matrix() - ref) < 1e-8);
        }
    }
    CHECK_THROWS_AS(evolve(start, kWorked, 1.0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(evolve(start, kWorked, 0.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(evolve(start, {1, 1, 0.5, 0}, 1.0, 1.0, 10), DomainError);
}

TEST_CASE("relaxation reaches the closed form") {
    for (int i = 0; i < 10; ++i) {
        const StandardFormCM cm = random_cm(8, i);
        const RelaxationResult r = relax_to_steady_state(werner(0.0), cm);
        CHECK(r.rhs_norm < 1e-10);
        CHECK(max_abs(r.state.matrix() - steady_state(cm).matrix()) < 1e-6);
    }
}

TEST_CASE("trajectory CSV") {
    const Trajectory traj = evolve(ket11(), kWorked, 1.0, 1.0, 3);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line.rfind("tau,re_00,im_00,", 0) == 0);
    CHECK(std::count(line.begin(), line.end(), ',') == 35);
    int rows = 0;
    while (std::getline(is, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 35);
        ++rows;
    }
    CHECK(rows == 3);
}

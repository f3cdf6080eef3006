#include "gqi/interface_map.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gqi/errors.hpp"

namespace gqi {

namespace {

using cd = std::complex<double>;
using OdeState = std::array<double, 32>;

constexpr double kDegenerateZ = 1e-12;

struct Sums {
    double sum;       // a + b
    double z;         // (a+b)^2 - 2(c+^2 + c-^2)
    double delta;     // 4abz
};

Sums resource_sums(const StandardFormCM& cm) {
    const double sum = cm.a + cm.b;
    const double z = sum * sum - 2.0 * (cm.c_plus * cm.c_plus + cm.c_minus * cm.c_minus);
    if (!(z > kDegenerateZ)) {
        throw NumericalError(fmt::format("degenerate resource: z = {:.3e} <= 0", z));
    }
    return {sum, z, 4.0 * cm.a * cm.b * z};
}

OdeState pack(const Matrix4cd& m) {
    OdeState x{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            x[2 * (4 * r + c)] = m(r, c).real();
            x[2 * (4 * r + c) + 1] = m(r, c).imag();
        }
    return x;
}

Matrix4cd unpack(const OdeState& x) {
    Matrix4cd m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = cd(x[2 * (4 * r + c)], x[2 * (4 * r + c) + 1]);
    return m;
}

// Re-Hermitize to strip integrator drift below the tolerances.
Matrix4cd hermitian_part(const Matrix4cd& m) { return 0.5 * (m + m.adjoint()); }

struct OdeSystem {
    const Liouvillian* generator;
    double rate;
    void operator()(const OdeState& x, OdeState& dxdt, double /*t*/) const {
        dxdt = pack(rate * generator->apply(unpack(x)));
    }
};

void check_finite(const OdeState& x, double t) {
    for (double v : x) {
        if (!std::isfinite(v)) throw IntegrationError(fmt::format("non-finite state at t = {}", t));
    }
}

TwoQubitState checked_state(const Matrix4cd& m, double t) {
    const ValidationReport r = validate_density_matrix(m);
    if (!r.ok(1e-8, 1e-8, 1e-8)) {
        throw IntegrationError(fmt::format(
            "state at t = {} failed validation: hermiticity {:.3e}, trace {:.3e}, min eigenvalue {:.3e}", t,
            r.hermiticity_error, r.trace_error, r.min_eigenvalue));
    }
    return TwoQubitState::unchecked(hermitian_part(m));
}

}  // namespace

double CoefficientMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(d, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

CoefficientMatrix kossakowski(const StandardFormCM& cm, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError(fmt::format("gamma must be positive, got {}", gamma));
    CoefficientMatrix out;
    out.gamma = gamma;
    out.d = gamma * (cm.matrix().cast<cd>() + cd(0.0, 1.0) * symplectic_form().cast<cd>());
    return out;
}

const std::array<Matrix4cd, 4>& lindblad_operators() {
    static const std::array<Matrix4cd, 4> ops = [] {
        Matrix2cd sx;
        sx << 0, 1, 1, 0;
        Matrix2cd sy;
        sy << 0, cd(0, -1), cd(0, 1), 0;
        const Matrix2cd id = Matrix2cd::Identity();
        auto kron = [](const Matrix2cd& x, const Matrix2cd& y) {
            Matrix4cd k;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
            return k;
        };
        return std::array<Matrix4cd, 4>{kron(sx, id), kron(sy, id), kron(id, sx), kron(id, sy)};
    }();
    return ops;
}

Liouvillian::Liouvillian(const CoefficientMatrix& coefficients) {
    const auto& ops = lindblad_operators();
    const Matrix4cd& d = coefficients.d;
    // Column n of the superoperator is L applied to the n-th column-major
    // basis matrix.
    for (int n = 0; n < 16; ++n) {
        Matrix4cd basis = Matrix4cd::Zero();
        basis(n % 4, n / 4) = 1.0;
        Matrix4cd image = Matrix4cd::Zero();
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) {
                if (d(j, k) == cd(0.0, 0.0)) continue;
                const Matrix4cd kj = ops[k] * ops[j];
                image += d(j, k) * (ops[j] * basis * ops[k] - 0.5 * (kj * basis + basis * kj));
            }
        }
        super_.col(n) = Eigen::Map<const Eigen::Matrix<cd, 16, 1>>(image.data());
    }
}

Matrix4cd Liouvillian::apply(const Matrix4cd& rho) const {
    Matrix4cd out;
    Eigen::Map<Eigen::Matrix<cd, 16, 1>>(out.data()) =
        super_ * Eigen::Map<const Eigen::Matrix<cd, 16, 1>>(rho.data());
    return out;
}

XState steady_state(const StandardFormCM& cm) {
    require_physical(cm);
    const auto [sum, z, delta] = resource_sums(cm);
    const double a = cm.a;
    const double b = cm.b;
    XState x;
    auto& p = x.populations;
    p[0] = ((a * b - a - b) * z + sum * sum) / delta;
    p[1] = p[0] + 2.0 * (a * z - sum * sum) / delta;
    p[2] = p[0] + 2.0 * (b * z - sum * sum) / delta;
    p[3] = 1.0 - p[0] - p[1] - p[2];
    x.coherence_outer = 2.0 * sum * (cm.c_minus - cm.c_plus) / delta;
    x.coherence_inner = 2.0 * sum * (cm.c_minus + cm.c_plus) / delta;
    return x;
}

double mapped_negativity(const StandardFormCM& cm) {
    require_physical(cm);
    const auto [sum, z, delta] = resource_sums(cm);
    // mu = z(a-b) sqrt(1 + eta^2) written without the a = b singularity of eta.
    const double diff = cm.a - cm.b;
    const double corr = cm.c_plus - cm.c_minus;
    const double mu = std::sqrt(z * z * diff * diff + 4.0 * sum * sum * corr * corr);
    return std::max(0.0, (2.0 / delta) * (sum * sum - delta / 4.0 + mu));
}

double mapped_global_entropy(const StandardFormCM& cm) {
    require_physical(cm);
    const auto [sum, z, delta] = resource_sums(cm);
    const double xi2 = sum * sum + 4.0 * (cm.c_plus * cm.c_plus + cm.c_minus * cm.c_minus);
    return 1.0 - 1.0 / (3.0 * cm.a * cm.a) - 1.0 / (3.0 * cm.b * cm.b) -
           16.0 * sum * sum * xi2 / (3.0 * delta * delta);
}

double mapped_marginal_entropy(double marginal_field_entropy) {
    if (!std::isfinite(marginal_field_entropy)) throw InvalidInput("marginal entropy is not finite");
    return marginal_field_entropy * (2.0 - marginal_field_entropy);
}

XStateDerivative bloch_rhs(const XState& x, const StandardFormCM& cm) {
    const double a = cm.a;
    const double b = cm.b;
    const auto& p = x.populations;
    const double o = x.coherence_outer;
    const double i = x.coherence_inner;
    // Coherence feed into the populations.
    const double q = 2.0 * (cm.c_minus + cm.c_plus) * i + 2.0 * (cm.c_minus - cm.c_plus) * o;
    const double parity = p[0] - p[1] - p[2] + p[3];

    XStateDerivative out;
    out.populations[0] = 2.0 * a * (p[2] - p[0]) + 2.0 * b * (p[1] - p[0]) - 4.0 * p[0] - 2.0 * p[1] - 2.0 * p[2] + q;
    out.populations[1] = 2.0 * a * (p[3] - p[1]) + 2.0 * b * (p[0] - p[1]) + 2.0 * p[0] - 2.0 * p[3] - q;
    out.populations[2] = 2.0 * a * (p[0] - p[2]) + 2.0 * b * (p[3] - p[2]) + 2.0 * p[0] - 2.0 * p[3] - q;
    out.populations[3] = 2.0 * a * (p[1] - p[3]) + 2.0 * b * (p[2] - p[3]) + 2.0 * p[1] + 2.0 * p[2] + 4.0 * p[3] + q;
    out.coherence_outer = -2.0 * (a + b) * o + (cm.c_minus - cm.c_plus) * parity;
    out.coherence_inner = -2.0 * (a + b) * i + (cm.c_minus + cm.c_plus) * parity;
    return out;
}

Trajectory evolve(const TwoQubitState& initial, const StandardFormCM& cm, double gamma, double tau_max,
                  int n_steps) {
    namespace ode = boost::numeric::odeint;
    require_physical(cm);
    if (!(tau_max > 0.0) || !std::isfinite(tau_max)) throw DomainError("tau_max must be positive");
    if (n_steps < 2) throw DomainError("n_steps must be at least 2");

    const Liouvillian generator(kossakowski(cm, 1.0));
    const OdeSystem system{&generator, kossakowski(cm, gamma).gamma};

    Trajectory traj;
    traj.resource = cm;
    traj.gamma = gamma;
    traj.times.reserve(n_steps);
    traj.states.reserve(n_steps);
    for (int k = 0; k < n_steps; ++k) {
        traj.times.push_back(k + 1 == n_steps ? tau_max : tau_max * k / (n_steps - 1));
    }

    OdeState x = pack(initial.matrix());
    auto stepper = ode::make_dense_output(kIntegratorAbsTol, kIntegratorRelTol, ode::runge_kutta_dopri5<OdeState>());
    const double dt0 = std::min(1e-3, tau_max / (n_steps - 1));
    ode::integrate_times(stepper, system, x, traj.times.begin(), traj.times.end(), dt0,
                         [&](const OdeState& state, double t) {
                             check_finite(state, t);
                             if (traj.states.empty()) {
                                 traj.states.push_back(initial);
                             } else {
                                 traj.states.push_back(checked_state(unpack(state), t));
                             }
                         });
    if (traj.states.size() != traj.times.size()) {
        throw IntegrationError(fmt::format("integrator emitted {} of {} samples", traj.states.size(), traj.times.size()));
    }
    return traj;
}

RelaxationResult relax_to_steady_state(const TwoQubitState& initial, const StandardFormCM& cm,
                                       const RelaxationOptions& options) {
    namespace ode = boost::numeric::odeint;
    require_physical(cm);
    const Liouvillian generator(kossakowski(cm, 1.0));
    const OdeSystem system{&generator, 1.0};

    double rel_tol = options.rel_tol;
    double abs_tol = options.abs_tol;
    auto stepper = ode::make_dense_output(abs_tol, rel_tol, ode::runge_kutta_dopri5<OdeState>());
    stepper.initialize(pack(initial.matrix()), 0.0, 1e-4);

    RelaxationResult result{initial, 0.0, generator.apply(initial.matrix()).norm(), 0};
    double best = result.rhs_norm;
    long stalled = 0;
    while (result.rhs_norm >= options.rhs_tol) {
        if (stepper.current_time() >= options.tau_limit) {
            throw IntegrationError(fmt::format("no convergence by tau = {} (|d rho/d tau| = {:.3e})",
                                               stepper.current_time(), result.rhs_norm));
        }
        stepper.do_step(system);
        ++result.steps;
        check_finite(stepper.current_state(), stepper.current_time());
        result.rhs_norm = generator.apply(unpack(stepper.current_state())).norm();
        if (result.rhs_norm < 0.5 * best) {
            best = result.rhs_norm;
            stalled = 0;
        } else if (++stalled > 200 && abs_tol > 1e-16) {
            // Step-size control pins the residual near the error tolerance.
            rel_tol *= 0.1;
            abs_tol *= 0.1;
            const OdeState x = stepper.current_state();
            const double t = stepper.current_time();
            stepper = ode::make_dense_output(abs_tol, rel_tol, ode::runge_kutta_dopri5<OdeState>());
            stepper.initialize(x, t, 1e-3);
            best = result.rhs_norm;
            stalled = 0;
        }
    }
    result.tau = stepper.current_time();
    result.state = checked_state(unpack(stepper.current_state()), result.tau);
    return result;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, bool header) {
    if (header) {
        out << "tau";
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) out << fmt::format(",re_{}{},im_{}{}", r, c, r, c);
        out << ",anti_x_leak,negativity,linear_entropy\n";
    }
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        const auto& state = trajectory.states[k];
        out << fmt::format("{:.17g}", trajectory.times[k]);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) out << fmt::format(",{:.17g},{:.17g}", state(r, c).real(), state(r, c).imag());
        out << fmt::format(",{:.17g},{:.17g},{:.17g}\n", state.anti_x_norm(), negativity(state), linear_entropy(state));
    }
}

}  // namespace gqi

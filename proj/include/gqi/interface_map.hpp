#pragma once

// The Gaussian-to-qubit map: two qubits, each coupled to one mode of a
// broadband two-mode field with covariance matrix V12, relax under
//
//   d rho / d tau = sum_jk d_jk (O_j rho O_k - {O_k O_j, rho}/2),
//   O = (sx x 1, sy x 1, 1 x sx, 1 x sy),   D = gamma (V12 + i Omega).

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "gqi/gaussian.hpp"
#include "gqi/qubit.hpp"

namespace gqi {

using SuperOperator = Eigen::Matrix<std::complex<double>, 16, 16>;

struct CoefficientMatrix {
    Matrix4cd d = Matrix4cd::Zero();
    double gamma = 1.0;

    double min_eigenvalue() const;
};

CoefficientMatrix kossakowski(const StandardFormCM& cm, double gamma = 1.0);

// The four Lindblad operators in the order sx_A, sy_A, sx_B, sy_B.
const std::array<Matrix4cd, 4>& lindblad_operators();

class Liouvillian {
public:
    explicit Liouvillian(const CoefficientMatrix& coefficients);

    Matrix4cd apply(const Matrix4cd& rho) const;
    // Acts on column-major vec(rho).
    const SuperOperator& superoperator() const { return super_; }

private:
    SuperOperator super_;
};

// Populations rho_{00,00} .. rho_{11,11}, outer rho_{00,11}, inner rho_{01,10}.
XState steady_state(const StandardFormCM& cm);

double mapped_negativity(const StandardFormCM& cm);
double mapped_global_entropy(const StandardFormCM& cm);
// S_L(rho_A) = S_L(rho_1)[2 - S_L(rho_1)]
double mapped_marginal_entropy(double marginal_field_entropy);

// Time derivative of the X-block coordinates in units of gamma = 1.
struct XStateDerivative {
    std::array<double, 4> populations{};
    double coherence_outer = 0.0;
    double coherence_inner = 0.0;
};

XStateDerivative bloch_rhs(const XState& x, const StandardFormCM& cm);

struct Trajectory {
    std::vector<double> times;
    std::vector<TwoQubitState> states;
    StandardFormCM resource;
    double gamma = 1.0;
};

inline constexpr double kIntegratorRelTol = 1e-9;
inline constexpr double kIntegratorAbsTol = 1e-12;

// Integrates d rho/dt = gamma L[V12 + i Omega] rho and samples n_steps
// equally spaced times in [0, tau_max]. With gamma = 1 the time axis is the
// dimensionless tau; other gamma values rescale that axis only.
Trajectory evolve(const TwoQubitState& initial, const StandardFormCM& cm, double gamma, double tau_max,
                  int n_steps);

struct RelaxationOptions {
    double rhs_tol = 1e-10;
    double tau_limit = 1e4;
    double rel_tol = kIntegratorRelTol;
    double abs_tol = kIntegratorAbsTol;
};

struct RelaxationResult {
    TwoQubitState state;
    double tau = 0.0;
    double rhs_norm = 0.0;
    long steps = 0;
};

// Integrates in dimensionless tau until the Frobenius norm of d rho/d tau
// drops below rhs_tol.
RelaxationResult relax_to_steady_state(const TwoQubitState& initial, const StandardFormCM& cm,
                                       const RelaxationOptions& options = {});

// tau, re/im of the 16 entries (row-major), anti-X leak, negativity,
// global linear entropy.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, bool header = true);

}  // namespace gqi

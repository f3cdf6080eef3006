#include "gqi/qubit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "gqi/errors.hpp"

namespace gqi {

namespace {

constexpr bool is_x_entry(int r, int c) { return r == c || r + c == 3; }

template <typename M>
ValidationReport validate_impl(const M& m) {
    ValidationReport report;
    if (!m.allFinite()) throw InvalidInput("density matrix has non-finite entries");
    report.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
    report.trace_error = std::abs(m.trace() - 1.0);
    const M herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<M> solver(herm, Eigen::EigenvaluesOnly);
    report.min_eigenvalue = solver.eigenvalues().minCoeff();
    return report;
}

}  // namespace

TwoQubitState::TwoQubitState(const Matrix4cd& matrix, double eig_tol, double herm_tol, double trace_tol)
    : m_(matrix) {
    const ValidationReport r = validate_density_matrix(matrix);
    if (r.hermiticity_error > herm_tol) {
        throw DomainError(fmt::format("matrix is not Hermitian (error {:.3e})", r.hermiticity_error));
    }
    if (r.trace_error > trace_tol) {
        throw DomainError(fmt::format("trace differs from 1 by {:.3e}", r.trace_error));
    }
    if (r.min_eigenvalue < -eig_tol) {
        throw DomainError(fmt::format("matrix has negative eigenvalue {:.3e}", r.min_eigenvalue));
    }
}

TwoQubitState TwoQubitState::unchecked(const Matrix4cd& matrix) {
    TwoQubitState state;
    state.m_ = matrix;
    return state;
}

double TwoQubitState::anti_x_norm() const {
    double worst = 0.0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (!is_x_entry(r, c)) worst = std::max(worst, std::abs(m_(r, c)));
        }
    }
    return worst;
}

ValidationReport validate_density_matrix(const Matrix4cd& m) { return validate_impl(m); }
ValidationReport validate_density_matrix(const Matrix2cd& m) { return validate_impl(m); }

bool XState::valid(double tol) const {
    const auto& p = populations;
    for (double x : p) {
        if (!std::isfinite(x) || x < -tol) return false;
    }
    if (!std::isfinite(coherence_outer) || !std::isfinite(coherence_inner)) return false;
    if (std::abs(p[0] + p[1] + p[2] + p[3] - 1.0) > kTraceTol) return false;
    return coherence_outer * coherence_outer <= p[0] * p[3] + tol &&
           coherence_inner * coherence_inner <= p[1] * p[2] + tol;
}

Matrix4cd XState::matrix() const {
    Matrix4cd m = Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) m(i, i) = populations[i];
    m(0, 3) = m(3, 0) = coherence_outer;
    m(1, 2) = m(2, 1) = coherence_inner;
    return m;
}

TwoQubitState XState::to_state() const {
    if (!valid()) throw DomainError("X state is not a valid density matrix");
    return TwoQubitState::unchecked(matrix());
}

XState XState::from_matrix(const Matrix4cd& m) {
    XState x;
    for (int i = 0; i < 4; ++i) x.populations[i] = m(i, i).real();
    x.coherence_outer = m(0, 3).real();
    x.coherence_inner = m(1, 2).real();
    return x;
}

// Index 2*i + j for |ij>; T_A swaps i <-> k in <ij|rho|kl>.
Matrix4cd partial_transpose_a(const Matrix4cd& m) {
    Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = m(2 * k + j, 2 * i + l);
    return out;
}

Matrix4cd partial_transpose_b(const Matrix4cd& m) {
    Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = m(2 * i + l, 2 * k + j);
    return out;
}

double negativity(const Matrix4cd& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(partial_transpose_a(rho), Eigen::EigenvaluesOnly);
    return std::max(0.0, solver.eigenvalues().cwiseAbs().sum() - 1.0);
}

double negativity(const TwoQubitState& rho) { return negativity(rho.matrix()); }

double negativity(const XState& x) {
    // T_A exchanges the coherences between blocks: {00,11} carries the inner
    // coherence and {01,10} the outer one.
    auto block_trace_norm = [](double p, double q, double c) {
        const double mean = 0.5 * (p + q);
        const double radius = std::hypot(0.5 * (p - q), c);
        return std::abs(mean + radius) + std::abs(mean - radius);
    };
    const auto& p = x.populations;
    const double norm = block_trace_norm(p[0], p[3], x.coherence_inner) +
                        block_trace_norm(p[1], p[2], x.coherence_outer);
    return std::max(0.0, norm - 1.0);
}

double linear_entropy(const Matrix4cd& rho) {
    const double purity = (rho * rho).trace().real();
    return 4.0 / 3.0 * (1.0 - purity);
}

double linear_entropy(const TwoQubitState& rho) { return linear_entropy(rho.matrix()); }

double linear_entropy(const Matrix2cd& rho) {
    const double purity = (rho * rho).trace().real();
    return 2.0 * (1.0 - purity);
}

double linear_entropy(const XState& x) {
    double purity = 2.0 * (x.coherence_outer * x.coherence_outer + x.coherence_inner * x.coherence_inner);
    for (double p : x.populations) purity += p * p;
    return 4.0 / 3.0 * (1.0 - purity);
}

std::pair<Matrix2cd, Matrix2cd> marginals(const Matrix4cd& rho) {
    Matrix2cd rho_a = Matrix2cd::Zero();
    Matrix2cd rho_b = Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j) {
                rho_a(i, k) += rho(2 * i + j, 2 * k + j);
                rho_b(i, k) += rho(2 * j + i, 2 * j + k);
            }
    return {rho_a, rho_b};
}

std::pair<Matrix2cd, Matrix2cd> marginals(const TwoQubitState& rho) { return marginals(rho.matrix()); }

double trace_distance(const Matrix4cd& x, const Matrix4cd& y) {
    const Matrix4cd diff = x - y;
    const Matrix4cd herm = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(herm, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

Eigen::Vector4cd phi_minus() {
    const double h = 1.0 / std::sqrt(2.0);
    return Eigen::Vector4cd(h, 0.0, 0.0, -h);
}

TwoQubitState werner(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("Werner weight p={} outside [0, 1]", p));
    const Eigen::Vector4cd phi = phi_minus();
    const Matrix4cd m = p * (phi * phi.adjoint()) + (1.0 - p) / 4.0 * Matrix4cd::Identity();
    return TwoQubitState::unchecked(m);
}

TwoQubitState product_boundary_state(double g) {
    if (!(g >= 1.0) || !std::isfinite(g)) throw DomainError(fmt::format("product boundary state needs g >= 1, got {}", g));
    Matrix4cd m = Matrix4cd::Zero();
    m(1, 1) = (g - 1.0) / (2.0 * g);
    m(3, 3) = (g + 1.0) / (2.0 * g);
    return TwoQubitState::unchecked(m);
}

TwoQubitState pure_state(const Eigen::Vector4cd& psi) {
    const double n = psi.norm();
    if (!(n > 0.0)) throw DomainError("cannot normalize a zero vector");
    const Eigen::Vector4cd u = psi / n;
    return TwoQubitState::unchecked(u * u.adjoint());
}

}  // namespace gqi

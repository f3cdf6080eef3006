#include "gqi/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "gqi/errors.hpp"

namespace gqi {

namespace {

void require_finite(const StandardFormCM& cm) {
    if (!std::isfinite(cm.a) || !std::isfinite(cm.b) || !std::isfinite(cm.c_plus) ||
        !std::isfinite(cm.c_minus)) {
        throw InvalidInput("covariance matrix has non-finite entries");
    }
}

void require_finite(const EntropicParams& p) {
    if (!std::isfinite(p.s) || !std::isfinite(p.d) || !std::isfinite(p.g) ||
        !std::isfinite(p.lambda)) {
        throw InvalidInput("entropic parameters have non-finite entries");
    }
}

// (x - y)(x + y) with the cancellation confined to one factor. Values that
// are negative only by roundoff relative to x^2 are clamped to zero.
double clamped_radicand(double x, double y) {
    const double r = (x - y) * (x + y);
    if (r >= 0.0) return r;
    const double scale = std::max(1.0, x * x);
    if (r > -kRadicandClamp * scale) return 0.0;
    throw DomainError(fmt::format("c+- radicand is negative ({:.3e}): parameters outside the entropic region", r));
}

struct CorrelationPair {
    double c_plus;
    double c_minus;
};

CorrelationPair correlations(double s, double d, double g, double lambda) {
    const double h_d = (2.0 * d * d + g) * (lambda + 1.0);
    const double f_d = 4.0 * d * d + (g * g + 1.0) * (lambda - 1.0) / 2.0;
    const double f_s = 4.0 * s * s + (g * g + 1.0) * (lambda - 1.0) / 2.0;
    const double root_d = std::sqrt(clamped_radicand(f_d - h_d, 2.0 * g));
    const double root_s = std::sqrt(clamped_radicand(f_s - h_d, 2.0 * g));
    const double denom = 4.0 * std::sqrt((s - d) * (s + d));
    return {(root_d + root_s) / denom, (root_d - root_s) / denom};
}

}  // namespace

Matrix4d StandardFormCM::matrix() const {
    Matrix4d v;
    v << a, 0, c_plus, 0,
         0, a, 0, c_minus,
         c_plus, 0, b, 0,
         0, c_minus, 0, b;
    return v;
}

double StandardFormCM::det() const {
    const double ab = a * b;
    return (ab - c_plus * c_plus) * (ab - c_minus * c_minus);
}

const Matrix4d& symplectic_form() {
    static const Matrix4d omega = [] {
        Matrix4d m = Matrix4d::Zero();
        m(0, 1) = 1.0;
        m(1, 0) = -1.0;
        m(2, 3) = 1.0;
        m(3, 2) = -1.0;
        return m;
    }();
    return omega;
}

PhysicalityReport validate_cm(const StandardFormCM& cm, double tol) {
    require_finite(cm);
    PhysicalityReport report;

    Eigen::SelfAdjointEigenSolver<Matrix4d> real_solver(cm.matrix(), Eigen::EigenvaluesOnly);
    report.min_eigenvalue_of_V = real_solver.eigenvalues().minCoeff();
    report.positive_definite = report.min_eigenvalue_of_V > tol;

    const Matrix4cd hermitian =
        cm.matrix().cast<std::complex<double>>() + std::complex<double>(0.0, 1.0) * symplectic_form();
    Eigen::SelfAdjointEigenSolver<Matrix4cd> complex_solver(hermitian, Eigen::EigenvaluesOnly);
    report.min_eigenvalue_of_V_plus_iOmega = complex_solver.eigenvalues().minCoeff();
    report.uncertainty_ok = report.min_eigenvalue_of_V_plus_iOmega >= -tol;
    return report;
}

void require_physical(const StandardFormCM& cm, double tol) {
    const PhysicalityReport report = validate_cm(cm, tol);
    if (!report.positive_definite) {
        throw DomainError(fmt::format("covariance matrix is not positive definite (min eigenvalue {:.6g})",
                                      report.min_eigenvalue_of_V));
    }
    if (!report.uncertainty_ok) {
        throw DomainError(fmt::format("covariance matrix violates V + i*Omega >= 0 (min eigenvalue {:.6g})",
                                      report.min_eigenvalue_of_V_plus_iOmega));
    }
}

double ptranspose_min_symplectic(const StandardFormCM& cm) {
    require_finite(cm);
    const double delta = cm.det_v1() + cm.det_v2() - 2.0 * cm.det_c();
    const double det = cm.det();
    double disc = delta * delta - 4.0 * det;
    if (disc < 0.0) {
        if (disc < -1e-10 * std::max(1.0, delta * delta)) {
            throw NumericalError(fmt::format("partial-transpose discriminant is negative ({:.3e})", disc));
        }
        disc = 0.0;
    }
    const double inner = delta - std::sqrt(disc);
    // Both roots are positive for a positive definite CM; inner can dip below
    // zero only by roundoff when det is tiny relative to delta^2.
    return std::sqrt(std::max(inner, 0.0) / 2.0);
}

double gaussian_negativity(const StandardFormCM& cm) {
    const double nu = ptranspose_min_symplectic(cm);
    if (nu <= 0.0) throw NumericalError("vanishing partially transposed symplectic eigenvalue");
    return std::max(0.0, (1.0 - nu) / nu);
}

GaussianEntropies gaussian_entropies(const StandardFormCM& cm) {
    require_finite(cm);
    if (cm.a <= 0.0 || cm.b <= 0.0 || cm.det() <= 0.0) {
        throw DomainError("linear entropy requires a positive definite covariance matrix");
    }
    return {1.0 - 1.0 / std::sqrt(cm.det()), 1.0 - 1.0 / cm.a, 1.0 - 1.0 / cm.b};
}

bool region_check(const EntropicParams& p, double tol) {
    require_finite(p);
    const double abs_d = std::abs(p.d);
    return p.s >= 1.0 - tol && abs_d <= p.s - 1.0 + tol && 2.0 * abs_d + 1.0 <= p.g + tol &&
           p.g <= 2.0 * p.s - 1.0 + tol && p.lambda >= -1.0 - tol && p.lambda <= 1.0 + tol;
}

StandardFormCM from_entropic_params(const EntropicParams& p) {
    if (!region_check(p, 1e-12)) {
        throw DomainError(fmt::format(
            "(s={}, d={}, g={}, lambda={}) is outside the region s>=1, |d|<=s-1, 2|d|+1<=g<=2s-1, |lambda|<=1",
            p.s, p.d, p.g, p.lambda));
    }
    const auto [c_plus, c_minus] = correlations(p.s, p.d, p.g, p.lambda);
    return {p.s + p.d, p.s - p.d, c_plus, c_minus};
}

EntropicParams to_entropic_params(const StandardFormCM& input) {
    require_physical(input);
    // Local rotations swap c+ and c- and flip both signs; pick c+ >= |c-|.
    // The sign of det C survives, so c- keeps it.
    const double big = std::max(std::abs(input.c_plus), std::abs(input.c_minus));
    const double small = std::min(std::abs(input.c_plus), std::abs(input.c_minus)) *
                         (input.c_plus * input.c_minus > 0.0 ? -1.0 : 1.0);

    EntropicParams p;
    p.s = (input.a + input.b) / 2.0;
    p.d = (input.a - input.b) / 2.0;
    p.g = std::sqrt(input.det());
    p.lambda = 1.0;

    // Snap g onto the region when roundoff pushes it just outside.
    const double g_lo = 2.0 * std::abs(p.d) + 1.0;
    const double g_hi = 2.0 * p.s - 1.0;
    if (std::abs(p.g - g_lo) < 1e-9) p.g = std::max(p.g, g_lo);
    if (std::abs(p.g - g_hi) < 1e-9) p.g = std::min(p.g, g_hi);
    if (!region_check(p)) {
        throw DomainError(fmt::format("CM has no (s,d,g,lambda) preimage: s={}, d={}, g={}", p.s, p.d, p.g));
    }

    const double target = big + small;  // c+ - c- in the canonical orientation
    auto spread = [&](double lambda) {
        const auto c = correlations(p.s, p.d, p.g, lambda);
        return c.c_plus - c.c_minus;
    };
    double lo = -1.0;
    double hi = 1.0;
    const double f_lo = spread(lo);
    const double f_hi = spread(hi);
    const double scale = std::max(1.0, std::abs(f_hi));
    if (std::abs(f_hi - f_lo) <= 1e-12 * scale) {
        p.lambda = 1.0;  // lambda-degenerate (pure or product boundary)
    } else {
        const bool increasing = f_hi > f_lo;
        const double f_min = std::min(f_lo, f_hi);
        const double f_max = std::max(f_lo, f_hi);
        if (target < f_min - 1e-8 * scale || target > f_max + 1e-8 * scale) {
            throw DomainError("CM correlations are outside the range reachable by lambda in [-1, 1]");
        }
        for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if ((spread(mid) < target) == increasing) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        p.lambda = 0.5 * (lo + hi);
    }

    const auto check = correlations(p.s, p.d, p.g, p.lambda);
    if (std::abs(check.c_plus + check.c_minus - (big - small)) > 1e-6 * std::max(1.0, big)) {
        throw DomainError("CM is not in the image of the (s,d,g,lambda) parameterization");
    }
    return p;
}

}  // namespace gqi

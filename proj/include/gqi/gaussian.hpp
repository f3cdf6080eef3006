#pragma once

// Two-mode Gaussian covariance matrices in standard form.
//
// Quadrature ordering is (q1, p1, q2, p2) and the vacuum has V = 1, so every
// quantity here is in vacuum units. First moments are not modelled.

#include <Eigen/Dense>

namespace gqi {

using Matrix4d = Eigen::Matrix4d;
using Matrix4cd = Eigen::Matrix4cd;

// V12 = [[a,0,c+,0],[0,a,0,c-],[c+,0,b,0],[0,c-,0,b]]
struct StandardFormCM {
    double a = 1.0;
    double b = 1.0;
    double c_plus = 0.0;
    double c_minus = 0.0;

    Matrix4d matrix() const;

    // (ab - c+^2)(ab - c-^2)
    double det() const;
    double det_v1() const { return a * a; }
    double det_v2() const { return b * b; }
    double det_c() const { return c_plus * c_minus; }

    friend bool operator==(const StandardFormCM&, const StandardFormCM&) = default;
};

// (s, d, g, lambda) coordinates: a = s + d, b = s - d, g = sqrt(det V12),
// lambda orders states of equal entropies by entanglement.
struct EntropicParams {
    double s = 1.0;
    double d = 0.0;
    double g = 1.0;
    double lambda = 1.0;

    friend bool operator==(const EntropicParams&, const EntropicParams&) = default;
};

// Omega = diag([[0,1],[-1,0]], [[0,1],[-1,0]])
const Matrix4d& symplectic_form();

struct PhysicalityReport {
    bool positive_definite = false;
    bool uncertainty_ok = false;
    double min_eigenvalue_of_V_plus_iOmega = 0.0;
    double min_eigenvalue_of_V = 0.0;

    bool physical() const { return positive_definite && uncertainty_ok; }
};

inline constexpr double kPhysicalityTol = 1e-10;
inline constexpr double kRadicandClamp = 1e-12;

PhysicalityReport validate_cm(const StandardFormCM& cm, double tol = kPhysicalityTol);

// Throws DomainError naming the violated constraint when cm is not physical.
void require_physical(const StandardFormCM& cm, double tol = kPhysicalityTol);

// Smallest symplectic eigenvalue of the partially transposed CM.
double ptranspose_min_symplectic(const StandardFormCM& cm);

// max{0, (1 - nu)/nu}
double gaussian_negativity(const StandardFormCM& cm);

struct GaussianEntropies {
    double global = 0.0;
    double marginal_1 = 0.0;
    double marginal_2 = 0.0;
};

GaussianEntropies gaussian_entropies(const StandardFormCM& cm);

// True iff s >= 1, |d| <= s - 1, 2|d| + 1 <= g <= 2s - 1 and lambda in [-1, 1].
bool region_check(const EntropicParams& p, double tol = 0.0);

StandardFormCM from_entropic_params(const EntropicParams& p);

// Inverse of from_entropic_params. Signs are canonicalized to c+ >= |c-|
// first; lambda is recovered by bisection. Pure states are lambda-degenerate
// and report lambda = 1.
EntropicParams to_entropic_params(const StandardFormCM& cm);

}  // namespace gqi

#pragma once

// Two-qubit density matrices in the basis {|00>, |01>, |10>, |11>}, qubit A
// being the left tensor factor.

#include <array>
#include <utility>

#include <Eigen/Dense>

namespace gqi {

using Matrix2cd = Eigen::Matrix2cd;
using Matrix4cd = Eigen::Matrix4cd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenTol = 1e-10;

class TwoQubitState {
public:
    // Validates with the given tolerances and throws DomainError on failure.
    explicit TwoQubitState(const Matrix4cd& matrix, double eig_tol = kEigenTol,
                           double herm_tol = kHermitianTol, double trace_tol = kTraceTol);

    // Skips validation; for states produced by trusted constructors.
    static TwoQubitState unchecked(const Matrix4cd& matrix);

    const Matrix4cd& matrix() const { return m_; }
    std::complex<double> operator()(int row, int col) const { return m_(row, col); }

    // Largest modulus among the entries outside the X pattern.
    double anti_x_norm() const;

private:
    TwoQubitState() = default;
    Matrix4cd m_ = Matrix4cd::Zero();
};

struct ValidationReport {
    double hermiticity_error = 0.0;
    double trace_error = 0.0;
    double min_eigenvalue = 0.0;

    bool ok(double eig_tol = kEigenTol, double herm_tol = kHermitianTol, double trace_tol = kTraceTol) const {
        return hermiticity_error <= herm_tol && trace_error <= trace_tol && min_eigenvalue >= -eig_tol;
    }
};

ValidationReport validate_density_matrix(const Matrix4cd& m);
ValidationReport validate_density_matrix(const Matrix2cd& m);

// Real X-shaped state: the only nonzero entries are the populations,
// rho_{00,11} = rho_{11,00} (outer) and rho_{01,10} = rho_{10,01} (inner).
struct XState {
    std::array<double, 4> populations{0.0, 0.0, 0.0, 1.0};
    double coherence_outer = 0.0;
    double coherence_inner = 0.0;

    // Populations sum to one and both 2x2 blocks are positive.
    bool valid(double tol = kEigenTol) const;
    Matrix4cd matrix() const;
    TwoQubitState to_state() const;  // throws DomainError if !valid()

    // Reads the X entries of m, discarding everything else (including
    // imaginary parts of the coherences).
    static XState from_matrix(const Matrix4cd& m);
};

// T_A: transpose of the qubit-A indices.
Matrix4cd partial_transpose_a(const Matrix4cd& m);
Matrix4cd partial_transpose_b(const Matrix4cd& m);

// max{0, ||rho^{T_A}||_1 - 1} from the raw spectrum.
double negativity(const TwoQubitState& rho);
double negativity(const Matrix4cd& rho);
// Same quantity from the two 2x2 blocks of the partial transpose.
double negativity(const XState& x);

// [D/(D-1)](1 - Tr rho^2)
double linear_entropy(const TwoQubitState& rho);
double linear_entropy(const Matrix4cd& rho);
double linear_entropy(const Matrix2cd& rho);
double linear_entropy(const XState& x);

// (Tr_B rho, Tr_A rho)
std::pair<Matrix2cd, Matrix2cd> marginals(const Matrix4cd& rho);
std::pair<Matrix2cd, Matrix2cd> marginals(const TwoQubitState& rho);

// 0.5 ||x - y||_1
double trace_distance(const Matrix4cd& x, const Matrix4cd& y);

// (|00> - |11>)/sqrt(2)
Eigen::Vector4cd phi_minus();

// p |Phi-><Phi-| + (1 - p) I/4
TwoQubitState werner(double p);

// [(g-1)|01><01| + (g+1)|11><11|]/(2g); minimal-entropy product images.
TwoQubitState product_boundary_state(double g);

TwoQubitState pure_state(const Eigen::Vector4cd& psi);

}  // namespace gqi

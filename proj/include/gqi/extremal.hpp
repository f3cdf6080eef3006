#pragma once

// Named extremal families of two-mode Gaussian resources and the analytic
// boundaries of their images under the interface map.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gqi/gaussian.hpp"
#include "gqi/qubit.hpp"

namespace gqi {

// lambda = +1 (most entangled) / -1 (least entangled) at fixed (s, d, g).
StandardFormCM gmems(double s, double d, double g);
StandardFormCM glems(double s, double d, double g);

// a = b = sqrt(g) cosh 2r, c+ = -c- = sqrt(g) sinh 2r
StandardFormCM squeezed_thermal(double g, double r);

// g = 2|d| + 1, c+- = +-sqrt((1 + max{a,b})(min{a,b} - 1))
StandardFormCM gmemms(double a, double b);

// Envelope of the mapped global entropy at fixed field entropy 1 - 1/g.
double qubit_entropy_max(double field_entropy);
double qubit_entropy_min(double field_entropy);

// 1 - 2/[(1 + N12)^2 + 1]; accepts +infinity.
double nmax_vs_field_negativity(double field_negativity);

// [-1 + 3 sqrt(1 - S)]/2 below S = 8/9, zero above.
double mems_boundary(double qubit_entropy);

// g of the symmetric lambda = 1 resource whose image has marginal entropy
// s_loc and global entropy s_global. Throws DomainError when no such
// resource exists in the entropic region.
double qmems_g(double s_loc, double s_global);
double qmems_negativity(double s_loc, double s_global);

// Same for lambda = -1, by root finding on the increasing branch of the
// mapped entropy.
double qlems_g(double s_loc, double s_global);
double qlems_negativity(double s_loc, double s_global);

// Field marginal a such that the mapped qubit marginal has entropy s.
double marginal_for_qubit_entropy(double s);

// Negativity of the image of gmemms(a, b) at given qubit marginal entropies.
double gmemms_image_boundary(double s_a, double s_b);

// Large-s Werner construction (d = 0, lambda = -1) at finite cutoff, with
// the residual distance from werner(2/(1 + g^2)).
struct WernerLimit {
    StandardFormCM resource;
    double werner_weight = 0.0;
    double trace_distance = 0.0;
    double qubit_entropy = 0.0;
    double qubit_negativity = 0.0;
};

WernerLimit werner_limit(double g, double s_cutoff);

enum class CurveKind {
    qubit_entropy_max,
    qubit_entropy_min,
    nmax_vs_field_negativity,
    mems_werner,
    qmems_surface,
    qlems_surface,
    gmemms_ridge,
};

std::string_view to_string(CurveKind kind);
CurveKind curve_kind_from_string(std::string_view name);
const std::vector<CurveKind>& all_curve_kinds();

struct BoundarySample {
    std::vector<double> abscissa;
    double ordinate = 0.0;
};

struct BoundaryCurve {
    CurveKind kind{};
    std::vector<std::string> axes;
    std::string ordinate_name;
    std::string parameters;
    std::vector<BoundarySample> samples;
};

struct BoundaryOptions {
    int points = 200;
    int grid = 50;
    double field_negativity_max = 20.0;
};

BoundaryCurve sample_boundary(CurveKind kind, const BoundaryOptions& options = {});

// Comment lines naming kind, axes and parameters, then a CSV table.
void write_boundary_csv(std::ostream& out, const BoundaryCurve& curve);

}  // namespace gqi

#include "gqi/extremal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "gqi/errors.hpp"
#include "gqi/interface_map.hpp"

namespace gqi {

namespace {

void require_entropy(double x, std::string_view what) {
    if (!std::isfinite(x)) throw InvalidInput(fmt::format("{} is not finite", what));
    if (x < 0.0 || x >= 1.0) throw DomainError(fmt::format("{} = {} outside [0, 1)", what, x));
}

double symmetric_s(double s_loc) {
    require_entropy(s_loc, "marginal entropy");
    return 1.0 / std::sqrt(1.0 - s_loc);
}

double glems_entropy(double s, double g) { return mapped_global_entropy(glems(s, 0.0, g)); }

// Maximizer of the lambda = -1 mapped entropy over g in [1, 2s - 1]. The
// entropy rises from zero, peaks, and falls off slightly just below
// g = 2s - 1.
double glems_entropy_peak(double s) {
    double lo = 1.0;
    double hi = 2.0 * s - 1.0;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = glems_entropy(s, x1);
    double f2 = glems_entropy(s, x2);
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = glems_entropy(s, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = glems_entropy(s, x1);
        }
    }
    const double peak = 0.5 * (lo + hi);
    const double top = 2.0 * s - 1.0;
    return glems_entropy(s, top) >= glems_entropy(s, peak) ? top : peak;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(std::max(n, 0));
    for (int k = 0; k < n; ++k) out.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
    return out;
}

constexpr std::array<std::pair<CurveKind, std::string_view>, 7> kCurveNames{{
    {CurveKind::qubit_entropy_max, "qubit_entropy_max"},
    {CurveKind::qubit_entropy_min, "qubit_entropy_min"},
    {CurveKind::nmax_vs_field_negativity, "nmax_vs_field_negativity"},
    {CurveKind::mems_werner, "mems_werner"},
    {CurveKind::qmems_surface, "qmems_surface"},
    {CurveKind::qlems_surface, "qlems_surface"},
    {CurveKind::gmemms_ridge, "gmemms_ridge"},
}};

}  // namespace

StandardFormCM gmems(double s, double d, double g) { return from_entropic_params({s, d, g, 1.0}); }

StandardFormCM glems(double s, double d, double g) { return from_entropic_params({s, d, g, -1.0}); }

StandardFormCM squeezed_thermal(double g, double r) {
    if (!std::isfinite(g) || !std::isfinite(r)) throw InvalidInput("squeezed thermal parameters must be finite");
    if (g < 1.0 || r < 0.0) throw DomainError(fmt::format("squeezed thermal state needs g >= 1, r >= 0 (g={}, r={})", g, r));
    const double diag = std::sqrt(g) * std::cosh(2.0 * r);
    const double corr = std::sqrt(g) * std::sinh(2.0 * r);
    return {diag, diag, corr, -corr};
}

StandardFormCM gmemms(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidInput("GMEMMS marginals must be finite");
    if (std::min(a, b) < 1.0) throw DomainError(fmt::format("GMEMMS needs a, b >= 1 (a={}, b={})", a, b));
    const double c = std::sqrt((1.0 + std::max(a, b)) * (std::min(a, b) - 1.0));
    return {a, b, c, -c};
}

double qubit_entropy_max(double field_entropy) {
    require_entropy(field_entropy, "field entropy");
    const double g = 1.0 / (1.0 - field_entropy);
    const double w = 1.0 + g * g;
    return 1.0 - 4.0 / (w * w);
}

double qubit_entropy_min(double field_entropy) {
    require_entropy(field_entropy, "field entropy");
    return 2.0 / 3.0 * field_entropy * (2.0 - field_entropy);
}

double nmax_vs_field_negativity(double field_negativity) {
    if (std::isnan(field_negativity)) throw InvalidInput("field negativity is NaN");
    if (field_negativity < 0.0) throw DomainError("field negativity must be nonnegative");
    if (std::isinf(field_negativity)) return 1.0;
    const double w = 1.0 + field_negativity;
    return 1.0 - 2.0 / (w * w + 1.0);
}

double mems_boundary(double qubit_entropy) {
    if (!std::isfinite(qubit_entropy)) throw InvalidInput("qubit entropy is not finite");
    if (qubit_entropy < 0.0 || qubit_entropy > 1.0) throw DomainError("qubit entropy outside [0, 1]");
    if (qubit_entropy >= 8.0 / 9.0) return 0.0;
    return std::max(0.0, (-1.0 + 3.0 * std::sqrt(1.0 - qubit_entropy)) / 2.0);
}

double qmems_g(double s_loc, double s_global) {
    const double s = symmetric_s(s_loc);
    if (!std::isfinite(s_global)) throw InvalidInput("global entropy is not finite");
    const double radicand = 4.0 - 9.0 * s_global + s_loc * (4.0 + s_loc);
    if (radicand < 0.0) {
        throw DomainError(fmt::format("no QMEMS at (S_loc={}, S={}): radicand {:.3e} < 0", s_loc, s_global, radicand));
    }
    const double g = 3.0 / (1.0 - s_loc + std::sqrt(radicand));
    const double tol = 1e-12 * std::max(1.0, s);
    if (g < 1.0 - tol || g > 2.0 * s - 1.0 + tol) {
        throw DomainError(fmt::format("no QMEMS at (S_loc={}, S={}): g={} outside [1, {}]", s_loc, s_global, g, 2.0 * s - 1.0));
    }
    return std::clamp(g, 1.0, std::max(1.0, 2.0 * s - 1.0));
}

double qmems_negativity(double s_loc, double s_global) {
    qmems_g(s_loc, s_global);
    const double l = s_loc;
    const double entangled_lhs = 9.0 * s_global + 4.0 * (l - 2.0) * l;
    const double entangled_rhs = 4.0 * l * std::sqrt(1.0 - l + l * l);
    if (!(entangled_lhs < entangled_rhs)) return 0.0;
    const double q = std::sqrt(std::max(0.0, (2.0 + l) * (2.0 + l) - 9.0 * s_global));
    const double inner = 2.0 + 8.0 * l - l * l - 9.0 * s_global + (l - 1.0) * q;
    return std::max(0.0, (-(2.0 + l) + q + 2.0 * std::sqrt(std::max(0.0, inner))) / 6.0);
}

double qlems_g(double s_loc, double s_global) {
    const double s = symmetric_s(s_loc);
    if (!std::isfinite(s_global)) throw InvalidInput("global entropy is not finite");
    if (s_global < -1e-12) throw DomainError("global entropy must be nonnegative");
    if (s - 1.0 < 1e-15) {
        if (std::abs(s_global) <= 1e-12) return 1.0;
        throw DomainError(fmt::format("no QLEMS at (S_loc={}, S={})", s_loc, s_global));
    }
    double lo = 1.0;
    double hi = glems_entropy_peak(s);
    const double top = glems_entropy(s, hi);
    if (s_global > top + 1e-12) {
        throw DomainError(fmt::format("no QLEMS at (S_loc={}, S={}): max reachable entropy {}", s_loc, s_global, top));
    }
    if (s_global <= glems_entropy(s, lo)) return lo;
    if (s_global >= top) return hi;
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (glems_entropy(s, mid) < s_global) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double qlems_negativity(double s_loc, double s_global) {
    const double g = qlems_g(s_loc, s_global);
    return mapped_negativity(glems(symmetric_s(s_loc), 0.0, g));
}

double marginal_for_qubit_entropy(double s) {
    require_entropy(s, "qubit marginal entropy");
    return 1.0 / std::sqrt(1.0 - s);
}

double gmemms_image_boundary(double s_a, double s_b) {
    return mapped_negativity(gmemms(marginal_for_qubit_entropy(s_a), marginal_for_qubit_entropy(s_b)));
}

WernerLimit werner_limit(double g, double s_cutoff) {
    WernerLimit out;
    out.resource = glems(s_cutoff, 0.0, g);
    out.werner_weight = 2.0 / (1.0 + g * g);
    const Matrix4cd rho = steady_state(out.resource).matrix();
    out.trace_distance = trace_distance(rho, werner(out.werner_weight).matrix());
    out.qubit_entropy = linear_entropy(rho);
    out.qubit_negativity = negativity(rho);
    return out;
}

std::string_view to_string(CurveKind kind) {
    for (const auto& [k, name] : kCurveNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

CurveKind curve_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kCurveNames) {
        if (n == name) return k;
    }
    throw InvalidInput(fmt::format("unknown curve kind '{}'", name));
}

const std::vector<CurveKind>& all_curve_kinds() {
    static const std::vector<CurveKind> kinds = [] {
        std::vector<CurveKind> out;
        for (const auto& entry : kCurveNames) out.push_back(entry.first);
        return out;
    }();
    return kinds;
}

BoundaryCurve sample_boundary(CurveKind kind, const BoundaryOptions& options) {
    if (options.points < 2 || options.grid < 2) throw DomainError("boundary sampling needs at least 2 points per axis");
    BoundaryCurve curve;
    curve.kind = kind;
    curve.parameters = fmt::format("points={} grid={} field_negativity_max={}", options.points, options.grid,
                                   options.field_negativity_max);

    auto surface = [&](auto&& value) {
        // Open interval in S_loc; S in [0, 1).
        for (int i = 0; i < options.grid; ++i) {
            const double s_loc = (i + 1.0) / (options.grid + 1.0);
            for (int j = 0; j < options.grid; ++j) {
                const double s_global = static_cast<double>(j) / options.grid;
                try {
                    curve.samples.push_back({{s_loc, s_global}, value(s_loc, s_global)});
                } catch (const DomainError&) {
                    // outside the surface's domain
                }
            }
        }
    };

    switch (kind) {
        case CurveKind::qubit_entropy_max:
        case CurveKind::qubit_entropy_min:
            curve.axes = {"field_entropy"};
            curve.ordinate_name = kind == CurveKind::qubit_entropy_max ? "qubit_entropy_max" : "qubit_entropy_min";
            for (int k = 0; k < options.points; ++k) {
                const double x = static_cast<double>(k) / options.points;
                curve.samples.push_back(
                    {{x}, kind == CurveKind::qubit_entropy_max ? qubit_entropy_max(x) : qubit_entropy_min(x)});
            }
            break;
        case CurveKind::nmax_vs_field_negativity:
            curve.axes = {"field_negativity", "normalized_field_negativity"};
            curve.ordinate_name = "qubit_negativity_max";
            for (double n : linspace(0.0, options.field_negativity_max, options.points)) {
                curve.samples.push_back({{n, n / (1.0 + n)}, nmax_vs_field_negativity(n)});
            }
            break;
        case CurveKind::mems_werner:
            curve.axes = {"qubit_entropy"};
            curve.ordinate_name = "qubit_negativity_max";
            for (double x : linspace(0.0, 1.0, options.points)) curve.samples.push_back({{x}, mems_boundary(x)});
            break;
        case CurveKind::qmems_surface:
            curve.axes = {"s_loc", "s_global"};
            curve.ordinate_name = "qubit_negativity_max";
            surface(qmems_negativity);
            break;
        case CurveKind::qlems_surface:
            curve.axes = {"s_loc", "s_global"};
            curve.ordinate_name = "qubit_negativity_min";
            surface(qlems_negativity);
            break;
        case CurveKind::gmemms_ridge:
            curve.axes = {"s_a", "s_b"};
            curve.ordinate_name = "qubit_negativity";
            for (double sa : linspace(0.0, 0.99, options.grid)) {
                for (double sb : linspace(0.0, 0.99, options.grid)) {
                    curve.samples.push_back({{sa, sb}, gmemms_image_boundary(sa, sb)});
                }
            }
            break;
    }
    return curve;
}

void write_boundary_csv(std::ostream& out, const BoundaryCurve& curve) {
    out << "# kind: " << to_string(curve.kind) << '\n';
    out << "# axes:";
    for (const auto& axis : curve.axes) out << ' ' << axis;
    out << '\n';
    out << "# parameters: " << curve.parameters << '\n';
    for (const auto& axis : curve.axes) out << axis << ',';
    out << curve.ordinate_name << '\n';
    for (const auto& sample : curve.samples) {
        for (double x : sample.abscissa) out << fmt::format("{:.17g},", x);
        out << fmt::format("{:.17g}\n", sample.ordinate);
    }
}

}  // namespace gqi

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "curveflow/curve.hpp"

namespace curveflow {

/// The curvature weight A of G^A plus the tangential penalty weight used by
/// the discrete boundary-value energy.
struct MetricParams {
    double A = 0.0;
    double epsilon = 0.0;

    /// Throws InvalidInput unless A >= 0 and epsilon >= 0.
    void validate() const;
};

/// Curves c(t_j, .) on the uniform grid t_j = j / (T - 1), all with the same
/// vertex count.
class CurvePath {
public:
    explicit CurvePath(std::vector<PolygonCurve> curves);

    std::size_t time_samples() const noexcept { return curves_.size(); }
    std::size_t vertex_count() const noexcept { return curves_.front().size(); }
    double time_step() const noexcept { return 1.0 / static_cast<double>(curves_.size() - 1); }

    const PolygonCurve& operator[](std::size_t j) const noexcept { return curves_[j]; }
    const PolygonCurve& front() const noexcept { return curves_.front(); }
    const PolygonCurve& back() const noexcept { return curves_.back(); }
    const std::vector<PolygonCurve>& curves() const noexcept { return curves_; }

    CurvePath time_reversed() const;

private:
    std::vector<PolygonCurve> curves_;
};

/// G^A_c(h, k) = sum_i (1 + A k_i^2) <h_i, k_i> w_i.
double inner_product(const MetricParams& params, const PolygonCurve& c, const VectorField& h,
                     const VectorField& k);

/// G^A on purely normal fields a n_c, b n_c.
double normal_inner_product(const MetricParams& params, const PolygonCurve& c, const NormalField& a,
                            const NormalField& b);

struct Decomposition {
    VectorField tangential;
    VectorField normal;
    NormalField normal_coeff;
};

/// Pointwise split of h into components along the discrete tangent and normal.
Decomposition decompose(const PolygonCurve& c, const VectorField& h);

/// Per time step quantities of a path. Velocities are forward differences and
/// the geometry comes from the earlier slice.
struct StepTerms {
    double quadratic_form = 0.0;  ///< sum (1 + A k^2) a^2 w
    double abs_normal_flux = 0.0; ///< sum |a| w
    double graph_area_rate = 0.0; ///< sum w sqrt(1 + a^2)
    double length = 0.0;          ///< length of the earlier slice
};

std::vector<StepTerms> step_terms(const MetricParams& params, const CurvePath& path);

/// 1/2 int int (1 + A k^2) <c_t, n>^2 |c_theta| dtheta dt  (normal motion only).
double path_energy(const MetricParams& params, const CurvePath& path);

/// int ( int (1 + A k^2) <c_t, n>^2 |c_theta| dtheta )^{1/2} dt.
double horizontal_path_length(const MetricParams& params, const CurvePath& path);

/// Energy written as the anisotropic area functional of the graph surface
/// (t, c(t, theta)). Throws NonHorizontalPath unless the path moves normally
/// (max tangential speed / max normal speed <= 1e-6).
double anisotropic_area_energy(const MetricParams& params, const CurvePath& path);

/// Ratio max |<c_t, T>| / max |<c_t, n>| over the path; 0 for a static path.
double horizontality_defect(const CurvePath& path);

/// int int |det(c_t, c_theta)| dtheta dt.
double area_swept(const CurvePath& path);

/// Area of the graph surface over [0, 1].
double graph_area(const CurvePath& path);

struct LipschitzCertificate {
    double lhs = 0.0;  ///< sqrt(l(last)) - sqrt(l(first))
    double rhs = 0.0;  ///< horizontal length / (2 sqrt(A))
};

/// Throws RequiresPositiveA when A <= 0.
LipschitzCertificate lipschitz_certificate(const MetricParams& params, const CurvePath& path);

/// Rebuilds the path so that every vertex moves along the normal of the
/// earlier slice: vertex i of slice j+1 is where the normal line through
/// vertex i of slice j meets the polygon of slice j+1 (nearest crossing).
/// Slice 0 is kept.
CurvePath horizontal_lift(const CurvePath& path);

struct CertificateCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool passed = false;
};

/// Bound suite for any path: the sqrt-length Lipschitz bound (A > 0 only),
/// area swept <= max sqrt(l) * L, and graph area <= 2E + max l. A check
/// passes when lhs <= rhs + abs_slack + rel_slack * |rhs|.
std::vector<CertificateCheck> check_certificates(const MetricParams& params, const CurvePath& path,
                                                 double abs_slack = 1e-6, double rel_slack = 0.05);

/// Summary of a computed path.
struct GeodesicReport {
    double energy = 0.0;           ///< path_energy
    double path_length = 0.0;      ///< horizontal_path_length
    double discrete_energy = 0.0;  ///< minimized objective (bvp solver only)
    double lipschitz_lhs = 0.0;
    double lipschitz_rhs = 0.0;
    double area_swept = 0.0;
    double area_swept_bound = 0.0;
    double graph_area = 0.0;
    double graph_area_bound = 0.0;
    double initial_gradient_norm = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    bool certificates_passed = false;
};

/// Fills every metric and certificate field of a report for `path`.
GeodesicReport make_report(const MetricParams& params, const CurvePath& path);

}  // namespace curveflow

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/metric.hpp"

namespace curveflow {

/// Normal-perturbation chart f -> c + f n_c around a constant-speed base
/// curve. Scalar fields are sampled at the base vertices; derivatives are
/// arc-length derivatives by central differences with spacing length / n.
class ChartFrame {
public:
    /// Throws InvalidInput unless all edge lengths agree within 1e-10.
    explicit ChartFrame(PolygonCurve base);

    const PolygonCurve& base() const noexcept { return base_; }
    std::size_t size() const noexcept { return base_.size(); }
    double spacing() const noexcept { return spacing_; }
    const std::vector<double>& curvature() const noexcept { return kappa_; }
    const std::vector<double>& curvature_s() const noexcept { return kappa_s_; }
    const std::vector<double>& curvature_ss() const noexcept { return kappa_ss_; }

    std::vector<double> d1(const std::vector<double>& f) const;
    std::vector<double> d2(const std::vector<double>& f) const;
    /// sum_i f_i * spacing
    double integrate(const std::vector<double>& f) const;

private:
    PolygonCurve base_;
    double spacing_;
    std::vector<double> kappa_;
    std::vector<double> kappa_s_;
    std::vector<double> kappa_ss_;
};

/// Christoffel symbol of the chart at f = 0:
///   [(k/2 - A k^3/2 + A k'') h k2 + 2 A k' (h' k2 + h k2') + 2 A k h' k2'] / (1 + A k^2)
std::vector<double> christoffel_at_center(const MetricParams& params, const ChartFrame& frame,
                                          const std::vector<double>& h, const std::vector<double>& k);

/// R(m, h, m, h) at the chart center from the Wronskian form
///   int [(-(A k^2 - 1)^2 + 4 A^2 k k'' - 8 A^2 k'^2) / (2 (1 + A k^2))] W^2 + A W'^2,  W = m h' - h m'.
double curvature_tensor_value(const MetricParams& params, const ChartFrame& frame,
                              const std::vector<double>& m, const std::vector<double>& h);

/// The A = 0 form -1/2 int W^2.
double curvature_tensor_value_a0(const ChartFrame& frame, const std::vector<double>& m,
                                 const std::vector<double>& h);

/// -R(m,h,m,h) / (|m|^2 |h|^2 - G(m,h)^2) with G^A on normal fields.
/// Throws DegeneratePlane when the Gram determinant is below 1e-12 |m|^2 |h|^2.
double sectional_curvature(const MetricParams& params, const ChartFrame& frame,
                           const std::vector<double>& m, const std::vector<double>& h);

/// Eigenvalues of f'' + (A k^2 - 1)^2 / (2 A (1 + A k^2)) f on the circle of
/// radius r for the frequencies n = 0..n_max (arc-length frequency n / r).
/// Throws RequiresPositiveA.
std::vector<double> circle_operator_spectrum(const MetricParams& params, double r, int n_max);

/// -(1 - A/r^2)^2 / (2 (r + A/r)^2) n^2 + A / (r^3 (r + A/r)) n^4
double circle_jacobi_lambda(const MetricParams& params, double r, int n);

/// Right-hand side of the Jacobi equation along the concentric circles,
///   -(1 - A/r^2)^2 / (2 (r + A/r)^2) (n^2 - 5/8) + A / (r^3 (r + A/r)) (n^4 - 1/2),
/// so that b = (r + A/r)^{1/4} a_n solves b'' = potential * b.
double circle_jacobi_potential(const MetricParams& params, double r, int n);

struct JacobiSolution {
    std::vector<double> r;
    /// a_n(r), scaled so that max |a_n| on the samples is 1.
    std::vector<double> a;
    /// Sign changes of a_n with r in [r_lo, r_hi], ascending.
    std::vector<double> zeros;
    /// Exponent p of the regular branch b ~ r^p used at the start.
    double start_exponent = 0.0;
};

/// Integrates the Jacobi equation for frequency n from r0 = 1e-3 sqrt(A) on
/// the branch that vanishes as r -> 0, with an adaptive embedded 4/5 stepper
/// in log r on the phase/amplitude form of b. Samples every dr in
/// [r_lo, r_hi]; zeros are refined by bisection to 1e-10 sqrt(A) (or to the
/// resolution of double precision in log r, whichever is coarser).
/// Throws RequiresPositiveA, InvalidInput, StiffnessFailure.
JacobiSolution jacobi_field_on_circles(const MetricParams& params, int n, std::pair<double, double> r_range,
                                       double dr);

}  // namespace curveflow

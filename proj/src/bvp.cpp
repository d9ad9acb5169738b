#include "curveflow/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "curveflow/errors.hpp"
#include "curveflow/parallel.hpp"

namespace curveflow {

namespace {

constexpr double kMinEdgeFraction = 1e-3;

struct Grid {
    std::size_t T;
    std::size_t n;
    const std::vector<Vec2>& x;  // row-major: x[j * n + i]

    const Vec2& at(std::size_t j, std::ptrdiff_t i) const {
        const auto nn = static_cast<std::ptrdiff_t>(n);
        return x[j * n + static_cast<std::size_t>(((i % nn) + nn) % nn)];
    }
};

std::vector<Vec2> flatten(const CurvePath& path) {
    std::vector<Vec2> out;
    out.reserve(path.time_samples() * path.vertex_count());
    for (const auto& c : path.curves()) out.insert(out.end(), c.vertices().begin(), c.vertices().end());
    return out;
}

CurvePath unflatten(const std::vector<Vec2>& x, std::size_t T, std::size_t n) {
    std::vector<PolygonCurve> curves;
    curves.reserve(T);
    for (std::size_t j = 0; j < T; ++j) {
        curves.emplace_back(std::vector<Vec2>(x.begin() + static_cast<std::ptrdiff_t>(j * n),
                                              x.begin() + static_cast<std::ptrdiff_t>((j + 1) * n)));
    }
    return CurvePath(std::move(curves));
}

[[noreturn]] void degenerate(std::size_t i, std::size_t j) {
    throw CurveError(ErrorCode::DegenerateCurve,
                     "zero edge at vertex " + std::to_string(i) + " of slice " + std::to_string(j));
}

// g(e, d) = (<e, d^perp>^2 + eps <e, d>^2) / |e|, with optional partials.
double triangle_term(const Vec2& e, const Vec2& d, double eps, Vec2* ge, Vec2* gd) {
    const double m = norm(e);
    const double p = cross(d, e);
    const double q = dot(e, d);
    const double g = (p * p + eps * q * q) / m;
    if (ge != nullptr) {
        *ge = (2.0 * p * perp(d) + 2.0 * eps * q * d) / m - (g / (m * m)) * e;
        *gd = (-2.0 * p * perp(e) + 2.0 * eps * q * e) / m;
    }
    return g;
}

struct VertexTerm {
    double energy = 0.0;
    // Contributions to a, its two space neighbours and two time neighbours.
    Vec2 ga, gprev, gnext, gdown, gup;
};

// Everything attributed to vertex a = (i, j): the four triangles around it
// and its k(i,j) weight.
VertexTerm vertex_term(const Grid& grid, double A, double eps, std::size_t j, std::size_t i, bool grad) {
    const auto ii = static_cast<std::ptrdiff_t>(i);
    const Vec2& xa = grid.at(j, ii);
    const Vec2& xp = grid.at(j, ii - 1);
    const Vec2& xn = grid.at(j, ii + 1);

    const Vec2 u = xp - xa;
    const Vec2 w = xa - xn;
    const Vec2 s = xp - 2.0 * xa + xn;
    const double u2 = norm2(u);
    const double w2 = norm2(w);
    if (!(u2 > 0.0) || !(w2 > 0.0)) degenerate(i, j);
    const double s2 = norm2(s);
    const double H = 0.5 * (1.0 / (u2 * u2) + 1.0 / (w2 * w2));
    const double k = H * s2;
    const double weight = 1.0 + A * k;

    VertexTerm out;
    double gsum = 0.0;
    const Vec2* neighbours[2] = {&xp, &xn};
    Vec2* nb_grad[2] = {&out.gprev, &out.gnext};
    for (int side = 0; side < 2; ++side) {
        const Vec2 e = xa - *neighbours[side];
        for (int dir = 0; dir < 2; ++dir) {
            if (dir == 0 && j == 0) continue;
            if (dir == 1 && j + 1 == grid.T) continue;
            const std::size_t jc = dir == 0 ? j - 1 : j + 1;
            const Vec2 d = xa - grid.at(jc, ii);
            Vec2 ge;
            Vec2 gd;
            const double g = triangle_term(e, d, eps, grad ? &ge : nullptr, &gd);
            gsum += g;
            if (grad) {
                out.ga += weight * (ge + gd);
                *nb_grad[side] -= weight * ge;
                (dir == 0 ? out.gdown : out.gup) -= weight * gd;
            }
        }
    }
    out.energy = gsum * weight;
    if (grad && A != 0.0) {
        const double c = A * gsum;
        const Vec2 dku = (-2.0 * s2 / (u2 * u2 * u2)) * u;
        const Vec2 dkw = (-2.0 * s2 / (w2 * w2 * w2)) * w;
        const Vec2 dks = (2.0 * H) * s;
        out.gprev += c * (dku + dks);
        out.ga += c * (-1.0 * dku + dkw - 2.0 * dks);
        out.gnext += c * (-1.0 * dkw + dks);
    }
    return out;
}

double energy_flat(const std::vector<Vec2>& x, std::size_t T, std::size_t n, double A, double eps) {
    const Grid grid{T, n, x};
    std::vector<double> per_slice(T, 0.0);
    parallel_for(T, [&](std::size_t j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += vertex_term(grid, A, eps, j, i, false).energy;
        per_slice[j] = sum;
    });
    double total = 0.0;
    for (double v : per_slice) total += v;
    return total;
}

// Full gradient (including the fixed endpoint rows, zeroed at the end).
double gradient_flat(const std::vector<Vec2>& x, std::size_t T, std::size_t n, double A, double eps,
                     std::vector<Vec2>& grad) {
    const Grid grid{T, n, x};
    std::vector<VertexTerm> terms(T * n);
    parallel_for(T, [&](std::size_t j) {
        for (std::size_t i = 0; i < n; ++i) terms[j * n + i] = vertex_term(grid, A, eps, j, i, true);
    });
    grad.assign(T * n, Vec2{});
    double total = 0.0;
    for (std::size_t j = 0; j < T; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const VertexTerm& t = terms[j * n + i];
            total += t.energy;
            grad[j * n + i] += t.ga;
            grad[j * n + (i == 0 ? n - 1 : i - 1)] += t.gprev;
            grad[j * n + (i + 1 == n ? 0 : i + 1)] += t.gnext;
            if (j > 0) grad[(j - 1) * n + i] += t.gdown;
            if (j + 1 < T) grad[(j + 1) * n + i] += t.gup;
        }
    }
    std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(n), Vec2{});
    std::fill(grad.end() - static_cast<std::ptrdiff_t>(n), grad.end(), Vec2{});
    return total;
}

double max_abs(const std::vector<Vec2>& g) {
    double m = 0.0;
    for (const auto& v : g) m = std::max({m, std::abs(v.x), std::abs(v.y)});
    return m;
}

double dot_flat(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += dot(a[k], b[k]);
    return s;
}

// True when every slice keeps its shortest edge above the guard fraction of
// its mean edge.
bool edges_acceptable(const std::vector<Vec2>& x, std::size_t T, std::size_t n) {
    for (std::size_t j = 0; j < T; ++j) {
        double mn = std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double l = norm(x[j * n + (i + 1 == n ? 0 : i + 1)] - x[j * n + i]);
            mn = std::min(mn, l);
            sum += l;
        }
        if (!(mn >= kMinEdgeFraction * sum / static_cast<double>(n))) return false;
    }
    return true;
}

}  // namespace

void SolverConfig::validate() const {
    if (time_samples < 3) throw CurveError(ErrorCode::InvalidInput, "time_samples must be >= 3");
    if (vertices < 8) throw CurveError(ErrorCode::InvalidInput, "vertices must be >= 8");
    if (!(gradient_tolerance > 0.0) || relative_tolerance < 0.0) {
        throw CurveError(ErrorCode::InvalidInput, "tolerances must be positive");
    }
    if (max_iterations < 0) throw CurveError(ErrorCode::InvalidInput, "max_iterations must be >= 0");
    if (!(epsilon >= 0.0)) throw CurveError(ErrorCode::InvalidInput, "epsilon must be >= 0");
    if (history < 1) throw CurveError(ErrorCode::InvalidInput, "history must be >= 1");
}

double discrete_energy(const MetricParams& params, const CurvePath& path) {
    return energy_flat(flatten(path), path.time_samples(), path.vertex_count(), params.A, params.epsilon);
}

double PathGradient::max_abs() const {
    double m = 0.0;
    for (const auto& s : slices) {
        for (const auto& v : s) m = std::max({m, std::abs(v.x), std::abs(v.y)});
    }
    return m;
}

PathGradient energy_gradient(const MetricParams& params, const CurvePath& path) {
    const std::size_t T = path.time_samples();
    const std::size_t n = path.vertex_count();
    std::vector<Vec2> g;
    gradient_flat(flatten(path), T, n, params.A, params.epsilon, g);
    PathGradient out;
    out.slices.resize(T);
    for (std::size_t j = 0; j < T; ++j) {
        out.slices[j].assign(g.begin() + static_cast<std::ptrdiff_t>(j * n),
                             g.begin() + static_cast<std::ptrdiff_t>((j + 1) * n));
    }
    return out;
}

std::size_t best_cyclic_shift(const PolygonCurve& start, const PolygonCurve& end) {
    if (start.size() != end.size()) {
        throw CurveError(ErrorCode::SizeMismatch, "best_cyclic_shift needs equal vertex counts");
    }
    const std::size_t n = start.size();
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n; ++s) {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) cost += norm2(start[i] - end[(i + s) % n]);
        if (cost < best_cost) {
            best_cost = cost;
            best = s;
        }
    }
    return best;
}

CurvePath linear_blend(const PolygonCurve& start, const PolygonCurve& end, std::size_t time_samples) {
    if (time_samples < 2) throw CurveError(ErrorCode::InvalidInput, "time_samples must be >= 2");
    const PolygonCurve aligned = end.cyclically_shifted(best_cyclic_shift(start, end));
    const std::size_t n = start.size();
    std::vector<PolygonCurve> curves;
    curves.reserve(time_samples);
    for (std::size_t j = 0; j < time_samples; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(time_samples - 1);
        std::vector<Vec2> pts(n);
        for (std::size_t i = 0; i < n; ++i) pts[i] = (1.0 - t) * start[i] + t * aligned[i];
        curves.emplace_back(std::move(pts));
    }
    return CurvePath(std::move(curves));
}

GeodesicSolution solve_geodesic(const MetricParams& params, const SolverConfig& config,
                                const PolygonCurve& start, const PolygonCurve& end) {
    config.validate();
    const PolygonCurve s = start.size() == config.vertices ? start : resample_constant_speed(start, config.vertices);
    const PolygonCurve e = end.size() == config.vertices ? end : resample_constant_speed(end, config.vertices);
    return solve_geodesic(params, config, linear_blend(s, e, config.time_samples));
}

GeodesicSolution solve_geodesic(const MetricParams& params, const SolverConfig& config,
                                const CurvePath& initial) {
    config.validate();
    params.validate();
    const double A = params.A;
    const double eps = config.epsilon;
    const std::size_t T = initial.time_samples();
    const std::size_t n = initial.vertex_count();
    if (T < 3) throw CurveError(ErrorCode::InvalidInput, "the solver needs at least 3 time samples");
    for (const auto& c : initial.curves()) analyze(c);

    std::vector<Vec2> x = flatten(initial);
    std::vector<Vec2> g;
    double f = gradient_flat(x, T, n, A, eps, g);
    const double g0 = max_abs(g);
    const double target = std::max(config.gradient_tolerance, config.relative_tolerance * g0);

    struct Pair {
        std::vector<Vec2> s, y;
        double rho;
    };
    std::deque<Pair> memory;
    std::vector<Vec2> dir(x.size());
    std::vector<Vec2> trial(x.size());
    std::vector<Vec2> gtrial;
    std::vector<double> alpha(config.history);

    double mean_edge = 0.0;
    for (const auto& c : initial.curves()) mean_edge += total_length(c);
    mean_edge /= static_cast<double>(T * n);

    int iter = 0;
    bool converged = max_abs(g) <= target;
    while (!converged && iter < config.max_iterations) {
        // Two-loop recursion for the quasi-Newton direction.
        for (std::size_t k = 0; k < x.size(); ++k) dir[k] = -1.0 * g[k];
        for (std::size_t m = memory.size(); m-- > 0;) {
            alpha[m] = memory[m].rho * dot_flat(memory[m].s, dir);
            for (std::size_t k = 0; k < x.size(); ++k) dir[k] -= alpha[m] * memory[m].y[k];
        }
        double step = 1.0;
        if (!memory.empty()) {
            const auto& last = memory.back();
            const double gamma = dot_flat(last.s, last.y) / dot_flat(last.y, last.y);
            for (auto& v : dir) v *= gamma;
        } else {
            step = std::min(1.0, 0.1 * mean_edge / std::max(max_abs(g), 1e-300));
        }
        for (std::size_t m = 0; m < memory.size(); ++m) {
            const double beta = memory[m].rho * dot_flat(memory[m].y, dir);
            for (std::size_t k = 0; k < x.size(); ++k) dir[k] += (alpha[m] - beta) * memory[m].s[k];
        }
        double slope = dot_flat(g, dir);
        if (!(slope < 0.0)) {
            memory.clear();
            for (std::size_t k = 0; k < x.size(); ++k) dir[k] = -1.0 * g[k];
            step = std::min(1.0, 0.1 * mean_edge / std::max(max_abs(g), 1e-300));
            slope = dot_flat(g, dir);
        }

        bool accepted = false;
        double ftrial = 0.0;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] + step * dir[k];
            if (edges_acceptable(trial, T, n)) {
                try {
                    ftrial = energy_flat(trial, T, n, A, eps);
                    if (std::isfinite(ftrial) && ftrial <= f + 1e-4 * step * slope) {
                        accepted = true;
                        break;
                    }
                } catch (const CurveError&) {
                    // Degenerate trial point: shrink the step.
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (memory.empty()) break;
            memory.clear();
            continue;
        }

        const double fnew = gradient_flat(trial, T, n, A, eps, gtrial);
        Pair p;
        p.s.resize(x.size());
        p.y.resize(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
            p.s[k] = trial[k] - x[k];
            p.y[k] = gtrial[k] - g[k];
        }
        const double sy = dot_flat(p.s, p.y);
        if (sy > 1e-16 * std::sqrt(dot_flat(p.s, p.s) * dot_flat(p.y, p.y))) {
            p.rho = 1.0 / sy;
            memory.push_back(std::move(p));
            if (memory.size() > config.history) memory.pop_front();
        }
        x.swap(trial);
        g.swap(gtrial);
        f = fnew;
        ++iter;
        converged = max_abs(g) <= target;
    }

    GeodesicSolution out{unflatten(x, T, n), {}};
    MetricParams report_params = params;
    report_params.epsilon = eps;
    out.report = make_report(report_params, out.path);
    out.report.discrete_energy = f;
    out.report.initial_gradient_norm = g0;
    out.report.gradient_norm = max_abs(g);
    out.report.iterations = iter;
    out.report.converged = converged;
    return out;
}

}  // namespace curveflow

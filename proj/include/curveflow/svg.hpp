#pragma once

#include <string>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/metric.hpp"

namespace curveflow {

struct SvgStroke {
    std::vector<Vec2> points;
    bool closed = true;
    std::string color = "#7f7f7f";
    double width = 1.0;
};

/// Fits all strokes into a width x height canvas (y up) with a margin.
/// Output depends only on the inputs.
std::string render_svg(const std::vector<SvgStroke>& strokes, double width = 640.0, double height = 480.0);

/// All slices of a path overlaid in grey, endpoints in blue, the middle slice
/// highlighted in red.
std::string path_svg(const CurvePath& path);

/// Three geodesics laid out along the edges of an equilateral triangle: every
/// shown slice is shrunk and centred at the matching point of the edge.
std::string triangle_svg(const std::vector<CurvePath>& sides, std::size_t shapes_per_side = 7);

}  // namespace curveflow

#pragma once

#include <string>

#include "qmpkit/chart.hpp"

namespace qmpkit {

// Built-in charts, selected by id:
//   cartesian:n            flat R^n, identity metric
//   polar2                 flat plane in polar coordinates (r, phi)
//   sphere2:a              2-sphere of radius a, polar cap coordinates (theta, phi)
//   sphere3:a              3-sphere of radius a, hyperspherical (chi, theta, phi)
//   circle-deformed:eps    unit circle, stretched coordinate with omega = (1 + eps cos q)^2
//   plane-deformed:eps:f   flat plane pulled back through q = x + eps f(x); f is a
//                          deformation id from the flat_deformation catalog
MetricChart make_chart(const std::string& id);

// Chart from a plain-text expression file: one "omega_ab = <expr>" per line,
// '#' comments, optional "dim = n" and "axis<i> = lo hi open|periodic" lines.
MetricChart load_chart_file(const std::string& path);

// Catalog id if `spec` matches one, otherwise treat it as a file path.
MetricChart open_chart(const std::string& spec);

}  // namespace qmpkit

#pragma once

#include "betarisk/metrics.hpp"
#include "betarisk/synth_data.hpp"

#include <string>
#include <vector>

namespace betarisk::graphics {

struct Heatmap {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values; // values[ix * ys.size() + iy]
};

// Cell grid with a colour bar; x to the right, y upwards.
std::string heatmap_svg(const Heatmap& h);

struct MapPoint {
    synth::Location location;
    metrics::PredictionRecord prediction;
};

// Scatter of locations coloured by risk; labelled positives are drawn as
// diamonds, negatives as circles.
std::string riskmap_svg(const std::vector<MapPoint>& points, const std::string& title);

// FeatureCollection of Point features, coordinates [lon, lat].
std::string riskmap_geojson(const std::vector<MapPoint>& points);

} // namespace betarisk::graphics

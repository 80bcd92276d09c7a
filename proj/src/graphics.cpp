#include "betarisk/graphics.hpp"

#include "betarisk/errors.hpp"
#include "betarisk/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace betarisk::graphics {

namespace {

struct Rgb {
    double r, g, b;
};

// Five stops sampled from the viridis map.
constexpr std::array<Rgb, 5> kStops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::string colour(double t) {
    if (!std::isfinite(t)) t = 0.0;
    t = std::clamp(t, 0.0, 1.0) * (kStops.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(t), kStops.size() - 2);
    const double f = t - static_cast<double>(i);
    const Rgb& a = kStops[i];
    const Rgb& b = kStops[i + 1];
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(a.r + f * (b.r - a.r))),
                  static_cast<int>(std::lround(a.g + f * (b.g - a.g))),
                  static_cast<int>(std::lround(a.b + f * (b.b - a.b))));
    return buf;
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle",
                 const char* extra = "") {
    return "<text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y) + "\" text-anchor=\"" + anchor +
           "\"" + extra + ">" + escape(s) + "</text>\n";
}

std::string rect(double x, double y, double w, double h, const std::string& fill) {
    return "<rect x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y) + "\" width=\"" + fmt("%.2f", w) +
           "\" height=\"" + fmt("%.2f", h) + "\" fill=\"" + fill + "\"/>\n";
}

std::string header(int width, int height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " +
           std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

// Vertical colour bar between lo and hi.
std::string colour_bar(double x, double y, double h, double lo, double hi) {
    std::string out;
    constexpr int kSteps = 50;
    const double step = h / kSteps;
    for (int k = 0; k < kSteps; ++k) {
        const double t = (k + 0.5) / kSteps;
        out += rect(x, y + h - (k + 1) * step, 16, step + 0.5, colour(t));
    }
    out += text(x + 22, y + 4, fmt("%.3g", hi), "start");
    out += text(x + 22, y + h + 4, fmt("%.3g", lo), "start");
    return out;
}

} // namespace

std::string heatmap_svg(const Heatmap& h) {
    if (h.xs.empty() || h.ys.empty() || h.values.size() != h.xs.size() * h.ys.size()) {
        throw StructuralError("heatmap values do not match its axes");
    }
    constexpr double kLeft = 70, kTop = 40, kPlot = 420;
    const int width = static_cast<int>(kLeft + kPlot + 110);
    const int height = static_cast<int>(kTop + kPlot + 60);
    const double cw = kPlot / static_cast<double>(h.xs.size());
    const double ch = kPlot / static_cast<double>(h.ys.size());

    double lo = INFINITY, hi = -INFINITY;
    for (double v : h.values) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(lo <= hi)) lo = hi = 0.0;
    const double span = hi > lo ? hi - lo : 1.0;

    std::string out = header(width, height);
    out += text(kLeft + kPlot / 2, 22, h.title, "middle", " font-size=\"15\"");
    for (std::size_t ix = 0; ix < h.xs.size(); ++ix) {
        for (std::size_t iy = 0; iy < h.ys.size(); ++iy) {
            const double v = h.values[ix * h.ys.size() + iy];
            const double y = kTop + kPlot - static_cast<double>(iy + 1) * ch;
            out += rect(kLeft + static_cast<double>(ix) * cw, y, cw + 0.05, ch + 0.05, colour((v - lo) / span));
        }
    }
    // Roughly six ticks per axis.
    const std::size_t xt = std::max<std::size_t>(1, h.xs.size() / 6);
    for (std::size_t ix = 0; ix < h.xs.size(); ix += xt) {
        out += text(kLeft + (static_cast<double>(ix) + 0.5) * cw, kTop + kPlot + 16, fmt("%g", h.xs[ix]));
    }
    const std::size_t yt = std::max<std::size_t>(1, h.ys.size() / 6);
    for (std::size_t iy = 0; iy < h.ys.size(); iy += yt) {
        out += text(kLeft - 6, kTop + kPlot - (static_cast<double>(iy) + 0.5) * ch + 4, fmt("%g", h.ys[iy]), "end");
    }
    out += text(kLeft + kPlot / 2, kTop + kPlot + 40, h.x_label);
    out += text(18, kTop + kPlot / 2, h.y_label, "middle",
                (" transform=\"rotate(-90 18 " + fmt("%.2f", kTop + kPlot / 2) + ")\"").c_str());
    out += colour_bar(kLeft + kPlot + 20, kTop, kPlot, lo, hi);
    out += "</svg>\n";
    return out;
}

std::string riskmap_svg(const std::vector<MapPoint>& points, const std::string& title) {
    constexpr double kLeft = 70, kTop = 40, kPlot = 480;
    const int width = static_cast<int>(kLeft + kPlot + 110);
    const int height = static_cast<int>(kTop + kPlot + 60);
    double lon_lo = INFINITY, lon_hi = -INFINITY, lat_lo = INFINITY, lat_hi = -INFINITY;
    for (const auto& p : points) {
        lon_lo = std::min(lon_lo, p.location.lon);
        lon_hi = std::max(lon_hi, p.location.lon);
        lat_lo = std::min(lat_lo, p.location.lat);
        lat_hi = std::max(lat_hi, p.location.lat);
    }
    if (points.empty()) lon_lo = lon_hi = lat_lo = lat_hi = 0.0;
    const double lon_span = lon_hi > lon_lo ? lon_hi - lon_lo : 1.0;
    const double lat_span = lat_hi > lat_lo ? lat_hi - lat_lo : 1.0;
    auto px = [&](double lon) { return kLeft + 8 + (lon - lon_lo) / lon_span * (kPlot - 16); };
    auto py = [&](double lat) { return kTop + kPlot - 8 - (lat - lat_lo) / lat_span * (kPlot - 16); };

    std::string out = header(width, height);
    out += text(kLeft + kPlot / 2, 22, title, "middle", " font-size=\"15\"");
    out += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" +
           fmt("%.2f", kPlot) + "\" height=\"" + fmt("%.2f", kPlot) +
           "\" fill=\"none\" stroke=\"#444\"/>\n";
    // Negatives first so positives stay on top.
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& p : points) {
            if (p.prediction.label != pass) continue;
            const double x = px(p.location.lon), y = py(p.location.lat);
            const std::string fill = colour(p.prediction.risk);
            if (p.prediction.label == 1) {
                out += "<polygon points=\"" + fmt("%.2f", x) + "," + fmt("%.2f", y - 5) + " " +
                       fmt("%.2f", x + 5) + "," + fmt("%.2f", y) + " " + fmt("%.2f", x) + "," +
                       fmt("%.2f", y + 5) + " " + fmt("%.2f", x - 5) + "," + fmt("%.2f", y) +
                       "\" fill=\"" + fill + "\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
            } else {
                out += "<circle cx=\"" + fmt("%.2f", x) + "\" cy=\"" + fmt("%.2f", y) +
                       "\" r=\"3\" fill=\"" + fill + "\"/>\n";
            }
        }
    }
    out += text(kLeft + kPlot / 2, kTop + kPlot + 20, fmt("longitude %.4f", lon_lo) + " to " + fmt("%.4f", lon_hi));
    out += text(kLeft + kPlot / 2, kTop + kPlot + 40, "diamonds: labelled positive; colour: risk");
    out += text(18, kTop + kPlot / 2, fmt("latitude %.4f", lat_lo) + " to " + fmt("%.4f", lat_hi), "middle",
                (" transform=\"rotate(-90 18 " + fmt("%.2f", kTop + kPlot / 2) + ")\"").c_str());
    out += colour_bar(kLeft + kPlot + 20, kTop, kPlot, 0.0, 1.0);
    out += "</svg>\n";
    return out;
}

std::string riskmap_geojson(const std::vector<MapPoint>& points) {
    io::Json features = io::Json::array();
    for (const auto& p : points) {
        io::Json f;
        f["type"] = "Feature";
        f["geometry"] = io::Json{{"type", "Point"},
                                 {"coordinates", io::Json::array({p.location.lon, p.location.lat})}};
        f["properties"] = io::Json{{"id", p.prediction.sample_id},
                                   {"risk", p.prediction.risk},
                                   {"alpha", p.prediction.alpha},
                                   {"beta", p.prediction.beta},
                                   {"std_dev", p.prediction.std_dev},
                                   {"label", p.prediction.label}};
        features.push_back(std::move(f));
    }
    io::Json fc;
    fc["type"] = "FeatureCollection";
    fc["features"] = std::move(features);
    return io::dump(fc);
}

} // namespace betarisk::graphics

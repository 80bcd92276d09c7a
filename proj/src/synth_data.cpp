#include "betarisk/synth_data.hpp"

#include "betarisk/errors.hpp"
#include "betarisk/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

namespace betarisk::synth {

namespace {

// Stream identifiers for derive_seed.
constexpr std::uint64_t kPlanStream = 0x706c616e;
constexpr std::uint64_t kSceneStream = 0x7363656e;
constexpr std::uint64_t kBackgroundStream = 1;
constexpr std::uint64_t kRoadStream = 2;
constexpr std::uint64_t kMotifStream = 3;
constexpr std::uint64_t kNoiseStream = 4;

constexpr double kPi = std::numbers::pi;
constexpr double kRoadWidth = 0.008;
constexpr double kBumpRadius = 0.03;

// Synthetic coordinate box for scene locations.
constexpr double kLonMin = -98.75, kLonSpan = 0.5;
constexpr double kLatMin = 29.25, kLatSpan = 0.5;

struct Road {
    double px, py; // a point on the road
    double theta;
    double amplitude;
};

struct Bump {
    double amplitude;
};

struct Wave {
    double kx, ky, phase, amplitude;
};

struct SceneLayout {
    double base_level = 0.0;
    std::vector<Wave> waves;
    std::vector<Road> roads;
    std::optional<Bump> bump;
};

Road road_through(Rng& rng, double px, double py, double theta) {
    return Road{px, py, theta, rng.uniform(0.25, 0.4)};
}

// Road whose closest approach to the scene centre lies in [dmin, dmax].
Road offset_road(Rng& rng, double dmin, double dmax) {
    const double theta = rng.uniform(0.0, kPi);
    const double d = rng.uniform(dmin, dmax);
    const double side = rng.coin() ? 1.0 : -1.0;
    // Normal to the road direction.
    const double nx = -std::sin(theta), ny = std::cos(theta);
    return road_through(rng, side * d * nx, side * d * ny, theta);
}

SceneLayout layout_for(const SampleRecord& r) {
    SceneLayout layout;
    Rng bg(derive_seed(r.seed, kBackgroundStream));
    layout.base_level = bg.uniform(0.3, 0.5);
    for (int i = 0; i < 3; ++i) {
        const double wavelength = bg.uniform(0.25, 1.0);
        const double dir = bg.uniform(0.0, 2.0 * kPi);
        const double k = 2.0 * kPi / wavelength;
        layout.waves.push_back(
            Wave{k * std::cos(dir), k * std::sin(dir), bg.uniform(0.0, 2.0 * kPi), 0.04});
    }

    Rng roads(derive_seed(r.seed, kRoadStream));
    Rng motif(derive_seed(r.seed, kMotifStream));
    switch (r.kind) {
    case SceneKind::positive: {
        // Intersection at the centre plus a radial bump.
        const double t1 = motif.uniform(0.0, kPi);
        const double turn = motif.uniform(40.0, 90.0) * kPi / 180.0;
        const double t2 = t1 + (motif.coin() ? turn : -turn);
        layout.roads.push_back(road_through(motif, 0.0, 0.0, t1));
        layout.roads.push_back(road_through(motif, 0.0, 0.0, t2));
        layout.bump = Bump{motif.uniform(0.1, 0.5)};
        const int extra = roads.between(0, 1);
        for (int i = 0; i < extra; ++i) layout.roads.push_back(offset_road(roads, 0.15, 0.5));
        break;
    }
    case SceneKind::hard_negative: {
        // Intersection away from the centre plus an unrelated road.
        const double dir = roads.uniform(0.0, 2.0 * kPi);
        const double dist = roads.uniform(0.04, 0.45);
        const double cx = dist * std::cos(dir), cy = dist * std::sin(dir);
        const double t1 = roads.uniform(0.0, kPi);
        const double t2 = t1 + roads.uniform(40.0, 90.0) * kPi / 180.0;
        layout.roads.push_back(road_through(roads, cx, cy, t1));
        layout.roads.push_back(road_through(roads, cx, cy, t2));
        layout.roads.push_back(offset_road(roads, 0.1, 0.5));
        break;
    }
    case SceneKind::easy_negative:
        break;
    }
    return layout;
}

double field_at(const SceneLayout& layout, double wx, double wy, double pixel) {
    double v = layout.base_level;
    for (const auto& w : layout.waves) v += w.amplitude * std::sin(w.kx * wx + w.ky * wy + w.phase);
    // Features narrower than a pixel are blurred to the pixel footprint while
    // keeping their integrated intensity.
    const double blur2 = 0.25 * pixel * pixel;
    const double road_sigma2 = kRoadWidth * kRoadWidth + blur2;
    const double road_gain = kRoadWidth / std::sqrt(road_sigma2);
    for (const auto& r : layout.roads) {
        const double d = -(wx - r.px) * std::sin(r.theta) + (wy - r.py) * std::cos(r.theta);
        v += r.amplitude * road_gain * std::exp(-0.5 * d * d / road_sigma2);
    }
    if (layout.bump) {
        const double sigma2 = kBumpRadius * kBumpRadius + blur2;
        const double gain = kBumpRadius * kBumpRadius / sigma2;
        const double r2 = wx * wx + wy * wy;
        v += layout.bump->amplitude * gain * std::exp(-0.5 * r2 / sigma2);
    }
    return v;
}

void check_fraction(double v, const char* field) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(field, "must lie in [0, 1]");
}

} // namespace

void DatasetSpec::validate() const {
    if (n_samples < 1) throw ConfigError("n_samples", "must be at least 1");
    check_fraction(positive_fraction, "positive_fraction");
    check_fraction(hard_negative_fraction, "hard_negative_fraction");
    if (!(std::isfinite(noise_level) && noise_level >= 0.0)) {
        throw ConfigError("noise_level", "must be non-negative");
    }
    if (grid_size < kPoolCells) throw ConfigError("grid_size", "must be at least 4");
    if (num_scales < 1) throw ConfigError("num_scales", "must be at least 1");
}

int DatasetSpec::positive_count() const {
    return static_cast<int>(std::lround(n_samples * positive_fraction));
}

int DatasetSpec::hard_negative_count() const {
    return static_cast<int>(std::lround((n_samples - positive_count()) * hard_negative_fraction));
}

std::string to_string(SceneKind k) {
    switch (k) {
    case SceneKind::positive: return "positive";
    case SceneKind::hard_negative: return "hard_negative";
    case SceneKind::easy_negative: return "easy_negative";
    }
    return "unknown";
}

SceneKind scene_kind_from_string(const std::string& s) {
    if (s == "positive") return SceneKind::positive;
    if (s == "hard_negative") return SceneKind::hard_negative;
    if (s == "easy_negative") return SceneKind::easy_negative;
    throw StructuralError("unknown scene kind '" + s + "'");
}

std::vector<SampleRecord> plan(const DatasetSpec& spec) {
    spec.validate();
    const int n_pos = spec.positive_count();
    const int n_hard = spec.hard_negative_count();
    std::vector<SceneKind> kinds;
    kinds.reserve(spec.n_samples);
    for (int i = 0; i < spec.n_samples; ++i) {
        kinds.push_back(i < n_pos            ? SceneKind::positive
                        : i < n_pos + n_hard ? SceneKind::hard_negative
                                             : SceneKind::easy_negative);
    }
    Rng rng(derive_seed(spec.seed, kPlanStream));
    rng.shuffle(kinds.begin(), kinds.end());

    std::vector<SampleRecord> records(spec.n_samples);
    for (int i = 0; i < spec.n_samples; ++i) {
        auto& r = records[i];
        r.id = i;
        r.kind = kinds[i];
        r.label = kinds[i] == SceneKind::positive ? 1 : 0;
        r.seed = derive_seed(spec.seed, kSceneStream, static_cast<std::uint64_t>(i));
        Rng loc(r.seed);
        r.location.lon = kLonMin + kLonSpan * loc.uniform();
        r.location.lat = kLatMin + kLatSpan * loc.uniform();
    }
    return records;
}

Scene render(const SampleRecord& record, const DatasetSpec& spec) {
    const SceneLayout layout = layout_for(record);
    Scene scene;
    scene.record = record;
    const int n = spec.grid_size;
    for (int s = 0; s < spec.num_scales; ++s) {
        const double extent = std::ldexp(1.0, -s);
        const double pixel = extent / n;
        Rng noise(derive_seed(record.seed, kNoiseStream, static_cast<std::uint64_t>(s)));
        Grid g;
        g.size = n;
        g.values.resize(static_cast<std::size_t>(n) * n);
        for (int y = 0; y < n; ++y) {
            const double wy = ((y + 0.5) / n - 0.5) * extent;
            for (int x = 0; x < n; ++x) {
                const double wx = ((x + 0.5) / n - 0.5) * extent;
                const double v = field_at(layout, wx, wy, pixel) + spec.noise_level * noise.normal();
                g.values[static_cast<std::size_t>(y) * n + x] = static_cast<float>(v);
            }
        }
        scene.scales.push_back(std::move(g));
    }
    return scene;
}

std::vector<Scene> generate(const DatasetSpec& spec) {
    const auto records = plan(spec);
    std::vector<Scene> scenes;
    scenes.reserve(records.size());
    for (const auto& r : records) scenes.push_back(render(r, spec));
    return scenes;
}

std::vector<double> pool_window(const Grid& grid, const labelgen::CropGeometry& g,
                                 ContentTransform t) {
    g.validate();
    if (g.source_size != grid.size) {
        throw StructuralError("crop source size " + std::to_string(g.source_size) +
                              " does not match grid size " + std::to_string(grid.size));
    }
    if (g.crop_size < kPoolCells) {
        throw StructuralError("crop size " + std::to_string(g.crop_size) +
                              " is smaller than the pooling grid");
    }
    const int n = g.crop_size;
    // Materialize the transformed window.
    std::vector<double> w(static_cast<std::size_t>(n) * n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            int sx = x, sy = y;
            if (t & 4) std::swap(sx, sy);
            if (t & 1) sx = n - 1 - sx;
            if (t & 2) sy = n - 1 - sy;
            w[static_cast<std::size_t>(y) * n + x] = grid.at(g.offset_x + sx, g.offset_y + sy);
        }
    }
    auto at = [&](int x, int y) { return w[static_cast<std::size_t>(y) * n + x]; };

    std::vector<double> out;
    out.reserve(kFeaturesPerScale);
    for (int cy = 0; cy < kPoolCells; ++cy) {
        const int y0 = cy * n / kPoolCells, y1 = (cy + 1) * n / kPoolCells;
        for (int cx = 0; cx < kPoolCells; ++cx) {
            const int x0 = cx * n / kPoolCells, x1 = (cx + 1) * n / kPoolCells;
            double sum = 0.0, sum_sq = 0.0, grad = 0.0;
            double peak = -std::numeric_limits<double>::infinity();
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    const double v = at(x, y);
                    sum += v;
                    sum_sq += v * v;
                    peak = std::max(peak, v);
                    if (x + 1 < n) grad += std::fabs(at(x + 1, y) - v);
                    if (y + 1 < n) grad += std::fabs(at(x, y + 1) - v);
                }
            }
            const double count = static_cast<double>(x1 - x0) * (y1 - y0);
            const double mean = sum / count;
            const double var = std::max(0.0, sum_sq / count - mean * mean);
            out.push_back(mean);
            out.push_back(peak);
            out.push_back(std::sqrt(var));
            out.push_back(grad / count);
        }
    }
    return out;
}

net::ScaleFeatures crop_features(const Scene& scene, const labelgen::CropGeometry& g,
                                 ContentTransform t) {
    net::ScaleFeatures f;
    f.reserve(scene.scales.size());
    for (const auto& grid : scene.scales) f.push_back(pool_window(grid, g, t));
    return f;
}

net::ScaleFeatures full_features(const Scene& scene) {
    return crop_features(scene, labelgen::CropGeometry::full(scene.scales.front().size));
}

double grid_mean(const Grid& grid) {
    double sum = 0.0;
    for (float v : grid.values) sum += v;
    return sum / static_cast<double>(grid.values.size());
}

double window_energy(const Grid& grid, int x0, int y0, int size, double background_mean) {
    labelgen::CropGeometry{grid.size, size, x0, y0}.validate();
    double e = 0.0;
    for (int y = y0; y < y0 + size; ++y) {
        for (int x = x0; x < x0 + size; ++x) {
            const double d = grid.at(x, y) - background_mean;
            e += d * d;
        }
    }
    return e;
}

Split split_indices(int n, double val_fraction, double test_fraction) {
    if (!(val_fraction >= 0.0 && test_fraction >= 0.0 && val_fraction + test_fraction < 1.0)) {
        throw ConfigError("val_fraction", "val and test fractions must be non-negative and sum below 1");
    }
    const int n_test = static_cast<int>(std::lround(n * test_fraction));
    const int n_val = static_cast<int>(std::lround(n * val_fraction));
    const int n_train = n - n_val - n_test;
    Split s;
    for (int i = 0; i < n; ++i) {
        if (i < n_train) {
            s.train.push_back(i);
        } else if (i < n_train + n_val) {
            s.val.push_back(i);
        } else {
            s.test.push_back(i);
        }
    }
    return s;
}

} // namespace betarisk::synth

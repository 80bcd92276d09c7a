#pragma once

#include "betarisk/label_gen.hpp"
#include "betarisk/net.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace betarisk::synth {

struct DatasetSpec {
    int n_samples = 2000;
    double positive_fraction = 0.35;
    double hard_negative_fraction = 0.7; // of the negatives
    double noise_level = 0.25;
    std::uint64_t seed = 0;
    int grid_size = 64;
    int num_scales = 3;

    void validate() const;
    int positive_count() const;
    int hard_negative_count() const;

    friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

enum class SceneKind { positive, hard_negative, easy_negative };

std::string to_string(SceneKind k);
SceneKind scene_kind_from_string(const std::string& s);

struct Location {
    double lon = 0.0;
    double lat = 0.0;
};

// Everything needed to re-render one scene.
struct SampleRecord {
    int id = 0;
    int label = 0;
    SceneKind kind = SceneKind::easy_negative;
    Location location;
    std::uint64_t seed = 0;
};

struct Grid {
    int size = 0;
    std::vector<float> values; // row-major

    float at(int x, int y) const { return values[static_cast<std::size_t>(y) * size + x]; }
};

// Scale 0 covers the widest ground extent; each further scale halves it,
// giving a finer simulated ground resolution on the same pixel grid.
struct Scene {
    SampleRecord record;
    std::vector<Grid> scales;

    int label() const { return record.label; }
};

// Labels, kinds, locations and per-sample seeds, without rendering.
std::vector<SampleRecord> plan(const DatasetSpec& spec);

Scene render(const SampleRecord& record, const DatasetSpec& spec);

std::vector<Scene> generate(const DatasetSpec& spec);

// Dihedral transform applied to crop content: bit 0 mirrors x, bit 1 mirrors
// y, bit 2 transposes. Geometry (and therefore the target) is unaffected.
using ContentTransform = int;
constexpr ContentTransform kIdentity = 0;

constexpr int kPoolCells = 4;
constexpr int kStatsPerCell = 4;
constexpr int kFeaturesPerScale = kPoolCells * kPoolCells * kStatsPerCell;

// Pools a square window into a 4x4 cell grid and emits (mean, max, standard
// deviation, mean absolute gradient) per cell, cell-major. Gradients are
// forward differences inside the window, zero on its far edge.
std::vector<double> pool_window(const Grid& grid, const labelgen::CropGeometry& g,
                                ContentTransform t = kIdentity);

// The same relative window is applied to every scale.
net::ScaleFeatures crop_features(const Scene& scene, const labelgen::CropGeometry& g,
                                 ContentTransform t = kIdentity);

net::ScaleFeatures full_features(const Scene& scene);

// Sum of squared deviations from `background_mean` inside a square window.
double window_energy(const Grid& grid, int x0, int y0, int size, double background_mean);
double grid_mean(const Grid& grid);

// Deterministic train/val/test partition by index: the last `test_fraction`
// of samples form the test split, the preceding `val_fraction` the
// validation split.
struct Split {
    std::vector<int> train;
    std::vector<int> val;
    std::vector<int> test;
};
Split split_indices(int n, double val_fraction, double test_fraction);

} // namespace betarisk::synth

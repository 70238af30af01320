#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ivq/rational.hpp"
#include "ivq/render.hpp"
#include "ivq/scene.hpp"

namespace ivq {

// ---------------------------------------------------------------------------
// spatial: multi-view scenes
// ---------------------------------------------------------------------------

struct SpatialSpec {
    SceneSpec scene;
    int n_images = 4; // views plus close-up context shots
};

struct SpatialTaskFacts {
    Scene scene;
    std::vector<View> views;               // one main image per view, in order
    RelationFact queried;                  // drawn from spatial_relations(scene)
    std::vector<RelationFact> distractors; // exactly 3, each provably false
    std::vector<std::string> closeup_ids;  // one close-up image per id
    int n_images() const { return static_cast<int>(views.size() + closeup_ids.size()); }
};

// Throws NoRelationAvailable when the scene yields no facts.
SpatialTaskFacts gen_spatial(const SpatialSpec& spec, std::uint64_t seed);

// Same, but over a caller-supplied scene.
SpatialTaskFacts gen_spatial_from_scene(Scene scene, int n_images, std::uint64_t seed);

// ---------------------------------------------------------------------------
// sequential: synthesized motion frames
// ---------------------------------------------------------------------------

enum class MotionLaw { linear, piecewise };

struct SequenceSpec {
    int frames = 6; // T; the instance's image count
    MotionLaw motion = MotionLaw::linear;
    int speed_min = 1;
    int speed_max = 5;
};

struct SequenceTaskFacts {
    std::vector<Vec2> frames;  // chronological marker positions (integer grid)
    std::vector<int> shuffle;  // displayed image k shows frames[shuffle[k]]
    std::vector<Vec2> offsets; // frames[t+1] - frames[t]
    MotionLaw motion = MotionLaw::linear;
    Color marker = Color::red;
    double marker_radius = 0.45;

    // chronological order expressed as displayed image indices (0-based)
    std::vector<int> inverse_shuffle() const;
};

SequenceTaskFacts gen_sequence(const SequenceSpec& spec, std::uint64_t seed);

// ---------------------------------------------------------------------------
// analytical: transitive scale chains
// ---------------------------------------------------------------------------

struct ChainSpec {
    int length_min = 2;
    int length_max = 4;
    int n_images = 4;      // links plus close-up context shots
    int raster_size = 512; // heights are quantized to this raster's pixels
};

struct ChainLink {
    int image_index; // 1-based
    std::string smaller;
    std::string larger;
    Rational ratio; // size(larger) / size(smaller), > 1
};

struct ChainObject {
    std::string label;
    OutlineKind silhouette;
    Color color;
    double half_width_per_height = 0.2; // horizontal half extent / height
};

struct ScaleChainFacts {
    std::vector<ChainLink> links;
    std::vector<ChainObject> objects; // links.size() + 1, in chain order
    std::pair<std::string, std::string> query; // (source, target) labels
    Rational multiplier;                      // product of link ratios
    std::vector<int> closeup_objects;         // object indices for filler images
    int raster_size = 512;
    // pixel-quantized world heights and per-image resolved colors
    std::vector<std::pair<double, double>> link_heights;
    std::vector<std::pair<Color, Color>> link_colors;

    int n_images() const {
        return static_cast<int>(links.size() + closeup_objects.size());
    }
};

ScaleChainFacts gen_scale_chain(const ChainSpec& spec, std::uint64_t seed);

// Chain link images use this fixed square window.
inline constexpr double kChainWindowSpan = 10.0;

// ---------------------------------------------------------------------------
// rendering: one raster per image, in instance image order
// ---------------------------------------------------------------------------

std::vector<RasterImage> render_spatial_images(const SpatialTaskFacts& facts, int raster_size);
std::vector<RasterImage> render_sequence_images(const SequenceTaskFacts& facts, int raster_size);
std::vector<RasterImage> render_chain_images(const ScaleChainFacts& facts);

} // namespace ivq

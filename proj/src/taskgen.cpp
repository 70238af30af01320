#include "ivq/taskgen.hpp"

#include <algorithm>
#include <cmath>

#include "ivq/errors.hpp"
#include "ivq/rng.hpp"

namespace ivq {

namespace {

Relation mirror(Relation r) {
    switch (r) {
        case Relation::left_of: return Relation::right_of;
        case Relation::right_of: return Relation::left_of;
        case Relation::above: return Relation::below;
        case Relation::below: return Relation::above;
        case Relation::in_front_of: return Relation::behind;
        case Relation::behind: return Relation::in_front_of;
        case Relation::occludes_in_view: return Relation::occludes_in_view;
    }
    return r;
}

int axis_of(Relation r) {
    switch (r) {
        case Relation::left_of:
        case Relation::right_of: return 0;
        case Relation::in_front_of:
        case Relation::behind: return 1;
        case Relation::above:
        case Relation::below: return 2;
        default: return -1;
    }
}

} // namespace

SpatialTaskFacts gen_spatial(const SpatialSpec& spec, std::uint64_t seed) {
    return gen_spatial_from_scene(generate_scene(spec.scene, derive_seed(seed, 1)),
                                  spec.n_images, seed);
}

SpatialTaskFacts gen_spatial_from_scene(Scene scene, int n_images, std::uint64_t seed) {
    SpatialTaskFacts facts;
    facts.scene = std::move(scene);
    auto relations = spatial_relations(facts.scene);
    if (relations.empty()) {
        throw NoRelationAvailable("scene yields no spatial relation facts");
    }

    Rng rng(derive_seed(seed, 2));
    facts.queried = relations[rng.index(relations.size())];

    // views: 2 or 3, always including the view an occlusion query needs
    std::vector<View> all = {View::front, View::side, View::top};
    rng.shuffle(all);
    int n_views = static_cast<int>(rng.uniform_int(2, 3));
    n_views = std::min(n_views, std::max(2, n_images - 1));
    facts.views.assign(all.begin(), all.begin() + n_views);
    if (facts.queried.view.has_value()) {
        View needed = *facts.queried.view;
        if (std::find(facts.views.begin(), facts.views.end(), needed) == facts.views.end()) {
            facts.views.back() = needed;
        }
    }
    std::sort(facts.views.begin(), facts.views.end(),
              [](View a, View b) { return static_cast<int>(a) < static_cast<int>(b); });

    // distractors: the mirrored relation plus two false facts on other axes
    RelationFact inverse = facts.queried;
    if (facts.queried.relation == Relation::occludes_in_view) {
        std::swap(inverse.subject, inverse.object);
    } else {
        inverse.relation = mirror(facts.queried.relation);
    }
    facts.distractors.push_back(inverse);

    std::vector<RelationFact> candidates;
    for (Relation r : {Relation::left_of, Relation::right_of, Relation::in_front_of,
                       Relation::behind, Relation::above, Relation::below}) {
        if (axis_of(r) == axis_of(facts.queried.relation)) continue;
        RelationFact f{facts.queried.subject, facts.queried.object, r, std::nullopt};
        if (!fact_holds(f, relations)) candidates.push_back(f);
    }
    rng.shuffle(candidates);
    for (const auto& f : candidates) {
        if (facts.distractors.size() == 3) break;
        facts.distractors.push_back(f);
    }
    if (facts.distractors.size() != 3) {
        throw DistractorCollision("could not assemble 3 false spatial distractors");
    }
    for (const auto& d : facts.distractors) {
        if (fact_holds(d, relations)) {
            throw ValidationFailure("spatial distractor is actually true");
        }
    }

    int n_closeups = std::max(0, n_images - n_views);
    std::vector<std::string> ids;
    for (const auto& p : facts.scene.primitives) ids.push_back(p.id);
    rng.shuffle(ids);
    for (int k = 0; k < n_closeups; ++k)
        facts.closeup_ids.push_back(ids[static_cast<std::size_t>(k) % ids.size()]);
    return facts;
}

std::vector<int> SequenceTaskFacts::inverse_shuffle() const {
    std::vector<int> inv(shuffle.size());
    for (std::size_t k = 0; k < shuffle.size(); ++k) inv[static_cast<std::size_t>(shuffle[k])] = static_cast<int>(k);
    return inv;
}

SequenceTaskFacts gen_sequence(const SequenceSpec& spec, std::uint64_t seed) {
    if (spec.frames < 3) throw ConfigInvalid("sequence needs at least 3 frames");
    Rng rng(seed);
    SequenceTaskFacts facts;
    facts.motion = spec.motion;
    facts.marker = static_cast<Color>(rng.index(kPaletteSize));

    auto draw_velocity = [&](void) -> Vec2 {
        for (;;) {
            double vx = static_cast<double>(rng.uniform_int(-spec.speed_max, spec.speed_max));
            double vy = static_cast<double>(rng.uniform_int(-spec.speed_max, spec.speed_max));
            double mag = std::max(std::abs(vx), std::abs(vy));
            if (mag >= std::max(1, spec.speed_min) && (vx != 0 || vy != 0)) return {vx, vy};
        }
    };

    Vec2 pos{static_cast<double>(rng.uniform_int(0, 20)),
             static_cast<double>(rng.uniform_int(0, 20))};
    Vec2 v1 = draw_velocity();
    Vec2 v2 = v1;
    int breakpoint = spec.frames; // linear: never switches
    if (spec.motion == MotionLaw::piecewise) {
        breakpoint = spec.frames / 2;
        do {
            v2 = draw_velocity();
        } while (v2 == v1);
    }

    facts.frames.push_back(pos);
    for (int t = 1; t < spec.frames; ++t) {
        Vec2 v = t <= breakpoint ? v1 : v2;
        pos = pos + v;
        facts.frames.push_back(pos);
    }
    for (int t = 0; t + 1 < spec.frames; ++t) {
        facts.offsets.push_back(facts.frames[static_cast<std::size_t>(t) + 1] -
                                facts.frames[static_cast<std::size_t>(t)]);
    }

    facts.shuffle.resize(static_cast<std::size_t>(spec.frames));
    for (int t = 0; t < spec.frames; ++t) facts.shuffle[static_cast<std::size_t>(t)] = t;
    do {
        rng.shuffle(facts.shuffle);
    } while (std::is_sorted(facts.shuffle.begin(), facts.shuffle.end()));
    return facts;
}

namespace {

struct CatalogEntry {
    const char* label;
    OutlineKind silhouette;
    Color color;
    double half_width_per_height; // horizontal half extent as a fraction of height
};

// Rank-ordered by nominal size so chains read smaller -> larger.
constexpr CatalogEntry kObjectCatalog[] = {
    {"coin", OutlineKind::circle, Color::yellow, 0.5},
    {"tennis ball", OutlineKind::circle, Color::green, 0.5},
    {"cola can", OutlineKind::rect, Color::red, 0.21},
    {"bottle", OutlineKind::rect, Color::cyan, 0.17},
    {"book", OutlineKind::rect, Color::purple, 0.21},
    {"chair", OutlineKind::rect, Color::orange, 0.21},
    {"door", OutlineKind::rect, Color::gray, 0.17},
    {"tent", OutlineKind::triangle, Color::green, 0.225},
    {"car", OutlineKind::rect, Color::blue, 0.21},
    {"truck", OutlineKind::rect, Color::purple, 0.21},
    {"pine tree", OutlineKind::triangle, Color::green, 0.225},
    {"tower", OutlineKind::rect, Color::gray, 0.15},
};
constexpr int kCatalogSize = static_cast<int>(sizeof(kObjectCatalog) / sizeof(kObjectCatalog[0]));

// denominators <= 8 keep option strings clean
const Rational kRatioChoices[] = {
    {5, 4}, {4, 3}, {3, 2}, {5, 3}, {7, 4}, {2, 1},
    {9, 4}, {5, 2}, {8, 3}, {3, 1}, {7, 2}, {4, 1},
};

constexpr double kChainSmallX = 0.28 * kChainWindowSpan;
constexpr double kChainLargeX = 0.72 * kChainWindowSpan;

} // namespace

ScaleChainFacts gen_scale_chain(const ChainSpec& spec, std::uint64_t seed) {
    if (spec.length_min < 2 || spec.length_max < spec.length_min) {
        throw ConfigInvalid("chain length range must start at >= 2");
    }
    Rng rng(seed);
    ScaleChainFacts facts;
    facts.raster_size = spec.raster_size;
    int links = static_cast<int>(rng.uniform_int(spec.length_min, spec.length_max));
    links = std::min(links, spec.n_images);

    // increasing subsequence of the catalog
    std::vector<int> pool(kCatalogSize);
    for (int i = 0; i < kCatalogSize; ++i) pool[static_cast<std::size_t>(i)] = i;
    rng.shuffle(pool);
    std::vector<int> picks(pool.begin(), pool.begin() + links + 1);
    std::sort(picks.begin(), picks.end());
    for (int idx : picks) {
        const auto& e = kObjectCatalog[idx];
        facts.objects.push_back({e.label, e.silhouette, e.color, e.half_width_per_height});
    }

    const double px = kChainWindowSpan / spec.raster_size;
    const int baseline_px = static_cast<int>(std::lround(0.125 * spec.raster_size));
    const double baseline = baseline_px * px;
    const double v_budget = kChainWindowSpan - baseline - 0.4;
    const double gap_budget = (kChainLargeX - kChainSmallX) - 0.4;
    const double edge_budget = kChainSmallX - 0.1;

    facts.multiplier = Rational(1);
    for (int i = 0; i < links; ++i) {
        Rational ratio = kRatioChoices[rng.index(sizeof(kRatioChoices) / sizeof(Rational))];
        const auto& small_entry = kObjectCatalog[picks[static_cast<std::size_t>(i)]];
        const auto& large_entry = kObjectCatalog[picks[static_cast<std::size_t>(i) + 1]];

        // cap the larger height so both silhouettes stay inside the window
        // and clear of each other, then quantize to whole pixels so declared
        // and rendered ratios agree exactly
        double r = ratio.value();
        double cap = v_budget;
        cap = std::min(cap, gap_budget / (large_entry.half_width_per_height +
                                          small_entry.half_width_per_height / r));
        cap = std::min(cap, edge_budget / (small_entry.half_width_per_height / r));
        cap = std::min(cap, edge_budget / large_entry.half_width_per_height);
        long long max_large_px = static_cast<long long>(std::floor(cap / px));
        long long hs = max_large_px * ratio.den / ratio.num;
        hs -= hs % ratio.den;
        if (hs < ratio.den) hs = ratio.den;
        long long hl = hs * ratio.num / ratio.den;

        facts.links.push_back({i + 1, small_entry.label, large_entry.label, ratio});
        facts.link_heights.emplace_back(hs * px, hl * px);
        Color cs = small_entry.color;
        Color cl = large_entry.color;
        if (cl == cs) cl = static_cast<Color>((static_cast<int>(cl) + 1) % kPaletteSize);
        facts.link_colors.emplace_back(cs, cl);
        facts.multiplier = facts.multiplier * ratio;
    }
    facts.query = {facts.objects.front().label, facts.objects.back().label};

    int n_closeups = std::max(0, spec.n_images - links);
    std::vector<int> object_indices(facts.objects.size());
    for (std::size_t i = 0; i < facts.objects.size(); ++i)
        object_indices[i] = static_cast<int>(i);
    rng.shuffle(object_indices);
    for (int k = 0; k < n_closeups; ++k)
        facts.closeup_objects.push_back(object_indices[static_cast<std::size_t>(k) %
                                                       object_indices.size()]);
    return facts;
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

namespace {

Box2 squared(Box2 w) {
    double span = std::max(w.width(), w.height());
    double cx = (w.min.x + w.max.x) / 2;
    double cy = (w.min.y + w.max.y) / 2;
    return {{cx - span / 2, cy - span / 2}, {cx + span / 2, cy + span / 2}};
}

Outline2D standing_outline(OutlineKind kind, double center_x, double baseline, double height,
                           double half_width) {
    Outline2D o;
    o.kind = kind;
    switch (kind) {
        case OutlineKind::rect:
            o.cx = static_cast<float>(center_x);
            o.cy = static_cast<float>(baseline + height / 2);
            o.hw = static_cast<float>(half_width);
            o.hh = static_cast<float>(height / 2);
            break;
        case OutlineKind::circle:
            o.cx = static_cast<float>(center_x);
            o.cy = static_cast<float>(baseline + height / 2);
            o.hw = static_cast<float>(height / 2);
            break;
        case OutlineKind::triangle:
            o.verts[0] = {static_cast<float>(center_x - half_width),
                          static_cast<float>(baseline)};
            o.verts[1] = {static_cast<float>(center_x + half_width),
                          static_cast<float>(baseline)};
            o.verts[2] = {static_cast<float>(center_x), static_cast<float>(baseline + height)};
            break;
    }
    return o;
}

RasterImage render_closeup(const Primitive& prim, View view, int raster_size) {
    Box3 box = prim.bounding_box();
    Vec2 lo, hi;
    switch (view) {
        case View::front: lo = {box.min.x, box.min.z}; hi = {box.max.x, box.max.z}; break;
        case View::side: lo = {box.min.y, box.min.z}; hi = {box.max.y, box.max.z}; break;
        case View::top: lo = {box.min.x, box.min.y}; hi = {box.max.x, box.max.y}; break;
    }
    double mx = (hi.x - lo.x) * 0.25;
    double my = (hi.y - lo.y) * 0.25;
    Box2 window = squared({{lo.x - mx, lo.y - my}, {hi.x + mx, hi.y + my}});

    ViewProjection proj;
    proj.view = view;
    Shape2D s;
    s.primitive_id = prim.id;
    s.scene_index = 0;
    s.outline = primitive_outline(prim, view);
    s.depth = primitive_depth(prim, view);
    s.color = color_rgb(prim.color);
    proj.shapes2d.push_back(std::move(s));
    return rasterize(proj, raster_size, raster_size, window);
}

} // namespace

std::vector<RasterImage> render_spatial_images(const SpatialTaskFacts& facts, int raster_size) {
    std::vector<RasterImage> images;
    for (View view : facts.views) {
        auto proj = project(facts.scene, view);
        images.push_back(rasterize(proj, raster_size, raster_size,
                                   squared(view_window(facts.scene.bounds, view))));
    }
    for (const auto& id : facts.closeup_ids) {
        const Primitive* prim = facts.scene.find(id);
        images.push_back(render_closeup(*prim, View::front, raster_size));
    }
    return images;
}

std::vector<RasterImage> render_sequence_images(const SequenceTaskFacts& facts, int raster_size) {
    Box2 window{{facts.frames[0].x, facts.frames[0].y}, {facts.frames[0].x, facts.frames[0].y}};
    for (const auto& p : facts.frames) {
        window.min.x = std::min(window.min.x, p.x);
        window.min.y = std::min(window.min.y, p.y);
        window.max.x = std::max(window.max.x, p.x);
        window.max.y = std::max(window.max.y, p.y);
    }
    double pad = facts.marker_radius + 1.0;
    window = squared({{window.min.x - pad, window.min.y - pad},
                      {window.max.x + pad, window.max.y + pad}});

    std::vector<RasterImage> images;
    for (int k = 0; k < static_cast<int>(facts.frames.size()); ++k) {
        const Vec2& p = facts.frames[static_cast<std::size_t>(facts.shuffle[static_cast<std::size_t>(k)])];
        ViewProjection proj;
        Shape2D s;
        s.primitive_id = "marker";
        s.scene_index = 0;
        s.outline.kind = OutlineKind::circle;
        s.outline.cx = static_cast<float>(p.x);
        s.outline.cy = static_cast<float>(p.y);
        s.outline.hw = static_cast<float>(facts.marker_radius);
        s.depth = 0;
        s.color = color_rgb(facts.marker);
        proj.shapes2d.push_back(std::move(s));
        images.push_back(rasterize(proj, raster_size, raster_size, window));
    }
    return images;
}

std::vector<RasterImage> render_chain_images(const ScaleChainFacts& facts) {
    const Box2 window{{0, 0}, {kChainWindowSpan, kChainWindowSpan}};
    const double px = kChainWindowSpan / facts.raster_size;
    const int baseline_px = static_cast<int>(std::lround(0.125 * facts.raster_size));
    const double baseline = baseline_px * px;

    std::vector<RasterImage> images;
    for (std::size_t i = 0; i < facts.links.size(); ++i) {
        const ChainObject& small_obj = facts.objects[i];
        const ChainObject& large_obj = facts.objects[i + 1];
        auto [hs, hl] = facts.link_heights[i];
        auto [cs, cl] = facts.link_colors[i];

        auto entry_halfw = [](const ChainObject& o, double h) {
            return o.half_width_per_height * h;
        };

        ViewProjection proj;
        Shape2D a;
        a.primitive_id = small_obj.label;
        a.scene_index = 0;
        a.outline = standing_outline(small_obj.silhouette, kChainSmallX, baseline, hs,
                                     entry_halfw(small_obj, hs));
        a.depth = 1;
        a.color = color_rgb(cs);
        Shape2D b;
        b.primitive_id = large_obj.label;
        b.scene_index = 1;
        b.outline = standing_outline(large_obj.silhouette, kChainLargeX, baseline, hl,
                                     entry_halfw(large_obj, hl));
        b.depth = 2;
        b.color = color_rgb(cl);
        proj.shapes2d = {a, b};
        images.push_back(rasterize(proj, facts.raster_size, facts.raster_size, window));
    }

    for (int obj_idx : facts.closeup_objects) {
        const ChainObject& obj = facts.objects[static_cast<std::size_t>(obj_idx)];
        double h = 0.7 * kChainWindowSpan;
        double halfw = obj.half_width_per_height * h;
        ViewProjection proj;
        Shape2D s;
        s.primitive_id = obj.label;
        s.scene_index = 0;
        s.outline = standing_outline(obj.silhouette, kChainWindowSpan / 2, baseline, h, halfw);
        s.depth = 1;
        s.color = color_rgb(obj.color);
        proj.shapes2d.push_back(std::move(s));
        images.push_back(rasterize(proj, facts.raster_size, facts.raster_size, window));
    }
    return images;
}

} // namespace ivq

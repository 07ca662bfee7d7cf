#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skyglyphs/corpus.hpp"
#include "skyglyphs/geometry.hpp"

namespace skyglyphs {

/// Spiked-glyph geometry in glyph units, y pointing up.
///
/// Four data axes (slides up, words right, buzzwords down, keywords left) are
/// interleaved with four fixed-length anchor spokes on the diagonals. Anchors
/// keep the polygon from collapsing when every value is zero.
struct GlyphConfig {
    double outer_radius = 1.0;
    double anchor_radius = 0.25;

    void validate() const {
        if (!(outer_radius > 0.0) || !(anchor_radius > 0.0) || !(anchor_radius < outer_radius)) {
            throw std::invalid_argument("GlyphConfig: require 0 < anchor_radius < outer_radius");
        }
    }
};

inline constexpr std::size_t kGlyphVertexCount = 8;

namespace detail {

inline constexpr double kHalfSqrt2 = 0.70710678118654752440;

// Unit directions at 90, 135, 180, 225, 270, 315, 0, 45 degrees: counter-clockwise
// starting from the top spike. Even slots are data spikes, odd slots anchors.
inline constexpr std::array<Vec2, kGlyphVertexCount> kVertexDirections{{
    {0.0, 1.0},
    {-kHalfSqrt2, kHalfSqrt2},
    {-1.0, 0.0},
    {-kHalfSqrt2, -kHalfSqrt2},
    {0.0, -1.0},
    {kHalfSqrt2, -kHalfSqrt2},
    {1.0, 0.0},
    {kHalfSqrt2, kHalfSqrt2},
}};

}  // namespace detail

/// Vertex slot holding the tip of the spike for `axis`.
constexpr std::size_t spike_vertex_index(Axis axis) {
    switch (axis) {
        case Axis::slides: return 0;
        case Axis::keywords: return 2;
        case Axis::buzzwords: return 4;
        case Axis::words: return 6;
    }
    return 0;
}

/// Compass angle of the spike for `axis`, in degrees.
constexpr double axis_angle_degrees(Axis axis) {
    switch (axis) {
        case Axis::slides: return 90.0;
        case Axis::words: return 0.0;
        case Axis::buzzwords: return 270.0;
        case Axis::keywords: return 180.0;
    }
    return 0.0;
}

inline constexpr std::array<double, 4> kAnchorAngleDegrees{45.0, 135.0, 225.0, 315.0};

/// Log-scaled spike length: the anchor radius at zero, the outer radius at the
/// corpus maximum.
inline double axis_radius(Count value, Count axis_max, const GlyphConfig& cfg = {}) {
    if (value > axis_max) {
        throw std::domain_error("axis_radius: value " + std::to_string(value) +
                                " exceeds axis maximum " + std::to_string(axis_max));
    }
    if (axis_max == 0) return cfg.anchor_radius;
    double t = std::log1p(static_cast<double>(value)) / std::log1p(static_cast<double>(axis_max));
    return cfg.anchor_radius + (cfg.outer_radius - cfg.anchor_radius) * t;
}

struct SpikedGlyph {
    AxisValues axis_values{};
    std::array<double, kAxisCount> axis_radii{};  // indexed by Axis
    std::array<Vec2, kGlyphVertexCount> vertices{};

    [[nodiscard]] double radius_of(Axis a) const { return axis_radii[static_cast<std::size_t>(a)]; }
    [[nodiscard]] Vec2 spike_tip(Axis a) const { return vertices[spike_vertex_index(a)]; }
};

inline SpikedGlyph build_spiked_glyph(const DeckMetrics& metrics, const CorpusStats& stats,
                                      const GlyphConfig& cfg = {}) {
    SpikedGlyph g;
    g.axis_values = metrics.axis_values();
    for (Axis a : kAxisOrder) {
        auto i = static_cast<std::size_t>(a);
        g.axis_radii[i] = axis_radius(g.axis_values[i], stats.axis_max[i], cfg);
    }
    for (std::size_t v = 0; v < kGlyphVertexCount; ++v) {
        g.vertices[v] = detail::kVertexDirections[v] * cfg.anchor_radius;
    }
    for (Axis a : kAxisOrder) {
        auto v = spike_vertex_index(a);
        g.vertices[v] = detail::kVertexDirections[v] * g.radius_of(a);
    }
    return g;
}

/// Area of the regular octagon with circumradius `r`; the all-zero glyph.
inline double regular_octagon_area(double r) { return 2.0 * std::sqrt(2.0) * r * r; }

// ---------------------------------------------------------------------------
// Depth and balloon appearance

/// 0 for the newest deck, 1 for the oldest.
inline double depth_of(const Date& shared_at, const CorpusStats& stats) {
    if (shared_at < stats.date_min || shared_at > stats.date_max) {
        throw std::domain_error("depth_of: date " + shared_at.iso() + " outside corpus range [" +
                                stats.date_min.iso() + ", " + stats.date_max.iso() + "]");
    }
    long span = stats.date_max.days_since(stats.date_min);
    if (span == 0) return 0.0;
    return static_cast<double>(stats.date_max.days_since(shared_at)) / static_cast<double>(span);
}

enum class BalloonKind { hot_air_deck, simple_slide, overview_dot };

inline std::string_view to_string(BalloonKind k) {
    switch (k) {
        case BalloonKind::hot_air_deck: return "hot_air_deck";
        case BalloonKind::simple_slide: return "simple_slide";
        case BalloonKind::overview_dot: return "overview_dot";
    }
    return "unknown";
}

inline constexpr double kDepthScaleDrop = 0.6;
inline constexpr double kDepthOpacityDrop = 0.7;

/// Categorical colours keyed by product name. Products are ranked
/// lexicographically and cycled over twelve hues; decks with no product get
/// the grey fallback slot.
class Palette {
public:
    static constexpr std::size_t kHueCount = 12;
    static constexpr std::size_t kFallback = kHueCount;

    static constexpr std::array<std::string_view, kHueCount + 1> kHex{
        "#1f78b4", "#33a02c", "#e31a1c", "#ff7f00", "#6a3d9a", "#b15928",
        "#a6cee3", "#b2df8a", "#fb9a99", "#fdbf6f", "#cab2d6", "#ffff99",
        "#9e9e9e"};

    Palette() = default;

    template <class Range>
    explicit Palette(const Range& product_names) {
        for (const auto& name : product_names) rank_.emplace(std::string(name), 0);
        std::size_t i = 0;
        for (auto& [_, r] : rank_) r = i++;
    }

    [[nodiscard]] std::size_t index_of(const std::optional<std::string>& product) const {
        if (!product) return kFallback;
        auto it = rank_.find(*product);
        if (it != rank_.end()) return it->second % kHueCount;
        // Names outside the dictionary still map deterministically (FNV-1a).
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : *product) h = (h ^ c) * 0x100000001b3ULL;
        return static_cast<std::size_t>(h % kHueCount);
    }

    static std::string_view hex(std::size_t index) { return kHex.at(index); }

private:
    std::map<std::string, std::size_t> rank_;
};

struct BalloonVisual {
    BalloonKind kind = BalloonKind::hot_air_deck;
    std::size_t colour_index = Palette::kFallback;
    double depth = 0.0;
    double scale = 1.0;
    double opacity = 1.0;

    [[nodiscard]] bool has_glyph() const { return kind != BalloonKind::overview_dot; }
};

inline BalloonVisual visual_of(const DeckMetrics& metrics, double depth, BalloonKind kind,
                               const Palette& palette = {}) {
    if (!(depth >= 0.0 && depth <= 1.0)) {
        throw std::domain_error("visual_of: depth must lie in [0, 1]");
    }
    BalloonVisual v;
    v.kind = kind;
    v.colour_index = palette.index_of(metrics.dominant_product);
    v.depth = depth;
    v.scale = 1.0 - kDepthScaleDrop * depth;
    v.opacity = 1.0 - kDepthOpacityDrop * depth;
    return v;
}

}  // namespace skyglyphs

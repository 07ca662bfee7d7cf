#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "skyglyphs/geometry.hpp"
#include "skyglyphs/random.hpp"

namespace skyglyphs {

/// Simulation parameters. Forces are velocity increments per tick; `dt` only
/// drives the float clock.
struct SimConfig {
    std::uint64_t seed = 1;
    double dt = 1.0 / 60.0;
    double damping = 0.9;
    double collision_strength = 1.0;
    int collision_iterations = 3;
    double cluster_stiffness = 0.05;
    double float_amplitude = 2.0;  // world units of idle drift
    double float_speed = 0.5;      // rad/s
    double convergence_epsilon = 0.05;
    int init_relax_steps = 300;
    double containment_factor = 5.0;

    void validate() const {
        if (!(dt > 0) || !(damping > 0 && damping < 1) || !(collision_strength > 0 && collision_strength <= 1) ||
            collision_iterations < 1 || !(cluster_stiffness > 0) || !(float_amplitude >= 0) ||
            !(float_speed > 0) || !(convergence_epsilon > 0) || init_relax_steps < 0 ||
            !(containment_factor > 0)) {
            throw std::invalid_argument("SimConfig: parameter out of range");
        }
    }
};

enum class NodeKind { deck, slide };

struct LayoutNode {
    std::string id;
    NodeKind kind = NodeKind::deck;
    Vec2 position;
    Vec2 velocity;
    double radius = 1.0;
    double opacity = 1.0;
    double float_phase = 0.0;
    bool pinned = false;
    bool held = false;    // dragged since the last tick
    bool sorted = false;  // parked on the sort grid
    bool hidden = false;
    std::vector<std::uint64_t> cluster_memberships;  // ascending anchor ids

    [[nodiscard]] bool movable() const { return !pinned && !held && !sorted && !hidden; }
};

enum class AnchorType { shared_by, product, term, title, bundle };

inline std::string_view to_string(AnchorType t) {
    switch (t) {
        case AnchorType::shared_by: return "shared_by";
        case AnchorType::product: return "product";
        case AnchorType::term: return "term";
        case AnchorType::title: return "title";
        case AnchorType::bundle: return "bundle";
    }
    return "unknown";
}

inline std::optional<AnchorType> anchor_type_from_string(std::string_view s) {
    if (s == "shared_by") return AnchorType::shared_by;
    if (s == "product") return AnchorType::product;
    if (s == "term") return AnchorType::term;
    if (s == "title") return AnchorType::title;
    if (s == "bundle") return AnchorType::bundle;
    return std::nullopt;
}

struct ClusterAnchor {
    std::uint64_t id = 0;
    AnchorType type = AnchorType::term;
    std::string key;
    Vec2 position;
    std::vector<std::string> member_ids;  // sorted

    [[nodiscard]] std::string label() const { return "c" + std::to_string(id); }
};

struct Viewport {
    Vec2 centre;
    double zoom = 1.0;
    double width = 1920.0;  // screen pixels
    double height = 1080.0;

    [[nodiscard]] Rect world_rect() const {
        Vec2 half{width / (2 * zoom), height / (2 * zoom)};
        return {centre - half, centre + half};
    }
    friend bool operator==(const Viewport&, const Viewport&) = default;
};

enum class LayoutMode { detail, overview, sorted };

inline std::string_view to_string(LayoutMode m) {
    switch (m) {
        case LayoutMode::detail: return "detail";
        case LayoutMode::overview: return "overview";
        case LayoutMode::sorted: return "sorted";
    }
    return "unknown";
}

struct FrameNode {
    std::string id;
    Vec2 position;
    double radius = 0;
    double opacity = 0;
    bool hidden = false;
};

struct FrameAnchor {
    std::string id;
    AnchorType type = AnchorType::term;
    std::string key;
    Vec2 position;
};

/// Everything a stateless renderer needs for one tick.
struct LayoutFrame {
    std::uint64_t tick = 0;
    LayoutMode mode = LayoutMode::detail;
    Viewport viewport;
    std::vector<FrameNode> nodes;
    std::vector<FrameAnchor> anchors;
};

// ---------------------------------------------------------------------------
// Collision

namespace detail {

inline std::uint64_t cell_key(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ (static_cast<std::uint64_t>(cy) & 0xffffffffULL);
}

inline Vec2 separation_direction(std::size_t i, std::size_t j) {
    double angle = static_cast<double>(splitmix64((static_cast<std::uint64_t>(i) << 32) ^ j) >> 11) *
                   0x1.0p-53 * 2.0 * std::numbers::pi;
    return {std::cos(angle), std::sin(angle)};
}

/// Uniform hash grid over the visible nodes. Candidate pairs come out in a fixed
/// order (node index, then 3x3 cell order, then insertion order).
class SpatialHash {
public:
    void build(std::span<const LayoutNode> nodes) {
        cells_.clear();
        double max_r = 0;
        for (const auto& n : nodes) {
            if (!n.hidden) max_r = std::max(max_r, n.radius);
        }
        cell_ = max_r > 0 ? 2 * max_r : 1.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].hidden) continue;
            auto [cx, cy] = coords(nodes[i].position);
            cells_[cell_key(cx, cy)].push_back(i);
        }
    }

    template <class F>
    void for_each_pair(std::span<const LayoutNode> nodes, F&& fn) const {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].hidden) continue;
            auto [cx, cy] = coords(nodes[i].position);
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
                for (std::int64_t dy = -1; dy <= 1; ++dy) {
                    auto it = cells_.find(cell_key(cx + dx, cy + dy));
                    if (it == cells_.end()) continue;
                    for (std::size_t j : it->second) {
                        if (j > i) fn(i, j);
                    }
                }
            }
        }
    }

private:
    [[nodiscard]] std::pair<std::int64_t, std::int64_t> coords(Vec2 p) const {
        return {static_cast<std::int64_t>(std::floor(p.x / cell_)),
                static_cast<std::int64_t>(std::floor(p.y / cell_))};
    }

    double cell_ = 1.0;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

/// Gauss-Seidel projection of overlapping discs. Immovable nodes (pinned,
/// held, sorted) act as fixed obstacles. Mass is proportional to area.
inline void resolve_collisions(std::vector<LayoutNode>& nodes, double strength, int iterations) {
    SpatialHash grid;
    for (int it = 0; it < iterations; ++it) {
        grid.build(nodes);
        grid.for_each_pair(nodes, [&](std::size_t i, std::size_t j) {
            auto& a = nodes[i];
            auto& b = nodes[j];
            bool ma = a.movable();
            bool mb = b.movable();
            if (!ma && !mb) return;
            Vec2 delta = b.position - a.position;
            double min_dist = a.radius + b.radius;
            double d2 = dot(delta, delta);
            if (d2 >= min_dist * min_dist) return;
            double d = std::sqrt(d2);
            Vec2 dir = d > 1e-12 ? delta * (1.0 / d) : separation_direction(i, j);
            double push = (min_dist - d) * strength;
            double ra2 = a.radius * a.radius;
            double rb2 = b.radius * b.radius;
            double wa = ma ? (mb ? rb2 / (ra2 + rb2) : 1.0) : 0.0;
            double wb = mb ? (ma ? ra2 / (ra2 + rb2) : 1.0) : 0.0;
            a.position -= dir * (push * wa);
            b.position += dir * (push * wb);
        });
    }
}

}  // namespace detail

/// Largest pairwise overlap among visible nodes, as a fraction of the smaller radius.
inline double max_relative_overlap(std::span<const LayoutNode> nodes, bool include_pinned = true) {
    double worst = 0.0;
    detail::SpatialHash grid;
    grid.build(nodes);
    grid.for_each_pair(nodes, [&](std::size_t i, std::size_t j) {
        const auto& a = nodes[i];
        const auto& b = nodes[j];
        if (!include_pinned && (a.pinned || b.pinned)) return;
        double overlap = a.radius + b.radius - distance(a.position, b.position);
        if (overlap > 0) worst = std::max(worst, overlap / std::min(a.radius, b.radius));
    });
    return worst;
}

// ---------------------------------------------------------------------------
// Initial placement

/// Uniform seeded placement over `bounds`, then collision-only relaxation.
/// Each node draws from splitmix64 seeded with `seed ^ ordinal`; the same draw
/// stream also yields the node's float phase.
inline std::vector<Vec2> init_layout(std::vector<LayoutNode>& nodes, const Rect& bounds, std::uint64_t seed,
                                     const SimConfig& cfg = {}) {
    if (!(bounds.width() > 0) || !(bounds.height() > 0)) {
        throw std::invalid_argument("init_layout: degenerate bounds");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        SplitMix64 rng(seed ^ static_cast<std::uint64_t>(i));
        nodes[i].position = {rng.uniform(bounds.min.x, bounds.max.x), rng.uniform(bounds.min.y, bounds.max.y)};
        nodes[i].velocity = {};
        nodes[i].float_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    for (int s = 0; s < cfg.init_relax_steps; ++s) {
        detail::resolve_collisions(nodes, cfg.collision_strength, 1);
    }
    std::vector<Vec2> out;
    out.reserve(nodes.size());
    for (const auto& n : nodes) out.push_back(n.position);
    return out;
}

// ---------------------------------------------------------------------------
// Sorted grid

enum class SortOrder { asc, desc };

struct SortItem {
    std::string id;
    double key = 0;  // attribute value; integral counts and day numbers are exact
};

struct GridPlacement {
    std::string id;
    std::size_t row = 0;
    std::size_t column = 0;
    Vec2 position;
};

/// Rows fill left to right, then top to bottom, starting at the viewport's
/// top-left corner (world y grows downward). Rows may run past the bottom of
/// the viewport; columns never exceed its width. Ties order by id.
inline std::vector<GridPlacement> sort_layout(std::vector<SortItem> items, SortOrder order,
                                              const Viewport& viewport, double cell) {
    if (!(cell > 0)) throw std::invalid_argument("sort_layout: cell size must be positive");
    std::sort(items.begin(), items.end(), [order](const SortItem& a, const SortItem& b) {
        if (a.key != b.key) return order == SortOrder::asc ? a.key < b.key : a.key > b.key;
        return a.id < b.id;
    });
    Rect view = viewport.world_rect();
    auto columns = static_cast<std::size_t>(std::max(1.0, std::floor(view.width() / cell)));
    std::vector<GridPlacement> out;
    out.reserve(items.size());
    for (std::size_t k = 0; k < items.size(); ++k) {
        GridPlacement p;
        p.id = std::move(items[k].id);
        p.row = k / columns;
        p.column = k % columns;
        p.position = {view.min.x + (static_cast<double>(p.column) + 0.5) * cell,
                      view.min.y + (static_cast<double>(p.row) + 0.5) * cell};
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Minimap

struct MinimapDot {
    std::string id;
    Vec2 position;  // minimap pixels
};

struct MinimapView {
    Rect extent;  // world units covered by the minimap
    double scale = 1.0;  // minimap pixels per world unit
    std::vector<MinimapDot> dots;
    Rect view_box;  // current viewport, minimap pixels
};

/// Zoomed-out dots plus the current-view rectangle. The covered extent is the
/// union of all visible node discs and the current view.
inline MinimapView minimap_view(std::span<const LayoutNode> nodes, const Viewport& viewport,
                                double minimap_width = 240.0, double minimap_height = 135.0) {
    MinimapView m;
    Rect view = viewport.world_rect();
    m.extent = view;
    for (const auto& n : nodes) {
        if (n.hidden) continue;
        Vec2 r{n.radius, n.radius};
        m.extent = m.extent.united({n.position - r, n.position + r});
    }
    m.scale = std::min(minimap_width / m.extent.width(), minimap_height / m.extent.height());
    auto map = [&](Vec2 p) { return (p - m.extent.min) * m.scale; };
    for (const auto& n : nodes) {
        if (!n.hidden) m.dots.push_back({n.id, map(n.position)});
    }
    m.view_box = {map(view.min), map(view.max)};
    return m;
}

// ---------------------------------------------------------------------------
// Engine

class LayoutEngine {
public:
    explicit LayoutEngine(SimConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

    /// Seeds positions for `nodes` inside `bounds` and takes ownership of them.
    void initialize(std::vector<LayoutNode> nodes, const Rect& bounds) {
        init_layout(nodes, bounds, cfg_.seed, cfg_);
        nodes_ = std::move(nodes);
        next_ordinal_ = nodes_.size();
        reindex();
    }

    /// Adds a node at a given position (spawned slides). Its float phase comes
    /// from the seed and the engine-wide node ordinal.
    void add_node(LayoutNode node) {
        if (index_.contains(node.id)) throw std::invalid_argument("duplicate node id '" + node.id + "'");
        SplitMix64 rng(cfg_.seed ^ next_ordinal_++);
        rng.next();
        rng.next();
        node.float_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        node.velocity = {};
        index_.emplace(node.id, nodes_.size());
        nodes_.push_back(std::move(node));
    }

    void remove_nodes(const std::vector<std::string>& ids) {
        std::vector<std::string> sorted_ids(ids);
        std::sort(sorted_ids.begin(), sorted_ids.end());
        std::erase_if(nodes_, [&](const LayoutNode& n) {
            return std::binary_search(sorted_ids.begin(), sorted_ids.end(), n.id);
        });
        for (auto& [_, a] : anchors_) {
            std::erase_if(a.member_ids, [&](const std::string& id) {
                return std::binary_search(sorted_ids.begin(), sorted_ids.end(), id);
            });
        }
        reindex();
    }

    /// One tick: float + spring forces, damping, integration, then collision
    /// projection. Pinned, held, sorted and hidden nodes receive no forces.
    LayoutFrame step() {
        const double t = static_cast<double>(tick_) * cfg_.dt;
        const double d = cfg_.damping;
        const double float_gain = cfg_.float_amplitude * cfg_.float_speed * cfg_.dt * (1.0 - d) / d;
        const double omega_t = cfg_.float_speed * t;

        std::vector<Vec2> start(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            auto& n = nodes_[i];
            start[i] = n.position;
            if (!n.movable()) {
                n.velocity = {};
                continue;
            }
            Vec2 force{std::sin(omega_t + n.float_phase), std::cos(omega_t + n.float_phase * 1.3)};
            force *= float_gain;
            for (auto id : n.cluster_memberships) {
                auto it = anchors_.find(id);
                if (it != anchors_.end()) force += (it->second.position - n.position) * cfg_.cluster_stiffness;
            }
            n.velocity += force;
            n.velocity *= d;
            n.position += n.velocity;
        }

        detail::resolve_collisions(nodes_, cfg_.collision_strength, cfg_.collision_iterations);

        last_max_displacement_ = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            auto& n = nodes_[i];
            if (n.movable()) n.velocity = n.position - start[i];
            last_max_displacement_ = std::max(last_max_displacement_, distance(n.position, start[i]));
            n.held = false;
        }
        ++tick_;
        return frame();
    }

    /// Steps until frame-to-frame displacement drops below the convergence
    /// epsilon; returns the number of ticks taken, or nullopt on timeout.
    std::optional<std::size_t> run_until_converged(std::size_t max_ticks) {
        for (std::size_t k = 1; k <= max_ticks; ++k) {
            step();
            if (last_max_displacement_ < cfg_.convergence_epsilon) return k;
        }
        return std::nullopt;
    }

    [[nodiscard]] LayoutFrame frame() const {
        LayoutFrame f;
        f.tick = tick_;
        f.mode = mode();
        f.viewport = viewport_;
        f.nodes.reserve(nodes_.size());
        for (const auto& n : nodes_) f.nodes.push_back({n.id, n.position, n.radius, n.opacity, n.hidden});
        for (const auto& [_, a] : anchors_) f.anchors.push_back({a.label(), a.type, a.key, a.position});
        return f;
    }

    // -- clusters ------------------------------------------------------------

    /// Places an immobile anchor at the centroid of the members' current
    /// positions and attaches a spring from every member to it.
    std::uint64_t apply_cluster(AnchorType type, std::string key, std::vector<std::string> member_ids) {
        if (member_ids.empty()) throw std::invalid_argument("apply_cluster: empty member set");
        std::sort(member_ids.begin(), member_ids.end());
        member_ids.erase(std::unique(member_ids.begin(), member_ids.end()), member_ids.end());
        Vec2 sum;
        for (const auto& id : member_ids) sum += node(id).position;
        ClusterAnchor a;
        a.id = next_anchor_id_++;
        a.type = type;
        a.key = std::move(key);
        a.position = sum * (1.0 / static_cast<double>(member_ids.size()));
        a.member_ids = std::move(member_ids);
        for (const auto& id : a.member_ids) {
            auto& m = node(id).cluster_memberships;
            m.insert(std::upper_bound(m.begin(), m.end(), a.id), a.id);
        }
        auto id = a.id;
        anchors_.emplace(id, std::move(a));
        return id;
    }

    /// Same as apply_cluster but with an explicit anchor position.
    std::uint64_t apply_cluster_at(AnchorType type, std::string key, std::vector<std::string> member_ids,
                                   Vec2 position) {
        auto id = apply_cluster(type, std::move(key), std::move(member_ids));
        anchors_.at(id).position = position;
        return id;
    }

    void remove_cluster(std::uint64_t id) {
        auto it = anchors_.find(id);
        if (it == anchors_.end()) throw std::out_of_range("unknown cluster c" + std::to_string(id));
        for (const auto& member : it->second.member_ids) {
            if (auto* n = find(member)) std::erase(n->cluster_memberships, id);
        }
        anchors_.erase(it);
    }

    /// Members of a cluster: what a hover on its anchor highlights.
    [[nodiscard]] const std::vector<std::string>& hover_query(std::uint64_t id) const {
        auto it = anchors_.find(id);
        if (it == anchors_.end()) throw std::out_of_range("unknown cluster c" + std::to_string(id));
        return it->second.member_ids;
    }

    /// Containment radius of a cluster: five times the largest member radius,
    /// widened when the members' total area cannot pack inside that disc.
    [[nodiscard]] double containment_radius(std::uint64_t id) const {
        const auto& a = anchors_.at(id);
        double max_r = 0;
        double area = 0;
        for (const auto& m : a.member_ids) {
            double r = node(m).radius;
            max_r = std::max(max_r, r);
            area += r * r;
        }
        return std::max(cfg_.containment_factor * max_r, std::sqrt(2.0 * area));
    }

    // -- sort ----------------------------------------------------------------

    /// Parks the listed nodes on the sort grid; pinned and hidden nodes keep
    /// their positions. Returns the placements made.
    std::vector<GridPlacement> apply_sort(std::vector<SortItem> items, SortOrder order) {
        clear_sort();
        std::erase_if(items, [&](const SortItem& it) {
            const auto* n = find(it.id);
            return n == nullptr || n->hidden || n->pinned;
        });
        double max_r = 0;
        for (const auto& it : items) max_r = std::max(max_r, node(it.id).radius);
        double cell = sort_cell_size(max_r);
        auto placements = sort_layout(std::move(items), order, viewport_, cell);
        for (const auto& p : placements) {
            auto& n = node(p.id);
            n.position = p.position;
            n.velocity = {};
            n.sorted = true;
        }
        sorted_ = true;
        return placements;
    }

    void clear_sort() {
        for (auto& n : nodes_) n.sorted = false;
        sorted_ = false;
    }

    [[nodiscard]] static double sort_cell_size(double max_radius) { return 2.2 * std::max(max_radius, 1.0); }

    // -- overview --------------------------------------------------------------

    /// Entering fits the visible node discs plus a 10% margin into the
    /// viewport; leaving restores the prior viewport. Node positions are never
    /// touched.
    void overview_transform(bool entering) {
        if (entering) {
            if (overview_) return;
            saved_viewport_ = viewport_;
            overview_ = true;
            viewport_ = fit_viewport(viewport_);
        } else {
            if (!overview_) return;
            overview_ = false;
            viewport_ = saved_viewport_;
        }
    }

    /// Viewport of the same screen size framing every visible node disc with a
    /// 10% margin.
    [[nodiscard]] Viewport fit_viewport(const Viewport& base) const {
        std::optional<Rect> box;
        for (const auto& n : nodes_) {
            if (n.hidden) continue;
            Rect r{n.position - Vec2{n.radius, n.radius}, n.position + Vec2{n.radius, n.radius}};
            box = box ? box->united(r) : r;
        }
        Viewport v = base;
        if (!box) return v;
        v.centre = box->centre();
        v.zoom = std::min(base.width / (box->width() * 1.1), base.height / (box->height() * 1.1));
        return v;
    }

    [[nodiscard]] MinimapView minimap(double width = 240.0, double height = 135.0) const {
        return minimap_view(nodes_, viewport_, width, height);
    }

    // -- direct manipulation ---------------------------------------------------

    void drag(const std::string& id, Vec2 pos) {
        auto& n = node(id);
        n.position = pos;
        n.velocity = {};
        n.held = true;
    }
    void pin(const std::string& id) {
        auto& n = node(id);
        n.pinned = true;
        n.velocity = {};
    }
    void unpin(const std::string& id) { node(id).pinned = false; }
    void pan(Vec2 delta) { viewport_.centre += delta; }
    void set_hidden(const std::string& id, bool hidden) { node(id).hidden = hidden; }
    void set_viewport(const Viewport& v) { viewport_ = v; }

    // -- access ----------------------------------------------------------------

    [[nodiscard]] LayoutMode mode() const {
        if (overview_) return LayoutMode::overview;
        return sorted_ ? LayoutMode::sorted : LayoutMode::detail;
    }
    [[nodiscard]] bool in_overview() const { return overview_; }
    [[nodiscard]] bool is_sorted() const { return sorted_; }
    [[nodiscard]] std::uint64_t tick() const { return tick_; }
    [[nodiscard]] const Viewport& viewport() const { return viewport_; }
    [[nodiscard]] const SimConfig& config() const { return cfg_; }
    [[nodiscard]] const std::vector<LayoutNode>& nodes() const { return nodes_; }
    [[nodiscard]] const std::map<std::uint64_t, ClusterAnchor>& anchors() const { return anchors_; }
    [[nodiscard]] double last_max_displacement() const { return last_max_displacement_; }

    [[nodiscard]] const LayoutNode* find(const std::string& id) const {
        auto it = index_.find(id);
        return it == index_.end() ? nullptr : &nodes_[it->second];
    }
    LayoutNode* find(const std::string& id) {
        auto it = index_.find(id);
        return it == index_.end() ? nullptr : &nodes_[it->second];
    }
    [[nodiscard]] const LayoutNode& node(const std::string& id) const {
        const auto* n = find(id);
        if (!n) throw std::out_of_range("unknown node '" + id + "'");
        return *n;
    }
    LayoutNode& node(const std::string& id) {
        auto* n = find(id);
        if (!n) throw std::out_of_range("unknown node '" + id + "'");
        return *n;
    }

private:
    void reindex() {
        index_.clear();
        for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].id, i);
    }

    SimConfig cfg_;
    std::vector<LayoutNode> nodes_;
    std::unordered_map<std::string, std::size_t> index_;
    std::map<std::uint64_t, ClusterAnchor> anchors_;
    std::uint64_t next_anchor_id_ = 1;
    std::uint64_t next_ordinal_ = 0;
    std::uint64_t tick_ = 0;
    Viewport viewport_;
    Viewport saved_viewport_;
    bool overview_ = false;
    bool sorted_ = false;
    double last_max_displacement_ = std::numeric_limits<double>::infinity();
};

}  // namespace skyglyphs

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skyglyphs/catalog.hpp"
#include "skyglyphs/layout.hpp"

namespace skyglyphs {

struct SessionConfig {
    SimConfig sim;
    double deck_radius = 40.0;   // world units at depth 0
    double slide_radius = 14.0;  // simple balloons, world units at depth 0
    double bundle_ring_factor = 3.0;
    double expand_seconds = 0.4;
    double pop_seconds = 1.5;
    double idle_seconds = 30.0;
    double screen_width = 1920.0;
    double screen_height = 1080.0;
    double initial_fill = 0.3;  // fraction of the initial bounds covered by balloons

    void validate() const {
        sim.validate();
        if (!(deck_radius > 0) || !(slide_radius > 0) || !(bundle_ring_factor > 0) || !(expand_seconds > 0) ||
            !(pop_seconds > expand_seconds) || !(idle_seconds > 0) || !(screen_width > 0) ||
            !(screen_height > 0) || !(initial_fill > 0 && initial_fill < 1)) {
            throw std::invalid_argument("SessionConfig: parameter out of range");
        }
    }
};

// ---------------------------------------------------------------------------
// Items, pop states, commands

enum class ItemKind { deck, slide, cluster };

inline std::string_view to_string(ItemKind k) {
    switch (k) {
        case ItemKind::deck: return "deck";
        case ItemKind::slide: return "slide";
        case ItemKind::cluster: return "cluster";
    }
    return "unknown";
}

struct ItemRef {
    ItemKind kind = ItemKind::deck;
    std::string id;

    friend auto operator<=>(const ItemRef&, const ItemRef&) = default;
};

enum class PopPhase { idle, expanding, shaking, popped };

inline std::string_view to_string(PopPhase p) {
    switch (p) {
        case PopPhase::idle: return "idle";
        case PopPhase::expanding: return "expanding";
        case PopPhase::shaking: return "shaking";
        case PopPhase::popped: return "popped";
    }
    return "unknown";
}

struct PopState {
    PopPhase phase = PopPhase::idle;
    double press_started_at = 0.0;
    bool released = false;
    std::vector<std::string> slide_node_ids;
    Vec2 bundle_anchor;
    std::optional<std::uint64_t> bundle_cluster;
};

enum class SortAttribute { n_slides, n_words, n_keywords, n_buzzwords, shared_at };

inline std::string_view to_string(SortAttribute a) {
    switch (a) {
        case SortAttribute::n_slides: return "n_slides";
        case SortAttribute::n_words: return "n_words";
        case SortAttribute::n_keywords: return "n_keywords";
        case SortAttribute::n_buzzwords: return "n_buzzwords";
        case SortAttribute::shared_at: return "shared_at";
    }
    return "unknown";
}

namespace cmd {

struct ClusterBy {
    AnchorType type = AnchorType::term;
    std::string key;
};
struct RemoveCluster {
    std::string cluster_id;
};
struct Sort {
    SortAttribute attribute = SortAttribute::n_slides;
    SortOrder order = SortOrder::desc;
};
struct ClearSort {};
struct AddToCollection {
    ItemRef item;
};
struct RemoveFromCollection {
    ItemRef item;
};
struct ToggleCollectionFilter {};
struct ClearCollection {};
struct PressStart {
    std::string deck_id;
};
struct PressEnd {
    std::string deck_id;
};
struct RestoreDeck {
    std::string deck_id;
};
struct Drag {
    std::string node_id;
    Vec2 position;
};
struct Pin {
    std::string node_id;
};
struct Unpin {
    std::string node_id;
};
struct Pan {
    Vec2 delta;
};
struct EnterOverview {};
struct LeaveOverview {};
struct FindSimilar {
    std::string term;
    std::optional<TermCategory> category;
};
struct SearchTitle {
    std::string text;
};
struct Activity {};
struct Tick {
    double now = 0.0;
};

}  // namespace cmd

using CommandBody =
    std::variant<cmd::ClusterBy, cmd::RemoveCluster, cmd::Sort, cmd::ClearSort, cmd::AddToCollection,
                 cmd::RemoveFromCollection, cmd::ToggleCollectionFilter, cmd::ClearCollection, cmd::PressStart,
                 cmd::PressEnd, cmd::RestoreDeck, cmd::Drag, cmd::Pin, cmd::Unpin, cmd::Pan, cmd::EnterOverview,
                 cmd::LeaveOverview, cmd::FindSimilar, cmd::SearchTitle, cmd::Activity, cmd::Tick>;

struct Command {
    CommandBody body;
    std::optional<double> client_time;

    Command() = default;
    template <class T>
        requires std::is_constructible_v<CommandBody, T>
    Command(T body_, std::optional<double> t = std::nullopt) : body(std::move(body_)), client_time(t) {}
};

struct ExecResult {
    bool ok = true;
    std::string message;
    std::uint64_t state_version = 0;
    std::optional<std::string> cluster_id;  // set by cluster-producing commands
};

/// Session-level view of one tick: the layout frame plus the state the
/// renderer mirrors (menus, pop phases, minimap box).
struct SessionFrame {
    LayoutFrame layout;
    std::uint64_t state_version = 0;
    bool menus_visible = false;
    std::vector<std::pair<std::string, PopPhase>> pops;  // non-idle only, by deck id
    MinimapView minimap;  // dots left empty; the renderer maps frame nodes itself
};

inline std::string slide_node_id(const std::string& deck_id, std::size_t slide) {
    return deck_id + "#" + std::to_string(slide);
}

/// Splits "deck#index" at the last '#'.
inline std::optional<std::pair<std::string, std::size_t>> parse_slide_node_id(const std::string& id) {
    auto hash = id.rfind('#');
    if (hash == std::string::npos || hash == 0 || hash + 1 == id.size()) return std::nullopt;
    std::size_t index = 0;
    for (std::size_t i = hash + 1; i < id.size(); ++i) {
        if (id[i] < '0' || id[i] > '9') return std::nullopt;
        index = index * 10 + static_cast<std::size_t>(id[i] - '0');
    }
    return std::pair{id.substr(0, hash), index};
}

inline std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

// ---------------------------------------------------------------------------
// Session

/// Serialized state machine over one corpus. Every transition goes through
/// execute(); a failed command leaves the state untouched.
class Session {
public:
    Session(std::shared_ptr<const Catalog> catalog, SessionConfig cfg = {}, std::string session_id = "s1")
        : catalog_(std::move(catalog)), cfg_(cfg), engine_(cfg.sim), session_id_(std::move(session_id)) {
        cfg_.validate();
        const auto& c = *catalog_;
        std::vector<LayoutNode> nodes;
        nodes.reserve(c.size());
        double covered = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            LayoutNode n;
            n.id = c.decks[i].deck_id;
            n.kind = NodeKind::deck;
            n.radius = cfg_.deck_radius * c.visuals[i].scale;
            n.opacity = c.visuals[i].opacity;
            covered += 4 * n.radius * n.radius;
            nodes.push_back(std::move(n));
        }
        double aspect = cfg_.screen_width / cfg_.screen_height;
        double area = std::max(covered / cfg_.initial_fill, cfg_.screen_width * cfg_.screen_height * 0.25);
        double h = std::sqrt(area / aspect);
        Rect bounds{{-h * aspect / 2, -h / 2}, {h * aspect / 2, h / 2}};
        engine_.initialize(std::move(nodes), bounds);
        Viewport v;
        v.width = cfg_.screen_width;
        v.height = cfg_.screen_height;
        engine_.set_viewport(v);
    }

    ExecResult execute(const Command& command) {
        log_.push_back(command);
        ExecResult r;
        try {
            r = std::visit([this](const auto& c) { return apply(c); }, command.body);
        } catch (const std::exception& e) {
            r.ok = false;
            r.message = e.what();
        }
        if (r.ok && !std::holds_alternative<cmd::Tick>(command.body)) {
            ++version_;
            if (!std::holds_alternative<cmd::Activity>(command.body)) note_activity();
        }
        r.state_version = version_;
        return r;
    }

    /// Phase a press would be in at `now`, without committing it. Shaking is
    /// committed: a release after the expand window no longer cancels the pop.
    [[nodiscard]] PopPhase press_progress(const std::string& deck_id, double now) const {
        auto it = pops_.find(deck_id);
        if (it == pops_.end()) throw std::logic_error("no press started on deck '" + deck_id + "'");
        const auto& p = it->second;
        if (p.phase == PopPhase::idle || p.phase == PopPhase::popped) return p.phase;
        double elapsed = now - p.press_started_at;
        if (elapsed >= cfg_.pop_seconds) return PopPhase::popped;
        if (elapsed >= cfg_.expand_seconds) return PopPhase::shaking;
        return p.released ? PopPhase::idle : PopPhase::expanding;
    }

    /// Menu visibility at `now`; commits the hide once the idle window passes.
    bool idle_update(double now) {
        if (last_activity_ && now - *last_activity_ > cfg_.idle_seconds) menus_visible_ = false;
        return menus_visible_;
    }

    [[nodiscard]] SessionFrame frame() const {
        SessionFrame f;
        f.layout = engine_.frame();
        f.state_version = version_;
        f.menus_visible = menus_visible_;
        for (const auto& [deck, p] : pops_) {
            if (p.phase != PopPhase::idle) f.pops.emplace_back(deck, p.phase);
        }
        f.minimap = engine_.minimap();
        f.minimap.dots.clear();
        return f;
    }

    // -- queries ---------------------------------------------------------------

    [[nodiscard]] const LayoutEngine& engine() const { return engine_; }
    [[nodiscard]] const Catalog& catalog() const { return *catalog_; }
    [[nodiscard]] const SessionConfig& config() const { return cfg_; }
    [[nodiscard]] const std::string& id() const { return session_id_; }
    [[nodiscard]] std::uint64_t version() const { return version_; }
    [[nodiscard]] double clock() const { return clock_; }
    [[nodiscard]] bool menus_visible() const { return menus_visible_; }
    [[nodiscard]] const std::vector<ItemRef>& collection() const { return collection_; }
    [[nodiscard]] bool collection_filter_on() const { return filter_on_; }
    [[nodiscard]] const std::optional<cmd::Sort>& sort() const { return sort_; }
    [[nodiscard]] const std::vector<Command>& log() const { return log_; }

    [[nodiscard]] PopPhase pop_phase(const std::string& deck_id) const {
        auto it = pops_.find(deck_id);
        return it == pops_.end() ? PopPhase::idle : it->second.phase;
    }
    [[nodiscard]] const PopState* pop_state(const std::string& deck_id) const {
        auto it = pops_.find(deck_id);
        return it == pops_.end() ? nullptr : &it->second;
    }

    /// User clusters (bundles excluded), keyed by anchor id.
    [[nodiscard]] std::map<std::uint64_t, const ClusterAnchor*> clusters() const {
        std::map<std::uint64_t, const ClusterAnchor*> out;
        for (const auto& [id, a] : engine_.anchors()) {
            if (a.type != AnchorType::bundle) out.emplace(id, &a);
        }
        return out;
    }

    [[nodiscard]] const ClusterAnchor& cluster(const std::string& label) const {
        return engine_.anchors().at(parse_cluster_label(label));
    }

    [[nodiscard]] std::vector<std::string> hover_query(const std::string& cluster_label) const {
        return engine_.hover_query(parse_cluster_label(cluster_label));
    }

    [[nodiscard]] std::set<std::string> visible_node_ids() const {
        std::set<std::string> out;
        for (const auto& n : engine_.nodes()) {
            if (!n.hidden) out.insert(n.id);
        }
        return out;
    }

    /// Decks whose metrics satisfy the cluster predicate; `key` is normalized
    /// the same way ClusterBy normalizes it.
    [[nodiscard]] std::vector<std::string> cluster_members(AnchorType type, const std::string& key) const {
        const auto& c = *catalog_;
        std::vector<std::string> out;
        for (std::size_t i = 0; i < c.size(); ++i) {
            bool match = false;
            switch (type) {
                case AnchorType::shared_by: match = c.decks[i].shared_by == key; break;
                case AnchorType::product: match = c.metrics[i].product_mentions.contains(key); break;
                case AnchorType::term: match = c.metrics[i].mentions_term(key); break;
                case AnchorType::title:
                    match = lower_ascii(c.decks[i].title).find(lower_ascii(key)) != std::string::npos;
                    break;
                case AnchorType::bundle: break;
            }
            if (match) out.push_back(c.decks[i].deck_id);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    static std::string normalize_cluster_key(AnchorType type, const std::string& key) {
        switch (type) {
            case AnchorType::product:
            case AnchorType::term: return normalize_phrase(key);
            default: return key;
        }
    }

private:
    static std::uint64_t parse_cluster_label(const std::string& label) {
        if (label.size() < 2 || label[0] != 'c') throw std::invalid_argument("unknown cluster '" + label + "'");
        std::uint64_t id = 0;
        for (std::size_t i = 1; i < label.size(); ++i) {
            if (label[i] < '0' || label[i] > '9') throw std::invalid_argument("unknown cluster '" + label + "'");
            id = id * 10 + static_cast<std::uint64_t>(label[i] - '0');
        }
        return id;
    }

    static ExecResult fail(std::string message) {
        ExecResult r;
        r.ok = false;
        r.message = std::move(message);
        return r;
    }

    void note_activity() {
        last_activity_ = clock_;
        menus_visible_ = true;
    }

    bool has_node(const std::string& id) const { return engine_.find(id) != nullptr; }

    bool resolves(const ItemRef& item) const {
        switch (item.kind) {
            case ItemKind::deck: return catalog_->find(item.id).has_value();
            case ItemKind::slide: {
                auto parsed = parse_slide_node_id(item.id);
                if (!parsed) return false;
                auto deck = catalog_->find(parsed->first);
                return deck && parsed->second < catalog_->decks[*deck].slides.size();
            }
            case ItemKind::cluster: {
                try {
                    auto it = engine_.anchors().find(parse_cluster_label(item.id));
                    return it != engine_.anchors().end() && it->second.type != AnchorType::bundle;
                } catch (const std::invalid_argument&) {
                    return false;
                }
            }
        }
        return false;
    }

    /// Recomputes every node's hidden flag from pop states and the collection filter.
    void refresh_visibility() {
        std::set<std::string> reachable_decks;
        std::set<std::string> reachable_slides;
        if (filter_on_) {
            for (const auto& item : collection_) {
                switch (item.kind) {
                    case ItemKind::deck: reachable_decks.insert(item.id); break;
                    case ItemKind::slide: reachable_slides.insert(item.id); break;
                    case ItemKind::cluster:
                        for (const auto& m : engine_.hover_query(parse_cluster_label(item.id))) {
                            reachable_decks.insert(m);
                        }
                        break;
                }
            }
        }
        for (const auto& n : engine_.nodes()) {
            bool visible = false;
            if (n.kind == NodeKind::deck) {
                visible = pop_phase(n.id) != PopPhase::popped && (!filter_on_ || reachable_decks.contains(n.id));
            } else {
                auto parsed = parse_slide_node_id(n.id);
                visible = !filter_on_ || reachable_slides.contains(n.id) ||
                          (parsed && reachable_decks.contains(parsed->first));
            }
            engine_.set_hidden(n.id, !visible);
        }
    }

    ExecResult make_cluster(AnchorType type, const std::string& raw_key) {
        auto key = normalize_cluster_key(type, raw_key);
        if (key.empty()) return fail("empty cluster key");
        auto members = cluster_members(type, key);
        if (members.empty()) {
            return fail("no decks match " + std::string(to_string(type)) + " '" + key + "'");
        }
        for (const auto& [id, a] : engine_.anchors()) {
            if (a.type == type && a.key == key) {
                ExecResult r;
                r.cluster_id = a.label();
                return r;
            }
        }
        auto id = engine_.apply_cluster(type, key, std::move(members));
        ExecResult r;
        r.cluster_id = "c" + std::to_string(id);
        return r;
    }

    double sort_key(const LayoutNode& n, SortAttribute attr) const {
        const auto& c = *catalog_;
        const DeckMetrics* m = nullptr;
        std::size_t deck = 0;
        if (n.kind == NodeKind::deck) {
            deck = c.at(n.id);
            m = &c.metrics[deck];
        } else {
            auto parsed = parse_slide_node_id(n.id);
            deck = c.at(parsed->first);
            m = &c.slide_metrics[deck].at(parsed->second);
        }
        switch (attr) {
            case SortAttribute::n_slides: return static_cast<double>(m->n_slides);
            case SortAttribute::n_words: return static_cast<double>(m->n_words);
            case SortAttribute::n_keywords: return static_cast<double>(m->n_keywords);
            case SortAttribute::n_buzzwords: return static_cast<double>(m->n_buzzwords);
            case SortAttribute::shared_at:
                return static_cast<double>(c.decks[deck].shared_at.days().time_since_epoch().count());
        }
        return 0;
    }

    void spawn_slides(const std::string& deck_id, PopState& p) {
        const auto& c = *catalog_;
        auto deck = c.at(deck_id);
        const auto& deck_node = engine_.node(deck_id);
        p.bundle_anchor = deck_node.position;
        const std::size_t n = c.decks[deck].slides.size();
        const double ring = cfg_.bundle_ring_factor * deck_node.radius;
        const double scale = c.visuals[deck].scale;
        p.slide_node_ids.clear();
        for (std::size_t k = 0; k < n; ++k) {
            double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) -
                           std::numbers::pi / 2;
            LayoutNode s;
            s.id = slide_node_id(deck_id, k);
            s.kind = NodeKind::slide;
            s.radius = cfg_.slide_radius * scale;
            s.opacity = deck_node.opacity;
            s.position = p.bundle_anchor + Vec2{std::cos(angle), std::sin(angle)} * ring;
            engine_.add_node(std::move(s));
            p.slide_node_ids.push_back(slide_node_id(deck_id, k));
        }
        p.bundle_cluster = engine_.apply_cluster_at(AnchorType::bundle, deck_id, p.slide_node_ids, p.bundle_anchor);
        refresh_visibility();
    }

    /// Walks every due phase in order; a jump in time still passes through shaking.
    void advance_pops() {
        for (auto& [deck, p] : pops_) {
            double elapsed = clock_ - p.press_started_at;
            if (p.phase == PopPhase::expanding && elapsed >= cfg_.expand_seconds) p.phase = PopPhase::shaking;
            if (p.phase == PopPhase::shaking && elapsed >= cfg_.pop_seconds) {
                p.phase = PopPhase::popped;
                spawn_slides(deck, p);
            }
        }
    }

    // -- command handlers --------------------------------------------------------

    ExecResult apply(const cmd::ClusterBy& c) {
        if (c.type == AnchorType::bundle) return fail("bundle clusters are created by popping");
        auto r = make_cluster(c.type, c.key);
        if (r.ok) refresh_visibility();
        return r;
    }

    ExecResult apply(const cmd::RemoveCluster& c) {
        if (!resolves({ItemKind::cluster, c.cluster_id})) return fail("unknown cluster '" + c.cluster_id + "'");
        engine_.remove_cluster(parse_cluster_label(c.cluster_id));
        std::erase(collection_, ItemRef{ItemKind::cluster, c.cluster_id});
        refresh_visibility();
        return {};
    }

    ExecResult apply(const cmd::Sort& c) {
        std::vector<SortItem> items;
        for (const auto& n : engine_.nodes()) {
            if (!n.hidden) items.push_back({n.id, sort_key(n, c.attribute)});
        }
        engine_.apply_sort(std::move(items), c.order);
        sort_ = c;
        return {};
    }

    ExecResult apply(const cmd::ClearSort&) {
        engine_.clear_sort();
        sort_.reset();
        return {};
    }

    ExecResult apply(const cmd::AddToCollection& c) {
        if (!resolves(c.item)) {
            return fail("unknown " + std::string(to_string(c.item.kind)) + " '" + c.item.id + "'");
        }
        if (std::find(collection_.begin(), collection_.end(), c.item) == collection_.end()) {
            collection_.push_back(c.item);
        }
        refresh_visibility();
        return {};
    }

    ExecResult apply(const cmd::RemoveFromCollection& c) {
        auto it = std::find(collection_.begin(), collection_.end(), c.item);
        if (it == collection_.end()) return fail("item '" + c.item.id + "' is not in the collection");
        collection_.erase(it);
        refresh_visibility();
        return {};
    }

    ExecResult apply(const cmd::ToggleCollectionFilter&) {
        filter_on_ = !filter_on_;
        refresh_visibility();
        return {};
    }

    ExecResult apply(const cmd::ClearCollection&) {
        collection_.clear();
        refresh_visibility();
        return {};
    }

    ExecResult apply(const cmd::PressStart& c) {
        if (!catalog_->find(c.deck_id)) return fail("unknown deck '" + c.deck_id + "'");
        auto phase = pop_phase(c.deck_id);
        if (phase == PopPhase::popped) return fail("deck '" + c.deck_id + "' is already popped");
        if (phase != PopPhase::idle) return fail("deck '" + c.deck_id + "' is already being pressed");
        if (engine_.node(c.deck_id).hidden) return fail("deck '" + c.deck_id + "' is hidden");
        auto& p = pops_[c.deck_id];
        p = PopState{};
        p.phase = PopPhase::expanding;
        p.press_started_at = clock_;
        return {};
    }

    ExecResult apply(const cmd::PressEnd& c) {
        auto it = pops_.find(c.deck_id);
        if (it == pops_.end() || it->second.phase == PopPhase::idle) {
            return fail("PressEnd without PressStart on deck '" + c.deck_id + "'");
        }
        auto& p = it->second;
        if (p.phase == PopPhase::expanding) {
            p.phase = PopPhase::idle;
        } else {
            p.released = true;
        }
        return {};
    }

    ExecResult apply(const cmd::RestoreDeck& c) {
        auto it = pops_.find(c.deck_id);
        if (it == pops_.end() || it->second.phase != PopPhase::popped) {
            return fail("deck '" + c.deck_id + "' is not popped");
        }
        auto& p = it->second;
        if (p.bundle_cluster) engine_.remove_cluster(*p.bundle_cluster);
        engine_.remove_nodes(p.slide_node_ids);
        auto& deck = engine_.node(c.deck_id);
        deck.position = p.bundle_anchor;
        deck.velocity = {};
        pops_.erase(it);
        refresh_visibility();
        return {};
    }

    ExecResult apply(const cmd::Drag& c) {
        if (!has_node(c.node_id)) return fail("unknown node '" + c.node_id + "'");
        if (!std::isfinite(c.position.x) || !std::isfinite(c.position.y)) return fail("non-finite drag position");
        engine_.drag(c.node_id, c.position);
        return {};
    }

    ExecResult apply(const cmd::Pin& c) {
        if (!has_node(c.node_id)) return fail("unknown node '" + c.node_id + "'");
        engine_.pin(c.node_id);
        return {};
    }

    ExecResult apply(const cmd::Unpin& c) {
        if (!has_node(c.node_id)) return fail("unknown node '" + c.node_id + "'");
        engine_.unpin(c.node_id);
        return {};
    }

    ExecResult apply(const cmd::Pan& c) {
        if (!std::isfinite(c.delta.x) || !std::isfinite(c.delta.y)) return fail("non-finite pan delta");
        engine_.pan(c.delta);
        return {};
    }

    ExecResult apply(const cmd::EnterOverview&) {
        engine_.overview_transform(true);
        return {};
    }

    ExecResult apply(const cmd::LeaveOverview&) {
        engine_.overview_transform(false);
        return {};
    }

    ExecResult apply(const cmd::FindSimilar& c) {
        auto term = normalize_phrase(c.term);
        if (term.empty()) return fail("empty term");
        TermCategory category = c.category.value_or(catalog_->dictionaries.products.contains(term)
                                                        ? TermCategory::product
                                                        : TermCategory::keyword);
        auto type = category == TermCategory::product ? AnchorType::product : AnchorType::term;
        auto r = make_cluster(type, term);
        if (r.ok) refresh_visibility();
        return r;
    }

    ExecResult apply(const cmd::SearchTitle& c) {
        if (c.text.empty()) return fail("empty search text");
        auto r = make_cluster(AnchorType::title, c.text);
        if (r.ok) refresh_visibility();
        return r;
    }

    ExecResult apply(const cmd::Activity&) {
        note_activity();
        return {};
    }

    ExecResult apply(const cmd::Tick& c) {
        if (!std::isfinite(c.now) || c.now < clock_) return fail("tick time must be finite and non-decreasing");
        clock_ = c.now;
        advance_pops();
        engine_.step();
        idle_update(clock_);
        return {};
    }

    std::shared_ptr<const Catalog> catalog_;
    SessionConfig cfg_;
    LayoutEngine engine_;
    std::string session_id_;
    std::vector<ItemRef> collection_;
    bool filter_on_ = false;
    std::optional<cmd::Sort> sort_;
    std::map<std::string, PopState> pops_;
    bool menus_visible_ = false;
    std::optional<double> last_activity_;
    double clock_ = 0.0;
    std::uint64_t version_ = 0;
    std::vector<Command> log_;
};

}  // namespace skyglyphs

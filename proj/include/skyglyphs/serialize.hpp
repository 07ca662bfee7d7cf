#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skyglyphs/catalog.hpp"
#include "skyglyphs/session.hpp"

namespace skyglyphs {

using nlohmann::json;

inline json axis_order_json() {
    json a = json::array();
    for (Axis axis : kAxisOrder) a.push_back(to_string(axis));
    return a;
}

inline json to_json(const DeckMetrics& m) {
    json j;
    j["n_slides"] = m.n_slides;
    j["n_words"] = m.n_words;
    j["n_keywords"] = m.n_keywords;
    j["n_buzzwords"] = m.n_buzzwords;
    j["product_mentions"] = m.product_mentions;
    j["keyword_mentions"] = m.keyword_mentions;
    j["buzzword_mentions"] = m.buzzword_mentions;
    j["dominant_product"] = m.dominant_product ? json(*m.dominant_product) : json(nullptr);
    return j;
}

inline json to_json(const CorpusStats& s) {
    json j;
    j["axis_max"] = s.axis_max;
    j["date_min"] = s.date_min.iso();
    j["date_max"] = s.date_max.iso();
    j["n_decks"] = s.n_decks;
    j["n_slides_total"] = s.n_slides_total;
    return j;
}

inline json vertices_json(const SpikedGlyph& g) {
    json v = json::array();
    for (const auto& p : g.vertices) v.push_back({p.x, p.y});
    return v;
}

/// Glyph export record: axis values in glyph axis order, eight
/// counter-clockwise vertices starting at the top spike.
inline json glyph_record(const std::string& deck_id, const SpikedGlyph& g, const BalloonVisual& v) {
    json j;
    j["deck_id"] = deck_id;
    j["axis_values"] = g.axis_values;
    j["vertices"] = vertices_json(g);
    j["colour_index"] = v.colour_index;
    j["depth"] = v.depth;
    j["scale"] = v.scale;
    j["opacity"] = v.opacity;
    return j;
}

inline json glyph_records(const Catalog& c) {
    json out = json::array();
    for (std::size_t i : c.order_by_id()) out.push_back(glyph_record(c.decks[i].deck_id, c.glyphs[i], c.visuals[i]));
    return out;
}

/// Document written by `skyglyphs ingest`.
inline json ingest_document(const Catalog& c) {
    json j;
    j["format"] = "skyglyphs-ingest/1";
    j["axis_order"] = axis_order_json();
    j["stats"] = c.stats ? to_json(*c.stats) : json(nullptr);
    json decks = json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
        json d;
        d["id"] = c.decks[i].deck_id;
        d["shared_at"] = c.decks[i].shared_at.iso();
        d["metrics"] = to_json(c.metrics[i]);
        d["glyph"] = glyph_record(c.decks[i].deck_id, c.glyphs[i], c.visuals[i]);
        decks.push_back(std::move(d));
    }
    j["decks"] = std::move(decks);
    return j;
}

// ---------------------------------------------------------------------------
// Frames

inline json to_json(const Viewport& v) {
    return {{"x", v.centre.x}, {"y", v.centre.y}, {"zoom", v.zoom}, {"w", v.width}, {"h", v.height}};
}

inline json rect_json(const Rect& r) { return json::array({r.min.x, r.min.y, r.max.x, r.max.y}); }

inline json to_json(const LayoutFrame& f) {
    json j;
    j["tick"] = f.tick;
    j["mode"] = to_string(f.mode);
    j["viewport"] = to_json(f.viewport);
    json nodes = json::array();
    for (const auto& n : f.nodes) {
        nodes.push_back({{"id", n.id},
                         {"x", n.position.x},
                         {"y", n.position.y},
                         {"r", n.radius},
                         {"o", n.opacity},
                         {"hidden", n.hidden}});
    }
    j["nodes"] = std::move(nodes);
    json anchors = json::array();
    for (const auto& a : f.anchors) {
        anchors.push_back(
            {{"id", a.id}, {"type", to_string(a.type)}, {"key", a.key}, {"x", a.position.x}, {"y", a.position.y}});
    }
    j["anchors"] = std::move(anchors);
    return j;
}

/// Stream encoding: the layout frame schema plus session extras.
inline json to_json(const SessionFrame& f) {
    json j = to_json(f.layout);
    j["version"] = f.state_version;
    j["menus_visible"] = f.menus_visible;
    json pops = json::array();
    for (const auto& [deck, phase] : f.pops) pops.push_back({{"deck", deck}, {"phase", to_string(phase)}});
    j["pops"] = std::move(pops);
    j["minimap"] = {{"extent", rect_json(f.minimap.extent)},
                    {"scale", f.minimap.scale},
                    {"box", rect_json(f.minimap.view_box)}};
    return j;
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline const json& arg(const json& args, const char* key) {
    auto it = args.find(key);
    if (it == args.end()) throw std::invalid_argument(std::string("missing argument '") + key + "'");
    return *it;
}

inline std::string arg_string(const json& args, const char* key) {
    const auto& v = arg(args, key);
    if (!v.is_string()) throw std::invalid_argument(std::string("argument '") + key + "' must be a string");
    return v.get<std::string>();
}

inline double arg_number(const json& args, const char* key) {
    const auto& v = arg(args, key);
    if (!v.is_number()) throw std::invalid_argument(std::string("argument '") + key + "' must be a number");
    return v.get<double>();
}

inline ItemRef arg_item(const json& args) {
    auto kind = arg_string(args, "kind");
    ItemRef item;
    if (kind == "deck") item.kind = ItemKind::deck;
    else if (kind == "slide") item.kind = ItemKind::slide;
    else if (kind == "cluster") item.kind = ItemKind::cluster;
    else throw std::invalid_argument("unknown item kind '" + kind + "'");
    item.id = arg_string(args, "id");
    return item;
}

inline json item_json(const ItemRef& item) { return {{"kind", to_string(item.kind)}, {"id", item.id}}; }

inline SortAttribute sort_attribute_from(const std::string& s) {
    for (auto a : {SortAttribute::n_slides, SortAttribute::n_words, SortAttribute::n_keywords,
                   SortAttribute::n_buzzwords, SortAttribute::shared_at}) {
        if (to_string(a) == s) return a;
    }
    throw std::invalid_argument("unknown sort attribute '" + s + "'");
}

inline TermCategory category_from(const std::string& s) {
    for (auto c : {TermCategory::product, TermCategory::keyword, TermCategory::buzzword}) {
        if (to_string(c) == s) return c;
    }
    throw std::invalid_argument("unknown term category '" + s + "'");
}

}  // namespace detail

/// Parses `{type, args, client_time}`. Throws std::invalid_argument when malformed.
inline Command command_from_json(const json& j) {
    using namespace detail;
    if (!j.is_object()) throw std::invalid_argument("command must be a JSON object");
    auto type_it = j.find("type");
    if (type_it == j.end() || !type_it->is_string()) throw std::invalid_argument("command needs a string 'type'");
    const auto type = type_it->get<std::string>();
    static const json kEmpty = json::object();
    auto args_it = j.find("args");
    const json& args = args_it == j.end() || args_it->is_null() ? kEmpty : *args_it;
    if (!args.is_object()) throw std::invalid_argument("'args' must be an object");

    Command c;
    if (auto t = j.find("client_time"); t != j.end() && !t->is_null()) {
        if (!t->is_number()) throw std::invalid_argument("'client_time' must be a number");
        c.client_time = t->get<double>();
    }

    if (type == "ClusterBy") {
        auto at = anchor_type_from_string(arg_string(args, "type"));
        if (!at || *at == AnchorType::bundle || *at == AnchorType::title) {
            throw std::invalid_argument("ClusterBy type must be shared_by, product or term");
        }
        c.body = cmd::ClusterBy{*at, arg_string(args, "key")};
    } else if (type == "RemoveCluster") {
        c.body = cmd::RemoveCluster{arg_string(args, "cluster")};
    } else if (type == "Sort") {
        auto order = arg_string(args, "order");
        if (order != "asc" && order != "desc") throw std::invalid_argument("sort order must be asc or desc");
        c.body = cmd::Sort{sort_attribute_from(arg_string(args, "attribute")),
                           order == "asc" ? SortOrder::asc : SortOrder::desc};
    } else if (type == "ClearSort") {
        c.body = cmd::ClearSort{};
    } else if (type == "AddToCollection") {
        c.body = cmd::AddToCollection{arg_item(args)};
    } else if (type == "RemoveFromCollection") {
        c.body = cmd::RemoveFromCollection{arg_item(args)};
    } else if (type == "ToggleCollectionFilter") {
        c.body = cmd::ToggleCollectionFilter{};
    } else if (type == "ClearCollection") {
        c.body = cmd::ClearCollection{};
    } else if (type == "PressStart") {
        c.body = cmd::PressStart{arg_string(args, "deck")};
    } else if (type == "PressEnd") {
        c.body = cmd::PressEnd{arg_string(args, "deck")};
    } else if (type == "RestoreDeck") {
        c.body = cmd::RestoreDeck{arg_string(args, "deck")};
    } else if (type == "Drag") {
        c.body = cmd::Drag{arg_string(args, "node"), {arg_number(args, "x"), arg_number(args, "y")}};
    } else if (type == "Pin") {
        c.body = cmd::Pin{arg_string(args, "node")};
    } else if (type == "Unpin") {
        c.body = cmd::Unpin{arg_string(args, "node")};
    } else if (type == "Pan") {
        c.body = cmd::Pan{{arg_number(args, "dx"), arg_number(args, "dy")}};
    } else if (type == "EnterOverview") {
        c.body = cmd::EnterOverview{};
    } else if (type == "LeaveOverview") {
        c.body = cmd::LeaveOverview{};
    } else if (type == "FindSimilar") {
        cmd::FindSimilar f{arg_string(args, "term"), std::nullopt};
        if (auto cat = args.find("category"); cat != args.end() && !cat->is_null()) {
            f.category = category_from(arg_string(args, "category"));
        }
        c.body = std::move(f);
    } else if (type == "SearchTitle") {
        c.body = cmd::SearchTitle{arg_string(args, "text")};
    } else if (type == "Activity") {
        c.body = cmd::Activity{};
    } else if (type == "Tick") {
        c.body = cmd::Tick{arg_number(args, "now")};
    } else {
        throw std::invalid_argument("unknown command type '" + type + "'");
    }
    return c;
}

inline Command command_from_string(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("command is not valid JSON: ") + e.what());
    }
    return command_from_json(j);
}

inline json to_json(const Command& c) {
    using namespace detail;
    json j;
    json args = json::object();
    std::string type;
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, cmd::ClusterBy>) {
                type = "ClusterBy";
                args = {{"type", to_string(b.type)}, {"key", b.key}};
            } else if constexpr (std::is_same_v<T, cmd::RemoveCluster>) {
                type = "RemoveCluster";
                args = {{"cluster", b.cluster_id}};
            } else if constexpr (std::is_same_v<T, cmd::Sort>) {
                type = "Sort";
                args = {{"attribute", to_string(b.attribute)}, {"order", b.order == SortOrder::asc ? "asc" : "desc"}};
            } else if constexpr (std::is_same_v<T, cmd::ClearSort>) {
                type = "ClearSort";
            } else if constexpr (std::is_same_v<T, cmd::AddToCollection>) {
                type = "AddToCollection";
                args = item_json(b.item);
            } else if constexpr (std::is_same_v<T, cmd::RemoveFromCollection>) {
                type = "RemoveFromCollection";
                args = item_json(b.item);
            } else if constexpr (std::is_same_v<T, cmd::ToggleCollectionFilter>) {
                type = "ToggleCollectionFilter";
            } else if constexpr (std::is_same_v<T, cmd::ClearCollection>) {
                type = "ClearCollection";
            } else if constexpr (std::is_same_v<T, cmd::PressStart>) {
                type = "PressStart";
                args = {{"deck", b.deck_id}};
            } else if constexpr (std::is_same_v<T, cmd::PressEnd>) {
                type = "PressEnd";
                args = {{"deck", b.deck_id}};
            } else if constexpr (std::is_same_v<T, cmd::RestoreDeck>) {
                type = "RestoreDeck";
                args = {{"deck", b.deck_id}};
            } else if constexpr (std::is_same_v<T, cmd::Drag>) {
                type = "Drag";
                args = {{"node", b.node_id}, {"x", b.position.x}, {"y", b.position.y}};
            } else if constexpr (std::is_same_v<T, cmd::Pin>) {
                type = "Pin";
                args = {{"node", b.node_id}};
            } else if constexpr (std::is_same_v<T, cmd::Unpin>) {
                type = "Unpin";
                args = {{"node", b.node_id}};
            } else if constexpr (std::is_same_v<T, cmd::Pan>) {
                type = "Pan";
                args = {{"dx", b.delta.x}, {"dy", b.delta.y}};
            } else if constexpr (std::is_same_v<T, cmd::EnterOverview>) {
                type = "EnterOverview";
            } else if constexpr (std::is_same_v<T, cmd::LeaveOverview>) {
                type = "LeaveOverview";
            } else if constexpr (std::is_same_v<T, cmd::FindSimilar>) {
                type = "FindSimilar";
                args = {{"term", b.term}};
                if (b.category) args["category"] = to_string(*b.category);
            } else if constexpr (std::is_same_v<T, cmd::SearchTitle>) {
                type = "SearchTitle";
                args = {{"text", b.text}};
            } else if constexpr (std::is_same_v<T, cmd::Activity>) {
                type = "Activity";
            } else if constexpr (std::is_same_v<T, cmd::Tick>) {
                type = "Tick";
                args = {{"now", b.now}};
            }
        },
        c.body);
    j["type"] = type;
    j["args"] = std::move(args);
    j["client_time"] = c.client_time ? json(*c.client_time) : json(nullptr);
    return j;
}

inline json to_json(const ExecResult& r) {
    json j;
    j["status"] = r.ok ? "ok" : "error";
    j["message"] = r.message;
    j["state_version"] = r.state_version;
    if (r.cluster_id) j["cluster_id"] = *r.cluster_id;
    return j;
}

/// Newline-delimited command log, one `{type, args, client_time}` per line.
inline std::string command_log_text(const std::vector<Command>& log) {
    std::string out;
    for (const auto& c : log) {
        out += to_json(c).dump();
        out.push_back('\n');
    }
    return out;
}

inline std::vector<Command> parse_command_log(std::string_view text) {
    std::vector<Command> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        try {
            out.push_back(command_from_string(line));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("command log line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// API payloads

inline json deck_summary(const Catalog& c, std::size_t i) {
    json j;
    j["id"] = c.decks[i].deck_id;
    j["title"] = c.decks[i].title;
    j["axis_values"] = c.glyphs[i].axis_values;
    j["vertices"] = vertices_json(c.glyphs[i]);
    j["colour_index"] = c.visuals[i].colour_index;
    j["colour"] = Palette::hex(c.visuals[i].colour_index);
    j["depth"] = c.visuals[i].depth;
    j["scale"] = c.visuals[i].scale;
    j["opacity"] = c.visuals[i].opacity;
    return j;
}

/// `GET /corpus`: summaries ordered by deck id.
inline json corpus_json(const Catalog& c) {
    json decks = json::array();
    for (std::size_t i : c.order_by_id()) decks.push_back(deck_summary(c, i));
    json j;
    j["axis_order"] = axis_order_json();
    j["decks"] = std::move(decks);
    return j;
}

inline json term_buttons(const MentionMap& mentions, TermCategory category) {
    json out = json::array();
    for (const auto& [term, count] : mentions) {  // std::map: ascending by term
        out.push_back({{"term", term}, {"category", to_string(category)}, {"count", count}});
    }
    return out;
}

/// `GET /decks/{id}`: tooltip payload.
inline json deck_details(const Catalog& c, std::size_t i) {
    const auto& d = c.decks[i];
    const auto& m = c.metrics[i];
    const auto& g = c.glyphs[i];
    json j;
    j["id"] = d.deck_id;
    j["title"] = d.title;
    j["shared_by"] = d.shared_by;
    j["repository"] = d.repository;
    j["shared_at"] = d.shared_at.iso();
    json slides = json::array();
    for (const auto& s : d.slides) {
        slides.push_back({{"index", s.slide_index},
                          {"image", s.image_ref},
                          {"url", "/decks/" + d.deck_id + "/slides/" + std::to_string(s.slide_index) + "/image"}});
    }
    j["slides"] = std::move(slides);
    json axes = json::array();
    for (std::size_t k = 0; k < kAxisCount; ++k) {
        Axis a = kAxisOrder[k];
        axes.push_back({{"axis", to_string(a)},
                        {"spike_index", k},
                        {"vertex_index", spike_vertex_index(a)},
                        {"angle_degrees", axis_angle_degrees(a)},
                        {"value", m.axis_value(a)},
                        {"radius", g.radius_of(a)}});
    }
    j["axes"] = std::move(axes);
    j["vertices"] = vertices_json(g);
    j["buttons"] = {{"product", term_buttons(m.product_mentions, TermCategory::product)},
                    {"keyword", term_buttons(m.keyword_mentions, TermCategory::keyword)},
                    {"buzzword", term_buttons(m.buzzword_mentions, TermCategory::buzzword)}};
    j["dominant_product"] = m.dominant_product ? json(*m.dominant_product) : json(nullptr);
    j["colour_index"] = c.visuals[i].colour_index;
    j["colour"] = Palette::hex(c.visuals[i].colour_index);
    return j;
}

}  // namespace skyglyphs

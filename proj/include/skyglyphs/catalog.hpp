#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "skyglyphs/corpus.hpp"
#include "skyglyphs/glyph.hpp"

namespace skyglyphs {

/// Immutable ingested corpus: records plus every derived quantity the session
/// and the server read. Built once; shared read-only afterwards.
struct Catalog {
    std::vector<DeckRecord> decks;  // manifest order
    std::vector<DeckMetrics> metrics;
    std::vector<std::vector<DeckMetrics>> slide_metrics;
    std::optional<CorpusStats> stats;  // absent for an empty corpus
    std::vector<SpikedGlyph> glyphs;
    std::vector<BalloonVisual> visuals;
    TermDictionaries dictionaries;
    GlyphConfig glyph_config;
    Palette palette;
    std::unordered_map<std::string, std::size_t> index;

    [[nodiscard]] std::size_t size() const { return decks.size(); }
    [[nodiscard]] bool empty() const { return decks.empty(); }

    [[nodiscard]] std::optional<std::size_t> find(const std::string& deck_id) const {
        auto it = index.find(deck_id);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] std::size_t at(const std::string& deck_id) const {
        auto i = find(deck_id);
        if (!i) throw std::out_of_range("unknown deck '" + deck_id + "'");
        return *i;
    }

    /// Glyph of one slide as a simple balloon, normalized by the corpus maxima.
    [[nodiscard]] SpikedGlyph slide_glyph(std::size_t deck, std::size_t slide) const {
        return build_spiked_glyph(slide_metrics.at(deck).at(slide), *stats, glyph_config);
    }

    /// Deck indices ordered by deck id.
    [[nodiscard]] std::vector<std::size_t> order_by_id() const {
        std::vector<std::size_t> order(decks.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return decks[a].deck_id < decks[b].deck_id; });
        return order;
    }
};

inline Catalog build_catalog(std::vector<DeckRecord> decks, TermDictionaries dicts, GlyphConfig cfg = {}) {
    cfg.validate();
    Catalog c;
    c.decks = std::move(decks);
    c.dictionaries = std::move(dicts);
    c.glyph_config = cfg;
    c.palette = Palette(c.dictionaries.products.phrases());

    c.metrics.reserve(c.decks.size());
    c.slide_metrics.reserve(c.decks.size());
    std::vector<Date> dates;
    dates.reserve(c.decks.size());
    for (std::size_t i = 0; i < c.decks.size(); ++i) {
        const auto& deck = c.decks[i];
        if (!c.index.emplace(deck.deck_id, i).second) {
            throw std::invalid_argument("duplicate deck id '" + deck.deck_id + "'");
        }
        if (deck.slides.empty()) throw std::invalid_argument("deck '" + deck.deck_id + "' has no slides");
        c.metrics.push_back(compute_deck_metrics(deck, c.dictionaries));
        auto& per_slide = c.slide_metrics.emplace_back();
        per_slide.reserve(deck.slides.size());
        for (const auto& s : deck.slides) per_slide.push_back(compute_slide_metrics(s, c.dictionaries));
        dates.push_back(deck.shared_at);
    }
    if (c.decks.empty()) return c;

    c.stats = corpus_stats(c.metrics, dates);
    c.glyphs.reserve(c.decks.size());
    c.visuals.reserve(c.decks.size());
    for (std::size_t i = 0; i < c.decks.size(); ++i) {
        c.glyphs.push_back(build_spiked_glyph(c.metrics[i], *c.stats, cfg));
        c.visuals.push_back(visual_of(c.metrics[i], depth_of(c.decks[i].shared_at, *c.stats),
                                      BalloonKind::hot_air_deck, c.palette));
    }
    return c;
}

}  // namespace skyglyphs

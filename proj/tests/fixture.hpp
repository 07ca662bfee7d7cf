#pragma once

// Six-deck corpus shared by the session, serialization and server tests.

#include <memory>
#include <string>
#include <vector>

#include "skyglyphs/catalog.hpp"

namespace fixture {

inline skyglyphs::DeckRecord deck(std::string id, std::string title, std::string by, skyglyphs::Date at,
                                  std::vector<std::string> texts) {
    skyglyphs::DeckRecord d;
    d.deck_id = std::move(id);
    d.title = std::move(title);
    d.shared_by = std::move(by);
    d.repository = "main";
    d.shared_at = at;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        d.slides.push_back({i, d.deck_id + "/" + std::to_string(i) + ".png", texts[i]});
    }
    return d;
}

inline skyglyphs::TermDictionaries dictionaries() {
    using namespace skyglyphs;
    TermDictionaries d;
    d.products = TermDictionary(TermCategory::product, {"revit", "fusion 360", "autocad"});
    d.keywords = TermDictionary(TermCategory::keyword, {"cloud", "bim"});
    d.buzzwords = TermDictionary(TermCategory::buzzword, {"synergy"});
    return d;
}

inline std::vector<skyglyphs::DeckRecord> decks() {
    std::vector<std::string> twelve;
    for (int i = 0; i < 12; ++i) twelve.push_back("part " + std::to_string(i) + " of fusion 360 tour");
    return {
        deck("a1", "Cloud Strategy", "ann", {2020, 1, 1}, {"revit on the cloud", "cloud and bim", "synergy in the cloud"}),
        deck("a2", "Fusion Tour", "ann", {2019, 6, 1}, twelve),
        deck("b1", "Drafting Basics", "bob", {2018, 1, 1}, {"autocad drawing"}),
        deck("b2", "BIM Handbook", "bob", {2017, 1, 1}, {"revit bim", "revit"}),
        deck("c1", "Quarterly Update", "cat", {2016, 1, 1}, {"q1", "q2", "q3", "q4", "summary"}),
        deck("c2", "Cloud Hype", "cat", {2015, 1, 1}, {"cloud cloud synergy", "a", "b", "c"}),
    };
}

inline std::shared_ptr<const skyglyphs::Catalog> catalog() {
    return std::make_shared<const skyglyphs::Catalog>(skyglyphs::build_catalog(decks(), dictionaries()));
}

}  // namespace fixture

#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skyglyphs/corpus.hpp"
#include "skyglyphs/random.hpp"

namespace skyglyphs {

/// Parameters for a reproducible fake deck repository.
struct SyntheticSpec {
    std::size_t n_decks = 50;
    std::size_t n_slides_total = 500;  // must be >= n_decks
    std::uint64_t seed = 7;
    std::vector<std::string> products{"fusion 360", "revit", "autocad", "maya", "inventor", "navisworks"};
    std::vector<std::string> keywords{"cloud", "bim", "generative design", "digital twin", "workflow",
                                      "simulation", "interoperability"};
    std::vector<std::string> buzzwords{"synergy", "paradigm shift", "disruptive", "best in class",
                                       "game changer"};
    std::size_t n_sharers = 12;
    Date date_min{2015, 1, 1};
    Date date_max{2020, 12, 31};
    std::size_t min_words_per_slide = 4;
    std::size_t max_words_per_slide = 40;
    double mention_rate = 0.08;  // chance that a filler slot becomes a dictionary phrase
};

namespace detail {

inline const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> words{
        "the",     "team",   "project", "update",  "quarter", "customer", "design", "review", "plan",
        "roadmap", "launch", "data",    "results", "market",  "strategy", "demo",   "goals",  "next",
        "steps",   "build",  "users",   "growth",  "budget",  "summary",  "status", "risk",   "and",
        "for",     "with",   "our",     "new",     "model",   "feature",  "sprint", "report", "2019"};
    return words;
}

}  // namespace detail

inline TermDictionaries synthetic_dictionaries(const SyntheticSpec& spec) {
    TermDictionaries d;
    for (const auto& p : spec.products) d.products.add(p);
    for (const auto& k : spec.keywords) d.keywords.add(k);
    for (const auto& b : spec.buzzwords) d.buzzwords.add(b);
    return d;
}

inline std::vector<DeckRecord> synthetic_corpus(const SyntheticSpec& spec) {
    if (spec.n_slides_total < spec.n_decks) {
        throw std::invalid_argument("synthetic_corpus: fewer slides than decks");
    }
    SplitMix64 rng(spec.seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng.next() % n); };

    // Heavy-tailed slide counts that sum exactly to n_slides_total.
    std::vector<double> weights(spec.n_decks);
    double weight_sum = 0;
    for (auto& w : weights) {
        double u = rng.uniform(0.05, 1.0);
        w = u * u * u;
        weight_sum += w;
    }
    std::vector<std::size_t> counts(spec.n_decks, 1);
    std::size_t extra = spec.n_slides_total - spec.n_decks;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < spec.n_decks; ++i) {
        auto share = static_cast<std::size_t>(static_cast<double>(extra) * weights[i] / weight_sum);
        counts[i] += share;
        assigned += share;
    }
    for (; assigned < extra; ++assigned) ++counts[pick(spec.n_decks)];

    std::vector<std::vector<std::string>> vocab{spec.products, spec.keywords, spec.buzzwords};
    const auto& filler = detail::filler_words();
    const long span = spec.date_max.days_since(spec.date_min);

    std::vector<DeckRecord> decks;
    decks.reserve(spec.n_decks);
    for (std::size_t i = 0; i < spec.n_decks; ++i) {
        DeckRecord d;
        char id[32];
        std::snprintf(id, sizeof id, "deck-%05zu", i);
        d.deck_id = id;
        d.title = filler[pick(filler.size())] + " " + filler[pick(filler.size())] + " " + std::to_string(i);
        d.shared_by = "person-" + std::to_string(pick(spec.n_sharers));
        d.repository = "repo-" + std::to_string(pick(4));
        long offset = span > 0 ? static_cast<long>(pick(static_cast<std::size_t>(span) + 1)) : 0;
        d.shared_at = Date{spec.date_min.days() + std::chrono::days{offset}};
        d.slides.reserve(counts[i]);
        for (std::size_t s = 0; s < counts[i]; ++s) {
            SlideRecord slide;
            slide.slide_index = s;
            slide.image_ref = d.deck_id + "/slide-" + std::to_string(s) + ".png";
            std::size_t words = spec.min_words_per_slide +
                                pick(spec.max_words_per_slide - spec.min_words_per_slide + 1);
            for (std::size_t w = 0; w < words; ++w) {
                if (!slide.text.empty()) slide.text.push_back(' ');
                const auto& category = vocab[pick(vocab.size())];
                if (!category.empty() && rng.uniform() < spec.mention_rate) {
                    slide.text += category[pick(category.size())];
                } else {
                    slide.text += filler[pick(filler.size())];
                }
            }
            d.slides.push_back(std::move(slide));
        }
        decks.push_back(std::move(d));
    }
    return decks;
}

/// Serializes decks in the manifest layout (JSON array form).
inline nlohmann::json manifest_json(const std::vector<DeckRecord>& decks) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : decks) {
        nlohmann::json slides = nlohmann::json::array();
        for (const auto& s : d.slides) {
            slides.push_back({{"index", s.slide_index}, {"image", s.image_ref}, {"text", s.text}});
        }
        arr.push_back({{"id", d.deck_id},
                       {"title", d.title},
                       {"shared_by", d.shared_by},
                       {"repository", d.repository},
                       {"shared_at", d.shared_at.iso()},
                       {"slides", std::move(slides)}});
    }
    return arr;
}

inline std::string dictionary_text(const std::vector<std::string>& phrases) {
    std::string out;
    for (const auto& p : phrases) out += p + "\n";
    return out;
}

}  // namespace skyglyphs

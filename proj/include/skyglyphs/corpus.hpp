#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "skyglyphs/date.hpp"

namespace skyglyphs {

using Count = std::uint64_t;
using MentionMap = std::map<std::string, Count>;

struct SlideRecord {
    std::size_t slide_index = 0;
    std::string image_ref;
    std::string text;
};

struct DeckRecord {
    std::string deck_id;
    std::string title;
    std::string shared_by;
    std::string repository;
    Date shared_at;
    std::vector<SlideRecord> slides;
};

// ---------------------------------------------------------------------------
// Tokenization

inline bool is_token_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

/// Lowercased ASCII alphanumeric runs. Every other byte (punctuation, whitespace,
/// non-ASCII) separates tokens.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (is_token_char(c)) {
            current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

inline std::size_t count_tokens(std::string_view text) {
    std::size_t n = 0;
    bool in_token = false;
    for (char c : text) {
        bool t = is_token_char(c);
        if (t && !in_token) ++n;
        in_token = t;
    }
    return n;
}

inline std::string join_tokens(std::span<const std::string> tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

/// Canonical phrase form: tokens joined by single spaces.
inline std::string normalize_phrase(std::string_view phrase) {
    auto tokens = tokenize(phrase);
    return join_tokens(tokens);
}

// ---------------------------------------------------------------------------
// Dictionaries

enum class TermCategory { product, keyword, buzzword };

inline std::string_view to_string(TermCategory c) {
    switch (c) {
        case TermCategory::product: return "product";
        case TermCategory::keyword: return "keyword";
        case TermCategory::buzzword: return "buzzword";
    }
    return "unknown";
}

inline constexpr std::size_t kMaxPhraseTokens = 5;

class TermDictionary {
public:
    TermDictionary() = default;
    explicit TermDictionary(TermCategory category) : category_(category) {}

    /// Phrases are normalized on entry. Duplicates collapse; empty phrases and
    /// phrases longer than five tokens are rejected.
    TermDictionary(TermCategory category, std::initializer_list<std::string_view> phrases)
        : category_(category) {
        for (auto p : phrases) add(p);
    }

    /// Returns false when the phrase was already present.
    bool add(std::string_view phrase) {
        auto tokens = tokenize(phrase);
        if (tokens.empty()) {
            throw std::invalid_argument("dictionary phrase is empty: '" + std::string(phrase) + "'");
        }
        if (tokens.size() > kMaxPhraseTokens) {
            throw std::invalid_argument("dictionary phrase has more than 5 tokens: '" +
                                        std::string(phrase) + "'");
        }
        auto normalized = join_tokens(tokens);
        if (!phrases_.insert(normalized).second) return false;
        if (by_length_.size() < tokens.size()) by_length_.resize(tokens.size());
        by_length_[tokens.size() - 1].insert(std::move(normalized));
        return true;
    }

    [[nodiscard]] TermCategory category() const { return category_; }
    [[nodiscard]] const std::set<std::string>& phrases() const { return phrases_; }
    [[nodiscard]] bool contains(const std::string& normalized) const {
        return phrases_.contains(normalized);
    }
    [[nodiscard]] std::size_t size() const { return phrases_.size(); }
    [[nodiscard]] bool empty() const { return phrases_.empty(); }
    [[nodiscard]] std::size_t max_tokens() const { return by_length_.size(); }

    [[nodiscard]] bool contains_window(std::size_t length, const std::string& joined) const {
        return length >= 1 && length <= by_length_.size() && by_length_[length - 1].contains(joined);
    }

private:
    TermCategory category_ = TermCategory::keyword;
    std::set<std::string> phrases_;
    std::vector<std::unordered_set<std::string>> by_length_;
};

struct TermDictionaries {
    TermDictionary products{TermCategory::product};
    TermDictionary keywords{TermCategory::keyword};
    TermDictionary buzzwords{TermCategory::buzzword};
};

// ---------------------------------------------------------------------------
// Mention extraction

/// Counts non-overlapping phrase occurrences over an already tokenized text.
///
/// Longer phrases claim tokens first; among equal lengths the leftmost window
/// wins. A token consumed by one match never contributes to another.
inline void extract_mentions_into(std::span<const std::string> tokens, const TermDictionary& dict,
                                  MentionMap& out) {
    if (tokens.empty() || dict.empty()) return;
    std::vector<char> consumed(tokens.size(), 0);
    std::string window;
    for (std::size_t len = std::min(dict.max_tokens(), tokens.size()); len >= 1; --len) {
        for (std::size_t i = 0; i + len <= tokens.size();) {
            bool free = true;
            for (std::size_t k = i; k < i + len; ++k) {
                if (consumed[k]) {
                    free = false;
                    break;
                }
            }
            if (free) {
                window.clear();
                for (std::size_t k = i; k < i + len; ++k) {
                    if (k != i) window.push_back(' ');
                    window += tokens[k];
                }
                if (dict.contains_window(len, window)) {
                    ++out[window];
                    std::fill(consumed.begin() + static_cast<std::ptrdiff_t>(i),
                              consumed.begin() + static_cast<std::ptrdiff_t>(i + len), 1);
                    i += len;
                    continue;
                }
            }
            ++i;
        }
    }
}

inline MentionMap extract_mentions(std::string_view text, const TermDictionary& dict) {
    MentionMap out;
    auto tokens = tokenize(text);
    extract_mentions_into(tokens, dict, out);
    return out;
}

// ---------------------------------------------------------------------------
// Metrics

/// The four glyph axes, numbered in glyph axis order.
enum class Axis : std::size_t { slides = 0, words = 1, buzzwords = 2, keywords = 3 };
inline constexpr std::size_t kAxisCount = 4;
inline constexpr std::array<Axis, kAxisCount> kAxisOrder{Axis::slides, Axis::words, Axis::buzzwords,
                                                         Axis::keywords};

inline std::string_view to_string(Axis a) {
    switch (a) {
        case Axis::slides: return "n_slides";
        case Axis::words: return "n_words";
        case Axis::buzzwords: return "n_buzzwords";
        case Axis::keywords: return "n_keywords";
    }
    return "unknown";
}

using AxisValues = std::array<Count, kAxisCount>;

struct DeckMetrics {
    Count n_slides = 0;
    Count n_words = 0;
    Count n_keywords = 0;
    Count n_buzzwords = 0;
    MentionMap product_mentions;
    MentionMap keyword_mentions;
    MentionMap buzzword_mentions;
    std::optional<std::string> dominant_product;

    [[nodiscard]] Count axis_value(Axis a) const {
        switch (a) {
            case Axis::slides: return n_slides;
            case Axis::words: return n_words;
            case Axis::buzzwords: return n_buzzwords;
            case Axis::keywords: return n_keywords;
        }
        return 0;
    }

    [[nodiscard]] AxisValues axis_values() const {
        return {n_slides, n_words, n_buzzwords, n_keywords};
    }

    [[nodiscard]] bool mentions_term(const std::string& term) const {
        return keyword_mentions.contains(term) || buzzword_mentions.contains(term);
    }

    friend bool operator==(const DeckMetrics&, const DeckMetrics&) = default;
};

inline Count sum_counts(const MentionMap& m) {
    Count total = 0;
    for (const auto& [_, c] : m) total += c;
    return total;
}

/// Highest count wins; ties go to the lexicographically smallest name.
inline std::optional<std::string> dominant_of(const MentionMap& mentions) {
    std::optional<std::string> best;
    Count best_count = 0;
    for (const auto& [name, count] : mentions) {  // ascending name order
        if (!best || count > best_count) {
            best = name;
            best_count = count;
        }
    }
    return best;
}

namespace detail {

inline void accumulate_slide(std::string_view text, const TermDictionaries& dicts, DeckMetrics& m) {
    auto tokens = tokenize(text);
    m.n_words += tokens.size();
    extract_mentions_into(tokens, dicts.products, m.product_mentions);
    extract_mentions_into(tokens, dicts.keywords, m.keyword_mentions);
    extract_mentions_into(tokens, dicts.buzzwords, m.buzzword_mentions);
}

inline void finish_metrics(DeckMetrics& m) {
    m.n_keywords = sum_counts(m.keyword_mentions);
    m.n_buzzwords = sum_counts(m.buzzword_mentions);
    m.dominant_product = dominant_of(m.product_mentions);
}

}  // namespace detail

/// Mentions are extracted slide by slide and summed, so a phrase never spans a
/// slide boundary.
inline DeckMetrics compute_deck_metrics(const DeckRecord& deck, const TermDictionaries& dicts) {
    DeckMetrics m;
    m.n_slides = deck.slides.size();
    for (const auto& slide : deck.slides) detail::accumulate_slide(slide.text, dicts, m);
    detail::finish_metrics(m);
    return m;
}

/// Metrics of a single slide, used for the simple-balloon glyph (slides axis fixed at 1).
inline DeckMetrics compute_slide_metrics(const SlideRecord& slide, const TermDictionaries& dicts) {
    DeckMetrics m;
    m.n_slides = 1;
    detail::accumulate_slide(slide.text, dicts, m);
    detail::finish_metrics(m);
    return m;
}

// ---------------------------------------------------------------------------
// Corpus statistics

struct CorpusStats {
    AxisValues axis_max{};
    Date date_min;
    Date date_max;
    std::size_t n_decks = 0;
    std::size_t n_slides_total = 0;

    [[nodiscard]] Count max_of(Axis a) const { return axis_max[static_cast<std::size_t>(a)]; }

    friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// `metrics[i]` pairs with `dates[i]`.
inline CorpusStats corpus_stats(std::span<const DeckMetrics> metrics, std::span<const Date> dates) {
    if (metrics.empty()) throw std::invalid_argument("corpus_stats: empty corpus");
    if (metrics.size() != dates.size()) {
        throw std::invalid_argument("corpus_stats: metrics and dates differ in length");
    }
    CorpusStats s;
    s.n_decks = metrics.size();
    s.date_min = s.date_max = dates.front();
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        for (Axis a : kAxisOrder) {
            auto& slot = s.axis_max[static_cast<std::size_t>(a)];
            slot = std::max(slot, metrics[i].axis_value(a));
        }
        s.n_slides_total += metrics[i].n_slides;
        s.date_min = std::min(s.date_min, dates[i]);
        s.date_max = std::max(s.date_max, dates[i]);
    }
    return s;
}

}  // namespace skyglyphs

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "skyglyphs/corpus.hpp"

namespace skyglyphs {

/// Raised for malformed manifest records. `record_index` is the 0-based
/// position of the offending deck in the manifest.
class ManifestError : public std::runtime_error {
public:
    ManifestError(std::size_t record_index, const std::string& what)
        : std::runtime_error("manifest record " + std::to_string(record_index) + ": " + what),
          record_index_(record_index) {}

    [[nodiscard]] std::size_t record_index() const { return record_index_; }

private:
    std::size_t record_index_;
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, std::size_t index) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ManifestError(index, std::string("missing field '") + key + "'");
    return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key, std::size_t index) {
    const auto& v = require(obj, key, index);
    if (!v.is_string()) throw ManifestError(index, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

inline DeckRecord parse_deck(const nlohmann::json& j, std::size_t index) {
    if (!j.is_object()) throw ManifestError(index, "record is not an object");
    DeckRecord deck;
    deck.deck_id = require_string(j, "id", index);
    if (deck.deck_id.empty()) throw ManifestError(index, "empty id");
    deck.title = require_string(j, "title", index);
    deck.shared_by = require_string(j, "shared_by", index);
    deck.repository = require_string(j, "repository", index);
    try {
        deck.shared_at = Date::parse(require_string(j, "shared_at", index));
    } catch (const std::invalid_argument& e) {
        throw ManifestError(index, e.what());
    }
    const auto& slides = require(j, "slides", index);
    if (!slides.is_array()) throw ManifestError(index, "field 'slides' must be an array");
    if (slides.empty()) throw ManifestError(index, "deck has no slides");
    deck.slides.reserve(slides.size());
    for (const auto& s : slides) {
        if (!s.is_object()) throw ManifestError(index, "slide entry is not an object");
        const auto& idx = require(s, "index", index);
        if (!idx.is_number_integer() || idx.get<long long>() < 0) {
            throw ManifestError(index, "slide index must be a non-negative integer");
        }
        SlideRecord slide;
        slide.slide_index = idx.get<std::size_t>();
        slide.image_ref = require_string(s, "image", index);
        if (auto t = s.find("text"); t != s.end() && !t->is_null()) {
            if (!t->is_string()) throw ManifestError(index, "slide text must be a string");
            slide.text = t->get<std::string>();
        }
        deck.slides.push_back(std::move(slide));
    }
    std::stable_sort(deck.slides.begin(), deck.slides.end(),
                     [](const SlideRecord& a, const SlideRecord& b) { return a.slide_index < b.slide_index; });
    for (std::size_t i = 0; i < deck.slides.size(); ++i) {
        if (deck.slides[i].slide_index != i) {
            throw ManifestError(index, "slide indices are not contiguous from 0");
        }
    }
    return deck;
}

}  // namespace detail

/// Parses manifest text: either a JSON array of deck objects or one deck object
/// per line. Output order is manifest order.
inline std::vector<DeckRecord> parse_manifest(std::string_view text) {
    std::vector<DeckRecord> decks;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return decks;

    if (text[first] == '[') {
        nlohmann::json arr;
        try {
            arr = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error(std::string("manifest is not valid JSON: ") + e.what());
        }
        decks.reserve(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i) decks.push_back(detail::parse_deck(arr[i], i));
    } else {
        std::size_t index = 0;
        std::size_t pos = 0;
        while (pos < text.size()) {
            auto end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            auto line = text.substr(pos, end - pos);
            pos = end + 1;
            if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::parse_error& e) {
                throw ManifestError(index, std::string("invalid JSON: ") + e.what());
            }
            decks.push_back(detail::parse_deck(j, index));
            ++index;
        }
    }

    std::unordered_set<std::string> seen;
    seen.reserve(decks.size());
    for (std::size_t i = 0; i < decks.size(); ++i) {
        if (!seen.insert(decks[i].deck_id).second) {
            throw ManifestError(i, "duplicate deck id '" + decks[i].deck_id + "'");
        }
    }
    return decks;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<DeckRecord> load_manifest(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw std::runtime_error("manifest not found: " + path.string());
    }
    return parse_manifest(read_file(path));
}

/// One phrase per line; blank lines and lines starting with '#' are skipped.
inline TermDictionary parse_dictionary(TermCategory category, std::string_view text) {
    TermDictionary dict(category);
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        auto start = line.find_first_not_of(" \t\r");
        if (start == std::string_view::npos || line[start] == '#') continue;
        try {
            dict.add(line);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string(to_string(category)) + " dictionary line " +
                                     std::to_string(line_no) + ": " + e.what());
        }
    }
    return dict;
}

inline TermDictionary load_dictionary(TermCategory category, const std::filesystem::path& path) {
    return parse_dictionary(category, read_file(path));
}

}  // namespace skyglyphs

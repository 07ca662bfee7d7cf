#pragma once

// Test-only reference implementations. Each one takes a deliberately naive
// route so it stays independent of the library code it checks.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "skyglyphs/corpus.hpp"
#include "skyglyphs/geometry.hpp"
#include "skyglyphs/random.hpp"

namespace oracle {

inline std::vector<std::string> words(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (c < 128 && std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

/// Enumerates every token window, ranks candidate matches by (length desc,
/// start asc) and accepts them greedily when none of their tokens is taken.
inline std::map<std::string, std::uint64_t> mentions(const std::string& text,
                                                     const std::vector<std::string>& phrases) {
    auto toks = words(text);
    std::vector<std::vector<std::string>> dict;
    for (const auto& p : phrases) {
        auto w = words(p);
        if (!w.empty() && std::find(dict.begin(), dict.end(), w) == dict.end()) dict.push_back(w);
    }
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> candidates;  // len, start, phrase
    for (std::size_t start = 0; start < toks.size(); ++start) {
        for (std::size_t p = 0; p < dict.size(); ++p) {
            const auto& phrase = dict[p];
            if (start + phrase.size() > toks.size()) continue;
            if (std::equal(phrase.begin(), phrase.end(), toks.begin() + static_cast<long>(start))) {
                candidates.emplace_back(phrase.size(), start, p);
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
    });
    std::vector<bool> taken(toks.size(), false);
    std::map<std::string, std::uint64_t> out;
    for (const auto& [len, start, p] : candidates) {
        bool free = true;
        for (std::size_t k = start; k < start + len; ++k) free = free && !taken[k];
        if (!free) continue;
        for (std::size_t k = start; k < start + len; ++k) taken[k] = true;
        std::string key;
        for (const auto& w : dict[p]) key += (key.empty() ? "" : " ") + w;
        ++out[key];
    }
    return out;
}

/// Polygon area as a fan of triangles from the origin, using |a||b|sin(theta)/2
/// per edge; valid for polygons star-shaped around the origin.
inline double fan_area(const std::vector<skyglyphs::Vec2>& poly) {
    double area = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        double ta = std::atan2(a.y, a.x);
        double tb = std::atan2(b.y, b.x);
        double dtheta = std::remainder(tb - ta, 2 * M_PI);
        area += 0.5 * std::hypot(a.x, a.y) * std::hypot(b.x, b.y) * std::sin(dtheta);
    }
    return area;
}

/// A polygon whose vertices have positive radii and strictly increasing polar
/// angle over exactly one turn is star-shaped about the origin, hence simple.
inline bool star_simple(const std::vector<skyglyphs::Vec2>& poly) {
    double turned = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        if (std::hypot(a.x, a.y) <= 0) return false;
        double step = std::remainder(std::atan2(b.y, b.x) - std::atan2(a.y, a.x), 2 * M_PI);
        if (step <= 0) return false;
        turned += step;
    }
    return std::abs(turned - 2 * M_PI) < 1e-9;
}

/// r_anchor + (R - r_anchor) * ln(1+v)/ln(1+max), written with std::log.
inline double radius(double value, double max, double r_anchor = 0.25, double r_outer = 1.0) {
    if (max == 0) return r_anchor;
    return r_anchor + (r_outer - r_anchor) * std::log(1.0 + value) / std::log(1.0 + max);
}

/// Grid cell centre for the k-th sorted item.
inline skyglyphs::Vec2 grid_cell(std::size_t k, std::size_t columns, double cell, skyglyphs::Vec2 top_left) {
    return {top_left.x + (static_cast<double>(k % columns) + 0.5) * cell,
            top_left.y + (static_cast<double>(k / columns) + 0.5) * cell};
}

}  // namespace oracle

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "fixture.hpp"
#include "oracles.hpp"
#include "skyglyphs/server.hpp"
#include "skyglyphs/synthetic.hpp"

using namespace skyglyphs;
using Clock = std::chrono::steady_clock;

namespace {

/// Collects the first failure message of a criterion.
struct Check {
    std::string failure;
    void expect(bool ok, const std::string& what) {
        if (!ok && failure.empty()) failure = what;
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void tick_until(Session& s, double t) {
    const double dt = s.config().sim.dt;
    while (s.clock() + dt < t) s.execute(cmd::Tick{s.clock() + dt});
    s.execute(cmd::Tick{t});
}

// ---------------------------------------------------------------------------

std::string glyph_non_degeneracy() {
    Check c;
    auto t0 = Clock::now();
    SplitMix64 rng(2718);
    CorpusStats stats;
    stats.axis_max = {420, 90000, 150, 300};
    const double octagon = regular_octagon_area(0.25);
    for (int i = 0; i < 10000; ++i) {
        DeckMetrics m;
        if (i > 0) {
            auto draw = [&](Count max) {
                switch (rng.next() % 4) {
                    case 0: return Count{0};
                    case 1: return max;
                    default: return static_cast<Count>(rng.next() % (max + 1));
                }
            };
            m.n_slides = draw(stats.axis_max[0]);
            m.n_words = draw(stats.axis_max[1]);
            m.n_buzzwords = draw(stats.axis_max[2]);
            m.n_keywords = draw(stats.axis_max[3]);
        }
        auto g = build_spiked_glyph(m, stats);
        std::vector<Vec2> poly(g.vertices.begin(), g.vertices.end());
        double area = signed_area(g.vertices);
        c.expect(is_simple_polygon(g.vertices) && oracle::star_simple(poly), "non-simple glyph at case " + std::to_string(i));
        c.expect(area >= octagon - 1e-12, "area below octagon at case " + std::to_string(i));
        c.expect(std::abs(area - oracle::fan_area(poly)) < 1e-9, "area mismatch at case " + std::to_string(i));
        if (i == 0) {
            c.expect(std::abs(area - octagon) < 1e-12, "all-zero glyph is not the anchor octagon");
            for (const auto& v : poly) c.expect(std::abs(length(v) - 0.25) < 1e-12, "all-zero vertex off radius");
        }
    }
    double elapsed = seconds_since(t0);
    c.expect(elapsed < 5.0, "took " + fmt(elapsed) + " s");
    return c.failure;
}

std::string log_scale_exactness() {
    Check c;
    c.expect(std::abs(axis_radius(0, 500) - 0.25) <= 1e-9, "radius(0) != 0.25");
    c.expect(std::abs(axis_radius(500, 500) - 1.0) <= 1e-9, "radius(max) != 1");
    c.expect(std::abs(axis_radius(3, 7) - 0.75) <= 1e-9, "radius(3,7) = " + fmt(axis_radius(3, 7)));
    SplitMix64 rng(1234);
    for (int i = 0; i < 1000; ++i) {
        Count max = 1 + rng.next() % 1000000;
        Count a = rng.next() % (max + 1);
        Count b = rng.next() % (max + 1);
        if (a > b) std::swap(a, b);
        double ra = axis_radius(a, max);
        double rb = axis_radius(b, max);
        c.expect(a == b ? ra == rb : ra < rb, "not monotone for " + std::to_string(a) + " < " + std::to_string(b));
        c.expect(std::abs(ra - oracle::radius(static_cast<double>(a), static_cast<double>(max))) <= 1e-9,
                 "oracle mismatch");
    }
    return c.failure;
}

std::string corpus_scale() {
    Check c;
    SyntheticSpec spec;
    spec.n_decks = 3500;
    spec.n_slides_total = 90000;
    auto dir = std::filesystem::temp_directory_path() / "skyglyphs_acceptance";
    std::filesystem::create_directories(dir);
    {
        auto decks = synthetic_corpus(spec);
        std::ofstream(dir / "manifest.json") << manifest_json(decks).dump();
        std::ofstream(dir / "products.txt") << dictionary_text(spec.products);
        std::ofstream(dir / "keywords.txt") << dictionary_text(spec.keywords);
        std::ofstream(dir / "buzzwords.txt") << dictionary_text(spec.buzzwords);
    }
    ServerConfig cfg;
    cfg.host = "127.0.0.1";
    cfg.manifest = dir / "manifest.json";
    cfg.products = dir / "products.txt";
    cfg.keywords = dir / "keywords.txt";
    cfg.buzzwords = dir / "buzzwords.txt";
    cfg.run_ticker = false;

    auto t0 = Clock::now();
    auto catalog = std::make_shared<const Catalog>(load_catalog(cfg));
    ApiServer server(catalog, cfg);
    int port = server.bind_to_any_port();
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(30, 0);
    auto res = client.Get("/corpus");
    double elapsed = seconds_since(t0);
    server.stop();
    th.join();

    c.expect(res && res->status == 200, "GET /corpus failed");
    if (res) {
        auto j = nlohmann::json::parse(res->body);
        c.expect(j["decks"].size() == 3500, "wrong deck count");
    }
    c.expect(catalog->stats && catalog->stats->n_slides_total == 90000, "wrong slide total");
    c.expect(elapsed < 10.0, "took " + fmt(elapsed) + " s");
    std::filesystem::remove_all(dir);
    return c.failure;
}

std::string extraction_equivalence() {
    Check c;
    const std::vector<std::string> vocab{"cloud", "bim", "revit", "fusion", "360", "design", "the", "a", "twin", "x"};
    SplitMix64 rng(31337);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng.next() % n); };
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::string> phrases;
        for (std::size_t p = 0, n = 1 + pick(20); p < n; ++p) {
            std::string phrase;
            for (std::size_t k = 0, len = 1 + pick(4); k < len; ++k) phrase += (k ? " " : "") + vocab[pick(vocab.size())];
            phrases.push_back(phrase);
        }
        std::string text;
        for (std::size_t k = 0, n = pick(201); k < n; ++k) {
            std::string w = vocab[pick(vocab.size())];
            if (pick(3) == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
            text += w;
            text += pick(4) == 0 ? ". " : " ";
        }
        TermDictionary dict(TermCategory::keyword);
        for (const auto& p : phrases) dict.add(p);
        auto want = oracle::mentions(text, phrases);
        if (extract_mentions(text, dict) != MentionMap(want.begin(), want.end())) ++mismatches;
    }
    c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
    return c.failure;
}

std::string sort_figure() {
    Check c;
    auto catalog = fixture::catalog();  // slide counts 3, 12, 1, 2, 5, 4
    Session s(catalog);
    auto r = s.execute(cmd::Sort{SortAttribute::n_slides, SortOrder::desc});
    c.expect(r.ok, "Sort rejected");
    const auto& v = s.engine().viewport();
    double max_r = 0;
    for (const auto& n : s.engine().nodes()) max_r = std::max(max_r, n.radius);
    const double cell = 2.2 * std::max(max_r, 1.0);
    const auto columns = static_cast<std::size_t>(std::floor(v.world_rect().width() / cell));
    // Recover the grid order from positions: row-major.
    std::vector<std::pair<Vec2, std::string>> placed;
    for (const auto& n : s.engine().nodes()) placed.emplace_back(n.position, n.id);
    std::sort(placed.begin(), placed.end(), [](const auto& a, const auto& b) {
        return a.first.y != b.first.y ? a.first.y < b.first.y : a.first.x < b.first.x;
    });
    Count prev_slides = std::numeric_limits<Count>::max();
    double prev_radius = 2.0;
    for (std::size_t k = 0; k < placed.size(); ++k) {
        auto deck = catalog->at(placed[k].second);
        Count slides = catalog->metrics[deck].n_slides;
        double spike = catalog->glyphs[deck].radius_of(Axis::slides);
        c.expect(slides < prev_slides, "slide counts not strictly decreasing at " + placed[k].second);
        c.expect(spike <= prev_radius, "top spike grows at " + placed[k].second);
        prev_slides = slides;
        prev_radius = spike;
        Vec2 want = oracle::grid_cell(k, columns, cell, v.world_rect().min);
        c.expect(distance(placed[k].first, want) < 1e-9, "position off grid for " + placed[k].second);
    }
    c.expect(placed.size() == 6, "expected six decks");
    return c.failure;
}

std::string layout_determinism() {
    Check c;
    SyntheticSpec spec;
    spec.n_decks = 80;
    spec.n_slides_total = 600;
    auto catalog = std::make_shared<const Catalog>(build_catalog(synthetic_corpus(spec), synthetic_dictionaries(spec)));
    auto run = [&] {
        SessionConfig cfg;
        cfg.sim.seed = 20240601;
        Session s(catalog, cfg);
        std::vector<std::pair<int, Command>> script{
            {100, cmd::ClusterBy{AnchorType::term, "cloud"}},
            {300, cmd::PressStart{"deck-00003"}},
            {500, cmd::Drag{"deck-00010", {0, 0}}},
            {700, cmd::ClusterBy{AnchorType::product, "revit"}},
            {900, cmd::Sort{SortAttribute::n_words, SortOrder::desc}},
            {1100, cmd::ClearSort{}},
            {1300, cmd::EnterOverview{}},
            {1500, cmd::LeaveOverview{}},
            {1700, cmd::RestoreDeck{"deck-00003"}},
        };
        std::vector<std::string> frames;
        frames.reserve(2000);
        std::size_t next = 0;
        for (int t = 1; t <= 2000; ++t) {
            while (next < script.size() && script[next].first == t) s.execute(script[next++].second);
            s.execute(cmd::Tick{t * cfg.sim.dt});
            frames.push_back(to_json(s.frame()).dump());
        }
        return frames;
    };
    auto a = run();
    auto b = run();
    std::size_t diverged = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diverged += a[i] != b[i];
    c.expect(a.size() == 2000, "wrong frame count");
    c.expect(diverged == 0, std::to_string(diverged) + " frames differ");
    return c.failure;
}

std::string collision() {
    Check c;
    SimConfig cfg;
    cfg.seed = 8;
    LayoutEngine e(cfg);
    std::vector<LayoutNode> nodes(200);
    SplitMix64 rng(5);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        nodes[i].id = "n" + std::to_string(i);
        nodes[i].radius = rng.uniform(4.0, 16.0);
    }
    e.initialize(std::move(nodes), Rect{{0, 0}, {500, 500}});
    for (int t = 0; t < 1000; ++t) e.step();
    double overlap = max_relative_overlap(e.nodes());
    c.expect(overlap <= 0.005, "max overlap " + fmt(overlap * 100) + "% of smaller radius");
    return c.failure;
}

std::string cluster_semantics() {
    Check c;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        SyntheticSpec spec;
        spec.seed = seed;
        spec.n_decks = 60;
        spec.n_slides_total = 400;
        spec.n_sharers = 5;
        auto catalog =
            std::make_shared<const Catalog>(build_catalog(synthetic_corpus(spec), synthetic_dictionaries(spec)));
        SessionConfig cfg;
        cfg.sim.seed = seed;
        Session s(catalog, cfg);
        std::vector<std::pair<AnchorType, std::string>> queries{
            {AnchorType::shared_by, "person-1"}, {AnchorType::product, "fusion 360"}, {AnchorType::term, "synergy"}};
        for (const auto& [type, key] : queries) {
            std::vector<std::string> expected;
            for (std::size_t i = 0; i < catalog->size(); ++i) {
                const auto& d = catalog->decks[i];
                // Brute force over raw slide text rather than stored metrics.
                bool hit = false;
                if (type == AnchorType::shared_by) {
                    hit = d.shared_by == key;
                } else {
                    const auto& dict = type == AnchorType::product ? spec.products : spec.buzzwords;
                    for (const auto& slide : d.slides) {
                        if (oracle::mentions(slide.text, dict).count(key)) hit = true;
                    }
                }
                if (hit) expected.push_back(d.deck_id);
            }
            std::sort(expected.begin(), expected.end());
            auto r = s.execute(cmd::ClusterBy{type, key});
            if (expected.empty()) {
                c.expect(!r.ok, "empty cluster accepted");
                continue;
            }
            c.expect(r.ok && r.cluster_id, "ClusterBy rejected: " + r.message);
            if (!r.ok) continue;
            c.expect(s.hover_query(*r.cluster_id) == expected, "membership mismatch for " + key);

            // Converge with this cluster alone, then check containment.
            for (int t = 0; t < 1500; ++t) s.execute(cmd::Tick{s.clock() + cfg.sim.dt});
            const auto& anchor = s.cluster(*r.cluster_id);
            auto id = std::stoull(r.cluster_id->substr(1));
            double rho = s.engine().containment_radius(id);
            for (const auto& m : expected) {
                double d = distance(s.engine().node(m).position, anchor.position);
                c.expect(d <= rho, key + ": " + m + " at " + fmt(d) + " > rho " + fmt(rho));
            }
            s.execute(cmd::RemoveCluster{*r.cluster_id});
        }
    }
    return c.failure;
}

std::string overview_persistence() {
    Check c;
    auto catalog = fixture::catalog();
    Session s(catalog);
    tick_until(s, 1.0);
    auto positions = [&] {
        std::vector<Vec2> out;
        for (const auto& n : s.engine().nodes()) out.push_back(n.position);
        return out;
    };
    Viewport v0 = s.engine().viewport();
    auto before = positions();
    s.execute(cmd::EnterOverview{});
    c.expect(s.engine().mode() == LayoutMode::overview, "overview not entered");
    s.execute(cmd::LeaveOverview{});
    c.expect(positions() == before, "enter/leave moved nodes");
    c.expect(s.engine().viewport() == v0, "viewport not restored");

    s.execute(cmd::EnterOverview{});
    auto r = s.execute(cmd::ClusterBy{AnchorType::term, "cloud"});
    c.expect(r.ok, "cluster in overview rejected");
    tick_until(s, 3.0);
    auto in_overview = positions();
    s.execute(cmd::LeaveOverview{});
    c.expect(positions() == in_overview, "leaving overview moved nodes");
    c.expect(r.ok && s.clusters().size() == 1 && s.cluster(*r.cluster_id).key == "cloud", "cluster lost");
    c.expect(s.engine().viewport() == v0, "viewport not restored after cluster");
    return c.failure;
}

std::string pop_and_collections() {
    Check c;
    auto catalog = fixture::catalog();
    Session s(catalog);
    auto slide_count = [&] {
        std::size_t n = 0;
        for (const auto& node : s.engine().nodes()) n += node.kind == NodeKind::slide;
        return n;
    };
    const auto all = s.visible_node_ids();

    s.execute(cmd::PressStart{"a2"});
    tick_until(s, 0.2);
    s.execute(cmd::PressEnd{"a2"});
    tick_until(s, 2.0);
    c.expect(s.pop_phase("a2") == PopPhase::idle && slide_count() == 0, "short press spawned slides");

    double t = s.clock();
    s.execute(cmd::PressStart{"a2"});
    tick_until(s, t + 1.6);
    s.execute(cmd::PressEnd{"a2"});
    c.expect(s.pop_phase("a2") == PopPhase::popped, "long press did not pop");
    c.expect(slide_count() == 12, "expected 12 slides, got " + std::to_string(slide_count()));
    c.expect(s.engine().node("a2").hidden, "popped deck still visible");
    for (int k = 0; k < 12; ++k) c.expect(!s.engine().node("a2#" + std::to_string(k)).hidden, "slide hidden");
    s.execute(cmd::RestoreDeck{"a2"});
    c.expect(slide_count() == 0 && s.visible_node_ids() == all, "restore is not the inverse of pop");

    auto r = s.execute(cmd::ClusterBy{AnchorType::shared_by, "bob"});
    s.execute(cmd::AddToCollection{{ItemKind::deck, "c1"}});
    s.execute(cmd::AddToCollection{{ItemKind::cluster, *r.cluster_id}});
    s.execute(cmd::AddToCollection{{ItemKind::deck, "c1"}});
    c.expect(s.collection().size() == 2, "duplicate collection entry");
    s.execute(cmd::ToggleCollectionFilter{});
    c.expect(s.visible_node_ids() == std::set<std::string>{"b1", "b2", "c1"}, "filter shows wrong set");
    s.execute(cmd::ToggleCollectionFilter{});
    c.expect(s.visible_node_ids() == all, "unfilter did not restore");
    s.execute(cmd::ClearCollection{});
    c.expect(s.collection().empty(), "clear left items");
    s.execute(cmd::ToggleCollectionFilter{});
    c.expect(s.visible_node_ids().empty(), "empty filter shows nodes");
    s.execute(cmd::ToggleCollectionFilter{});
    c.expect(s.visible_node_ids() == all, "toggle back did not restore");
    return c.failure;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<std::string()>>> criteria{
        {"glyph non-degeneracy (10,000 vectors)", glyph_non_degeneracy},
        {"log-scale exactness and monotonicity", log_scale_exactness},
        {"corpus scale (3,500 decks / 90,000 slides)", corpus_scale},
        {"extraction oracle equivalence (1,000 cases)", extraction_equivalence},
        {"sort figure reproduction", sort_figure},
        {"layout determinism (2,000 ticks)", layout_determinism},
        {"collision overlap after 1,000 ticks", collision},
        {"cluster semantics", cluster_semantics},
        {"overview persistence", overview_persistence},
        {"pop state machine and collections", pop_and_collections},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        auto t0 = Clock::now();
        std::string failure;
        try {
            failure = fn();
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        double elapsed = seconds_since(t0);
        if (failure.empty()) {
            std::printf("PASS  %s  (%.2f s)\n", name, elapsed);
        } else {
            ++failed;
            std::printf("FAIL  %s  (%.2f s): %s\n", name, elapsed, failure.c_str());
        }
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

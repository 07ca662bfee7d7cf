#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"
#include "skyglyphs/layout.hpp"

using namespace skyglyphs;

namespace {

std::vector<LayoutNode> make_nodes(std::size_t n, double radius) {
    std::vector<LayoutNode> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "n%03zu", i);
        nodes[i].id = id;
        nodes[i].radius = radius;
    }
    return nodes;
}

std::vector<std::string> ids_of(const std::vector<LayoutNode>& nodes) {
    std::vector<std::string> out;
    for (const auto& n : nodes) out.push_back(n.id);
    return out;
}

}  // namespace

TEST(SimConfig, RejectsOutOfRangeValues) {
    SimConfig c;
    c.damping = 1.0;
    EXPECT_THROW(LayoutEngine{c}, std::invalid_argument);
    c = {};
    c.collision_iterations = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(InitLayout, SeededAndInsideBounds) {
    auto a = make_nodes(50, 1.0);
    auto b = make_nodes(50, 1.0);
    SimConfig cfg;
    cfg.init_relax_steps = 0;
    Rect bounds{{0, 0}, {100, 100}};
    auto pa = init_layout(a, bounds, 5, cfg);
    auto pb = init_layout(b, bounds, 5, cfg);
    EXPECT_EQ(pa, pb);
    for (const auto& p : pa) EXPECT_TRUE(bounds.contains(p));
    auto c = make_nodes(50, 1.0);
    EXPECT_NE(init_layout(c, bounds, 6, cfg), pa);
    EXPECT_THROW(init_layout(c, Rect{{0, 0}, {0, 10}}, 1), std::invalid_argument);
}

TEST(InitLayout, RelaxationRemovesOverlap) {
    auto nodes = make_nodes(100, 5.0);
    init_layout(nodes, Rect{{0, 0}, {200, 200}}, 3);
    EXPECT_LT(max_relative_overlap(nodes), 0.005);
}

TEST(Engine, IdenticalSeedsGiveIdenticalTrajectories) {
    SimConfig cfg;
    cfg.seed = 42;
    LayoutEngine a(cfg), b(cfg);
    a.initialize(make_nodes(40, 3.0), Rect{{0, 0}, {150, 150}});
    b.initialize(make_nodes(40, 3.0), Rect{{0, 0}, {150, 150}});
    std::vector<std::string> half;
    for (std::size_t i = 0; i < 20; ++i) half.push_back(a.nodes()[i].id);
    a.apply_cluster(AnchorType::term, "x", half);
    b.apply_cluster(AnchorType::term, "x", half);
    for (int t = 0; t < 500; ++t) {
        a.step();
        b.step();
    }
    for (std::size_t i = 0; i < a.nodes().size(); ++i) {
        EXPECT_EQ(a.nodes()[i].position, b.nodes()[i].position);
    }
}

TEST(Engine, FloatDriftStaysBounded) {
    LayoutEngine e;
    e.initialize(make_nodes(1, 10.0), Rect{{0, 0}, {10, 10}});
    Vec2 start = e.nodes()[0].position;
    double worst = 0;
    double moved = 0;
    for (int t = 0; t < 6000; ++t) {
        e.step();
        worst = std::max(worst, distance(e.nodes()[0].position, start));
        moved = std::max(moved, e.last_max_displacement());
    }
    EXPECT_LE(worst, 20.0);
    EXPECT_GT(worst, 0.5);  // balloons do visibly drift
    EXPECT_LT(moved, 1.0);
}

TEST(Engine, CollisionOverlapStaysSmall) {
    SimConfig cfg;
    cfg.seed = 9;
    LayoutEngine e(cfg);
    e.initialize(make_nodes(200, 10.0), Rect{{0, 0}, {400, 400}});
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        e.step();
        worst = std::max(worst, max_relative_overlap(e.nodes()));
    }
    EXPECT_LE(worst, 0.005);
}

TEST(Engine, PinnedAndHeldNodesDoNotMove) {
    LayoutEngine e;
    e.initialize(make_nodes(30, 4.0), Rect{{0, 0}, {60, 60}});
    e.pin("n000");
    Vec2 pinned = e.node("n000").position;
    e.apply_cluster(AnchorType::term, "k", ids_of(e.nodes()));
    for (int t = 0; t < 300; ++t) e.step();
    EXPECT_EQ(e.node("n000").position, pinned);

    e.drag("n001", {500, 500});
    e.step();
    EXPECT_EQ(e.node("n001").position, (Vec2{500, 500}));
    EXPECT_FALSE(e.node("n001").held);  // released after one tick
    e.unpin("n000");
    for (int t = 0; t < 50; ++t) e.step();
    EXPECT_NE(e.node("n000").position, pinned);
}

TEST(Clusters, MembersConvergeInsideContainmentRadius) {
    SimConfig cfg;
    cfg.seed = 11;
    LayoutEngine e(cfg);
    e.initialize(make_nodes(60, 5.0), Rect{{0, 0}, {600, 600}});
    std::vector<std::string> members;
    for (std::size_t i = 0; i < 15; ++i) members.push_back(e.nodes()[i].id);
    auto id = e.apply_cluster(AnchorType::product, "revit", members);
    EXPECT_EQ(e.anchors().at(id).label(), "c" + std::to_string(id));
    EXPECT_EQ(e.hover_query(id), members);
    EXPECT_DOUBLE_EQ(e.containment_radius(id), std::max(25.0, std::sqrt(2.0 * 15 * 25)));
    Vec2 anchor = e.anchors().at(id).position;
    for (int t = 0; t < 1200; ++t) e.step();
    for (const auto& m : members) {
        EXPECT_LE(distance(e.node(m).position, anchor), e.containment_radius(id) + 2.0) << m;
    }
    EXPECT_EQ(e.anchors().at(id).position, anchor);  // anchors do not move
}

TEST(Clusters, LargeClusterWidensContainment) {
    LayoutEngine e;
    e.initialize(make_nodes(100, 5.0), Rect{{0, 0}, {600, 600}});
    auto id = e.apply_cluster(AnchorType::term, "all", ids_of(e.nodes()));
    EXPECT_NEAR(e.containment_radius(id), std::sqrt(2.0 * 100 * 25), 1e-9);
    Vec2 anchor = e.anchors().at(id).position;
    for (int t = 0; t < 1500; ++t) e.step();
    for (const auto& n : e.nodes()) EXPECT_LE(distance(n.position, anchor), e.containment_radius(id) + 2.0);
}

TEST(Clusters, AnchorAtCentroidAndRemovalDetaches) {
    LayoutEngine e;
    e.initialize(make_nodes(4, 1.0), Rect{{0, 0}, {100, 100}});
    Vec2 sum;
    for (const auto& n : e.nodes()) sum += n.position;
    auto id = e.apply_cluster(AnchorType::shared_by, "ann", ids_of(e.nodes()));
    Vec2 c = e.anchors().at(id).position;
    EXPECT_NEAR(c.x, sum.x / 4, 1e-12);
    EXPECT_NEAR(c.y, sum.y / 4, 1e-12);
    auto id2 = e.apply_cluster(AnchorType::term, "x", {"n000"});
    EXPECT_EQ(e.node("n000").cluster_memberships, (std::vector<std::uint64_t>{id, id2}));
    e.remove_cluster(id);
    EXPECT_EQ(e.node("n000").cluster_memberships, std::vector<std::uint64_t>{id2});
    EXPECT_TRUE(e.node("n001").cluster_memberships.empty());
    EXPECT_THROW(e.remove_cluster(id), std::out_of_range);
    EXPECT_THROW(e.apply_cluster(AnchorType::term, "none", {}), std::invalid_argument);
}

TEST(Clusters, ConvergesFromFreshLayout) {
    SimConfig cfg;
    cfg.float_amplitude = 0;
    LayoutEngine e(cfg);
    e.initialize(make_nodes(20, 3.0), Rect{{0, 0}, {300, 300}});
    e.apply_cluster(AnchorType::term, "t", ids_of(e.nodes()));
    auto ticks = e.run_until_converged(5000);
    ASSERT_TRUE(ticks.has_value());
    EXPECT_GT(*ticks, 1u);
}

TEST(SortGrid, TwentyFiveItemsInTenColumns) {
    Viewport v;
    v.width = 100;
    v.height = 60;
    std::vector<SortItem> items;
    for (int i = 0; i < 25; ++i) items.push_back({"d" + std::to_string(100 + i), static_cast<double>(i)});
    auto placements = sort_layout(items, SortOrder::asc, v, 10.0);
    ASSERT_EQ(placements.size(), 25u);
    std::map<std::size_t, std::size_t> per_row;
    for (const auto& p : placements) ++per_row[p.row];
    EXPECT_EQ(per_row, (std::map<std::size_t, std::size_t>{{0, 10}, {1, 10}, {2, 5}}));
    Vec2 top_left = v.world_rect().min;
    for (std::size_t k = 0; k < placements.size(); ++k) {
        EXPECT_EQ(placements[k].id, "d" + std::to_string(100 + k));
        Vec2 want = oracle::grid_cell(k, 10, 10.0, top_left);
        EXPECT_NEAR(placements[k].position.x, want.x, 1e-12);
        EXPECT_NEAR(placements[k].position.y, want.y, 1e-12);
    }
}

TEST(SortGrid, DescendingWithIdTieBreak) {
    Viewport v;
    v.width = 30;
    v.height = 30;
    auto p = sort_layout({{"b", 1}, {"a", 1}, {"c", 5}}, SortOrder::desc, v, 10.0);
    EXPECT_EQ(p[0].id, "c");
    EXPECT_EQ(p[1].id, "a");
    EXPECT_EQ(p[2].id, "b");
    EXPECT_THROW(sort_layout({}, SortOrder::asc, v, 0.0), std::invalid_argument);
}

TEST(SortGrid, NarrowViewportStillHasOneColumn) {
    Viewport v;
    v.width = 5;
    v.height = 5;
    auto p = sort_layout({{"a", 1}, {"b", 2}}, SortOrder::asc, v, 10.0);
    EXPECT_EQ(p[1].row, 1u);
    EXPECT_EQ(p[1].column, 0u);
}

TEST(SortGrid, EngineParksNodesAndSkipsPinned) {
    LayoutEngine e;
    e.initialize(make_nodes(5, 2.0), Rect{{0, 0}, {50, 50}});
    e.pin("n004");
    Vec2 pinned = e.node("n004").position;
    std::vector<SortItem> items;
    for (const auto& n : e.nodes()) items.push_back({n.id, -n.position.x});
    auto placements = e.apply_sort(items, SortOrder::asc);
    EXPECT_EQ(placements.size(), 4u);
    EXPECT_EQ(e.mode(), LayoutMode::sorted);
    for (int t = 0; t < 100; ++t) e.step();
    for (const auto& p : placements) EXPECT_EQ(e.node(p.id).position, p.position);
    EXPECT_EQ(e.node("n004").position, pinned);
    e.clear_sort();
    EXPECT_EQ(e.mode(), LayoutMode::detail);
}

TEST(Overview, FitsBoundingBoxAndRestores) {
    LayoutEngine e;
    auto nodes = make_nodes(2, 1.0);
    e.initialize(nodes, Rect{{0, 0}, {1, 1}});
    e.drag("n000", {1, 1});
    e.drag("n001", {1999, 999});
    Viewport v;
    v.width = 1000;
    v.height = 500;
    v.centre = {10, 10};
    v.zoom = 3;
    e.set_viewport(v);
    auto before = e.nodes();
    e.overview_transform(true);
    EXPECT_EQ(e.mode(), LayoutMode::overview);
    EXPECT_NEAR(e.viewport().zoom, 1.0 / 2.2, 1e-12);
    EXPECT_NEAR(e.viewport().centre.x, 1000, 1e-9);
    EXPECT_NEAR(e.viewport().centre.y, 500, 1e-9);
    e.overview_transform(true);  // idempotent
    e.overview_transform(false);
    EXPECT_EQ(e.viewport(), v);
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_EQ(e.nodes()[i].position, before[i].position);
}

TEST(Minimap, CoversNodesAndView) {
    std::vector<LayoutNode> nodes = make_nodes(2, 1.0);
    nodes[0].position = {-99, 0};
    nodes[1].position = {99, 0};
    Viewport v;
    v.width = 20;
    v.height = 20;
    auto m = minimap_view(nodes, v, 200, 100);
    EXPECT_NEAR(m.extent.width(), 200, 1e-12);
    EXPECT_NEAR(m.extent.height(), 20, 1e-12);
    EXPECT_NEAR(m.scale, 1.0, 1e-12);
    ASSERT_EQ(m.dots.size(), 2u);
    EXPECT_NEAR(m.dots[0].position.x, 1.0, 1e-12);
    EXPECT_NEAR(m.view_box.min.x, 90.0, 1e-12);
    EXPECT_NEAR(m.view_box.width(), 20.0, 1e-12);
}

TEST(Engine, AddAndRemoveNodes) {
    LayoutEngine e;
    e.initialize(make_nodes(3, 1.0), Rect{{0, 0}, {10, 10}});
    auto id = e.apply_cluster(AnchorType::bundle, "n000", {"n001", "n002"});
    LayoutNode extra;
    extra.id = "n000#0";
    extra.kind = NodeKind::slide;
    extra.position = {3, 3};
    e.add_node(extra);
    EXPECT_THROW(e.add_node(extra), std::invalid_argument);
    EXPECT_NE(e.find("n000#0"), nullptr);
    e.remove_nodes({"n001", "n000#0"});
    EXPECT_EQ(e.find("n001"), nullptr);
    EXPECT_EQ(e.hover_query(id), std::vector<std::string>{"n002"});
    EXPECT_THROW(e.node("n001"), std::out_of_range);
}

TEST(Engine, FrameMirrorsState) {
    LayoutEngine e;
    e.initialize(make_nodes(3, 2.0), Rect{{0, 0}, {10, 10}});
    e.set_hidden("n002", true);
    e.apply_cluster(AnchorType::term, "cloud", {"n000"});
    auto f = e.step();
    EXPECT_EQ(f.tick, 1u);
    ASSERT_EQ(f.nodes.size(), 3u);
    EXPECT_TRUE(f.nodes[2].hidden);
    ASSERT_EQ(f.anchors.size(), 1u);
    EXPECT_EQ(f.anchors[0].id, "c1");
    EXPECT_EQ(f.anchors[0].key, "cloud");
}

#include "arvis/json_io.hpp"
#include "arvis/session.hpp"

#include "fixtures.hpp"
#include "scenes.hpp"

#include <gtest/gtest.h>

using namespace arvis;
using scenes::deg;

namespace {

std::shared_ptr<const IndexedMesh> shared(IndexedMesh m) { return std::make_shared<const IndexedMesh>(std::move(m)); }

// 4 "bar" and 3 "mesh" models.
std::vector<CatalogEntry> study_catalog() {
    std::vector<CatalogEntry> c;
    for (int i = 0; i < 4; ++i) {
        c.push_back({"bar" + std::to_string(i), "bar", shared(fixtures::box(Vec3::Zero(), Vec3(10 + i, 2, 2)))});
    }
    for (int i = 0; i < 3; ++i) c.push_back({"mesh" + std::to_string(i), "mesh", shared(fixtures::uv_sphere(6, 8, 5 + i))});
    return c;
}

SessionState run(SessionState s, std::initializer_list<UIEvent> events) {
    for (const auto& e : events) s = apply_event(s, e).state;
    return s;
}

SessionState edit_view_with_model() {
    return run(init_session({}, study_catalog()), {event::GrantCamera{}, event::NextModel{}});
}

}  // namespace

TEST(Session, InitialState) {
    const SessionState empty = init_session({}, {});
    EXPECT_EQ(empty.screen, Screen::CameraPermission);
    EXPECT_FALSE(empty.selected.has_value());
    const SessionState s = init_session({}, study_catalog());
    EXPECT_EQ(s.catalog.size(), 7u);
    EXPECT_EQ(s.config.zoom_step, 1.25);
}

TEST(Session, ConfigValidation) {
    SessionConfig c;
    c.zoom_step = 1.0;
    EXPECT_THROW(init_session(c, {}), std::invalid_argument);
    c = {};
    c.target_extent = -1;
    EXPECT_THROW(init_session(c, {}), std::invalid_argument);
    c = {};
    c.zoom_min = 2.0;
    EXPECT_THROW(init_session(c, {}), std::invalid_argument);
}

TEST(Session, GrantCameraOnlyOnce) {
    SessionState s = init_session({}, {});
    auto t = apply_event(s, event::GrantCamera{});
    EXPECT_EQ(t.state.screen, Screen::EditView);
    EXPECT_FALSE(t.ignored.has_value());
    auto again = apply_event(t.state, event::GrantCamera{});
    EXPECT_TRUE(again.ignored.has_value());
    EXPECT_EQ(session_to_json(again.state), session_to_json(t.state));
}

TEST(Session, ThreeRotationsMakeFortyFiveDegrees) {
    const SessionState s = run(edit_view_with_model(), {event::RotateX{1}, event::RotateX{1}, event::RotateX{1}});
    EXPECT_NEAR(s.transform.rot_x, deg(45), 1e-12);
    EXPECT_EQ(session_to_json(s)["transform"]["rot_x_deg"], 45.0);
    const SessionState back = run(s, {event::RotateX{-1}});
    EXPECT_NEAR(back.transform.rot_x, deg(30), 1e-12);
}

TEST(Session, ZoomIsMultiplicativeAndClamped) {
    SessionState s = edit_view_with_model();
    const double base = s.base_scale;
    s = run(s, {event::ZoomIn{}, event::ZoomIn{}});
    EXPECT_DOUBLE_EQ(s.transform.scale / base, 1.5625);
    for (int i = 0; i < 20; ++i) s = apply_event(s, event::ZoomIn{}).state;
    EXPECT_DOUBLE_EQ(s.zoom, 4.0);
    for (int i = 0; i < 40; ++i) s = apply_event(s, event::ZoomOut{}).state;
    EXPECT_DOUBLE_EQ(s.zoom, 0.25);
    EXPECT_DOUBLE_EQ(s.transform.scale, base * 0.25);
}

TEST(Session, MarkerUpdateOnlyInAR) {
    SessionState s = edit_view_with_model();
    auto ignored = apply_event(s, event::MarkerUpdate{event::MarkerObservation{deg(30), 0.9}});
    EXPECT_TRUE(ignored.ignored.has_value());
    s = run(s, {event::EnterAR{}, event::MarkerUpdate{event::MarkerObservation{deg(30), 0.9}}});
    EXPECT_EQ(s.screen, Screen::ARView);
    EXPECT_TRUE(s.marker_visible);
    EXPECT_DOUBLE_EQ(s.transform.rot_y, deg(30));
    const ModelTransform before = s.transform;
    s = run(s, {event::MarkerUpdate{}});
    EXPECT_FALSE(s.marker_visible);
    EXPECT_EQ(s.transform.rot_y, before.rot_y);
    EXPECT_EQ(s.transform.scale, before.scale);
}

TEST(Session, CyclingWrapsAround) {
    SessionState s = edit_view_with_model();
    ASSERT_EQ(s.selected, 0u);
    for (int i = 0; i < 6; ++i) s = apply_event(s, event::NextModel{}).state;
    EXPECT_EQ(s.selected, 6u);
    s = apply_event(s, event::NextModel{}).state;
    EXPECT_EQ(s.selected, 0u);
    s = apply_event(s, event::PrevModel{}).state;
    EXPECT_EQ(s.selected, 6u);
}

TEST(Session, CategoriesRestrictCycling) {
    SessionState s = run(edit_view_with_model(), {event::SelectCategory{"mesh"}});
    EXPECT_EQ(s.selected, 4u);
    for (int i = 0; i < 3; ++i) s = apply_event(s, event::NextModel{}).state;
    EXPECT_EQ(s.selected, 4u);
    EXPECT_TRUE(apply_event(s, event::SelectCategory{"chess"}).ignored.has_value());
}

TEST(Session, NextModelResetsTransformButFollowsMarker) {
    SessionState s = run(edit_view_with_model(),
                         {event::EnterAR{}, event::MarkerUpdate{event::MarkerObservation{deg(20), 1}}, event::RotateX{1},
                          event::ZoomIn{}, event::NextModel{}});
    EXPECT_EQ(s.transform.rot_x, 0.0);
    EXPECT_EQ(s.zoom, 1.0);
    EXPECT_DOUBLE_EQ(s.transform.rot_y, deg(20));
}

TEST(Session, UploadAppendsAndSelects) {
    SessionState s = run(init_session({}, study_catalog()), {event::GrantCamera{}, event::OpenFolder{}});
    EXPECT_TRUE(s.awaiting_upload);
    EXPECT_FALSE(s.selected.has_value());
    s = apply_event(s, event::UploadModel{shared(fixtures::unit_cube()), "cube"}).state;
    EXPECT_EQ(s.catalog.size(), 8u);
    EXPECT_EQ(s.selected, 7u);
    EXPECT_EQ(s.catalog.back().category, "upload");
    EXPECT_FALSE(s.awaiting_upload);
    EXPECT_DOUBLE_EQ(s.transform.scale, 80.0);
}

TEST(Session, DegenerateUploadIsIgnored) {
    IndexedMesh flat;
    flat.vertices = {Vec3(1, 1, 1), Vec3(1, 1, 1), Vec3(1, 1, 1)};
    flat.faces = {{0, 1, 2}};
    const SessionState s = init_session({}, {});
    const auto t = apply_event(s, event::UploadModel{shared(flat), "dot"});
    EXPECT_TRUE(t.ignored.has_value());
    EXPECT_TRUE(t.state.catalog.empty());
}

TEST(Session, TrueSizeKeepsUnitScale) {
    SessionConfig c;
    c.scale_mode = ScaleMode::TrueSize;
    const SessionState s = run(init_session(c, {}), {event::UploadModel{shared(fixtures::unit_cube()), "cube"}});
    EXPECT_EQ(s.transform.scale, 1.0);
    EXPECT_EQ(s.transform.translation, Vec3(-0.5, -0.5, -0.5));
}

TEST(Session, EnterARNeedsSelection) {
    const SessionState s = run(init_session({}, {}), {event::GrantCamera{}});
    EXPECT_TRUE(apply_event(s, event::EnterAR{}).ignored.has_value());
}

TEST(Session, ReplayComposition) {
    const SessionState s = replay({}, {},
                                  {event::GrantCamera{}, event::UploadModel{shared(fixtures::unit_cube()), "cube"},
                                   event::EnterAR{}, event::ZoomIn{}});
    EXPECT_EQ(s.screen, Screen::ARView);
    EXPECT_DOUBLE_EQ(s.transform.scale, 1.25 * s.base_scale);
    EXPECT_EQ(session_to_json(replay({}, {}, {})), session_to_json(init_session({}, {})));
}

TEST(Session, CommutingRotationsGiveTheSameTransform) {
    const SessionState start = edit_view_with_model();
    std::vector<UIEvent> events{event::RotateX{1}, event::RotateZ{1}, event::RotateX{1}, event::RotateZ{-1},
                                event::RotateZ{1}};
    std::vector<int> order(events.size());
    std::iota(order.begin(), order.end(), 0);
    std::optional<Json> first;
    do {
        SessionState s = start;
        for (int i : order) s = apply_event(s, events[std::size_t(i)]).state;
        const Json t = session_to_json(s)["transform"];
        if (!first) first = t;
        EXPECT_EQ(t, *first);
    } while (std::next_permutation(order.begin(), order.end()));
}

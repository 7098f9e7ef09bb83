#pragma once

#include "arvis/geometry.hpp"
#include "arvis/stl.hpp"

#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace arvis {

enum class ScaleMode { FitToTarget, TrueSize };

struct SessionConfig {
    double rotation_step = std::numbers::pi / 12.0;  // radians
    double zoom_step = 1.25;
    double zoom_min = 0.25;
    double zoom_max = 4.0;
    double target_extent = 80.0;  // mm
    ScaleMode scale_mode = ScaleMode::FitToTarget;
    double marker_side = 80.0;  // mm

    // Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct CatalogEntry {
    std::string name;
    std::string category;
    std::shared_ptr<const IndexedMesh> mesh;
};

enum class Screen { CameraPermission, EditView, ARView };

const char* to_string(Screen screen);

struct SessionState {
    SessionConfig config;
    Screen screen = Screen::CameraPermission;
    std::vector<CatalogEntry> catalog;
    std::optional<std::size_t> selected;
    std::optional<std::string> active_category;
    ModelTransform transform;
    double base_scale = 1.0;
    double zoom = 1.0;
    bool marker_visible = false;
    double last_yaw = 0.0;
    bool awaiting_upload = false;
};

namespace event {
struct GrantCamera {};
struct UploadModel {
    std::shared_ptr<const IndexedMesh> mesh;
    std::string name;
};
struct SelectCategory {
    std::string name;
};
struct NextModel {};
struct PrevModel {};
struct EnterAR {};
struct EnterEdit {};
struct RotateX {
    int sign = 1;
};
struct RotateZ {
    int sign = 1;
};
struct ZoomIn {};
struct ZoomOut {};
struct MarkerObservation {
    double yaw = 0.0;  // radians
    double confidence = 1.0;
};
struct MarkerUpdate {
    std::optional<MarkerObservation> detection;
};
struct OpenFolder {};
}  // namespace event

using UIEvent = std::variant<event::GrantCamera, event::UploadModel, event::SelectCategory, event::NextModel,
                             event::PrevModel, event::EnterAR, event::EnterEdit, event::RotateX, event::RotateZ,
                             event::ZoomIn, event::ZoomOut, event::MarkerUpdate, event::OpenFolder>;

const char* event_name(const UIEvent& e);

struct Transition {
    SessionState state;
    std::optional<std::string> ignored;  // set when the event was a no-op
};

SessionState init_session(const SessionConfig& config, std::vector<CatalogEntry> catalog);

Transition apply_event(const SessionState& state, const UIEvent& e);

SessionState replay(const SessionConfig& config, std::vector<CatalogEntry> catalog, const std::vector<UIEvent>& events);

}  // namespace arvis

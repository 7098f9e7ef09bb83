#include "arvis/session.hpp"

#include "arvis/mesh_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arvis {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool in_model_screen(const SessionState& s) { return s.screen == Screen::EditView || s.screen == Screen::ARView; }

// Indices of the catalog entries currently being cycled through.
std::vector<std::size_t> visible_entries(const SessionState& s) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.catalog.size(); ++i) {
        if (!s.active_category || s.catalog[i].category == *s.active_category) out.push_back(i);
    }
    return out;
}

// Base placement for a mesh; nullopt if the mesh has no usable extent.
std::optional<ModelTransform> base_transform(const SessionConfig& config, const IndexedMesh& mesh) {
    try {
        ModelTransform t = fit_transform(mesh, config.target_extent);
        if (config.scale_mode == ScaleMode::TrueSize) t.scale = 1.0;
        return t;
    } catch (const GeometryError&) {
        return std::nullopt;
    }
}

void clear_model(SessionState& s) {
    s.selected.reset();
    s.transform = ModelTransform{};
    s.transform.rot_y = s.last_yaw;
    s.base_scale = 1.0;
    s.zoom = 1.0;
}

// Selects entry i with a fresh transform. rot_y keeps following the marker.
bool select(SessionState& s, std::size_t i) {
    auto base = base_transform(s.config, *s.catalog[i].mesh);
    if (!base) return false;
    s.selected = i;
    s.transform = *base;
    s.transform.rot_y = s.last_yaw;
    s.base_scale = base->scale;
    s.zoom = 1.0;
    return true;
}

Transition ignore(const SessionState& s, std::string why) { return {s, std::move(why)}; }

}  // namespace

void SessionConfig::validate() const {
    if (!(rotation_step > 0.0) || !std::isfinite(rotation_step))
        throw std::invalid_argument("rotation step must be positive");
    if (!(zoom_step > 1.0) || !std::isfinite(zoom_step)) throw std::invalid_argument("zoom step must exceed 1");
    if (!(zoom_min > 0.0) || !(zoom_min <= 1.0) || !(zoom_max >= 1.0) || !std::isfinite(zoom_max))
        throw std::invalid_argument("zoom bounds must satisfy 0 < min <= 1 <= max");
    if (!(target_extent > 0.0) || !std::isfinite(target_extent))
        throw std::invalid_argument("target extent must be positive");
    if (!(marker_side > 0.0) || !std::isfinite(marker_side))
        throw std::invalid_argument("marker side must be positive");
}

const char* to_string(Screen screen) {
    switch (screen) {
        case Screen::CameraPermission: return "CameraPermission";
        case Screen::EditView: return "EditView";
        case Screen::ARView: return "ARView";
    }
    return "?";
}

const char* event_name(const UIEvent& e) {
    static constexpr const char* names[] = {"GrantCamera", "UploadModel", "SelectCategory", "NextModel", "PrevModel",
                                            "EnterAR",     "EnterEdit",   "RotateX",        "RotateZ",   "ZoomIn",
                                            "ZoomOut",     "MarkerUpdate", "OpenFolder"};
    static_assert(std::size(names) == std::variant_size_v<UIEvent>);
    return names[e.index()];
}

SessionState init_session(const SessionConfig& config, std::vector<CatalogEntry> catalog) {
    config.validate();
    for (const auto& entry : catalog) {
        if (!entry.mesh) throw std::invalid_argument("catalog entry '" + entry.name + "' has no mesh");
    }
    SessionState s;
    s.config = config;
    s.catalog = std::move(catalog);
    return s;
}

Transition apply_event(const SessionState& state, const UIEvent& e) {
    const std::string name = event_name(e);
    auto wrong_screen = [&] { return ignore(state, name + " is not available in " + to_string(state.screen)); };

    return std::visit(
        overloaded{
            [&](const event::GrantCamera&) -> Transition {
                if (state.screen != Screen::CameraPermission) return wrong_screen();
                SessionState s = state;
                s.screen = Screen::EditView;
                return {s, {}};
            },
            [&](const event::UploadModel& ev) -> Transition {
                if (!ev.mesh) return ignore(state, "UploadModel carries no mesh");
                SessionState s = state;
                s.catalog.push_back({ev.name, "upload", ev.mesh});
                if (!select(s, s.catalog.size() - 1)) return ignore(state, "uploaded model has a degenerate extent");
                s.active_category.reset();
                s.awaiting_upload = false;
                return {s, {}};
            },
            [&](const event::SelectCategory& ev) -> Transition {
                if (!in_model_screen(state)) return wrong_screen();
                SessionState s = state;
                s.active_category = ev.name;
                const auto entries = visible_entries(s);
                if (entries.empty()) return ignore(state, "no models in category '" + ev.name + "'");
                if (!select(s, entries.front())) return ignore(state, "model has a degenerate extent");
                return {s, {}};
            },
            [&](const auto& ev) -> Transition
                requires std::is_same_v<std::decay_t<decltype(ev)>, event::NextModel> ||
                         std::is_same_v<std::decay_t<decltype(ev)>, event::PrevModel>
            {
                if (!in_model_screen(state)) return wrong_screen();
                const auto entries = visible_entries(state);
                if (entries.empty()) return ignore(state, "catalog is empty");
                const std::size_t n = entries.size();
                std::size_t pos = 0;
                if (state.selected) {
                    auto it = std::find(entries.begin(), entries.end(), *state.selected);
                    if (it != entries.end()) {
                        pos = std::size_t(it - entries.begin());
                        constexpr bool forward = std::is_same_v<std::decay_t<decltype(ev)>, event::NextModel>;
                        pos = forward ? (pos + 1) % n : (pos + n - 1) % n;
                    }
                }
                SessionState s = state;
                if (!select(s, entries[pos])) return ignore(state, "model has a degenerate extent");
                s.awaiting_upload = false;
                return {s, {}};
            },
            [&](const event::EnterAR&) -> Transition {
                if (state.screen != Screen::EditView) return wrong_screen();
                if (!state.selected) return ignore(state, "EnterAR needs a selected model");
                SessionState s = state;
                s.screen = Screen::ARView;
                return {s, {}};
            },
            [&](const event::EnterEdit&) -> Transition {
                if (state.screen != Screen::ARView) return wrong_screen();
                SessionState s = state;
                s.screen = Screen::EditView;
                s.marker_visible = false;
                return {s, {}};
            },
            [&](const event::RotateX& ev) -> Transition {
                if (!in_model_screen(state)) return wrong_screen();
                if (!state.selected) return ignore(state, "RotateX needs a selected model");
                SessionState s = state;
                s.transform.rot_x += (ev.sign < 0 ? -1.0 : 1.0) * s.config.rotation_step;
                return {s, {}};
            },
            [&](const event::RotateZ& ev) -> Transition {
                if (!in_model_screen(state)) return wrong_screen();
                if (!state.selected) return ignore(state, "RotateZ needs a selected model");
                SessionState s = state;
                s.transform.rot_z += (ev.sign < 0 ? -1.0 : 1.0) * s.config.rotation_step;
                return {s, {}};
            },
            [&](const auto& ev) -> Transition
                requires std::is_same_v<std::decay_t<decltype(ev)>, event::ZoomIn> ||
                         std::is_same_v<std::decay_t<decltype(ev)>, event::ZoomOut>
            {
                if (!in_model_screen(state)) return wrong_screen();
                if (!state.selected) return ignore(state, name + " needs a selected model");
                SessionState s = state;
                constexpr bool in = std::is_same_v<std::decay_t<decltype(ev)>, event::ZoomIn>;
                const double zoom = in ? s.zoom * s.config.zoom_step : s.zoom / s.config.zoom_step;
                s.zoom = std::clamp(zoom, s.config.zoom_min, s.config.zoom_max);
                s.transform.scale = s.base_scale * s.zoom;
                return {s, {}};
            },
            [&](const event::MarkerUpdate& ev) -> Transition {
                if (state.screen != Screen::ARView) return wrong_screen();
                SessionState s = state;
                s.marker_visible = ev.detection.has_value();
                if (ev.detection) {
                    if (!std::isfinite(ev.detection->yaw)) return ignore(state, "MarkerUpdate yaw is not finite");
                    s.last_yaw = ev.detection->yaw;
                    s.transform.rot_y = s.last_yaw;
                }
                return {s, {}};
            },
            [&](const event::OpenFolder&) -> Transition {
                if (!in_model_screen(state)) return wrong_screen();
                SessionState s = state;
                clear_model(s);
                s.awaiting_upload = true;
                return {s, {}};
            },
        },
        e);
}

SessionState replay(const SessionConfig& config, std::vector<CatalogEntry> catalog, const std::vector<UIEvent>& events) {
    SessionState s = init_session(config, std::move(catalog));
    for (const UIEvent& e : events) s = apply_event(s, e).state;
    return s;
}

}  // namespace arvis

#include "arvis/json_io.hpp"

#include "arvis/image.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace arvis {

namespace {

Json vec(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }
Json vec(const Vec2& v) { return Json::array({v.x(), v.y()}); }

Json bbox_json(const Bbox& b) {
    if (b.empty()) return nullptr;
    return {{"min", vec(b.min)}, {"max", vec(b.max)}};
}

// Degree mirrors are for people; trim the last-bit noise of the conversion.
double degrees(double radians) { return std::round(radians * 180.0 / std::numbers::pi * 1e9) / 1e9; }

double number_field(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) throw FormatError(std::string("missing numeric field '") + key + "'");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw FormatError(std::string("field '") + key + "' is not finite");
    return v;
}

bool is_zero_distortion(const Json& v) {
    if (v.is_null()) return true;
    if (v.is_number()) return v.get<double>() == 0.0;
    if (v.is_array()) {
        for (const Json& e : v) {
            if (!e.is_number() || e.get<double>() != 0.0) return false;
        }
        return true;
    }
    return false;
}

}  // namespace

Json report_to_json(const PrintabilityReport& r) {
    Json loops = Json::array();
    for (const BoundaryLoop& l : r.boundary_loops) {
        loops.push_back({{"closed", l.closed}, {"length", l.vertices.size()}, {"vertices", l.vertices}});
    }
    Json components = Json::array();
    for (const ComponentSummary& c : r.components) {
        components.push_back({{"face_count", c.face_count}, {"bbox", bbox_json(c.bbox)}});
    }
    Json j;
    j["watertight"] = r.watertight;
    j["vertex_count"] = r.vertex_count;
    j["face_count"] = r.face_count;
    j["edges"] = {{"interior", r.interior_edge_count},
                  {"boundary", r.boundary_edge_count},
                  {"nonmanifold", r.nonmanifold_edge_count},
                  {"orientation_conflicts", r.orientation_conflicts}};
    j["boundary_loops"] = loops;
    j["component_count"] = r.component_count;
    j["components"] = components;
    j["component_axis_gaps"] = r.component_axis_gaps ? vec(*r.component_axis_gaps) : Json(nullptr);
    j["degenerate_faces"] = r.degenerate_face_indices;
    j["signed_volume"] = r.signed_volume;
    j["orientation_inverted"] = r.orientation_inverted;
    j["max_normal_deviation_deg"] = r.max_normal_deviation;
    j["normals_absent"] = r.normals_absent;
    j["bbox"] = bbox_json(r.bbox);
    return j;
}

CameraIntrinsics intrinsics_from_json(const Json& j) {
    if (!j.is_object()) throw FormatError("camera intrinsics must be a JSON object");
    static const std::set<std::string> distortion_keys{"distortion", "k1", "k2", "k3", "p1", "p2"};
    static const std::set<std::string> known{"fx", "fy", "cx", "cy", "width", "height"};
    for (const auto& [key, value] : j.items()) {
        if (distortion_keys.count(key)) {
            if (!is_zero_distortion(value)) throw FormatError("lens distortion ('" + key + "') is not supported");
        } else if (!known.count(key)) {
            throw FormatError("unknown camera field '" + key + "'");
        }
    }
    CameraIntrinsics k;
    k.fx = number_field(j, "fx");
    k.fy = number_field(j, "fy");
    k.cx = number_field(j, "cx");
    k.cy = number_field(j, "cy");
    if (!(k.fx > 0.0) || !(k.fy > 0.0)) throw FormatError("focal lengths must be positive");
    return k;
}

CameraIntrinsics read_intrinsics(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw FormatError(path.string() + " is not valid JSON");
    return intrinsics_from_json(j);
}

Json intrinsics_to_json(const CameraIntrinsics& k) { return {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}}; }

Json detection_to_json(const Detection& d) {
    Json rotation = Json::array();
    for (int r = 0; r < 3; ++r) rotation.push_back({d.pose.rotation(r, 0), d.pose.rotation(r, 1), d.pose.rotation(r, 2)});
    Json corners = Json::array();
    for (const Vec2& c : d.corners) corners.push_back(vec(c));
    return {{"detected", true},
            {"confidence", d.confidence},
            {"rotation_index", d.rotation_index},
            {"corners", corners},
            {"rotation", rotation},
            {"translation", vec(d.pose.translation)},
            {"yaw", d.yaw},
            {"yaw_deg", degrees(d.yaw)},
            {"reprojection_rms", d.reprojection_rms}};
}

Json session_to_json(const SessionState& s) {
    Json catalog = Json::array();
    for (const CatalogEntry& e : s.catalog) {
        catalog.push_back({{"name", e.name}, {"category", e.category}, {"faces", e.mesh ? e.mesh->faces.size() : 0}});
    }
    const ModelTransform& t = s.transform;
    Json transform = {{"rot_x", t.rot_x},       {"rot_x_deg", degrees(t.rot_x)},
                      {"rot_y", t.rot_y},       {"rot_y_deg", degrees(t.rot_y)},
                      {"rot_z", t.rot_z},       {"rot_z_deg", degrees(t.rot_z)},
                      {"scale", t.scale},       {"translation", vec(t.translation)},
                      {"pivot", vec(t.pivot)}};
    Json config = {{"rotation_step", s.config.rotation_step},
                   {"zoom_step", s.config.zoom_step},
                   {"zoom_bounds", {s.config.zoom_min, s.config.zoom_max}},
                   {"target_extent", s.config.target_extent},
                   {"scale_mode", s.config.scale_mode == ScaleMode::TrueSize ? "true" : "fit"},
                   {"marker_side", s.config.marker_side}};
    return {{"screen", to_string(s.screen)},
            {"catalog", catalog},
            {"selected", s.selected ? Json(*s.selected) : Json(nullptr)},
            {"selected_name", s.selected ? Json(s.catalog[*s.selected].name) : Json(nullptr)},
            {"active_category", s.active_category ? Json(*s.active_category) : Json(nullptr)},
            {"transform", transform},
            {"base_scale", s.base_scale},
            {"zoom", s.zoom},
            {"marker_visible", s.marker_visible},
            {"last_yaw", s.last_yaw},
            {"last_yaw_deg", degrees(s.last_yaw)},
            {"awaiting_upload", s.awaiting_upload},
            {"config", config}};
}

std::vector<UIEvent> parse_replay_script(const Json& script, const MeshLoader& load) {
    if (!script.is_array()) throw FormatError("replay script must be a JSON array");
    std::vector<UIEvent> events;
    for (std::size_t i = 0; i < script.size(); ++i) {
        const Json& e = script[i];
        const std::string where = "event " + std::to_string(i);
        if (!e.is_object() || !e.contains("type") || !e["type"].is_string())
            throw FormatError(where + ": expected an object with a string 'type'");
        const std::string type = e["type"].get<std::string>();
        auto sign = [&]() -> int {
            if (!e.contains("sign")) return 1;
            if (!e["sign"].is_number_integer()) throw FormatError(where + ": 'sign' must be +1 or -1");
            const int v = e["sign"].get<int>();
            if (v != 1 && v != -1) throw FormatError(where + ": 'sign' must be +1 or -1");
            return v;
        };
        auto string_field = [&](const char* key) {
            if (!e.contains(key) || !e[key].is_string()) throw FormatError(where + ": missing string '" + key + "'");
            return e[key].get<std::string>();
        };

        if (type == "GrantCamera") events.emplace_back(event::GrantCamera{});
        else if (type == "NextModel") events.emplace_back(event::NextModel{});
        else if (type == "PrevModel") events.emplace_back(event::PrevModel{});
        else if (type == "EnterAR") events.emplace_back(event::EnterAR{});
        else if (type == "EnterEdit") events.emplace_back(event::EnterEdit{});
        else if (type == "ZoomIn") events.emplace_back(event::ZoomIn{});
        else if (type == "ZoomOut") events.emplace_back(event::ZoomOut{});
        else if (type == "OpenFolder") events.emplace_back(event::OpenFolder{});
        else if (type == "RotateX") events.emplace_back(event::RotateX{sign()});
        else if (type == "RotateZ") events.emplace_back(event::RotateZ{sign()});
        else if (type == "SelectCategory") events.emplace_back(event::SelectCategory{string_field("name")});
        else if (type == "UploadModel") {
            const std::string file = string_field("file");
            std::string name = e.contains("name") ? string_field("name") : std::filesystem::path(file).stem().string();
            auto mesh = load(file);
            if (!mesh) throw FormatError(where + ": cannot load '" + file + "'");
            events.emplace_back(event::UploadModel{std::move(mesh), std::move(name)});
        } else if (type == "MarkerUpdate") {
            if (!e.contains("detection")) throw FormatError(where + ": MarkerUpdate needs 'detection'");
            const Json& d = e["detection"];
            event::MarkerUpdate update;
            if (!d.is_null()) {
                if (!d.is_object()) throw FormatError(where + ": 'detection' must be an object or null");
                event::MarkerObservation obs;
                if (d.contains("yaw")) obs.yaw = number_field(d, "yaw");
                else if (d.contains("yaw_deg")) obs.yaw = number_field(d, "yaw_deg") * std::numbers::pi / 180.0;
                else throw FormatError(where + ": detection needs 'yaw' or 'yaw_deg'");
                if (d.contains("confidence")) obs.confidence = number_field(d, "confidence");
                update.detection = obs;
            }
            events.emplace_back(update);
        } else {
            throw FormatError(where + ": unknown event type '" + type + "'");
        }
    }
    return events;
}

Json events_to_json(const std::vector<UIEvent>& events) {
    Json out = Json::array();
    for (const UIEvent& e : events) {
        Json j = {{"type", event_name(e)}};
        if (auto* r = std::get_if<event::RotateX>(&e)) j["sign"] = r->sign < 0 ? -1 : 1;
        if (auto* r = std::get_if<event::RotateZ>(&e)) j["sign"] = r->sign < 0 ? -1 : 1;
        if (auto* c = std::get_if<event::SelectCategory>(&e)) j["name"] = c->name;
        if (auto* u = std::get_if<event::UploadModel>(&e)) {
            j["file"] = u->name;
            j["name"] = u->name;
        }
        if (auto* m = std::get_if<event::MarkerUpdate>(&e)) {
            j["detection"] = m->detection ? Json{{"yaw", m->detection->yaw}, {"confidence", m->detection->confidence}}
                                          : Json(nullptr);
        }
        out.push_back(j);
    }
    return out;
}

}  // namespace arvis

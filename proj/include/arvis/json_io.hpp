#pragma once

#include "arvis/camera.hpp"
#include "arvis/marker.hpp"
#include "arvis/mesh_analysis.hpp"
#include "arvis/session.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace arvis {

using Json = nlohmann::json;

Json report_to_json(const PrintabilityReport& report);

// {"fx", "fy", "cx", "cy"} plus optional "width"/"height". Distortion
// fields ("distortion", "k1".."k3", "p1", "p2") are accepted only when zero.
// Throws FormatError.
CameraIntrinsics intrinsics_from_json(const Json& j);
CameraIntrinsics read_intrinsics(const std::filesystem::path& path);
Json intrinsics_to_json(const CameraIntrinsics& k);

Json detection_to_json(const Detection& d);

Json session_to_json(const SessionState& s);

// Replay scripts are a JSON array of objects tagged by "type":
//   {"type": "GrantCamera"}
//   {"type": "UploadModel", "file": "cube.stl", "name": "cube"}   name optional
//   {"type": "SelectCategory", "name": "bar"}
//   {"type": "RotateX", "sign": -1}                                sign optional, default +1
//   {"type": "MarkerUpdate", "detection": {"yaw_deg": 30}}         or "yaw" in radians
//   {"type": "MarkerUpdate", "detection": null}
// and the payload-free NextModel, PrevModel, EnterAR, EnterEdit, RotateZ,
// ZoomIn, ZoomOut, OpenFolder. Upload files are resolved through `load`.
using MeshLoader = std::function<std::shared_ptr<const IndexedMesh>(const std::string& file)>;

std::vector<UIEvent> parse_replay_script(const Json& script, const MeshLoader& load);

// Inverse of parse_replay_script; uploads are written with `file` = name.
Json events_to_json(const std::vector<UIEvent>& events);

}  // namespace arvis

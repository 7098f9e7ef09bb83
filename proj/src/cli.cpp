#include "arvis/cli.hpp"

#include "arvis/image.hpp"
#include "arvis/json_io.hpp"
#include "arvis/marker.hpp"
#include "arvis/mesh_analysis.hpp"
#include "arvis/render.hpp"
#include "arvis/session.hpp"
#include "arvis/stl.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>

namespace fs = std::filesystem;

namespace arvis {

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsageError = 2;

constexpr double kDeg = std::numbers::pi / 180.0;

struct LoadedModel {
    TriangleSoup soup;
    IndexedMesh mesh;
};

WeldMode weld_mode(double eps) { return eps > 0.0 ? WeldMode::tolerance(eps) : WeldMode::exact(); }

LoadedModel load_model(const fs::path& path, double weld_eps) {
    const auto bytes = read_file_bytes(path);
    LoadedModel m;
    m.soup = parse_stl(std::span<const std::uint8_t>(bytes));
    m.mesh = weld_vertices(m.soup, weld_mode(weld_eps));
    return m;
}

MarkerPattern load_pattern(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    return read_pattern(in);
}

void print_report(std::ostream& out, const PrintabilityReport& r) {
    out << "watertight: " << (r.watertight ? "true" : "false") << '\n'
        << "vertices: " << r.vertex_count << '\n'
        << "faces: " << r.face_count << '\n'
        << "boundary edges: " << r.boundary_edge_count << '\n'
        << "boundary loops: " << r.boundary_loops.size() << '\n';
    for (const BoundaryLoop& l : r.boundary_loops)
        out << "  loop of " << l.vertices.size() << " vertices" << (l.closed ? "" : " (open chain)") << '\n';
    out << "nonmanifold edges: " << r.nonmanifold_edge_count << '\n'
        << "orientation conflicts: " << r.orientation_conflicts << '\n'
        << "components: " << r.component_count << '\n';
    if (r.component_axis_gaps) {
        const Vec3& g = *r.component_axis_gaps;
        out << "  closest gaps between components (x y z mm): " << g.x() << ' ' << g.y() << ' ' << g.z() << '\n';
    }
    out << "degenerate faces: " << r.degenerate_face_indices.size() << '\n'
        << "signed volume: " << r.signed_volume << '\n'
        << "orientation inverted: " << (r.orientation_inverted ? "true" : "false") << '\n';
    if (r.normals_absent) out << "stored normals: absent\n";
    else out << "max normal deviation (deg): " << r.max_normal_deviation << '\n';
    if (!r.bbox.empty()) {
        const Vec3 e = r.bbox.extent();
        out << "size (mm): " << e.x() << " x " << e.y() << " x " << e.z() << '\n';
    }
}

// Subdirectories of `dir` are categories; STL files directly inside `dir`
// fall in the "default" category. Entries sorted by category, then name.
std::vector<CatalogEntry> load_catalog(const fs::path& dir, double weld_eps) {
    if (!fs::is_directory(dir)) throw FormatError("catalog is not a directory: " + dir.string());
    std::map<std::pair<std::string, std::string>, fs::path> files;
    auto scan = [&](const fs::path& d, const std::string& category) {
        for (const auto& f : fs::directory_iterator(d)) {
            if (!f.is_regular_file()) continue;
            std::string ext = f.path().extension().string();
            std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
            if (ext == ".stl") files[{category, f.path().stem().string()}] = f.path();
        }
    };
    scan(dir, "default");
    for (const auto& d : fs::directory_iterator(dir)) {
        if (d.is_directory()) scan(d.path(), d.path().filename().string());
    }
    std::vector<CatalogEntry> catalog;
    for (const auto& [key, path] : files) {
        auto mesh = std::make_shared<const IndexedMesh>(load_model(path, weld_eps).mesh);
        catalog.push_back({key.second, key.first, std::move(mesh)});
    }
    return catalog;
}

struct DetectFlags {
    std::string pattern;
    std::string camera;
    double marker_side = 0.0;
    DetectorConfig config;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--pattern", pattern, "ARPAT pattern file")->required();
        cmd->add_option("--camera", camera, "camera intrinsics JSON")->required();
        cmd->add_option("--marker-side", marker_side, "printed marker side length (mm)")->required();
        cmd->add_option("--window", config.window, "adaptive threshold window (px)")->capture_default_str();
        cmd->add_option("--offset", config.offset, "adaptive threshold offset (gray levels)")->capture_default_str();
        cmd->add_option("--min-area", config.min_area, "smallest candidate quad (px^2)")->capture_default_str();
        cmd->add_option("--match-threshold", config.match_threshold, "pattern confidence threshold")
            ->capture_default_str();
    }
};

int cmd_inspect(const std::string& model, bool json, double weld_eps, double area_eps, std::ostream& out) {
    const LoadedModel m = load_model(model, weld_eps);
    const PrintabilityReport r = analyze(m.mesh, m.soup, AnalysisOptions{area_eps});
    if (json) out << report_to_json(r).dump(2) << '\n';
    else print_report(out, r);
    return r.watertight && r.component_count == 1 ? kOk : kDomainFailure;
}

int cmd_train(const std::string& image, const std::string& out_path, int grid, double border, std::ostream& out) {
    const MarkerPattern p = train_pattern(read_pgm(fs::path(image)), grid, border);
    std::ofstream f(out_path);
    if (!f) throw FormatError("cannot write " + out_path);
    write_pattern(f, p);
    if (!f) throw FormatError("failed writing " + out_path);
    out << "wrote " << p.n << "x" << p.n << " pattern to " << out_path << '\n';
    return kOk;
}

int cmd_detect(const std::string& frame_path, const DetectFlags& flags, bool json, std::ostream& out) {
    const Frame frame = read_pgm(fs::path(frame_path));
    const MarkerPattern pattern = load_pattern(flags.pattern);
    const CameraIntrinsics k = read_intrinsics(flags.camera);
    if (!(flags.marker_side > 0.0)) throw CLI::ValidationError("--marker-side must be positive");
    const auto det = detect_marker(frame, pattern, k, flags.marker_side, flags.config);
    if (!det) {
        if (json) out << Json{{"detected", false}}.dump() << '\n';
        else out << "no marker detected\n";
        return kDomainFailure;
    }
    if (json) {
        out << detection_to_json(*det).dump(2) << '\n';
    } else {
        const Vec3& t = det->pose.translation;
        out << "confidence: " << det->confidence << '\n'
            << "translation (mm): " << t.x() << ' ' << t.y() << ' ' << t.z() << '\n'
            << "yaw (deg): " << det->yaw / kDeg << '\n'
            << "reprojection rms (px): " << det->reprojection_rms << '\n';
    }
    return kOk;
}

struct OverlayFlags {
    std::string scale_mode = "fit";
    double target_extent = 80.0;
    bool wireframe = false;
    std::string out;
    double weld_eps = kDefaultWeldEpsilon;
};

int cmd_overlay(const std::string& frame_path, const std::string& model_path, const DetectFlags& detect,
                const OverlayFlags& flags, std::ostream& out) {
    const Frame frame = read_pgm(fs::path(frame_path));
    const LoadedModel model = load_model(model_path, flags.weld_eps);
    const MarkerPattern pattern = load_pattern(detect.pattern);
    const CameraIntrinsics k = read_intrinsics(detect.camera);
    if (!(detect.marker_side > 0.0)) throw CLI::ValidationError("--marker-side must be positive");

    ModelTransform transform = fit_transform(model.mesh, flags.target_extent);
    if (flags.scale_mode == "true") transform.scale = 1.0;

    const auto det = detect_marker(frame, pattern, k, detect.marker_side, detect.config);
    if (!det) {
        write_ppm(fs::path(flags.out), to_rgb(frame));
        out << "no marker detected; frame copied to " << flags.out << '\n';
        return kDomainFailure;
    }
    // The detected pose already carries the marker's spin, so the model is
    // drawn in marker coordinates without an extra yaw term.
    const RenderedImage render = rasterize(model.mesh, transform, det->pose, k, frame.width, frame.height);
    write_ppm(fs::path(flags.out), composite_overlay(frame, render, flags.wireframe));
    out << "overlay written to " << flags.out << " (" << render.covered_count() << " model pixels)\n";
    return kOk;
}

struct ReplayFlags {
    std::string catalog;
    std::string scale_mode = "fit";
    double target_extent = 80.0;
    double marker_side = 80.0;
    double rotation_step_deg = 15.0;
    double zoom_step = 1.25;
    double weld_eps = kDefaultWeldEpsilon;
};

int cmd_replay(const std::string& script_path, const ReplayFlags& flags, std::ostream& out) {
    std::ifstream in(script_path);
    if (!in) throw FormatError("cannot open " + script_path);
    const Json script = Json::parse(in, nullptr, false);
    if (script.is_discarded()) throw FormatError(script_path + " is not valid JSON");

    SessionConfig config;
    config.scale_mode = flags.scale_mode == "true" ? ScaleMode::TrueSize : ScaleMode::FitToTarget;
    config.target_extent = flags.target_extent;
    config.marker_side = flags.marker_side;
    config.rotation_step = flags.rotation_step_deg * kDeg;
    config.zoom_step = flags.zoom_step;

    std::vector<CatalogEntry> catalog;
    if (!flags.catalog.empty()) catalog = load_catalog(flags.catalog, flags.weld_eps);

    const fs::path base = flags.catalog.empty() ? fs::path(script_path).parent_path() : fs::path(flags.catalog);
    auto loader = [&](const std::string& file) -> std::shared_ptr<const IndexedMesh> {
        const fs::path p = base / file;
        if (!fs::is_regular_file(p)) throw FormatError("script references missing model file " + p.string());
        return std::make_shared<const IndexedMesh>(load_model(p, flags.weld_eps).mesh);
    };
    const std::vector<UIEvent> events = parse_replay_script(script, loader);
    for (const UIEvent& e : events) {
        const auto* sc = std::get_if<event::SelectCategory>(&e);
        if (!sc) continue;
        const bool known = std::any_of(catalog.begin(), catalog.end(), [&](const CatalogEntry& c) { return c.category == sc->name; });
        if (!known) throw FormatError("script selects unknown category '" + sc->name + "'");
    }

    const SessionState final_state = replay(config, std::move(catalog), events);
    out << session_to_json(final_state).dump(2) << '\n';
    return kOk;
}

int cmd_marker(const std::string& out_path, const std::string& pattern_out, int size, std::ostream& out) {
    const MarkerPattern p = reference_pattern();
    write_pgm(fs::path(out_path), render_marker_bitmap(p, size));
    out << "wrote " << size << "x" << size << " reference marker to " << out_path << '\n';
    if (!pattern_out.empty()) {
        std::ofstream f(pattern_out);
        if (!f) throw FormatError("cannot write " + pattern_out);
        write_pattern(f, p);
        out << "wrote reference pattern to " << pattern_out << '\n';
    }
    return kOk;
}

struct SynthFlags {
    std::string pattern;
    std::string camera;
    double marker_side = 80.0;
    double tilt_deg = 0.0;
    double yaw_deg = 0.0;
    double distance = 500.0;
    int width = 640;
    int height = 480;
    int background = 255;
    std::vector<double> ramp;
    std::string out;
};

int cmd_synth(const SynthFlags& f, std::ostream& out) {
    const MarkerPattern pattern = f.pattern.empty() ? reference_pattern() : load_pattern(f.pattern);
    const CameraIntrinsics k = read_intrinsics(f.camera);
    const Pose pose = make_marker_pose(f.tilt_deg * kDeg, f.yaw_deg * kDeg, f.distance);
    Frame frame = synthesize_marker_frame(pattern, pose, k, f.marker_side, f.width, f.height,
                                          std::uint8_t(std::clamp(f.background, 0, 255)));
    if (f.ramp.size() == 2) frame = apply_brightness_ramp(frame, f.ramp[0], f.ramp[1]);
    write_pgm(fs::path(f.out), frame);
    out << "wrote " << f.width << "x" << f.height << " frame to " << f.out << '\n';
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Print-readiness checks and marker-based AR overlays for STL models", "arvis"};
    app.require_subcommand(1);

    auto* inspect = app.add_subcommand("inspect", "report watertightness, gaps and components of an STL model");
    std::string model;
    bool json = false;
    double weld_eps = kDefaultWeldEpsilon;
    double area_eps = kDefaultAreaEpsilon;
    inspect->add_option("model", model, "STL file")->required();
    inspect->add_flag("--json", json, "machine-readable report");
    inspect->add_option("--weld-eps", weld_eps, "vertex weld tolerance in mm, 0 for exact")->capture_default_str();
    inspect->add_option("--area-eps", area_eps, "degenerate face area threshold (mm^2)")->capture_default_str();

    auto* train = app.add_subcommand("train", "sample a marker image into a pattern file");
    std::string image, pattern_out;
    int grid = kDefaultPatternGrid;
    double border = kDefaultBorderFraction;
    train->add_option("image", image, "marker image (PGM)")->required();
    train->add_option("--out", pattern_out, "pattern file to write")->required();
    train->add_option("--grid", grid, "cells per side")->capture_default_str();
    train->add_option("--border", border, "border width as a fraction of the side")->capture_default_str();

    auto* detect = app.add_subcommand("detect", "find the marker in a frame and estimate its pose");
    std::string frame;
    DetectFlags detect_flags;
    detect->add_option("frame", frame, "camera frame (PGM)")->required();
    detect->add_flag("--json", json, "machine-readable output");
    detect_flags.add_to(detect);

    auto* overlay = app.add_subcommand("overlay", "draw a model on the detected marker");
    DetectFlags overlay_detect;
    OverlayFlags overlay_flags;
    overlay->add_option("frame", frame, "camera frame (PGM)")->required();
    overlay->add_option("model", model, "STL file")->required();
    overlay_detect.add_to(overlay);
    overlay->add_option("--scale-mode", overlay_flags.scale_mode, "fit: scale to --target-extent; true: 1 model mm = 1 mm")
        ->check(CLI::IsMember({"fit", "true"}))
        ->capture_default_str();
    overlay->add_option("--target-extent", overlay_flags.target_extent, "largest model extent in fit mode (mm)")
        ->capture_default_str();
    overlay->add_flag("--wireframe", overlay_flags.wireframe, "draw model edges on top");
    overlay->add_option("--weld-eps", overlay_flags.weld_eps, "vertex weld tolerance in mm, 0 for exact")
        ->capture_default_str();
    overlay->add_option("--out", overlay_flags.out, "output image (PPM)")->required();

    auto* replay_cmd = app.add_subcommand("replay", "run a session event script and print the final state");
    std::string script;
    ReplayFlags replay_flags;
    replay_cmd->add_option("script", script, "replay script (JSON)")->required();
    replay_cmd->add_option("--catalog", replay_flags.catalog, "model directory; subdirectories are categories");
    replay_cmd->add_option("--scale-mode", replay_flags.scale_mode, "fit or true")
        ->check(CLI::IsMember({"fit", "true"}))
        ->capture_default_str();
    replay_cmd->add_option("--target-extent", replay_flags.target_extent)->capture_default_str();
    replay_cmd->add_option("--marker-side", replay_flags.marker_side)->capture_default_str();
    replay_cmd->add_option("--rotation-step", replay_flags.rotation_step_deg, "degrees per rotate press")
        ->capture_default_str();
    replay_cmd->add_option("--zoom-step", replay_flags.zoom_step)->capture_default_str();

    auto* marker = app.add_subcommand("marker", "write the reference marker bitmap");
    std::string marker_out, marker_pattern;
    int marker_size = 512;
    marker->add_option("--out", marker_out, "output image (PGM)")->required();
    marker->add_option("--pattern-out", marker_pattern, "also write the exact reference pattern");
    marker->add_option("--size", marker_size, "side length (px)")->check(CLI::Range(16, 8192))->capture_default_str();

    auto* synth = app.add_subcommand("synth", "render a synthetic camera frame of the marker");
    SynthFlags synth_flags;
    synth->add_option("--pattern", synth_flags.pattern, "pattern file (default: reference marker)");
    synth->add_option("--camera", synth_flags.camera, "camera intrinsics JSON")->required();
    synth->add_option("--marker-side", synth_flags.marker_side)->capture_default_str();
    synth->add_option("--tilt", synth_flags.tilt_deg, "degrees about the camera x axis")->capture_default_str();
    synth->add_option("--yaw", synth_flags.yaw_deg, "degrees of spin about the marker normal")->capture_default_str();
    synth->add_option("--distance", synth_flags.distance, "mm along the optical axis")->capture_default_str();
    synth->add_option("--width", synth_flags.width)->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("--height", synth_flags.height)->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("--background", synth_flags.background)->check(CLI::Range(0, 255))->capture_default_str();
    synth->add_option("--ramp", synth_flags.ramp, "left and right brightness (0-255)")->expected(2);
    synth->add_option("--out", synth_flags.out, "output image (PGM)")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "arvis: " << e.what() << '\n';
        for (auto* sub : app.get_subcommands()) {
            if (sub->parsed()) {
                err << sub->help();
                return kUsageError;
            }
        }
        err << app.help();
        return kUsageError;
    }

    try {
        if (*inspect) return cmd_inspect(model, json, weld_eps, area_eps, out);
        if (*train) return cmd_train(image, pattern_out, grid, border, out);
        if (*detect) return cmd_detect(frame, detect_flags, json, out);
        if (*overlay) return cmd_overlay(frame, model, overlay_detect, overlay_flags, out);
        if (*replay_cmd) return cmd_replay(script, replay_flags, out);
        if (*marker) return cmd_marker(marker_out, marker_pattern, marker_size, out);
        if (*synth) return cmd_synth(synth_flags, out);
    } catch (const std::exception& e) {
        err << "arvis: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace arvis

// specvs command-line tool: spectral point-cloud alignment (`align`),
// simulated direct visual servoing (`servo`), and representation dumps
// (`inspect`).
//
// Exit codes: 0 success/converged, 2 bad input, 3 no convergence (artifacts
// still written), 4 kinematic limit exceeded.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "specvs/align.hpp"
#include "specvs/cloud_io.hpp"
#include "specvs/depth_camera.hpp"
#include "specvs/egi.hpp"
#include "specvs/error.hpp"
#include "specvs/phase_correlation.hpp"
#include "specvs/rng.hpp"
#include "specvs/scene.hpp"
#include "specvs/servo_loop.hpp"
#include "specvs/sim_robot.hpp"
#include "specvs/so3_transform.hpp"
#include "specvs/svg_plot.hpp"
#include "specvs/trace.hpp"
#include "specvs/voxel_grid.hpp"

namespace {

using nlohmann::json;
using namespace specvs;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitKinematicLimit = 4;

struct RunConfig {
    ControllerConfig controller;
    uint64_t seed = 0;
    bool debug_dump = false;
};

json config_to_json(const RunConfig& cfg) {
    return json{{"lambda_t", cfg.controller.lambda_t},
                {"lambda_r", cfg.controller.lambda_r},
                {"eps_g", cfg.controller.eps_g},
                {"max_iters", cfg.controller.max_iters},
                {"resolution", cfg.controller.resolution},
                {"bandwidth", cfg.controller.bandwidth},
                {"l_max", cfg.controller.l_max},
                {"subvoxel", cfg.controller.subvoxel},
                {"threads", cfg.controller.threads},
                {"max_rot_step", cfg.controller.max_rot_step},
                {"max_lin_vel", cfg.controller.max_lin_vel},
                {"max_ang_vel", cfg.controller.max_ang_vel},
                {"seed", cfg.seed},
                {"debug_dump", cfg.debug_dump}};
}

void apply_config_json(const json& doc, RunConfig& cfg, const std::string& path) {
    for (const auto& [key, value] : doc.items()) {
        if (key == "lambda_t") cfg.controller.lambda_t = value.get<double>();
        else if (key == "lambda_r") cfg.controller.lambda_r = value.get<double>();
        else if (key == "eps_g") cfg.controller.eps_g = value.get<double>();
        else if (key == "max_iters") cfg.controller.max_iters = value.get<int>();
        else if (key == "resolution") cfg.controller.resolution = value.get<double>();
        else if (key == "bandwidth") cfg.controller.bandwidth = value.get<int>();
        else if (key == "l_max") cfg.controller.l_max = value.get<int>();
        else if (key == "subvoxel") cfg.controller.subvoxel = value.get<bool>();
        else if (key == "threads") cfg.controller.threads = value.get<int>();
        else if (key == "max_rot_step") cfg.controller.max_rot_step = value.get<double>();
        else if (key == "max_lin_vel") cfg.controller.max_lin_vel = value.get<double>();
        else if (key == "max_ang_vel") cfg.controller.max_ang_vel = value.get<double>();
        else if (key == "seed") cfg.seed = value.get<uint64_t>();
        else if (key == "debug_dump") cfg.debug_dump = value.get<bool>();
        else throw FormatError(path + ": unknown config key '" + key + "'");
    }
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(path + ": " + e.what());
    }
    apply_config_json(doc, cfg, path);
}

void write_transform_json(const std::string& path, const AlignResult& result) {
    const Eigen::Quaterniond q(result.h.rotation);
    const EulerZyz zyz = zyz_from_rotation(result.h.rotation);
    json doc{
        {"converged", result.converged},
        {"iterations", result.iterations},
        {"pivot", {result.pivot.x(), result.pivot.y(), result.pivot.z()}},
        {"translation",
         {result.h.translation.x(), result.h.translation.y(), result.h.translation.z()}},
        {"translation_origin_pivot",
         {result.h_origin.translation.x(), result.h_origin.translation.y(),
          result.h_origin.translation.z()}},
        {"quaternion_wxyz", {q.w(), q.x(), q.y(), q.z()}},
        {"euler_zyz", {zyz.alpha, zyz.beta, zyz.gamma}},
    };
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

int cmd_align(const std::string& ref_path, const std::string& target_path, const RunConfig& cfg,
              const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    PointCloud reference = load_cloud(ref_path);
    PointCloud target = load_cloud(target_path);
    if (!reference.has_normals())
        throw FormatError("reference cloud '" + ref_path + "' carries no normals");
    if (!target.has_normals())
        throw FormatError("target cloud '" + target_path + "' carries no normals");

    AlignHooks hooks;
    if (cfg.debug_dump) hooks.debug_dir = out_dir;
    const AlignResult result = align(reference, target, cfg.controller, hooks);

    write_transform_json(out_dir + "/transform.json", result);
    write_trace_csv(out_dir + "/trace.csv", result.trace);
    write_trace_json(out_dir + "/trace.json", result.trace, result.converged);
    write_convergence_svg(out_dir + "/convergence.svg", result.trace, "Alignment convergence");

    if (!result.converged) {
        std::fprintf(stderr, "error: no-convergence: max_iters=%d reached\n",
                     cfg.controller.max_iters);
        return kExitNoConvergence;
    }
    std::printf("converged in %d iterations\n", result.iterations);
    return kExitOk;
}

int cmd_servo(const std::string& scene_path, const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const Scene scene = load_scene(scene_path);
    if (!scene.servo)
        throw FormatError(scene_path + ": scene lacks a 'servo' block");

    const PointCloud world = make_clutter(scene.objects, cfg.seed);

    SimRobot robot = SimRobot::make_default();
    if (scene.servo->goal_joints.size() != robot.dof())
        throw FormatError(scene_path + ": goal_joints must have " + std::to_string(robot.dof()) +
                          " entries");
    const VecX goal_joints = scene.servo->goal_joints;

    CameraModel cam = scene.camera;
    cam.pose = robot.camera_pose(goal_joints);
    const PointCloud reference =
        capture(world, cam, mix_seed(cfg.seed, 0xFEED), CaptureFrame::kCamera);

    // Start pose: the goal camera pose shifted by the configured offset
    // (expressed in the goal camera frame), reached via IK.
    RigidTransform offset;
    offset.translation = scene.servo->start_offset_xyz;
    offset.rotation = euler_zyz_to_rot(scene.servo->start_offset_zyz.x(),
                                       scene.servo->start_offset_zyz.y(),
                                       scene.servo->start_offset_zyz.z());
    const RigidTransform start_pose = robot.camera_pose(goal_joints).compose(offset);
    const IkResult ik = solve_camera_ik(robot, start_pose, goal_joints);
    if (!ik.converged) throw FormatError(scene_path + ": start offset is not reachable");
    robot.joint_angles = ik.joints;

    ServoOptions options;
    options.camera = scene.camera;
    options.dt = scene.servo->dt;
    options.seed = cfg.seed;
    const ServoResult result = servo_loop(world, robot, reference, cfg.controller, options);

    write_trace_csv(out_dir + "/trace.csv", result.trace);
    write_trace_json(out_dir + "/trace.json", result.trace, result.converged);
    write_convergence_svg(out_dir + "/convergence.svg", result.trace, "Servoing convergence");
    {
        std::ofstream joints(out_dir + "/joints.csv");
        joints << "iter";
        for (int i = 0; i < robot.dof(); ++i) joints << ",q" << i;
        joints << "\n";
        char buf[64];
        for (size_t it = 0; it < result.joint_trajectory.size(); ++it) {
            joints << it;
            for (int i = 0; i < robot.dof(); ++i) {
                std::snprintf(buf, sizeof buf, ",%.17g", result.joint_trajectory[it](i));
                joints << buf;
            }
            joints << "\n";
        }
    }
    {
        std::ofstream path_csv(out_dir + "/ee_path.csv");
        path_csv << "iter,x,y,z,qw,qx,qy,qz\n";
        char buf[256];
        for (size_t it = 0; it < result.camera_path.size(); ++it) {
            const auto& pose = result.camera_path[it];
            const Eigen::Quaterniond q(pose.rotation);
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", it,
                          pose.translation.x(), pose.translation.y(), pose.translation.z(), q.w(),
                          q.x(), q.y(), q.z());
            path_csv << buf;
        }
    }

    if (result.kinematic_limit) {
        std::fprintf(stderr, "error: kinematic-limit-exceeded: joint limits violated\n");
        return kExitKinematicLimit;
    }
    if (!result.converged) {
        std::fprintf(stderr, "error: no-convergence: max_iters=%d reached\n",
                     cfg.controller.max_iters);
        return kExitNoConvergence;
    }
    std::printf("converged in %zu cycles\n", result.trace.size());
    return kExitOk;
}

int cmd_inspect(const std::string& cloud_path, const std::string& mode, const RunConfig& cfg,
                const std::string& out_path) {
    PointCloud cloud = load_cloud(cloud_path);
    const std::string out = out_path.empty() ? "/dev/stdout" : out_path;
    if (mode == "voxel") {
        write_voxel_csv(out, voxelize(cloud, cfg.controller.resolution));
    } else if (mode == "egi") {
        write_egi_csv(out, build_egi(cloud, cfg.controller.bandwidth));
    } else if (mode == "coeffs") {
        const auto tables =
            HarmonicTables::get(cfg.controller.bandwidth, cfg.controller.effective_l_max());
        write_coeffs_csv(out, sph_forward(build_egi(cloud, cfg.controller.bandwidth), *tables));
    } else {
        throw FormatError("unknown inspect mode '" + mode + "' (expected voxel|egi|coeffs)");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral-domain point-cloud registration and visual servoing"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::string out_dir = "specvs_out";
    bool print_config = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (flags override it)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--threads", cfg.controller.threads, "worker threads (default 1)");
        sub->add_flag("--debug-dump", cfg.debug_dump, "dump grids/EGIs/coefficients as CSV");
        sub->add_flag("--print-config", print_config, "print the effective config and exit");
        sub->add_option("--lambda-t", cfg.controller.lambda_t, "translation gain");
        sub->add_option("--lambda-r", cfg.controller.lambda_r, "rotation gain");
        sub->add_option("--eps-g", cfg.controller.eps_g, "convergence tolerance");
        sub->add_option("--max-iters", cfg.controller.max_iters, "iteration cap");
        sub->add_option("--resolution", cfg.controller.resolution, "voxel resolution [m]");
        sub->add_option("--bandwidth", cfg.controller.bandwidth, "EGI bandwidth B");
        sub->add_option("--l-max", cfg.controller.l_max, "harmonic degree cutoff (0 = B)");
        sub->add_flag("--subvoxel", cfg.controller.subvoxel, "sub-voxel peak refinement");
    };

    std::string ref_path, target_path, scene_path, cloud_path, mode = "egi", out_path;

    CLI::App* align_cmd = app.add_subcommand("align", "align a reference cloud onto a target");
    align_cmd->add_option("reference", ref_path, "reference cloud (.ply/.pcd)")->required();
    align_cmd->add_option("target", target_path, "target cloud (.ply/.pcd)")->required();
    add_common(align_cmd);

    CLI::App* servo_cmd = app.add_subcommand("servo", "run the simulated servoing loop");
    servo_cmd->add_option("scene", scene_path, "scene description JSON")->required();
    add_common(servo_cmd);

    CLI::App* inspect_cmd = app.add_subcommand("inspect", "dump a representation as CSV");
    inspect_cmd->add_option("cloud", cloud_path, "cloud file (.ply/.pcd)")->required();
    inspect_cmd->add_option("--mode", mode, "voxel | egi | coeffs");
    inspect_cmd->add_option("--csv-out", out_path, "CSV destination (default stdout)");
    add_common(inspect_cmd);

    // Parse CLI first to find --config, then re-parse so flags override the
    // file values.
    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            load_config_file(config_path, cfg);
            CLI::App reparse{""};
            app.clear();
            app.parse(argc, argv);
        }
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::fprintf(stderr, "error: bad-arguments: %s\n", e.what());
        return kExitBadInput;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadInput;
    }

    if (print_config) {
        std::printf("%s\n", config_to_json(cfg).dump(2).c_str());
        return kExitOk;
    }

    try {
        cfg.controller.validate();
        if (align_cmd->parsed()) return cmd_align(ref_path, target_path, cfg, out_dir);
        if (servo_cmd->parsed()) return cmd_servo(scene_path, cfg, out_dir);
        if (inspect_cmd->parsed()) return cmd_inspect(cloud_path, mode, cfg, out_path);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return kExitBadInput;
    }
    return kExitBadInput;
}

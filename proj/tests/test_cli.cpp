#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "test_helpers.hpp"

#include "specvs/cloud_io.hpp"
#include "specvs/point_cloud.hpp"
#include "specvs/rigid_transform.hpp"

using namespace specvs;

namespace {

std::string cli_path() { return std::string(SPECVS_BINARY_DIR) + "/tools/specvs"; }

struct RunOutput {
    int exit_code = -1;
    std::string stdout_text;
    std::string stderr_text;
};

RunOutput run_cli(const std::string& args, const std::string& tag) {
    const std::string dir = helpers::temp_dir("cli_run");
    const std::string out_file = dir + "/" + tag + ".out";
    const std::string err_file = dir + "/" + tag + ".err";
    const std::string cmd = cli_path() + " " + args + " >" + out_file + " 2>" + err_file;
    const int status = std::system(cmd.c_str());
    RunOutput out;
    out.exit_code = WEXITSTATUS(status);
    const auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    out.stdout_text = slurp(out_file);
    out.stderr_text = slurp(err_file);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("cli: --print-config dumps all defaults as JSON") {
    const RunOutput out = run_cli("align a.ply b.ply --print-config", "printcfg");
    CHECK(out.exit_code == 0);
    for (const char* key : {"lambda_t", "lambda_r", "eps_g", "max_iters", "resolution",
                            "bandwidth", "l_max", "subvoxel", "threads", "seed"})
        CHECK(out.stdout_text.find(key) != std::string::npos);
}

TEST_CASE("cli align: identical reference and target converge to identity (exit 0)") {
    const std::string dir = helpers::temp_dir("cli_align_id");
    const PointCloud mug = helpers::make_mug(101);
    save_cloud(dir + "/cloud.ply", mug);

    const RunOutput out = run_cli("align " + dir + "/cloud.ply " + dir + "/cloud.ply --out " +
                                      dir + "/out",
                                  "align_id");
    CHECK(out.exit_code == 0);

    const std::string json = read_file(dir + "/out/transform.json");
    CHECK(json.find("\"converged\": true") != std::string::npos);
    // ||T|| < 1e-3 and rotation within 1 degree of identity.
    const std::string trace = read_file(dir + "/out/trace.csv");
    CHECK(trace.find("iter,j_t,j_r") == 0);
    CHECK(read_file(dir + "/out/convergence.svg").find("<svg") != std::string::npos);
}

TEST_CASE("cli align: committed C-1 fixture pair meets the cost orders (exit 0)") {
    const std::string fixtures = helpers::source_dir() + "/tests/fixtures";
    const std::string dir = helpers::temp_dir("cli_align_c1");
    const RunOutput out = run_cli(
        "align " + fixtures + "/c1_ref.ply " + fixtures + "/c1_target.ply --out " + dir + "/out",
        "align_c1");
    CHECK(out.exit_code == 0);
    const std::string json = read_file(dir + "/out/transform.json");
    CHECK(json.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("cli align: max_iters=1 on a displaced pair exits 3 with a 1-row trace") {
    const std::string dir = helpers::temp_dir("cli_align_noconv");
    const PointCloud mug = helpers::make_mug(103);
    RigidTransform shift;
    shift.translation = Vec3(0.04, 0.0, 0.0);
    save_cloud(dir + "/ref.ply", mug);
    save_cloud(dir + "/target.ply", apply_transform(mug, shift));

    const RunOutput out = run_cli("align " + dir + "/ref.ply " + dir + "/target.ply --out " +
                                      dir + "/out --max-iters 1",
                                  "align_noconv");
    CHECK(out.exit_code == 3);
    CHECK(out.stderr_text.find("error: no-convergence") == 0);

    std::istringstream trace(read_file(dir + "/out/trace.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(trace, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);  // header + one iteration
}

TEST_CASE("cli align: bad inputs exit 2 with a machine-parsable reason") {
    const RunOutput missing = run_cli("align /nope.ply /nope2.ply --out /tmp/x", "missing");
    CHECK(missing.exit_code == 2);
    CHECK(missing.stderr_text.rfind("error: ", 0) == 0);
    CHECK(missing.stderr_text.find('\n') == missing.stderr_text.size() - 1);  // one line

    const std::string dir = helpers::temp_dir("cli_badcfg");
    std::ofstream(dir + "/cfg.json") << "{\"unknown_key\": 1}";
    const PointCloud mug = helpers::make_mug(105, 1e4);
    save_cloud(dir + "/c.ply", mug);
    const RunOutput badkey = run_cli(
        "align " + dir + "/c.ply " + dir + "/c.ply --config " + dir + "/cfg.json", "badkey");
    CHECK(badkey.exit_code == 2);
    CHECK(badkey.stderr_text.find("unknown_key") != std::string::npos);
}

TEST_CASE("cli servo: malformed scene JSON exits 2 with a line-anchored message") {
    const std::string dir = helpers::temp_dir("cli_servo_bad");
    std::ofstream(dir + "/scene.json") << "{\n  \"objects\": [\n    {\"kind\" }\n  ]\n}\n";
    const RunOutput out = run_cli("servo " + dir + "/scene.json --out " + dir + "/out",
                                  "servo_bad");
    CHECK(out.exit_code == 2);
    CHECK(out.stderr_text.rfind("error: parse-error", 0) == 0);
    CHECK(out.stderr_text.find(":3:") != std::string::npos);
}

TEST_CASE("cli inspect: egi counts sum to the point count; voxel mode on a 1-point cloud") {
    const std::string dir = helpers::temp_dir("cli_inspect");
    SceneObject obj;
    obj.kind = ShapeKind::kSphere;
    obj.dimensions = Vec3(0.5, 0.5, 0.5);
    obj.density = 3000.0;
    const PointCloud sphere = synth_object(obj, 5);
    save_cloud(dir + "/sphere.ply", sphere);

    const RunOutput egi = run_cli("inspect " + dir + "/sphere.ply --mode egi --csv-out " + dir +
                                      "/egi.csv",
                                  "inspect_egi");
    CHECK(egi.exit_code == 0);
    std::istringstream rows(read_file(dir + "/egi.csv"));
    std::string line;
    std::getline(rows, line);
    CHECK(line == "j,k,count");
    long total = 0;
    while (std::getline(rows, line)) {
        const auto last_comma = line.find_last_of(',');
        total += std::stol(line.substr(last_comma + 1));
    }
    CHECK(total == static_cast<long>(sphere.size()));

    // Single-point cloud: exactly one voxel row after the header.
    PointCloud single;
    single.points.emplace_back(0.0, 0.0, 0.0);
    single.normals.emplace_back(0.0, 0.0, 1.0);
    save_cloud(dir + "/single.ply", single);
    const RunOutput voxel = run_cli("inspect " + dir + "/single.ply --mode voxel --csv-out " +
                                        dir + "/voxel.csv",
                                    "inspect_voxel");
    CHECK(voxel.exit_code == 0);
    std::istringstream vrows(read_file(dir + "/voxel.csv"));
    int count = 0;
    while (std::getline(vrows, line))
        if (!line.empty()) ++count;
    CHECK(count == 2);  // header + 1 voxel

    // Uniform-normal cloud: the l = 0 coefficient dominates.
    PointCloud up = sphere;
    for (auto& n : up.normals) n = Vec3(0, 0, 1);
    save_cloud(dir + "/up.ply", up);
    const RunOutput coeffs = run_cli("inspect " + dir + "/up.ply --mode coeffs --csv-out " + dir +
                                         "/coeffs.csv",
                                     "inspect_coeffs");
    CHECK(coeffs.exit_code == 0);
    std::istringstream crows(read_file(dir + "/coeffs.csv"));
    std::getline(crows, line);
    double l0 = 0.0, others = 0.0;
    while (std::getline(crows, line)) {
        const auto first = line.find(',');
        const auto last = line.find_last_of(',');
        const int l = std::stoi(line.substr(0, first));
        const double v = std::abs(std::stod(line.substr(last + 1)));
        if (l == 0)
            l0 = v;
        else
            others = std::max(others, v);
    }
    CHECK(l0 > others);

    const RunOutput bad = run_cli("inspect " + dir + "/missing.ply --mode egi", "inspect_bad");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: byte-identical outputs for the same inputs, seed, and single thread") {
    const std::string dir = helpers::temp_dir("cli_determinism");
    const PointCloud mug = helpers::make_mug(107);
    RigidTransform shift;
    shift.rotation = rot_z(0.2);
    shift.translation = Vec3(0.02, 0.01, 0.0);
    save_cloud(dir + "/ref.ply", mug);
    save_cloud(dir + "/target.ply", apply_transform(mug, shift, TransformPivot::kCentroid));

    const std::string args = "align " + dir + "/ref.ply " + dir + "/target.ply --seed 9 ";
    run_cli(args + "--out " + dir + "/a", "det_a");
    run_cli(args + "--out " + dir + "/b", "det_b");
    CHECK(read_file(dir + "/a/trace.csv") == read_file(dir + "/b/trace.csv"));
    CHECK(read_file(dir + "/a/transform.json") == read_file(dir + "/b/transform.json"));
}

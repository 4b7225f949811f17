#include "specvs/cloud_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "specvs/error.hpp"

namespace specvs {
namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, const std::string& path, long line) {
    double v = 0.0;
    const auto* begin = tok.data();
    const auto* end = tok.data() + tok.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw ParseError(path, line, "expected a number, got '" + tok + "'");
    return v;
}

long parse_count(const std::string& tok, const std::string& path, long line) {
    long v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v < 0)
        throw ParseError(path, line, "expected a non-negative count, got '" + tok + "'");
    return v;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_float_type(const std::string& t) {
    return t == "float" || t == "float32" || t == "double" || t == "float64";
}

struct PlyHeader {
    long vertex_count = -1;
    long face_count = 0;
    std::vector<std::string> vertex_properties;  // in declaration order
    long header_end_line = 0;
    bool faces_after_vertices = true;
};

PlyHeader parse_ply_header(std::ifstream& in, const std::string& path, long& line_no) {
    PlyHeader h;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path, 1, "empty file");
    ++line_no;
    if (line != "ply" && line != "ply\r") throw ParseError(path, line_no, "missing 'ply' magic");

    std::string current_element;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks[0] == "comment" || toks[0] == "obj_info") continue;
        if (toks[0] == "format") {
            if (toks.size() < 2 || toks[1] != "ascii")
                throw ParseError(path, line_no, "only 'format ascii' PLY is supported");
        } else if (toks[0] == "element") {
            if (toks.size() < 3) throw ParseError(path, line_no, "malformed element line");
            current_element = toks[1];
            if (toks[1] == "vertex") {
                h.vertex_count = parse_count(toks[2], path, line_no);
            } else if (toks[1] == "face") {
                h.face_count = parse_count(toks[2], path, line_no);
                h.faces_after_vertices = h.vertex_count >= 0;
            }
        } else if (toks[0] == "property") {
            if (current_element == "vertex") {
                if (toks.size() == 3) {
                    if (!is_float_type(toks[1]))
                        throw ParseError(path, line_no,
                                         "unsupported vertex property type '" + toks[1] + "'");
                    h.vertex_properties.push_back(lower(toks[2]));
                } else if (toks.size() == 5 && toks[1] == "list") {
                    throw ParseError(path, line_no, "list property not allowed on vertices");
                } else {
                    throw ParseError(path, line_no, "malformed property line");
                }
            }
            // face properties (vertex_indices list) need no bookkeeping
        } else if (toks[0] == "end_header") {
            h.header_end_line = line_no;
            if (h.vertex_count < 0) throw ParseError(path, line_no, "no 'element vertex' declared");
            return h;
        } else {
            throw ParseError(path, line_no, "unrecognized header line '" + toks[0] + "'");
        }
    }
    throw ParseError(path, line_no, "unterminated header (no end_header)");
}

int find_prop(const std::vector<std::string>& props, const std::string& name) {
    auto it = std::find(props.begin(), props.end(), name);
    return it == props.end() ? -1 : static_cast<int>(it - props.begin());
}

PointCloud load_ply(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    long line_no = 0;
    PlyHeader h = parse_ply_header(in, path, line_no);
    if (h.vertex_count == 0) throw ParseError(path, h.header_end_line, "zero vertices");

    const int ix = find_prop(h.vertex_properties, "x");
    const int iy = find_prop(h.vertex_properties, "y");
    const int iz = find_prop(h.vertex_properties, "z");
    if (ix < 0 || iy < 0 || iz < 0)
        throw ParseError(path, h.header_end_line, "vertex element lacks x/y/z properties");
    const int inx = find_prop(h.vertex_properties, "nx");
    const int iny = find_prop(h.vertex_properties, "ny");
    const int inz = find_prop(h.vertex_properties, "nz");
    const bool with_normals = inx >= 0 && iny >= 0 && inz >= 0;

    PointCloud cloud;
    cloud.points.reserve(h.vertex_count);
    if (with_normals) cloud.normals.reserve(h.vertex_count);

    std::string line;
    for (long v = 0; v < h.vertex_count;) {
        if (!std::getline(in, line)) throw ParseError(path, line_no, "unexpected end of file");
        ++line_no;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks.size() < h.vertex_properties.size())
            throw ParseError(path, line_no, "expected " +
                             std::to_string(h.vertex_properties.size()) + " values, got " +
                             std::to_string(toks.size()));
        cloud.points.emplace_back(parse_double(toks[ix], path, line_no),
                                  parse_double(toks[iy], path, line_no),
                                  parse_double(toks[iz], path, line_no));
        if (with_normals)
            cloud.normals.emplace_back(parse_double(toks[inx], path, line_no),
                                       parse_double(toks[iny], path, line_no),
                                       parse_double(toks[inz], path, line_no));
        ++v;
    }
    return cloud;
}

PointCloud load_pcd(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::vector<std::string> fields;
    long points = -1;
    bool data_seen = false;
    long line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        const std::string key = toks[0];
        if (key == "FIELDS") {
            fields.assign(toks.begin() + 1, toks.end());
        } else if (key == "POINTS") {
            if (toks.size() < 2) throw ParseError(path, line_no, "malformed POINTS line");
            points = parse_count(toks[1], path, line_no);
        } else if (key == "DATA") {
            if (toks.size() < 2 || toks[1] != "ascii")
                throw ParseError(path, line_no, "only 'DATA ascii' PCD is supported");
            data_seen = true;
            break;
        }
        // VERSION / SIZE / TYPE / COUNT / WIDTH / HEIGHT / VIEWPOINT are
        // accepted and ignored; geometry comes from FIELDS + POINTS.
    }
    if (!data_seen) throw ParseError(path, line_no, "missing DATA section");
    if (points < 0) throw ParseError(path, line_no, "missing POINTS line");
    if (points == 0) throw ParseError(path, line_no, "zero vertices");

    const int ix = find_prop(fields, "x");
    const int iy = find_prop(fields, "y");
    const int iz = find_prop(fields, "z");
    if (ix < 0 || iy < 0 || iz < 0) throw ParseError(path, line_no, "FIELDS lack x y z");
    const int inx = find_prop(fields, "normal_x");
    const int iny = find_prop(fields, "normal_y");
    const int inz = find_prop(fields, "normal_z");
    const bool with_normals = inx >= 0 && iny >= 0 && inz >= 0;

    PointCloud cloud;
    cloud.points.reserve(points);
    if (with_normals) cloud.normals.reserve(points);
    for (long v = 0; v < points;) {
        if (!std::getline(in, line)) throw ParseError(path, line_no, "unexpected end of file");
        ++line_no;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks.size() < fields.size())
            throw ParseError(path, line_no, "expected " + std::to_string(fields.size()) +
                             " values, got " + std::to_string(toks.size()));
        cloud.points.emplace_back(parse_double(toks[ix], path, line_no),
                                  parse_double(toks[iy], path, line_no),
                                  parse_double(toks[iz], path, line_no));
        if (with_normals)
            cloud.normals.emplace_back(parse_double(toks[inx], path, line_no),
                                       parse_double(toks[iny], path, line_no),
                                       parse_double(toks[inz], path, line_no));
        ++v;
    }
    return cloud;
}

void write_value(std::FILE* f, double v) { std::fprintf(f, "%.17g", v); }

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

}  // namespace

CloudFormat format_from_path(const std::string& path) {
    auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : lower(path.substr(dot + 1));
    if (ext == "ply") return CloudFormat::kPlyAscii;
    if (ext == "pcd") return CloudFormat::kPcdAscii;
    throw FormatError("cannot deduce cloud format from '" + path + "' (expected .ply or .pcd)");
}

PointCloud load_cloud(const std::string& path, CloudFormat format) {
    return format == CloudFormat::kPlyAscii ? load_ply(path) : load_pcd(path);
}

PointCloud load_cloud(const std::string& path) { return load_cloud(path, format_from_path(path)); }

void save_cloud(const std::string& path, const PointCloud& cloud, CloudFormat format) {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "w"));
    if (!f) throw IoError("cannot write '" + path + "'");
    const bool normals = cloud.has_normals();
    if (format == CloudFormat::kPlyAscii) {
        std::fprintf(f.get(), "ply\nformat ascii 1.0\nelement vertex %zu\n", cloud.size());
        std::fprintf(f.get(), "property double x\nproperty double y\nproperty double z\n");
        if (normals)
            std::fprintf(f.get(),
                         "property double nx\nproperty double ny\nproperty double nz\n");
        std::fprintf(f.get(), "end_header\n");
        for (size_t i = 0; i < cloud.size(); ++i) {
            const Vec3& p = cloud.points[i];
            write_value(f.get(), p.x());
            std::fputc(' ', f.get());
            write_value(f.get(), p.y());
            std::fputc(' ', f.get());
            write_value(f.get(), p.z());
            if (normals) {
                const Vec3& n = cloud.normals[i];
                for (int k = 0; k < 3; ++k) {
                    std::fputc(' ', f.get());
                    write_value(f.get(), n[k]);
                }
            }
            std::fputc('\n', f.get());
        }
    } else {
        const char* fields = normals ? "x y z normal_x normal_y normal_z" : "x y z";
        const int n_fields = normals ? 6 : 3;
        std::fprintf(f.get(), "# .PCD v0.7 - Point Cloud Data file format\n");
        std::fprintf(f.get(), "VERSION 0.7\nFIELDS %s\nSIZE", fields);
        for (int k = 0; k < n_fields; ++k) std::fprintf(f.get(), " 8");
        std::fprintf(f.get(), "\nTYPE");
        for (int k = 0; k < n_fields; ++k) std::fprintf(f.get(), " F");
        std::fprintf(f.get(), "\nCOUNT");
        for (int k = 0; k < n_fields; ++k) std::fprintf(f.get(), " 1");
        std::fprintf(f.get(), "\nWIDTH %zu\nHEIGHT 1\nVIEWPOINT 0 0 0 1 0 0 0\nPOINTS %zu\nDATA ascii\n",
                     cloud.size(), cloud.size());
        for (size_t i = 0; i < cloud.size(); ++i) {
            const Vec3& p = cloud.points[i];
            write_value(f.get(), p.x());
            std::fputc(' ', f.get());
            write_value(f.get(), p.y());
            std::fputc(' ', f.get());
            write_value(f.get(), p.z());
            if (normals) {
                const Vec3& n = cloud.normals[i];
                for (int k = 0; k < 3; ++k) {
                    std::fputc(' ', f.get());
                    write_value(f.get(), n[k]);
                }
            }
            std::fputc('\n', f.get());
        }
    }
}

void save_cloud(const std::string& path, const PointCloud& cloud) {
    save_cloud(path, cloud, format_from_path(path));
}

TriMesh load_mesh_ply(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    long line_no = 0;
    PlyHeader h = parse_ply_header(in, path, line_no);
    if (h.vertex_count == 0) throw ParseError(path, h.header_end_line, "zero vertices");

    const int ix = find_prop(h.vertex_properties, "x");
    const int iy = find_prop(h.vertex_properties, "y");
    const int iz = find_prop(h.vertex_properties, "z");
    if (ix < 0 || iy < 0 || iz < 0)
        throw ParseError(path, h.header_end_line, "vertex element lacks x/y/z properties");

    TriMesh mesh;
    mesh.vertices.reserve(h.vertex_count);
    std::string line;
    for (long v = 0; v < h.vertex_count;) {
        if (!std::getline(in, line)) throw ParseError(path, line_no, "unexpected end of file");
        ++line_no;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        mesh.vertices.emplace_back(parse_double(toks[ix], path, line_no),
                                   parse_double(toks[iy], path, line_no),
                                   parse_double(toks[iz], path, line_no));
        ++v;
    }
    for (long t = 0; t < h.face_count;) {
        if (!std::getline(in, line)) throw ParseError(path, line_no, "unexpected end of file");
        ++line_no;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        const long n = parse_count(toks[0], path, line_no);
        if (static_cast<long>(toks.size()) < n + 1)
            throw ParseError(path, line_no, "face index list shorter than its count");
        std::vector<int> idx(n);
        for (long k = 0; k < n; ++k) {
            idx[k] = static_cast<int>(parse_count(toks[1 + k], path, line_no));
            if (idx[k] >= h.vertex_count)
                throw ParseError(path, line_no, "face references vertex " + std::to_string(idx[k]) +
                                 " out of range");
        }
        for (long k = 2; k < n; ++k)  // fan triangulation
            mesh.triangles.push_back({idx[0], idx[k - 1], idx[k]});
        ++t;
    }
    return mesh;
}

}  // namespace specvs

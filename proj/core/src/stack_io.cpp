#include "mvtda/stack_io.hpp"

#include "json.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;
using nlohmann::json;

namespace mvtda {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

double parse_cell(const std::string& tok, const std::string& file, int row, int col) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        fail(file + ": non-numeric cell '" + tok + "' at row " + std::to_string(row) +
             ", column " + std::to_string(col));
    }
}

} // namespace

std::string format_double(double v) {
    // integral values print without exponent or trailing digits
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f", v);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ImageStack load_frame_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open frame file: " + path);
    std::vector<double> values;
    int cols = -1;
    int row = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c)) && c != ',') { blank = false; break; }
        if (blank) continue;
        ++row;
        std::vector<std::string> toks;
        std::string tok;
        std::stringstream ss(line);
        while (std::getline(ss, tok, ',')) toks.push_back(tok);
        if (cols < 0) cols = static_cast<int>(toks.size());
        else if (static_cast<int>(toks.size()) != cols)
            fail(path + ": ragged row " + std::to_string(row) + " (expected " +
                 std::to_string(cols) + " columns, got " + std::to_string(toks.size()) + ")");
        for (int c = 0; c < cols; ++c)
            values.push_back(parse_cell(toks[c], path, row, c + 1));
    }
    if (row == 0 || cols <= 0) fail(path + ": empty frame");
    return ImageStack({row, cols}, std::move(values));
}

namespace {

ImageStack load_self_describing(const std::string& path, std::ifstream& in) {
    std::string header;
    std::getline(in, header);
    std::stringstream hs(header);
    std::string tag;
    hs >> tag; // "dims:"
    std::vector<int> dims;
    int d = 0;
    while (hs >> d) dims.push_back(d);
    if (dims.empty()) fail(path + ": malformed dims header line");
    std::size_t n = 1;
    for (int di : dims) {
        if (di < 1) fail(path + ": dims must be positive");
        n *= static_cast<std::size_t>(di);
    }
    std::vector<double> values;
    values.reserve(n);
    std::string tok;
    while (in >> tok) {
        if (values.size() == n) fail(path + ": more values than dims product " + std::to_string(n));
        values.push_back(parse_cell(tok, path, 1, static_cast<int>(values.size()) + 1));
    }
    if (values.size() != n)
        fail(path + ": expected " + std::to_string(n) + " values, got " +
             std::to_string(values.size()));
    return ImageStack(std::move(dims), std::move(values));
}

ImageStack load_manifest(const std::string& path) {
    std::ifstream in(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        fail(path + ": invalid JSON manifest: " + e.what());
    }
    if (!j.contains("frames") || !j["frames"].is_array() || j["frames"].empty())
        fail(path + ": manifest must contain a non-empty \"frames\" array");
    const double spacing = j.value("time_spacing_seconds", 0.0);
    const fs::path base = fs::path(path).parent_path();
    std::vector<ImageStack> frames;
    frames.reserve(j["frames"].size());
    for (std::size_t i = 0; i < j["frames"].size(); ++i) {
        const std::string rel = j["frames"][i].get<std::string>();
        const fs::path fp = rel.empty() || fs::path(rel).is_absolute() ? fs::path(rel) : base / rel;
        if (!fs::exists(fp)) fail(path + ": frame " + std::to_string(i + 1) + " missing: " + fp.string());
        ImageStack frame = load_frame_csv(fp.string());
        if (!frames.empty() && frame.dims() != frames.front().dims())
            fail(path + ": frame " + std::to_string(i + 1) + " (" + fp.string() +
                 ") has shape " + std::to_string(frame.dims()[0]) + "x" +
                 std::to_string(frame.dims()[1]) + ", expected " +
                 std::to_string(frames.front().dims()[0]) + "x" +
                 std::to_string(frames.front().dims()[1]));
        frames.push_back(std::move(frame));
    }
    return assemble_stack(frames, spacing);
}

} // namespace

ImageStack load_stack(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) fail("cannot open input: " + path);
    // sniff: JSON manifest starts with '{', self-describing text with "dims:"
    char c = 0;
    while (probe.get(c) && std::isspace(static_cast<unsigned char>(c))) {}
    if (c == '{') return load_manifest(path);
    probe.seekg(0);
    std::string first;
    probe >> first;
    if (first == "dims:") {
        probe.seekg(0);
        return load_self_describing(path, probe);
    }
    fail(path + ": unrecognized input (expected JSON manifest or 'dims:' header)");
}

void write_frame_csv(const std::string& path, const ImageStack& frame) {
    if (frame.ndim() != 2) throw std::invalid_argument("write_frame_csv: frame must be 2D");
    std::ofstream out(path);
    if (!out) fail("cannot write frame file: " + path);
    const int rows = frame.dims()[0], cols = frame.dims()[1];
    for (int x = 0; x < rows; ++x) {
        for (int y = 0; y < cols; ++y) {
            if (y) out << ',';
            out << format_double(frame.values()[static_cast<std::size_t>(x) * cols + y]);
        }
        out << '\n';
    }
}

std::string write_stack_manifest(const std::string& dir, const ImageStack& stack) {
    if (stack.ndim() != 3) throw std::invalid_argument("write_stack_manifest: stack must be 3D");
    fs::create_directories(dir);
    json j;
    j["time_spacing_seconds"] = stack.time_spacing();
    json frames = json::array();
    for (int o = 1; o <= stack.num_frames(); ++o) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%03d.csv", o);
        write_frame_csv((fs::path(dir) / name).string(), slice_at_time(stack, o));
        frames.push_back(name);
    }
    j["frames"] = std::move(frames);
    const std::string mpath = (fs::path(dir) / "manifest.json").string();
    std::ofstream out(mpath);
    out << j.dump(2) << '\n';
    return mpath;
}

void write_mask_csv(const std::string& path, const std::vector<char>& mask,
                    int rows, int cols) {
    if (static_cast<std::size_t>(rows) * cols != mask.size())
        throw std::invalid_argument("write_mask_csv: mask size mismatch");
    std::ofstream out(path);
    if (!out) fail("cannot write mask file: " + path);
    for (int x = 0; x < rows; ++x) {
        for (int y = 0; y < cols; ++y) {
            if (y) out << ',';
            out << (mask[static_cast<std::size_t>(x) * cols + y] ? '1' : '0');
        }
        out << '\n';
    }
}

std::vector<char> load_mask_csv(const std::string& path, int& rows, int& cols) {
    ImageStack frame = load_frame_csv(path);
    rows = frame.dims()[0];
    cols = frame.dims()[1];
    std::vector<char> mask(frame.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const double v = frame.values()[i];
        if (v != 0.0 && v != 1.0)
            fail(path + ": mask cells must be 0 or 1, found " + format_double(v));
        mask[i] = v != 0.0;
    }
    return mask;
}

} // namespace mvtda

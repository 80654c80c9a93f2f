#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mvtda/stack_io.hpp"

#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;
using namespace mvtda;

namespace {

fs::path make_temp_dir(const char* suffix) {
    auto p = fs::temp_directory_path() / (std::string("mvtda_io_") + suffix);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

} // namespace

TEST_CASE("manifest with three 2x2 frames loads as a (2,2,3) stack") {
    auto dir = make_temp_dir("manifest");
    write(dir / "f1.csv", "1,2\n3,4\n");
    write(dir / "f2.csv", "5,6\n7,8\n");
    write(dir / "f3.csv", "9,10\n11,12\n");
    write(dir / "manifest.json",
          R"({"frames": ["f1.csv", "f2.csv", "f3.csv"], "time_spacing_seconds": 8.0})");
    ImageStack s = load_stack((dir / "manifest.json").string());
    CHECK(s.dims() == std::vector<int>{2, 2, 3});
    CHECK(s.time_spacing() == 8.0);
    CHECK(s.values() == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
}

TEST_CASE("frame of the wrong shape is reported by name") {
    auto dir = make_temp_dir("ragged");
    write(dir / "f1.csv", "1,2\n3,4\n");
    write(dir / "f2.csv", "5,6,7\n8,9,10\n");
    write(dir / "manifest.json", R"({"frames": ["f1.csv", "f2.csv"]})");
    CHECK_THROWS_WITH_AS(load_stack((dir / "manifest.json").string()),
                         doctest::Contains("f2.csv"), std::invalid_argument);
}

TEST_CASE("missing frame, empty list and bad cells are validation errors") {
    auto dir = make_temp_dir("bad");
    write(dir / "manifest.json", R"({"frames": ["nope.csv"]})");
    CHECK_THROWS_WITH_AS(load_stack((dir / "manifest.json").string()),
                         doctest::Contains("nope.csv"), std::invalid_argument);
    write(dir / "empty.json", R"({"frames": []})");
    CHECK_THROWS_AS(load_stack((dir / "empty.json").string()), std::invalid_argument);
    write(dir / "f1.csv", "1,x\n2,3\n");
    write(dir / "m2.json", R"({"frames": ["f1.csv"]})");
    CHECK_THROWS_WITH_AS(load_stack((dir / "m2.json").string()), doctest::Contains("row 1"),
                         std::invalid_argument);
}

TEST_CASE("ragged rows inside one frame are rejected") {
    auto dir = make_temp_dir("raggedrow");
    write(dir / "f.csv", "1,2\n3\n");
    CHECK_THROWS_WITH_AS(load_frame_csv((dir / "f.csv").string()),
                         doctest::Contains("ragged"), std::invalid_argument);
}

TEST_CASE("self-describing text format round-trips") {
    auto dir = make_temp_dir("selfdesc");
    write(dir / "stack.txt", "dims: 2 2 2\n1 2 3 4\n5 6 7 8\n");
    ImageStack s = load_stack((dir / "stack.txt").string());
    CHECK(s.dims() == std::vector<int>{2, 2, 2});
    CHECK(s.values() == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8});
    write(dir / "short.txt", "dims: 2 2 2\n1 2 3\n");
    CHECK_THROWS_WITH_AS(load_stack((dir / "short.txt").string()), doctest::Contains("expected"),
                         std::invalid_argument);
}

TEST_CASE("write_stack_manifest round-trips bit-exact integer data") {
    auto dir = make_temp_dir("roundtrip");
    std::vector<double> v(2 * 3 * 2);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i * 7 % 11);
    ImageStack s({2, 3, 2}, v, 4.0);
    const std::string manifest = write_stack_manifest((dir / "out").string(), s);
    ImageStack back = load_stack(manifest);
    CHECK(back.dims() == s.dims());
    CHECK(back.time_spacing() == 4.0);
    CHECK(back.values() == s.values());
}

TEST_CASE("mask CSV round-trip and validation") {
    auto dir = make_temp_dir("mask");
    std::vector<char> mask{1, 0, 0, 1, 1, 0};
    write_mask_csv((dir / "m.csv").string(), mask, 2, 3);
    int r = 0, c = 0;
    CHECK(load_mask_csv((dir / "m.csv").string(), r, c) == mask);
    CHECK(r == 2);
    CHECK(c == 3);
    write(dir / "bad.csv", "0,2\n1,0\n");
    CHECK_THROWS_AS(load_mask_csv((dir / "bad.csv").string(), r, c), std::invalid_argument);
}

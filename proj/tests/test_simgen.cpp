#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mvtda/persistence.hpp"
#include "mvtda/simgen.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace mvtda;

TEST_CASE("sigma0 = 0 gives raw equal to truth, and generation is deterministic") {
    Generated a = generate(canonical_pattern("A2"), NoiseSpec{0.0, 0.0, 3});
    CHECK(a.raw.values() == a.truth.values());

    Generated b = generate(canonical_pattern("A2"), NoiseSpec{0.0, 2.0, 3});
    Generated c = generate(canonical_pattern("A2"), NoiseSpec{0.0, 2.0, 3});
    CHECK(b.raw.values() == c.raw.values());
    Generated d = generate(canonical_pattern("A2"), NoiseSpec{0.0, 2.0, 4});
    CHECK(b.raw.values() != d.raw.values());
}

TEST_CASE("A2 truth table: one loop with a contiguous presence interval") {
    Generated gen = generate(canonical_pattern("A2"), NoiseSpec{});
    std::set<int> ids;
    std::vector<int> frames;
    for (const auto& p : gen.table.present) {
        ids.insert(p.loop_id);
        frames.push_back(p.frame);
    }
    CHECK(ids == std::set<int>{1});
    std::sort(frames.begin(), frames.end());
    CHECK(frames == std::vector<int>{2, 3, 4});
    CHECK(gen.table.continuity.size() == 2);
}

TEST_CASE("all canonical patterns satisfy the structural assumptions") {
    for (const std::string& id : canonical_pattern_names()) {
        const PatternSpec spec = canonical_pattern(id);
        Generated gen = generate(spec, NoiseSpec{});
        // ring intensity above background, interior contrast between them
        CHECK(spec.mu_ring > 0.0);
        CHECK(spec.mu_in > 0.0);
        CHECK(spec.mu_in < spec.mu_ring);
        const auto mx = *std::max_element(gen.truth.values().begin(), gen.truth.values().end());
        CHECK(mx == spec.mu_ring);
        // first and last frames hold components but no loop pixels' interiors
        // (caps are solid disks); middle frames hold at least one loop
        std::map<int, std::set<int>> frames_of;
        for (const auto& p : gen.table.present) frames_of[p.loop_id].insert(p.frame);
        for (const auto& [id2, fr] : frames_of) {
            CHECK(!fr.count(1));
            CHECK(!fr.count(spec.dims[2]));
        }
        bool middle = false;
        for (const auto& p : gen.table.present)
            if (p.frame > 1 && p.frame < spec.dims[2]) middle = true;
        CHECK(middle);
    }
}

TEST_CASE("the noiseless cylinder recovers one H2 feature with birth 10 death 2") {
    Generated gen = generate(canonical_pattern("cylinder"), NoiseSpec{});
    Triangulation tri(gen.truth.dims());
    const auto h2 = pairs_in_dimension(assign_filtration(tri, gen.truth), 2);
    REQUIRE(h2.size() == 1);
    CHECK(h2[0].birth == 10.0);
    CHECK(h2[0].death == 2.0);
}

TEST_CASE("geometry that does not fit the grid is rejected") {
    PatternSpec spec = canonical_pattern("cylinder");
    spec.dims = {8, 8, 5}; // ring radius 6 cannot fit an 8-pixel grid
    CHECK_THROWS_WITH_AS(generate(spec, NoiseSpec{}), doctest::Contains("does not fit"),
                         std::invalid_argument);

    PatternSpec bad = canonical_pattern("cylinder");
    bad.loops[0].by_frame.clear();
    bad.loops[0].by_frame.emplace(1, RingSpec{15.5, 15.5, 4.0, 6.0});
    CHECK_THROWS_WITH_AS(generate(bad, NoiseSpec{}), doctest::Contains("middle"),
                         std::invalid_argument);

    CHECK_THROWS_AS(canonical_pattern("A9"), std::invalid_argument);
}

TEST_CASE("noise has roughly the configured scale") {
    const PatternSpec spec = canonical_pattern("A1");
    Generated gen = generate(spec, NoiseSpec{0.0, 2.0, 77});
    double sum = 0.0, sumsq = 0.0;
    const auto& raw = gen.raw.values();
    const auto& truth = gen.truth.values();
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double e = raw[i] - truth[i];
        sum += e;
        sumsq += e * e;
    }
    const double n = static_cast<double>(raw.size());
    const double mean = sum / n;
    const double sd = std::sqrt(sumsq / n - mean * mean);
    CHECK(std::fabs(mean) < 0.1);
    CHECK(sd == doctest::Approx(2.0).epsilon(0.05));
}

#include "mvtda/simgen.hpp"

#include "mvtda/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mvtda {

namespace {

// deterministic standard normal via Box-Muller on the counter stream
class GaussianDraw {
public:
    explicit GaussianDraw(std::uint64_t seed) : rng_(seed) {}
    double next() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = rng_.next_unit();
        while (u1 <= 0.0) u1 = rng_.next_unit();
        const double u2 = rng_.next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

private:
    SplitMix64 rng_;
    double spare_ = 0.0;
    bool have_ = false;
};

void check_ring_fits(const RingSpec& r, int d1, int d2, const std::string& what) {
    if (r.r_inner < 0 || r.r_outer < r.r_inner)
        throw std::invalid_argument("generate: malformed radii for " + what);
    if (r.cx - r.r_outer < 1.0 || r.cx + r.r_outer > d1 || r.cy - r.r_outer < 1.0 ||
        r.cy + r.r_outer > d2)
        throw std::invalid_argument("generate: " + what + " does not fit the " +
                                    std::to_string(d1) + "x" + std::to_string(d2) + " grid");
}

} // namespace

PatternSpec canonical_pattern(const std::string& id) {
    PatternSpec spec;
    spec.id = id;
    auto tube = [](int loop_id, std::vector<std::pair<int, RingSpec>> frames) {
        LoopTube t;
        t.id = loop_id;
        for (auto& [f, r] : frames) t.by_frame.emplace(f, r);
        return t;
    };
    if (id == "cylinder") {
        const RingSpec r{15.5, 15.5, 3.5, 6.5};
        spec.loops.push_back(tube(1, {{2, r}, {3, r}, {4, r}}));
    } else if (id == "A1") {
        const RingSpec a{9.5, 9.5, 3.5, 6.5};
        const RingSpec b{21.5, 21.5, 3.5, 6.5};
        spec.loops.push_back(tube(1, {{2, a}, {3, a}, {4, a}}));
        spec.loops.push_back(tube(2, {{3, b}}));
    } else if (id == "A2") {
        const RingSpec r{15.5, 15.5, 3.5, 7.5};
        spec.loops.push_back(tube(1, {{2, r}, {3, r}, {4, r}}));
    } else if (id == "A3") {
        // the second loop translates one pixel per frame; the boundary is
        // wide enough that the slanted tube still encloses a cavity and
        // consecutive slice unions share a single hole
        const RingSpec a{9.5, 15.5, 3.5, 6.5};
        const RingSpec b2{23.5, 12.5, 3.5, 6.5};
        const RingSpec b3{23.5, 13.5, 3.5, 6.5};
        const RingSpec b4{23.5, 14.5, 3.5, 6.5};
        spec.loops.push_back(tube(1, {{2, a}, {3, a}, {4, a}}));
        spec.loops.push_back(tube(2, {{2, b2}, {3, b3}, {4, b4}}));
    } else if (id == "A4") {
        const RingSpec a{9.5, 9.5, 4.25, 5.75};
        const RingSpec b{21.5, 21.5, 4.25, 5.75};
        spec.loops.push_back(tube(1, {{2, a}, {3, a}, {4, a}}));
        spec.loops.push_back(tube(2, {{2, b}, {3, b}, {4, b}}));
    } else {
        throw std::invalid_argument("canonical_pattern: unknown pattern '" + id +
                                    "' (expected A1, A2, A3, A4 or cylinder)");
    }
    return spec;
}

std::vector<std::string> canonical_pattern_names() {
    return {"A1", "A2", "A3", "A4", "cylinder"};
}

Generated generate(const PatternSpec& spec, const NoiseSpec& noise) {
    const int d1 = spec.dims[0], d2 = spec.dims[1], l = spec.dims[2];
    if (d1 < 1 || d2 < 1 || l < 2)
        throw std::invalid_argument("generate: dims must be positive with at least 2 frames");
    if (noise.sigma0 < 0)
        throw std::invalid_argument("generate: sigma0 must be >= 0");

    const std::size_t fs = static_cast<std::size_t>(d1) * d2;
    std::vector<double> truth(fs * static_cast<std::size_t>(l), noise.mu0);

    auto paint_ring = [&](int frame, const RingSpec& r) {
        double* f = truth.data() + static_cast<std::size_t>(frame - 1) * fs;
        for (int x = 1; x <= d1; ++x)
            for (int y = 1; y <= d2; ++y) {
                const double d = std::hypot(x - r.cx, y - r.cy);
                if (d > r.r_outer) continue;
                double& cell = f[static_cast<std::size_t>(x - 1) * d2 + (y - 1)];
                if (d >= r.r_inner)
                    cell = spec.mu_ring;
                else
                    cell = std::max(cell, spec.mu_in); // interior, unless a ring painted it
            }
    };
    auto paint_disk = [&](int frame, const RingSpec& r) {
        double* f = truth.data() + static_cast<std::size_t>(frame - 1) * fs;
        for (int x = 1; x <= d1; ++x)
            for (int y = 1; y <= d2; ++y)
                if (std::hypot(x - r.cx, y - r.cy) <= r.r_outer)
                    f[static_cast<std::size_t>(x - 1) * d2 + (y - 1)] = spec.mu_ring;
    };

    TruthTable table;
    for (const LoopTube& loop : spec.loops) {
        if (loop.by_frame.empty())
            throw std::invalid_argument("generate: loop " + std::to_string(loop.id) +
                                        " has no frames");
        for (const auto& [frame, ring] : loop.by_frame) {
            if (frame <= 1 || frame >= l)
                throw std::invalid_argument("generate: loop " + std::to_string(loop.id) +
                                            " must live in middle frames (got frame " +
                                            std::to_string(frame) + ")");
            check_ring_fits(ring, d1, d2, "loop " + std::to_string(loop.id) + " at frame " +
                                              std::to_string(frame));
            paint_ring(frame, ring);
            table.present.push_back({loop.id, frame});
            if (loop.by_frame.count(frame + 1))
                table.continuity.push_back({loop.id, frame, frame + 1});
        }
        if (spec.caps) {
            paint_disk(1, loop.by_frame.begin()->second);
            paint_disk(l, loop.by_frame.rbegin()->second);
        }
    }

    ImageStack truth_stack({d1, d2, l}, std::move(truth), spec.time_spacing);

    std::vector<double> raw = truth_stack.values();
    if (noise.sigma0 > 0) {
        GaussianDraw g(noise.seed);
        for (double& v : raw) v += noise.sigma0 * g.next();
    }
    ImageStack raw_stack({d1, d2, l}, std::move(raw), spec.time_spacing);
    return {std::move(raw_stack), std::move(truth_stack), std::move(table)};
}

} // namespace mvtda

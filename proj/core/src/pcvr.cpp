#include "mvtda/pcvr.hpp"

#include "mvtda/stack_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mvtda {

PointCloud binarize(const ImageStack& frame, double threshold, int source_frame) {
    if (frame.ndim() != 2)
        throw std::invalid_argument("binarize: expected a 2D frame");
    PointCloud cloud;
    cloud.source_frame = source_frame;
    const int d1 = frame.dims()[0], d2 = frame.dims()[1];
    for (int x = 1; x <= d1; ++x)
        for (int y = 1; y <= d2; ++y)
            if (frame.values()[static_cast<std::size_t>(x - 1) * d2 + (y - 1)] >= threshold)
                cloud.points.push_back({static_cast<double>(x), static_cast<double>(y)});
    return cloud;
}

PersistenceDiagram rips_persistence(const PointCloud& cloud, double max_scale,
                                    std::size_t cap) {
    const std::size_t n = cloud.points.size();
    if (n > cap)
        throw std::runtime_error("rips_persistence: cloud of " + std::to_string(n) +
                                 " points exceeds the cap of " + std::to_string(cap) +
                                 "; downsample the binarized frame or raise the threshold");
    PersistenceDiagram empty;
    empty.max_dim = 1;
    if (n == 0) return empty;

    auto dist = [&](std::size_t i, std::size_t j) {
        return std::hypot(cloud.points[i][0] - cloud.points[j][0],
                          cloud.points[i][1] - cloud.points[j][1]);
    };

    std::vector<Simplex> simplices;
    std::vector<double> scale;
    for (std::size_t i = 0; i < n; ++i) {
        simplices.push_back(Simplex{static_cast<VertexId>(i)});
        scale.push_back(0.0);
    }
    std::vector<std::vector<std::uint32_t>> nbr(n); // higher-indexed neighbours
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = dist(i, j);
            if (d > max_scale) continue;
            simplices.push_back(Simplex{static_cast<VertexId>(i), static_cast<VertexId>(j)});
            scale.push_back(d);
            nbr[i].push_back(static_cast<std::uint32_t>(j));
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::uint32_t j : nbr[i])
            for (std::uint32_t k : nbr[j]) {
                const double dik = dist(i, k);
                if (dik > max_scale) continue;
                simplices.push_back(Simplex{static_cast<VertexId>(i), static_cast<VertexId>(j),
                                            static_cast<VertexId>(k)});
                scale.push_back(std::max({dist(i, j), dist(j, k), dik}));
            }

    // ascending Rips scale as a descending upper-level filtration on -scale
    Triangulation tri(simplices);
    // Triangulation sorted the simplices; rebuild the per-simplex scales
    std::vector<double> sorted_scale(tri.size());
    {
        std::vector<std::size_t> perm(simplices.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
            return simplices[a] < simplices[b];
        });
        for (std::size_t r = 0; r < perm.size(); ++r) sorted_scale[r] = scale[perm[r]];
    }
    FilteredComplex fc;
    fc.tri = &tri;
    fc.values.resize(tri.size());
    for (std::size_t i = 0; i < tri.size(); ++i) fc.values[i] = -sorted_scale[i];
    fc.order.resize(tri.size());
    std::iota(fc.order.begin(), fc.order.end(), 0u);
    std::sort(fc.order.begin(), fc.order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (fc.values[a] != fc.values[b]) return fc.values[a] > fc.values[b];
        return a < b;
    });
    auto [mn, mx] = std::minmax_element(fc.values.begin(), fc.values.end());
    fc.min_value = *mn;
    fc.max_value = *mx;

    PersistenceDiagram neg = compute_persistence(fc, 1);
    PersistenceDiagram out;
    out.max_dim = 1;
    for (const auto& p : neg.points) {
        PersistencePoint q = p;
        q.birth = -p.birth;
        q.death = p.essential ? max_scale : -p.death;
        out.points.push_back(q);
    }
    return out;
}

std::vector<FeatureTrack::Obs> ranked_h1(const PersistenceDiagram& pd, int frame) {
    std::vector<FeatureTrack::Obs> out;
    for (const auto& p : pd.points) {
        if (p.dim != 1) continue;
        // a loop still alive at the distance cap is a real feature; it ranks
        // with its truncated death
        out.push_back({frame, p.birth, p.death});
    }
    std::sort(out.begin(), out.end(), [](const FeatureTrack::Obs& a, const FeatureTrack::Obs& b) {
        if (a.persistence() != b.persistence()) return a.persistence() > b.persistence();
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    });
    return out;
}

std::vector<FeatureTrack> match_by_persistence(const std::vector<PersistenceDiagram>& per_frame) {
    const int l = static_cast<int>(per_frame.size());
    std::vector<std::vector<FeatureTrack::Obs>> ranked(static_cast<std::size_t>(l));
    for (int f = 0; f < l; ++f)
        ranked[static_cast<std::size_t>(f)] =
            ranked_h1(per_frame[static_cast<std::size_t>(f)], f + 1);
    std::size_t max_rank = 0;
    for (const auto& r : ranked) max_rank = std::max(max_rank, r.size());

    std::vector<FeatureTrack> tracks;
    for (std::size_t k = 0; k < max_rank; ++k) {
        int f = 0;
        while (f < l) {
            if (ranked[static_cast<std::size_t>(f)].size() <= k) {
                ++f;
                continue;
            }
            FeatureTrack t;
            while (f < l && ranked[static_cast<std::size_t>(f)].size() > k)
                t.observations.push_back(ranked[static_cast<std::size_t>(f++)][k]);
            tracks.push_back(std::move(t));
        }
    }
    std::sort(tracks.begin(), tracks.end(), [](const FeatureTrack& a, const FeatureTrack& b) {
        if (a.first_frame() != b.first_frame()) return a.first_frame() < b.first_frame();
        return a.observations.size() > b.observations.size();
    });
    for (std::size_t i = 0; i < tracks.size(); ++i)
        tracks[i].track_id = static_cast<int>(i) + 1;
    return tracks;
}

std::string tracks_to_csv(const std::vector<FeatureTrack>& tracks) {
    std::string out = "track_id,frame,birth,death,persistence\n";
    for (const auto& t : tracks)
        for (const auto& o : t.observations) {
            out += std::to_string(t.track_id);
            out += ',';
            out += std::to_string(o.frame);
            out += ',';
            out += format_double(o.birth);
            out += ',';
            out += format_double(o.death);
            out += ',';
            out += format_double(o.persistence());
            out += '\n';
        }
    return out;
}

} // namespace mvtda

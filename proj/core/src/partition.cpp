#include "mvtda/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace mvtda {

std::vector<std::vector<char>> threshold_slices(const ImageStack& smoothed, double theta) {
    if (smoothed.ndim() != 3)
        throw std::invalid_argument("threshold_slices: expected a 3D stack");
    const std::size_t fs = smoothed.frame_size();
    std::vector<std::vector<char>> masks;
    masks.reserve(smoothed.num_frames());
    for (int o = 0; o < smoothed.num_frames(); ++o) {
        std::vector<char> mask(fs);
        const double* frame = smoothed.values().data() + static_cast<std::size_t>(o) * fs;
        for (std::size_t i = 0; i < fs; ++i) mask[i] = frame[i] >= theta;
        masks.push_back(std::move(mask));
    }
    return masks;
}

SliceComplexSequence build_slice_complexes(const std::vector<std::vector<char>>& masks,
                                           std::array<int, 2> frame_dims, double theta,
                                           SetOp op) {
    if (masks.empty()) throw std::invalid_argument("build_slice_complexes: no masks");
    const std::size_t fs = static_cast<std::size_t>(frame_dims[0]) * frame_dims[1];
    for (std::size_t o = 0; o < masks.size(); ++o)
        if (masks[o].size() != fs)
            throw std::invalid_argument("build_slice_complexes: mask " + std::to_string(o + 1) +
                                        " does not match frame dims");

    const std::vector<Simplex> full = freudenthal_complex(std::array<int, 2>{
        frame_dims[0], frame_dims[1]});

    SliceComplexSequence seq;
    seq.frame_dims = frame_dims;
    seq.theta = theta;
    seq.set_op = op;
    seq.slices.reserve(masks.size());
    for (const auto& mask : masks) {
        std::vector<Simplex> sub;
        for (const Simplex& s : full) {
            bool all_in = true;
            for (int j = 0; j < static_cast<int>(s.n); ++j)
                if (!mask[static_cast<std::size_t>(s.v[j])]) { all_in = false; break; }
            if (all_in) sub.push_back(s);
        }
        seq.slices.push_back(std::move(sub)); // inherits (dim, lex) sort from `full`
    }
    seq.links.reserve(masks.size() - 1);
    for (std::size_t o = 0; o + 1 < seq.slices.size(); ++o) {
        std::vector<Simplex> link;
        if (op == SetOp::Union)
            std::set_union(seq.slices[o].begin(), seq.slices[o].end(),
                           seq.slices[o + 1].begin(), seq.slices[o + 1].end(),
                           std::back_inserter(link));
        else
            std::set_intersection(seq.slices[o].begin(), seq.slices[o].end(),
                                  seq.slices[o + 1].begin(), seq.slices[o + 1].end(),
                                  std::back_inserter(link));
        seq.links.push_back(std::move(link));
    }
    return seq;
}

} // namespace mvtda

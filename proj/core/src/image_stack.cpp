#include "mvtda/image_stack.hpp"
#include "mvtda/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace mvtda {

namespace {

std::size_t checked_product(const std::vector<int>& dims) {
    if (dims.empty()) throw std::invalid_argument("ImageStack: dims must be non-empty");
    std::size_t n = 1;
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("ImageStack: all dims must be >= 1");
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

} // namespace

ImageStack::ImageStack(std::vector<int> dims, std::vector<double> values,
                       double time_spacing_seconds)
    : dims_(std::move(dims)), values_(std::move(values)),
      time_spacing_(time_spacing_seconds) {
    const std::size_t n = checked_product(dims_);
    if (values_.size() != n)
        throw std::invalid_argument("ImageStack: value count " + std::to_string(values_.size()) +
                                    " does not match dims product " + std::to_string(n));
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw std::invalid_argument("ImageStack: non-finite value at flat index " +
                                        std::to_string(i));
    }
}

std::size_t ImageStack::frame_size() const {
    std::size_t n = 1;
    for (int i = 0; i + 1 < ndim(); ++i) n *= static_cast<std::size_t>(dims_[i]);
    return n;
}

std::size_t ImageStack::flat_index(std::span<const int> coord) const {
    if (static_cast<int>(coord.size()) != ndim())
        throw std::out_of_range("ImageStack: coordinate arity mismatch");
    const int m = ndim();
    for (int i = 0; i < m; ++i) {
        if (coord[i] < 1 || coord[i] > dims_[i])
            throw std::out_of_range("ImageStack: coordinate " + std::to_string(coord[i]) +
                                    " out of range for axis " + std::to_string(i + 1));
    }
    if (m >= 3) {
        // time slowest, then x1, ..., x_{M-1} row-major within the frame:
        // for (x, y, t) the index is ((t-1)*d1 + (x-1))*d2 + (y-1)
        std::size_t idx = static_cast<std::size_t>(coord[m - 1] - 1);
        for (int i = 0; i + 1 < m; ++i)
            idx = idx * dims_[i] + static_cast<std::size_t>(coord[i] - 1);
        return idx;
    }
    // plain row-major for standalone frames / 1D signals
    std::size_t idx = 0;
    for (int i = 0; i < m; ++i)
        idx = idx * dims_[i] + static_cast<std::size_t>(coord[i] - 1);
    return idx;
}

ImageStack slice_at_time(const ImageStack& stack, int o) {
    if (stack.ndim() < 2)
        throw std::invalid_argument("slice_at_time: stack must have at least 2 axes");
    if (o < 1 || o > stack.num_frames())
        throw std::out_of_range("slice_at_time: time index " + std::to_string(o) +
                                " out of range [1, " + std::to_string(stack.num_frames()) + "]");
    const std::size_t fs = stack.frame_size();
    const auto& vals = stack.values();
    std::vector<int> fdims(stack.dims().begin(), stack.dims().end() - 1);
    if (stack.ndim() >= 3) {
        std::vector<double> frame(vals.begin() + static_cast<std::ptrdiff_t>((o - 1) * fs),
                                  vals.begin() + static_cast<std::ptrdiff_t>(o * fs));
        return ImageStack(std::move(fdims), std::move(frame), stack.time_spacing());
    }
    // 2D stack: gather the strided column for "time" index o
    std::vector<double> frame(fs);
    const std::size_t d2 = static_cast<std::size_t>(stack.dims().back());
    for (std::size_t x = 0; x < fs; ++x) frame[x] = vals[x * d2 + (o - 1)];
    return ImageStack(std::move(fdims), std::move(frame), stack.time_spacing());
}

ImageStack assemble_stack(const std::vector<ImageStack>& frames,
                          double time_spacing_seconds) {
    if (frames.empty()) throw std::invalid_argument("assemble_stack: empty frame list");
    if (frames.front().ndim() < 2)
        throw std::invalid_argument("assemble_stack: frames must be at least 2-dimensional");
    const auto& fdims = frames.front().dims();
    std::vector<double> values;
    values.reserve(frames.front().size() * frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].dims() != fdims)
            throw std::invalid_argument("assemble_stack: frame " + std::to_string(i + 1) +
                                        " has mismatched dims");
        values.insert(values.end(), frames[i].values().begin(), frames[i].values().end());
    }
    std::vector<int> dims = fdims;
    dims.push_back(static_cast<int>(frames.size()));
    return ImageStack(std::move(dims), std::move(values), time_spacing_seconds);
}

ImageStack permute_stack(const ImageStack& stack, std::uint64_t seed) {
    std::vector<double> values = stack.values();
    SplitMix64 rng(seed);
    // Fisher-Yates over the full grid
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = rng.next_below(i);
        std::swap(values[i - 1], values[j]);
    }
    return ImageStack(stack.dims(), std::move(values), stack.time_spacing());
}

} // namespace mvtda

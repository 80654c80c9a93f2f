#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mvtda {

/// A 1-based coordinate on the pixel grid, (x1, ..., xM).
using GridCoord = std::vector<int>;

/// An M-dimensional grayscale intensity array with grid metadata.
///
/// For the MV pipeline M = 3: two spatial axes and time. Time is always the
/// last axis and is the slowest-varying one in the flat storage, so a time
/// slice is a contiguous block. Within a frame the first spatial axis (rows)
/// varies slower than the second (columns).
///
/// Instances are immutable after construction and safe to share across
/// threads; every operation returns a new stack.
class ImageStack {
public:
    ImageStack(std::vector<int> dims, std::vector<double> values,
               double time_spacing_seconds = 0.0);

    const std::vector<int>& dims() const { return dims_; }
    int ndim() const { return static_cast<int>(dims_.size()); }
    std::size_t size() const { return values_.size(); }
    double time_spacing() const { return time_spacing_; }

    /// Index of the temporal axis (the last one).
    int time_axis() const { return ndim() - 1; }
    int num_frames() const { return dims_.back(); }

    /// Number of pixels in one time slice (product of all non-time dims).
    std::size_t frame_size() const;

    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t flat) const { return values_[flat]; }

    /// Flat index of a 1-based grid coordinate. The last axis is slowest:
    /// for (x, y, t) the index is ((t-1)*d1 + (x-1))*d2 + (y-1).
    std::size_t flat_index(std::span<const int> coord) const;
    double at(std::span<const int> coord) const { return values_[flat_index(coord)]; }

    /// Seconds offset of 1-based time index o, with t1 = 0.
    double time_of(int o) const { return (o - 1) * time_spacing_; }

private:
    std::vector<int> dims_;
    std::vector<double> values_;
    double time_spacing_ = 0.0;
};

/// Extracts the (M-1)-dimensional frame at 1-based time index o.
ImageStack slice_at_time(const ImageStack& stack, int o);

/// Reassembles frames (all of equal dims) into a stack with time as the new
/// last axis.
ImageStack assemble_stack(const std::vector<ImageStack>& frames,
                          double time_spacing_seconds);

/// Uniformly random permutation of all pixel intensities across the whole
/// M-dimensional grid, not per frame. Deterministic in the seed; the value
/// multiset is preserved exactly.
ImageStack permute_stack(const ImageStack& stack, std::uint64_t seed);

} // namespace mvtda

#pragma once

#include "mvtda/image_stack.hpp"

namespace mvtda {

/// Local polynomial regression settings. The defaults follow the smoothing
/// used throughout the pipeline: degree 2 with a span of 0.1 (10% of the
/// nearest pixels fit each local model).
struct SmootherConfig {
    int degree = 2;     // polynomial degree, one of {0, 1, 2}
    double span = 0.1;  // fraction of nearest pixels per local fit, in (0, 1]
};

/// LOESS-smooths a single 2D frame.
///
/// For each pixel the ceil(span*N) nearest pixels (Euclidean distance on grid
/// coordinates, ties at the cutoff radius all included) are fit with a
/// weighted least-squares polynomial of the configured degree under tricube
/// weights, and the fitted value at the pixel is returned. Boundary pixels
/// use the same nearest-k rule, so their neighborhoods are asymmetric; there
/// is no padding.
ImageStack smooth_frame(const ImageStack& frame, const SmootherConfig& cfg);

/// Applies smooth_frame independently to every time slice of a 3D stack.
ImageStack smooth_stack(const ImageStack& stack, const SmootherConfig& cfg);

} // namespace mvtda

#include "mvtda/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvtda {

namespace {

int monomial_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

void check_config(const SmootherConfig& cfg) {
    if (cfg.degree < 0 || cfg.degree > 2)
        throw std::invalid_argument("SmootherConfig: degree must be 0, 1 or 2");
    if (!(cfg.span > 0.0) || cfg.span > 1.0)
        throw std::invalid_argument("SmootherConfig: span must be in (0, 1]");
}

// offsets grouped by squared distance, ascending; deterministic within groups
struct OffsetGroups {
    std::vector<long> dist2;                      // squared distance per group
    std::vector<std::vector<std::pair<int, int>>> groups;
};

OffsetGroups build_offset_groups(int rows, int cols) {
    std::vector<std::pair<long, std::pair<int, int>>> all;
    all.reserve(static_cast<std::size_t>(2 * rows - 1) * (2 * cols - 1));
    for (int dx = -(rows - 1); dx <= rows - 1; ++dx)
        for (int dy = -(cols - 1); dy <= cols - 1; ++dy)
            all.push_back({static_cast<long>(dx) * dx + static_cast<long>(dy) * dy, {dx, dy}});
    std::sort(all.begin(), all.end());
    OffsetGroups og;
    for (const auto& [d2, off] : all) {
        if (og.dist2.empty() || og.dist2.back() != d2) {
            og.dist2.push_back(d2);
            og.groups.emplace_back();
        }
        og.groups.back().push_back(off);
    }
    return og;
}

// weighted least-squares fit of a centered polynomial; returns the intercept
// (the fitted value at the center). Throws on a rank-deficient system.
double fit_pixel(const std::vector<double>& u, const std::vector<double>& v,
                 const std::vector<double>& z, const std::vector<double>& w,
                 int degree, int px, int py) {
    const int p = monomial_count(degree);
    double A[6][6] = {};
    double b[6] = {};
    double m[6];
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (w[i] == 0.0) continue;
        m[0] = 1.0;
        if (degree >= 1) { m[1] = u[i]; m[2] = v[i]; }
        if (degree >= 2) { m[3] = u[i] * u[i]; m[4] = u[i] * v[i]; m[5] = v[i] * v[i]; }
        for (int r = 0; r < p; ++r) {
            const double wm = w[i] * m[r];
            for (int c = r; c < p; ++c) A[r][c] += wm * m[c];
            b[r] += wm * z[i];
        }
    }
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < r; ++c) A[r][c] = A[c][r];

    // Gaussian elimination with partial pivoting
    double scale = 0.0;
    for (int i = 0; i < p; ++i) scale = std::max(scale, std::fabs(A[i][i]));
    const double tol = std::max(scale, 1.0) * 1e-12;
    for (int col = 0; col < p; ++col) {
        int piv = col;
        for (int r = col + 1; r < p; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        if (std::fabs(A[piv][col]) < tol)
            throw std::runtime_error("smooth_frame: rank-deficient local fit at pixel (" +
                                     std::to_string(px) + ", " + std::to_string(py) + ")");
        if (piv != col) {
            for (int c = 0; c < p; ++c) std::swap(A[piv][c], A[col][c]);
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < p; ++r) {
            const double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < p; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    double beta[6];
    for (int r = p - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < p; ++c) s -= A[r][c] * beta[c];
        beta[r] = s / A[r][r];
    }
    return beta[0];
}

} // namespace

ImageStack smooth_frame(const ImageStack& frame, const SmootherConfig& cfg) {
    check_config(cfg);
    if (frame.ndim() != 2)
        throw std::invalid_argument("smooth_frame: expected a 2D frame");
    const int rows = frame.dims()[0], cols = frame.dims()[1];
    const std::size_t n = frame.size();
    const int k = static_cast<int>(std::ceil(cfg.span * static_cast<double>(n)));
    const int p = monomial_count(cfg.degree);

    const OffsetGroups og = build_offset_groups(rows, cols);
    const auto& vals = frame.values();
    std::vector<double> out(n);

    std::vector<double> u, v, z, w;
    for (int x = 0; x < rows; ++x) {
        for (int y = 0; y < cols; ++y) {
            u.clear(); v.clear(); z.clear(); w.clear();
            long max_d2 = 0;
            int count = 0;
            for (std::size_t g = 0; g < og.groups.size(); ++g) {
                for (const auto& [dx, dy] : og.groups[g]) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || nx >= rows || ny < 0 || ny >= cols) continue;
                    u.push_back(dx);
                    v.push_back(dy);
                    z.push_back(vals[static_cast<std::size_t>(nx) * cols + ny]);
                    ++count;
                }
                if (count > 0) max_d2 = og.dist2[g];
                if (count >= k) break; // whole distance group included, ties kept
            }
            if (count < p)
                throw std::runtime_error(
                    "smooth_frame: neighborhood of " + std::to_string(count) +
                    " pixels is smaller than the " + std::to_string(p) +
                    " monomials of degree " + std::to_string(cfg.degree) +
                    " (span too small)");
            const double dmax = std::sqrt(static_cast<double>(max_d2));
            w.resize(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) {
                if (dmax == 0.0) { w[i] = 1.0; continue; }
                const double r = std::sqrt(u[i] * u[i] + v[i] * v[i]) / dmax;
                const double t = 1.0 - r * r * r;
                w[i] = t > 0.0 ? t * t * t : 0.0;
                // rescale coordinates for conditioning; the intercept is unchanged
                u[i] /= dmax;
                v[i] /= dmax;
            }
            out[static_cast<std::size_t>(x) * cols + y] =
                fit_pixel(u, v, z, w, cfg.degree, x + 1, y + 1);
        }
    }
    return ImageStack(frame.dims(), std::move(out), frame.time_spacing());
}

ImageStack smooth_stack(const ImageStack& stack, const SmootherConfig& cfg) {
    check_config(cfg);
    if (stack.ndim() != 3)
        throw std::invalid_argument("smooth_stack: expected a 3D stack");
    std::vector<ImageStack> frames;
    frames.reserve(stack.num_frames());
    for (int o = 1; o <= stack.num_frames(); ++o)
        frames.push_back(smooth_frame(slice_at_time(stack, o), cfg));
    return assemble_stack(frames, stack.time_spacing());
}

} // namespace mvtda

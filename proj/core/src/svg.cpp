#include "mvtda/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mvtda {

namespace {

constexpr int kWidth = 480, kHeight = 480;
constexpr double kMargin = 56.0;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct Scale {
    double lo = 0.0, hi = 1.0;
    double map(double v, double pix_lo, double pix_hi) const {
        if (hi == lo) return (pix_lo + pix_hi) / 2;
        return pix_lo + (v - lo) / (hi - lo) * (pix_hi - pix_lo);
    }
};

void open_svg(std::string& s, int w, int h) {
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
         "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " +
         std::to_string(h) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::string& s, const std::string& xlabel, const std::string& ylabel) {
    s += "<line x1=\"" + num(kMargin) + "\" y1=\"" + num(kHeight - kMargin) + "\" x2=\"" +
         num(kWidth - 16) + "\" y2=\"" + num(kHeight - kMargin) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    s += "<line x1=\"" + num(kMargin) + "\" y1=\"" + num(kHeight - kMargin) + "\" x2=\"" +
         num(kMargin) + "\" y2=\"16\" stroke=\"black\" stroke-width=\"1\"/>\n";
    s += "<text x=\"" + num((kMargin + kWidth) / 2) + "\" y=\"" + num(kHeight - 12.0) +
         "\" font-size=\"13\" text-anchor=\"middle\">" + xlabel + "</text>\n";
    s += "<text x=\"16\" y=\"" + num((kHeight - kMargin + 16) / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num((kHeight - kMargin + 16) / 2) + ")\">" + ylabel + "</text>\n";
}

void marker(std::string& s, int dim, double px, double py) {
    if (dim == 0) {
        s += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) +
             "\" r=\"2.6\" fill=\"black\"/>\n";
    } else if (dim == 1) {
        s += "<polygon points=\"" + num(px) + "," + num(py - 3.6) + " " + num(px - 3.2) + "," +
             num(py + 2.6) + " " + num(px + 3.2) + "," + num(py + 2.6) +
             "\" fill=\"red\"/>\n";
    } else {
        s += "<polygon points=\"" + num(px) + "," + num(py - 4.0) + " " + num(px - 3.4) + "," +
             num(py) + " " + num(px) + "," + num(py + 4.0) + " " + num(px + 3.4) + "," +
             num(py) + "\" fill=\"blue\"/>\n";
    }
}

} // namespace

std::string diagram_svg(const PersistenceDiagram& pd) {
    Scale sc;
    bool any = false;
    for (const auto& p : pd.points) {
        const double lo = std::min(p.death, p.birth), hi = std::max(p.death, p.birth);
        if (!any) { sc.lo = lo; sc.hi = hi; any = true; }
        sc.lo = std::min(sc.lo, lo);
        sc.hi = std::max(sc.hi, hi);
    }
    if (!any) { sc.lo = 0; sc.hi = 1; }
    if (sc.hi == sc.lo) sc.hi = sc.lo + 1;
    const double pad = 0.05 * (sc.hi - sc.lo);
    sc.lo -= pad;
    sc.hi += pad;

    std::string s;
    open_svg(s, kWidth, kHeight);
    axes(s, "death", "birth");
    auto px = [&](double v) { return sc.map(v, kMargin, kWidth - 16); };
    auto py = [&](double v) { return sc.map(v, kHeight - kMargin, 16); };
    s += "<line x1=\"" + num(px(sc.lo)) + "\" y1=\"" + num(py(sc.lo)) + "\" x2=\"" +
         num(px(sc.hi)) + "\" y2=\"" + num(py(sc.hi)) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>\n";
    for (const auto& p : pd.points) marker(s, p.dim, px(p.death), py(p.birth));
    s += "</svg>\n";
    return s;
}

std::string zigzag_svg(const ZigzagDiagram& zz) {
    Scale sc;
    bool any = false;
    for (const auto& iv : zz.intervals) {
        if (!any) { sc.lo = iv.birth_time; sc.hi = iv.death_time; any = true; }
        sc.lo = std::min({sc.lo, iv.birth_time, iv.death_time});
        sc.hi = std::max({sc.hi, iv.birth_time, iv.death_time});
    }
    if (!any) { sc.lo = 0; sc.hi = 1; }
    if (sc.hi == sc.lo) sc.hi = sc.lo + 1;
    const double pad = 0.05 * (sc.hi - sc.lo);
    sc.lo -= pad;
    sc.hi += pad;

    std::string s;
    open_svg(s, kWidth, kHeight);
    axes(s, "birth (seconds)", "death (seconds)");
    auto px = [&](double v) { return sc.map(v, kMargin, kWidth - 16); };
    auto py = [&](double v) { return sc.map(v, kHeight - kMargin, 16); };
    s += "<line x1=\"" + num(px(sc.lo)) + "\" y1=\"" + num(py(sc.lo)) + "\" x2=\"" +
         num(px(sc.hi)) + "\" y2=\"" + num(py(sc.hi)) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>\n";
    for (const auto& iv : zz.intervals) marker(s, iv.dim, px(iv.birth_time), py(iv.death_time));
    s += "</svg>\n";
    return s;
}

std::string study_chart_svg(const std::vector<StudyChartRow>& rows, int num_frames) {
    const int w = 560;
    const int row_h = 46;
    const int h = 80 + row_h * std::max<int>(1, static_cast<int>(rows.size()));
    const double left = 150.0, right = w - 30.0;
    std::string s;
    open_svg(s, w, h);
    auto fx = [&](int frame) {
        if (num_frames <= 1) return (left + right) / 2;
        return left + (frame - 1) * (right - left) / (num_frames - 1);
    };
    for (int f = 1; f <= num_frames; ++f) {
        s += "<text x=\"" + num(fx(f)) + "\" y=\"" + num(h - 16.0) +
             "\" font-size=\"12\" text-anchor=\"middle\">t" + std::to_string(f) + "</text>\n";
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double base = 40.0 + static_cast<double>(r) * row_h;
        s += "<text x=\"8\" y=\"" + num(base + 12.0) + "\" font-size=\"12\">" + rows[r].label +
             "</text>\n";
        struct Layer {
            const std::vector<int>* frames;
            const std::vector<std::pair<int, int>>* links;
            double dy;
            const char* color;
            int shape; // 0 circle, 1 triangle, 2 diamond
        };
        const Layer layers[3] = {
            {&rows[r].truth_frames, &rows[r].truth_links, 0.0, "red", 0},
            {&rows[r].mv_frames, &rows[r].mv_links, 12.0, "blue", 1},
            {&rows[r].pcvr_frames, &rows[r].pcvr_links, 24.0, "purple", 2},
        };
        for (const auto& L : layers) {
            const double y = base + L.dy;
            for (const auto& [a, b] : *L.links)
                s += "<line x1=\"" + num(fx(a)) + "\" y1=\"" + num(y) + "\" x2=\"" + num(fx(b)) +
                     "\" y2=\"" + num(y) + "\" stroke=\"" + L.color +
                     "\" stroke-width=\"1.4\"/>\n";
            for (int f : *L.frames) {
                const double x = fx(f);
                if (L.shape == 0)
                    s += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) +
                         "\" r=\"3.4\" fill=\"" + std::string(L.color) + "\"/>\n";
                else if (L.shape == 1)
                    s += "<polygon points=\"" + num(x) + "," + num(y - 4.2) + " " + num(x - 3.8) +
                         "," + num(y + 3.0) + " " + num(x + 3.8) + "," + num(y + 3.0) +
                         "\" fill=\"" + std::string(L.color) + "\"/>\n";
                else
                    s += "<polygon points=\"" + num(x) + "," + num(y - 4.4) + " " + num(x - 3.8) +
                         "," + num(y) + " " + num(x) + "," + num(y + 4.4) + " " + num(x + 3.8) +
                         "," + num(y) + "\" fill=\"" + std::string(L.color) + "\"/>\n";
            }
        }
    }
    s += "</svg>\n";
    return s;
}

} // namespace mvtda

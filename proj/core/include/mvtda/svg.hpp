#pragma once

#include "mvtda/persistence.hpp"
#include "mvtda/zigzag.hpp"

#include <string>
#include <vector>

namespace mvtda {

/// Persistence diagram scatter: death on x, birth on y, one marker style per
/// dimension (black dots H0, red triangles H1, blue diamonds H2), with the
/// birth = death diagonal.
std::string diagram_svg(const PersistenceDiagram& pd);

/// Zigzag diagram scatter in seconds: birth on x, death on y, black dots for
/// H0 and red triangles for H1.
std::string zigzag_svg(const ZigzagDiagram& zz);

/// Detection/continuity chart for the simulation study: one row per true
/// loop, one column per time point. Truth is drawn as red circles joined by
/// red lines; rows detected by a method add blue triangles (MV) and purple
/// diamonds (PCVR) with their own connecting lines.
struct StudyChartRow {
    std::string label;
    std::vector<int> truth_frames;
    std::vector<int> mv_frames;
    std::vector<int> pcvr_frames;
    std::vector<std::pair<int, int>> truth_links;
    std::vector<std::pair<int, int>> mv_links;
    std::vector<std::pair<int, int>> pcvr_links;
};
std::string study_chart_svg(const std::vector<StudyChartRow>& rows, int num_frames);

} // namespace mvtda

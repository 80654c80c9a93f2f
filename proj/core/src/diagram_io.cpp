#include "mvtda/diagram_io.hpp"

#include "mvtda/stack_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

using nlohmann::ordered_json;

namespace mvtda {

namespace {

std::vector<PersistencePoint> sorted_points(const PersistenceDiagram& pd) {
    std::vector<PersistencePoint> pts = pd.points;
    std::sort(pts.begin(), pts.end(), [](const PersistencePoint& a, const PersistencePoint& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        if (a.birth != b.birth) return a.birth > b.birth;
        if (a.death != b.death) return a.death > b.death;
        return a.essential < b.essential;
    });
    return pts;
}

} // namespace

std::string diagram_to_json(const PersistenceDiagram& pd) {
    ordered_json points = ordered_json::array();
    for (const auto& p : sorted_points(pd)) {
        points.push_back(ordered_json{{"dim", p.dim},
                                      {"birth", p.birth},
                                      {"death", p.death},
                                      {"essential", p.essential}});
    }
    return ordered_json{{"points", points}}.dump(2) + "\n";
}

std::string diagram_to_csv(const PersistenceDiagram& pd) {
    std::string out = "dim,birth,death,essential\n";
    for (const auto& p : sorted_points(pd)) {
        out += std::to_string(p.dim);
        out += ',';
        out += format_double(p.birth);
        out += ',';
        out += format_double(p.death);
        out += ',';
        out += p.essential ? "true" : "false";
        out += '\n';
    }
    return out;
}

std::string maxtest_result_to_json(const MaxTestResult& r, int dim, double alpha,
                                   std::uint64_t seed) {
    ordered_json j;
    j["dim"] = dim;
    j["alpha"] = alpha;
    j["seed"] = seed;
    j["permutations"] = r.null_samples.size();
    j["observed"] = ordered_json{{"found", r.observed.found},
                                 {"persistence", r.observed.rho},
                                 {"birth", r.observed.birth},
                                 {"death", r.observed.death}};
    j["p_value"] = r.p_value;
    j["reject"] = r.reject;
    if (r.theta_hat)
        j["theta_hat"] = *r.theta_hat;
    else
        j["theta_hat"] = nullptr;
    j["p_floor_warning"] = r.p_floor_warning;
    j["null_samples"] = r.null_samples;
    return j.dump(2) + "\n";
}

std::string zigzag_to_csv(const ZigzagDiagram& zz) {
    std::string out = "dim,birth_index,death_index,birth_time,death_time\n";
    for (const auto& iv : zz.intervals) {
        out += std::to_string(iv.dim);
        out += ',';
        out += std::to_string(iv.birth_index);
        out += ',';
        out += std::to_string(iv.death_index);
        out += ',';
        out += format_double(iv.birth_time);
        out += ',';
        out += format_double(iv.death_time);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

} // namespace mvtda

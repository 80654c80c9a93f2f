#pragma once

#include "mvtda/maxtest.hpp"
#include "mvtda/persistence.hpp"
#include "mvtda/zigzag.hpp"

#include <string>

namespace mvtda {

/// {"points":[{"dim":1,"birth":2007.0,"death":1404.0,"essential":false},...]}
std::string diagram_to_json(const PersistenceDiagram& pd);

/// dim,birth,death,essential rows, header included.
std::string diagram_to_csv(const PersistenceDiagram& pd);

/// The full test outcome including the null sample vector, so the null
/// distribution plot can be reproduced from the file alone.
std::string maxtest_result_to_json(const MaxTestResult& r, int dim, double alpha,
                                   std::uint64_t seed);

/// dim,birth_index,death_index,birth_time,death_time rows, header included.
std::string zigzag_to_csv(const ZigzagDiagram& zz);

void write_text_file(const std::string& path, const std::string& content);

} // namespace mvtda

#pragma once

#include "mvtda/image_stack.hpp"

#include <string>
#include <vector>

namespace mvtda {

/// Loads a stack from either
///  - a JSON manifest {"frames": ["f1.csv", ...], "time_spacing_seconds": 8.0}
///    where each frame is a plain d1 x d2 numeric CSV without header
///    (paths relative to the manifest), or
///  - a single self-describing text file beginning with a "dims: d1 d2 d3"
///    line followed by whitespace-separated values in storage order
///    (time slowest, rows, then columns).
///
/// Errors name the offending file and position. Integer inputs are preserved
/// bit-exact (values are parsed as doubles).
ImageStack load_stack(const std::string& path);

/// Reads a single frame CSV (d1 rows x d2 numeric columns, no header).
ImageStack load_frame_csv(const std::string& path);

/// Writes one frame as a plain CSV.
void write_frame_csv(const std::string& path, const ImageStack& frame);

/// Writes a 3D stack as per-frame CSVs frame_001.csv, ... plus manifest.json
/// in `dir`. Returns the manifest path.
std::string write_stack_manifest(const std::string& dir, const ImageStack& stack);

/// Per-frame 0/1 mask CSV helpers (slice masks for inspection and for the
/// `zigzag` subcommand re-entry point).
void write_mask_csv(const std::string& path, const std::vector<char>& mask,
                    int rows, int cols);
std::vector<char> load_mask_csv(const std::string& path, int& rows, int& cols);

/// Formats a double so the value round-trips exactly; used by every CSV/JSON
/// writer so identical runs produce byte-identical outputs.
std::string format_double(double v);

} // namespace mvtda

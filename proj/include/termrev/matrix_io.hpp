// ============================================================================
// matrix_io.hpp — CSV matrix I/O
//
// Real matrices are plain CSV (one row per line, decimal floats, %.9g).
// Quantized matrices are integer CSV plus a JSON sidecar at <path>.json
// holding {bitwidth, scale_exponent, rows, cols}; reading re-validates the
// value range against the scheme.
// ============================================================================
#pragma once

#include <string>

#include "termrev/quant.hpp"

namespace termrev {

// Formats a double with 9 significant digits (reproducible goldens).
std::string format_double(double v);

// Throws std::runtime_error with file/line context on malformed input.
RealMatrix read_real_csv(const std::string& path);
void write_real_csv(const RealMatrix& m, const std::string& path);

// Sidecar path is csv_path + ".json".
QuantizedMatrix read_quantized_csv(const std::string& csv_path);
void write_quantized_csv(const QuantizedMatrix& m, const std::string& csv_path);

}  // namespace termrev

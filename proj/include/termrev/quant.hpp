// ============================================================================
// quant.hpp — uniform fixed-point quantization with power-of-two scales
//
// Values are stored as signed integers q with a shared scale 2^scale_exponent,
// so the represented real value is q * 2^scale_exponent. The integer domain is
// sign-magnitude: for bitwidth b the representable range is
// [-(2^(b-1)-1), 2^(b-1)-1]; the asymmetric two's-complement minimum is never
// produced. This keeps every b-bit magnitude expressible with at most b-1
// power-of-two terms and makes negation an exact involution.
// ============================================================================
#pragma once

#include <cstdint>
#include <vector>

namespace termrev {

// Exact power of two as a double (handles negative exponents).
double pow2(int e);

// ----------------------------------------------------------------------------
// Matrix containers (row-major, dense)
// ----------------------------------------------------------------------------

struct RealMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;  // rows*cols, row-major

    double at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
    double& at(int r, int c) { return values[static_cast<size_t>(r) * cols + c]; }
    size_t size() const { return values.size(); }

    static RealMatrix zeros(int rows, int cols);
};

struct QuantScheme {
    int bitwidth = 8;        // 2..=8
    int scale_exponent = 0;  // real value = q * 2^scale_exponent

    // Largest representable magnitude: 2^(bitwidth-1) - 1.
    int max_magnitude() const { return (1 << (bitwidth - 1)) - 1; }
};

struct QuantizedMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> values;  // rows*cols, row-major, |v| <= scheme.max_magnitude()
    QuantScheme scheme;

    int at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
    int& at(int r, int c) { return values[static_cast<size_t>(r) * cols + c]; }
    size_t size() const { return values.size(); }

    // Throws std::invalid_argument if dimensions or value ranges are broken.
    void validate() const;
};

// ----------------------------------------------------------------------------
// Operations
// ----------------------------------------------------------------------------

// Symmetric max-abs quantization to `bitwidth` bits with a power-of-two scale.
// scale_exponent is the smallest integer s such that round(max|v| / 2^s) fits
// the representable range, i.e. ceil(log2(max|v| / max_magnitude)); an
// all-zero input quantizes with scale_exponent = 0. Rounding is
// half-away-from-zero, which preserves quantize(-M) == -quantize(M).
// Throws std::invalid_argument for an empty matrix, a bitwidth outside 2..=8,
// or a non-finite element (the message names the offending element index).
QuantizedMatrix quantize(const RealMatrix& matrix, int bitwidth);

// Exact elementwise q * 2^scale_exponent (no rounding).
RealMatrix dequantize(const QuantizedMatrix& m);

// Mean over elements of |original - dequantize(m)|.
// Throws std::invalid_argument on shape mismatch.
double mean_abs_quant_error(const RealMatrix& original, const QuantizedMatrix& m);

}  // namespace termrev

// ============================================================================
// quant.cpp — uniform fixed-point quantization
// ============================================================================
#include "termrev/quant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace termrev {

double pow2(int e) { return std::ldexp(1.0, e); }

RealMatrix RealMatrix::zeros(int rows, int cols) {
    RealMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.values.assign(static_cast<size_t>(rows) * cols, 0.0);
    return m;
}

void QuantizedMatrix::validate() const {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("quantized matrix has non-positive dimensions");
    if (values.size() != static_cast<size_t>(rows) * cols)
        throw std::invalid_argument("quantized matrix value count does not match rows*cols");
    if (scheme.bitwidth < 2 || scheme.bitwidth > 8)
        throw std::invalid_argument("bitwidth must be in 2..=8, got " +
                                    std::to_string(scheme.bitwidth));
    const int limit = scheme.max_magnitude();
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] > limit || values[i] < -limit)
            throw std::invalid_argument("element " + std::to_string(i) + " (" +
                                        std::to_string(values[i]) +
                                        ") outside representable range +-" +
                                        std::to_string(limit));
    }
}

namespace {

// Smallest integer s with 2^s >= ratio, for ratio > 0. Uses frexp so exact
// powers of two resolve without floating-point log noise.
int ceil_log2(double ratio) {
    int e = 0;
    double m = std::frexp(ratio, &e);  // ratio = m * 2^e, m in [0.5, 1)
    return (m == 0.5) ? e - 1 : e;
}

}  // namespace

QuantizedMatrix quantize(const RealMatrix& matrix, int bitwidth) {
    if (bitwidth < 2 || bitwidth > 8)
        throw std::invalid_argument("bitwidth must be in 2..=8, got " +
                                    std::to_string(bitwidth));
    if (matrix.rows < 1 || matrix.cols < 1 || matrix.values.empty())
        throw std::invalid_argument("cannot quantize an empty matrix");
    if (matrix.values.size() != static_cast<size_t>(matrix.rows) * matrix.cols)
        throw std::invalid_argument("matrix value count does not match rows*cols");

    double max_abs = 0.0;
    for (size_t i = 0; i < matrix.values.size(); ++i) {
        const double v = matrix.values[i];
        if (!std::isfinite(v))
            throw std::invalid_argument("element " + std::to_string(i) +
                                        " is not finite");
        max_abs = std::max(max_abs, std::fabs(v));
    }

    QuantizedMatrix out;
    out.rows = matrix.rows;
    out.cols = matrix.cols;
    out.scheme.bitwidth = bitwidth;
    const int limit = out.scheme.max_magnitude();
    // Scale so the max-magnitude element lands inside the range; all-zero
    // input keeps the neutral scale 0.
    out.scheme.scale_exponent = (max_abs == 0.0) ? 0 : ceil_log2(max_abs / limit);

    const double inv_scale = pow2(-out.scheme.scale_exponent);
    out.values.resize(matrix.values.size());
    for (size_t i = 0; i < matrix.values.size(); ++i) {
        // llround rounds half away from zero, keeping quantize sign-symmetric.
        long long q = std::llround(matrix.values[i] * inv_scale);
        q = std::clamp<long long>(q, -limit, limit);
        out.values[i] = static_cast<int>(q);
    }
    return out;
}

RealMatrix dequantize(const QuantizedMatrix& m) {
    RealMatrix out;
    out.rows = m.rows;
    out.cols = m.cols;
    out.values.resize(m.values.size());
    const double scale = pow2(m.scheme.scale_exponent);
    for (size_t i = 0; i < m.values.size(); ++i)
        out.values[i] = m.values[i] * scale;
    return out;
}

double mean_abs_quant_error(const RealMatrix& original, const QuantizedMatrix& m) {
    if (original.rows != m.rows || original.cols != m.cols)
        throw std::invalid_argument("shape mismatch: " + std::to_string(original.rows) +
                                    "x" + std::to_string(original.cols) + " vs " +
                                    std::to_string(m.rows) + "x" + std::to_string(m.cols));
    const double scale = pow2(m.scheme.scale_exponent);
    double sum = 0.0;
    for (size_t i = 0; i < m.values.size(); ++i)
        sum += std::fabs(original.values[i] - m.values[i] * scale);
    return sum / static_cast<double>(m.values.size());
}

}  // namespace termrev

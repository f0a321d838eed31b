// ============================================================================
// analysis.hpp — end-to-end QT vs TR comparison on matrix pipelines
//
// A pipeline is an ordered list of weight matrices with optional ReLU between
// layers, evaluated three ways: float reference, plain quantization (QT) at a
// fixed bitwidth, and quantization followed by term revealing on the weights
// plus leading-term truncation of the data (TR). Reports cover per-layer
// quantization error, output error against the float reference, and the
// term-pair counts that drive the term-MAC latency model (a QT b-bit multiply
// costs popcount(w)*popcount(x) pairs, up to (b-1)^2 = 49 at 8 bits).
// ============================================================================
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "termrev/matrix_io.hpp"
#include "termrev/term_revealing.hpp"

namespace termrev {

// ----------------------------------------------------------------------------
// Pipeline description
// ----------------------------------------------------------------------------

struct TrConfig {
    int group_size = 8;
    int budget = 12;
    int data_terms = 3;  // s leading data terms kept
    Encoding encoding = Encoding::hese;
};

struct LayerSpec {
    RealMatrix weights;
    bool relu_activation = true;
};

struct PipelineSpec {
    std::vector<LayerSpec> layers;
    int qt_bitwidth = 8;
    std::optional<TrConfig> tr;  // empty: TR columns left unfilled in reports
};

// ----------------------------------------------------------------------------
// Forward passes
// ----------------------------------------------------------------------------

// Σ|out - ref| / Σ|ref| (0 when both are identically zero).
double output_relative_error(const RealMatrix& ref, const RealMatrix& out);

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);

RealMatrix forward_float(const PipelineSpec& pipeline, const RealMatrix& input);

struct QtForward {
    RealMatrix output;
    long long term_pairs = 0;                // Σ popcount(w)*popcount(x)
    std::vector<double> layer_weight_error;  // mean abs quant error per layer
};
QtForward forward_qt(const PipelineSpec& pipeline, const RealMatrix& input);

struct TrForward {
    RealMatrix output;
    long long term_pairs = 0;  // kept weight terms x truncated data terms
    std::vector<double> layer_weight_error;
    TrReport tr_report;  // aggregated over all layers' weight groups
};
TrForward forward_tr(const PipelineSpec& pipeline, const RealMatrix& input,
                     const TrConfig& cfg);

// ----------------------------------------------------------------------------
// Comparison & sweep
// ----------------------------------------------------------------------------

struct LayerReport {
    double weight_error_qt = 0.0;
    double weight_error_tr = 0.0;
};

struct CompareReport {
    std::vector<LayerReport> layers;
    double output_rel_error_qt = 0.0;
    double output_rel_error_tr = 0.0;
    long long term_pairs_qt = 0;
    long long term_pairs_tr = 0;
    double pair_reduction_ratio = 0.0;  // qt / tr; 0 when TR disabled
    double mean_sigma = 0.0;
    double max_sigma = 0.0;
    bool tr_enabled = false;
};

// Runs the float, QT and (when configured) TR passes and assembles the
// report. Throws std::invalid_argument on incompatible layer dimensions.
CompareReport compare_qt_tr(const PipelineSpec& pipeline, const RealMatrix& input);

struct SweepSpec {
    std::vector<int> g_values;
    std::vector<double> alpha_values;  // k = round(alpha * g), clamped to [1, 7g]
    std::vector<int> s_values;
    std::vector<Encoding> encodings;
};

struct SweepRow {
    int g = 0;
    double alpha = 0.0;
    int k = 0;
    int s = 0;
    Encoding encoding = Encoding::hese;
    double mean_sigma = 0.0;
    double output_rel_error = 0.0;
    long long term_pairs = 0;
};

// Cross product of the sweep axes in declaration order (g outermost, then
// alpha, s, encoding); one row per setting. Analytics limits apply (g up to
// 64, budget up to 7g).
std::vector<SweepRow> sweep(const PipelineSpec& pipeline, const SweepSpec& spec,
                            const RealMatrix& input);

// ----------------------------------------------------------------------------
// Histogram bundles (figure-style data tables)
// ----------------------------------------------------------------------------

struct HistogramConfig {
    std::vector<Encoding> encodings = {Encoding::binary, Encoding::booth,
                                       Encoding::hese};
    int bitwidth = 8;
    int group_size = 16;                       // per-group pair histogram
    Encoding pair_encoding = Encoding::binary;  // untruncated pair counts
    std::vector<int> qt_bitwidths = {6, 7, 8};  // error table rows
    GroupBudget error_tr = {8, 14};             // error table TR row
    Encoding error_tr_encoding = Encoding::hese;
};

struct ErrorTableRow {
    std::string label;
    double mean_abs_error = 0.0;
};

struct HistogramBundle {
    std::map<Encoding, std::map<int, double>> term_histograms;
    std::map<long long, double> group_pair_histogram;  // pairs per group-dot
    long long max_possible_pairs = 0;  // g * (b-1)^2 hard bound
    std::vector<ErrorTableRow> error_table;
};

// Term-count histograms per encoding, the per-group term-pair histogram of
// weight groups against the data matrix columns, and the quantization-error
// table across the QT bitwidths plus the configured TR setting.
HistogramBundle emit_histograms(const RealMatrix& weights, const RealMatrix& data,
                                const HistogramConfig& cfg);

}  // namespace termrev

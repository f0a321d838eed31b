// ============================================================================
// analysis.cpp — pipeline forward passes, QT/TR comparison, sweeps, histograms
// ============================================================================
#include "termrev/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "termrev/sdr.hpp"
#include "termrev/term_dot.hpp"

namespace termrev {

namespace {

void apply_relu(RealMatrix& m) {
    for (double& v : m.values) v = std::max(0.0, v);
}

void check_layer_dims(const RealMatrix& weights, const RealMatrix& cur,
                      size_t layer) {
    if (weights.cols != cur.rows)
        throw std::invalid_argument(
            "layer " + std::to_string(layer) + " weights have " +
            std::to_string(weights.cols) + " columns but the incoming data has " +
            std::to_string(cur.rows) + " rows");
}

int popcount_magnitude(int v) {
    return std::popcount(static_cast<unsigned>(std::abs(v)));
}

// Σ_{i,k,j} w_counts[i,k] * x_counts[k,j], factored through the shared index:
// Σ_k (Σ_i w_counts[i,k]) * (Σ_j x_counts[k,j]).
long long cross_pairs(const std::vector<int>& w_counts, int m, int p,
                      const std::vector<int>& x_counts, int n) {
    long long total = 0;
    for (int k = 0; k < p; ++k) {
        long long wsum = 0, xsum = 0;
        for (int i = 0; i < m; ++i) wsum += w_counts[static_cast<size_t>(i) * p + k];
        for (int j = 0; j < n; ++j) xsum += x_counts[static_cast<size_t>(k) * n + j];
        total += wsum * xsum;
    }
    return total;
}

int analytics_budget_cap(int group_size) {
    // A b<=8-bit magnitude expands to at most 7 binary terms, so budgets past
    // 7g can never bind; that is the analytics-path ceiling.
    return 7 * group_size;
}

}  // namespace

// ----------------------------------------------------------------------------
// Forward passes
// ----------------------------------------------------------------------------

double output_relative_error(const RealMatrix& ref, const RealMatrix& out) {
    if (ref.rows != out.rows || ref.cols != out.cols)
        throw std::invalid_argument(
            "shape mismatch: " + std::to_string(ref.rows) + "x" +
            std::to_string(ref.cols) + " vs " + std::to_string(out.rows) + "x" +
            std::to_string(out.cols));
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < ref.values.size(); ++i) {
        num += std::abs(out.values[i] - ref.values[i]);
        den += std::abs(ref.values[i]);
    }
    if (den == 0.0)
        return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols != b.rows)
        throw std::invalid_argument("matmul shape mismatch: " +
                                    std::to_string(a.cols) + " vs " +
                                    std::to_string(b.rows));
    RealMatrix out = RealMatrix::zeros(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j)
                out.at(i, j) += aik * b.at(k, j);
        }
    return out;
}

RealMatrix forward_float(const PipelineSpec& pipeline, const RealMatrix& input) {
    RealMatrix cur = input;
    for (size_t l = 0; l < pipeline.layers.size(); ++l) {
        const auto& layer = pipeline.layers[l];
        check_layer_dims(layer.weights, cur, l);
        cur = matmul(layer.weights, cur);
        if (layer.relu_activation) apply_relu(cur);
    }
    return cur;
}

QtForward forward_qt(const PipelineSpec& pipeline, const RealMatrix& input) {
    QtForward fwd;
    RealMatrix cur = input;
    for (size_t l = 0; l < pipeline.layers.size(); ++l) {
        const auto& layer = pipeline.layers[l];
        check_layer_dims(layer.weights, cur, l);

        const QuantizedMatrix wq = quantize(layer.weights, pipeline.qt_bitwidth);
        const QuantizedMatrix xq = quantize(cur, pipeline.qt_bitwidth);
        fwd.layer_weight_error.push_back(mean_abs_quant_error(layer.weights, wq));

        std::vector<int> w_counts(wq.values.size()), x_counts(xq.values.size());
        for (size_t i = 0; i < wq.values.size(); ++i)
            w_counts[i] = popcount_magnitude(wq.values[i]);
        for (size_t i = 0; i < xq.values.size(); ++i)
            x_counts[i] = popcount_magnitude(xq.values[i]);
        fwd.term_pairs += cross_pairs(w_counts, wq.rows, wq.cols, x_counts, xq.cols);

        cur = matmul(dequantize(wq), dequantize(xq));
        if (layer.relu_activation) apply_relu(cur);
    }
    fwd.output = std::move(cur);
    return fwd;
}

TrForward forward_tr(const PipelineSpec& pipeline, const RealMatrix& input,
                     const TrConfig& cfg) {
    TrForward fwd;
    const GroupBudget budget{cfg.group_size, cfg.budget};
    const int bits = pipeline.qt_bitwidth;

    double sigma_sum = 0.0;
    RealMatrix cur = input;
    for (size_t l = 0; l < pipeline.layers.size(); ++l) {
        const auto& layer = pipeline.layers[l];
        check_layer_dims(layer.weights, cur, l);

        const QuantizedMatrix wq = quantize(layer.weights, bits);
        TrReport layer_report;
        std::vector<int> w_counts;
        const QuantizedMatrix wtr =
            apply_tr(wq, budget, cfg.encoding, &layer_report,
                     kMaxAnalyticsGroupSize, analytics_budget_cap(cfg.group_size),
                     &w_counts);
        fwd.layer_weight_error.push_back(mean_abs_quant_error(layer.weights, wtr));
        fwd.tr_report.groups += layer_report.groups;
        fwd.tr_report.pruned_terms_total += layer_report.pruned_terms_total;
        fwd.tr_report.max_sigma =
            std::max(fwd.tr_report.max_sigma, layer_report.max_sigma);
        sigma_sum += layer_report.mean_sigma * layer_report.groups;

        // Data side: keep the s leading terms of each quantized value.
        QuantizedMatrix xq = quantize(cur, bits);
        std::vector<int> x_counts(xq.values.size());
        for (size_t i = 0; i < xq.values.size(); ++i) {
            const TermExpansion kept = truncate_data_terms(
                expand(xq.values[i], bits, cfg.encoding), cfg.data_terms);
            xq.values[i] = static_cast<int>(kept.value());
            x_counts[i] = kept.term_count();
        }
        fwd.term_pairs += cross_pairs(w_counts, wq.rows, wq.cols, x_counts, xq.cols);

        cur = matmul(dequantize(wtr), dequantize(xq));
        if (layer.relu_activation) apply_relu(cur);
    }
    fwd.tr_report.mean_sigma =
        fwd.tr_report.groups ? sigma_sum / fwd.tr_report.groups : 0.0;
    fwd.output = std::move(cur);
    return fwd;
}

// ----------------------------------------------------------------------------
// Comparison & sweep
// ----------------------------------------------------------------------------

CompareReport compare_qt_tr(const PipelineSpec& pipeline, const RealMatrix& input) {
    CompareReport report;
    const RealMatrix ref = forward_float(pipeline, input);
    const QtForward qt = forward_qt(pipeline, input);
    report.output_rel_error_qt = output_relative_error(ref, qt.output);
    report.term_pairs_qt = qt.term_pairs;

    report.layers.resize(pipeline.layers.size());
    for (size_t l = 0; l < pipeline.layers.size(); ++l)
        report.layers[l].weight_error_qt = qt.layer_weight_error[l];

    if (pipeline.tr) {
        const TrForward tr = forward_tr(pipeline, input, *pipeline.tr);
        report.tr_enabled = true;
        report.output_rel_error_tr = output_relative_error(ref, tr.output);
        report.term_pairs_tr = tr.term_pairs;
        report.pair_reduction_ratio =
            tr.term_pairs > 0
                ? static_cast<double>(qt.term_pairs) / tr.term_pairs
                : 0.0;
        report.mean_sigma = tr.tr_report.mean_sigma;
        report.max_sigma = tr.tr_report.max_sigma;
        for (size_t l = 0; l < pipeline.layers.size(); ++l)
            report.layers[l].weight_error_tr = tr.layer_weight_error[l];
    }
    return report;
}

std::vector<SweepRow> sweep(const PipelineSpec& pipeline, const SweepSpec& spec,
                            const RealMatrix& input) {
    const RealMatrix ref = forward_float(pipeline, input);
    std::vector<SweepRow> rows;
    for (int g : spec.g_values)
        for (double alpha : spec.alpha_values) {
            const int k = std::clamp(static_cast<int>(std::lround(alpha * g)), 1,
                                     analytics_budget_cap(g));
            for (int s : spec.s_values)
                for (Encoding e : spec.encodings) {
                    TrConfig cfg;
                    cfg.group_size = g;
                    cfg.budget = k;
                    cfg.data_terms = s;
                    cfg.encoding = e;
                    const TrForward tr = forward_tr(pipeline, input, cfg);
                    SweepRow row;
                    row.g = g;
                    row.alpha = alpha;
                    row.k = k;
                    row.s = s;
                    row.encoding = e;
                    row.mean_sigma = tr.tr_report.mean_sigma;
                    row.output_rel_error = output_relative_error(ref, tr.output);
                    row.term_pairs = tr.term_pairs;
                    rows.push_back(row);
                }
        }
    return rows;
}

// ----------------------------------------------------------------------------
// Histogram bundles
// ----------------------------------------------------------------------------

HistogramBundle emit_histograms(const RealMatrix& weights, const RealMatrix& data,
                                const HistogramConfig& cfg) {
    if (weights.cols != data.rows)
        throw std::invalid_argument(
            "weights have " + std::to_string(weights.cols) +
            " columns but the data has " + std::to_string(data.rows) + " rows");

    HistogramBundle bundle;
    const QuantizedMatrix wq = quantize(weights, cfg.bitwidth);
    for (Encoding e : cfg.encodings)
        bundle.term_histograms[e] = term_count_histogram(wq, e);

    // Per-group term-pair histogram: every weight row is cut into groups of g
    // along the reduction dimension and paired with the matching slice of each
    // data column, with no budget or truncation applied.
    const int g = cfg.group_size;
    if (g < 1 || g > kMaxAnalyticsGroupSize)
        throw std::invalid_argument("group size must be in 1..=" +
                                    std::to_string(kMaxAnalyticsGroupSize) +
                                    ", got " + std::to_string(g));
    const QuantizedMatrix xq = quantize(data, cfg.bitwidth);
    std::vector<TermExpansion> w_exp(wq.values.size()), x_exp(xq.values.size());
    for (size_t i = 0; i < wq.values.size(); ++i)
        w_exp[i] = expand(wq.values[i], cfg.bitwidth, cfg.pair_encoding);
    for (size_t i = 0; i < xq.values.size(); ++i)
        x_exp[i] = expand(xq.values[i], cfg.bitwidth, cfg.pair_encoding);

    std::map<long long, long long> pair_counts;
    long long events = 0;
    for (int r = 0; r < wq.rows; ++r)
        for (int base = 0; base < wq.cols; base += g) {
            const int span = std::min(g, wq.cols - base);
            for (int j = 0; j < xq.cols; ++j) {
                long long pairs = 0;
                for (int t = 0; t < span; ++t)
                    pairs += static_cast<long long>(
                                 w_exp[static_cast<size_t>(r) * wq.cols + base + t]
                                     .term_count()) *
                             x_exp[static_cast<size_t>(base + t) * xq.cols + j]
                                 .term_count();
                ++pair_counts[pairs];
                ++events;
            }
        }
    for (const auto& [pairs, count] : pair_counts)
        bundle.group_pair_histogram[pairs] =
            static_cast<double>(count) / static_cast<double>(events);
    bundle.max_possible_pairs =
        static_cast<long long>(g) * (cfg.bitwidth - 1) * (cfg.bitwidth - 1);

    for (int qb : cfg.qt_bitwidths) {
        const QuantizedMatrix q = quantize(weights, qb);
        bundle.error_table.push_back(
            {"qt" + std::to_string(qb), mean_abs_quant_error(weights, q)});
    }
    const QuantizedMatrix trm =
        apply_tr(wq, cfg.error_tr, cfg.error_tr_encoding, nullptr,
                 kMaxAnalyticsGroupSize,
                 analytics_budget_cap(cfg.error_tr.group_size));
    bundle.error_table.push_back(
        {"tr_g" + std::to_string(cfg.error_tr.group_size) + "_k" +
             std::to_string(cfg.error_tr.budget),
         mean_abs_quant_error(weights, trm)});
    return bundle;
}

}  // namespace termrev

// ============================================================================
// trq_cli.cpp — `trq` command-line front end
//
// Subcommands:
//   encode    — print the digit string and term list of one value
//   quantize  — real CSV (or synthetic matrix) -> quantized CSV + sidecar
//   tr        — quantized CSV -> term-revealed CSV + JSON report
//   dot       — term-pair dot products of two matrices + pair histogram
//   simulate  — systolic-array matmul with cycle/work accounting
//   stats     — term-count histograms, group-pair histogram, error table
//   sweep     — (g, alpha, s, encoding) cross-product error/pairs table
//   pipeline  — float vs QT vs TR forward-pass comparison report
//
// All randomness derives from --seed; every command is deterministic given
// its inputs and flags. Errors surface as a JSON object on stderr and a
// nonzero exit code.
// ============================================================================
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "termrev/analysis.hpp"
#include "termrev/matrix_io.hpp"
#include "termrev/sdr.hpp"
#include "termrev/synthetic.hpp"
#include "termrev/systolic.hpp"
#include "termrev/term_dot.hpp"
#include "termrev/term_revealing.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace termrev;

namespace {

// ----------------------------------------------------------------------------
// Shared plumbing
// ----------------------------------------------------------------------------

struct GlobalOpts {
    uint64_t seed = 12345;
    std::string output_dir = ".";
};

// Rounds through the 9-significant-digit text form used by the CSV writers so
// JSON reports carry the same reproducible values.
double round9(double v) { return std::stod(format_double(v)); }

std::string out_path(const GlobalOpts& g, const std::string& name) {
    fs::create_directories(g.output_dir);
    return (fs::path(g.output_dir) / name).string();
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::pair<int, int> parse_shape(const std::string& s) {
    const size_t x = s.find('x');
    if (x == std::string::npos || x == 0 || x + 1 == s.size())
        throw std::invalid_argument("shape must look like RxC, got '" + s + "'");
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
}

// File input when a path is given, otherwise a synthetic matrix.
RealMatrix load_or_generate(const std::string& path, Distribution dist, int rows,
                            int cols, double sigma, uint64_t seed) {
    if (!path.empty()) return read_real_csv(path);
    return generate_synthetic(dist, rows, cols, sigma, seed);
}

void write_int64_csv(int rows, int cols, const std::vector<long long>& values,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c) out << ',';
            out << values[static_cast<size_t>(r) * cols + c];
        }
        out << '\n';
    }
}

json registers_to_json(const ControlRegisters& r) {
    return json{{"HESE_ENCODER_ON", r.hese_encoder_on},
                {"COMPARATOR_ON", r.comparator_on},
                {"QUANT_BITWIDTH", r.quant_bitwidth},
                {"DATA_TERMS", r.data_terms},
                {"GROUP_SIZE", r.group_size},
                {"GROUP_BUDGET", r.group_budget}};
}

ControlRegisters registers_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    const json j = json::parse(in);
    ControlRegisters r;
    r.hese_encoder_on = j.at("HESE_ENCODER_ON").get<int>();
    r.comparator_on = j.at("COMPARATOR_ON").get<int>();
    r.quant_bitwidth = j.at("QUANT_BITWIDTH").get<int>();
    r.data_terms = j.at("DATA_TERMS").get<int>();
    r.group_size = j.at("GROUP_SIZE").get<int>();
    r.group_budget = j.at("GROUP_BUDGET").get<int>();
    r.validate();
    return r;
}

json work_to_json(const WorkReport& w) {
    return json{{"cycles", w.cycles},
                {"add3_count", w.add3_count},
                {"add8_count", w.add8_count},
                {"acc32_count", w.acc32_count},
                {"bookkeeping_count", w.bookkeeping_count},
                {"term_pairs_total", w.term_pairs_total},
                {"work_units", round9(w.work_units)}};
}

std::string term_to_string(const SignedTerm& t) {
    return std::string(t.sign < 0 ? "-" : "+") + "2^" + std::to_string(t.exponent);
}

// ----------------------------------------------------------------------------
// encode
// ----------------------------------------------------------------------------

struct EncodeOpts {
    int value = 0;
    std::string encoding = "hese";
    int bits = 8;
};

int run_encode(const GlobalOpts&, const EncodeOpts& o) {
    const Encoding enc = parse_encoding(o.encoding);
    const TermExpansion e = expand(o.value, o.bits, enc);

    int width = o.bits + 1;  // hese may carry into position n
    for (const auto& t : e.terms) width = std::max(width, t.exponent + 1);

    std::cout << "value: " << o.value << "\n";
    std::cout << "encoding: " << encoding_name(enc) << "\n";
    std::cout << "digits (MSB first):";
    for (int pos = width - 1; pos >= 0; --pos) {
        int digit = 0;
        for (const auto& t : e.terms)
            if (t.exponent == pos) digit = t.sign;
        std::cout << ' ' << digit;
    }
    std::cout << "\nterms:";
    for (const auto& t : e.terms) std::cout << ' ' << term_to_string(t);
    if (e.terms.empty()) std::cout << " (none)";
    std::cout << "\nterm_count: " << e.term_count() << "\n";
    std::cout << "reconstructed: " << e.value() << "\n";
    if (enc == Encoding::hese) {
        const DigitStream s = hese_streams(o.value, o.bits);
        std::cout << "magnitude stream (MSB first): " << s.magnitude_string() << "\n";
        std::cout << "sign stream (MSB first): " << s.sign_string() << "\n";
    }
    return 0;
}

// ----------------------------------------------------------------------------
// quantize
// ----------------------------------------------------------------------------

struct QuantizeOpts {
    std::string input;
    std::string dist = "normal";
    int rows = 64;
    int cols = 64;
    double sigma = 1.0;
    int bits = 8;
};

int run_quantize(const GlobalOpts& g, const QuantizeOpts& o) {
    const RealMatrix m = load_or_generate(o.input, parse_distribution(o.dist),
                                          o.rows, o.cols, o.sigma, g.seed);
    const QuantizedMatrix q = quantize(m, o.bits);
    const std::string csv = out_path(g, "quantized.csv");
    write_quantized_csv(q, csv);
    emit(json{{"rows", q.rows},
              {"cols", q.cols},
              {"bitwidth", q.scheme.bitwidth},
              {"scale_exponent", q.scheme.scale_exponent},
              {"mean_abs_error", round9(mean_abs_quant_error(m, q))},
              {"csv", csv}});
    return 0;
}

// ----------------------------------------------------------------------------
// tr
// ----------------------------------------------------------------------------

struct TrOpts {
    std::string input;
    int group_size = 8;
    int budget = 12;
    std::string encoding = "hese";
};

int run_tr(const GlobalOpts& g, const TrOpts& o) {
    const QuantizedMatrix q = read_quantized_csv(o.input);
    TrReport report;
    const QuantizedMatrix out =
        apply_tr(q, GroupBudget{o.group_size, o.budget}, parse_encoding(o.encoding),
                 &report);
    const std::string csv = out_path(g, "tr.csv");
    write_quantized_csv(out, csv);
    emit(json{{"groups", report.groups},
              {"pruned_terms_total", report.pruned_terms_total},
              {"mean_sigma", round9(report.mean_sigma)},
              {"max_sigma", round9(report.max_sigma)},
              {"csv", csv}});
    return 0;
}

// ----------------------------------------------------------------------------
// dot
// ----------------------------------------------------------------------------

struct DotOpts {
    std::string weights;
    std::string data;
    int wrows = 64;
    int wcols = 64;
    int xcols = 8;
    double sigma = 1.0;
    int bits = 8;
    int group_size = 8;
    int budget = 12;
    int data_terms = 3;
    std::string encoding = "hese";
    bool no_tr = false;
};

int run_dot(const GlobalOpts& g, const DotOpts& o) {
    const Encoding enc = parse_encoding(o.encoding);
    const RealMatrix wr = load_or_generate(o.weights, Distribution::normal, o.wrows,
                                           o.wcols, o.sigma, g.seed);
    const RealMatrix xr = load_or_generate(o.data, Distribution::half_normal,
                                           wr.cols, o.xcols, o.sigma, g.seed + 1);
    if (wr.cols != xr.rows)
        throw std::invalid_argument("weights have " + std::to_string(wr.cols) +
                                    " columns but the data has " +
                                    std::to_string(xr.rows) + " rows");
    const QuantizedMatrix wq = quantize(wr, o.bits);
    const QuantizedMatrix xq = quantize(xr, o.bits);
    const int p = wq.cols, n = xq.cols, gsize = o.group_size;

    // Data-side expansions, truncated to s leading terms under TR.
    std::vector<TermExpansion> x_exp(xq.values.size());
    for (size_t i = 0; i < xq.values.size(); ++i) {
        x_exp[i] = expand(xq.values[i], o.bits, enc);
        if (!o.no_tr) x_exp[i] = truncate_data_terms(x_exp[i], o.data_terms);
    }

    std::vector<long long> result(static_cast<size_t>(wq.rows) * n, 0);
    std::map<long long, long long> pair_hist;
    long long pairs_total = 0, events = 0, max_group_pairs = 0;
    double sigma_sum = 0.0, sigma_max = 0.0;
    long long groups_seen = 0, pruned_total = 0;

    std::vector<TermExpansion> row;
    row.reserve(p);
    for (int r = 0; r < wq.rows; ++r) {
        row.clear();
        for (int c = 0; c < p; ++c) row.push_back(expand(wq.at(r, c), o.bits, enc));
        auto groups = partition_into_groups(row, gsize);
        if (!o.no_tr)
            for (auto& grp : groups) {
                const RevealResult sel = receding_water_select(grp, o.budget);
                sigma_sum += relative_truncation_error(grp, sel.kept);
                sigma_max = std::max(
                    sigma_max, relative_truncation_error(grp, sel.kept));
                pruned_total += sel.pruned_term_count;
                ++groups_seen;
                grp = sel.kept;
            }
        for (int j = 0; j < n; ++j) {
            CoefficientVector cv;
            for (size_t gi = 0; gi < groups.size(); ++gi) {
                std::vector<TermExpansion> x_slice(gsize);
                for (int t = 0; t < gsize; ++t) {
                    const int c = static_cast<int>(gi) * gsize + t;
                    if (c < p) x_slice[t] = x_exp[static_cast<size_t>(c) * n + j];
                }
                auto [next, res] = dot_product_terms(groups[gi], x_slice, cv);
                cv = next;
                pairs_total += res.term_pairs_processed;
                max_group_pairs = std::max(max_group_pairs, res.term_pairs_processed);
                ++pair_hist[res.term_pairs_processed];
                ++events;
            }
            result[static_cast<size_t>(r) * n + j] = cv.to_integer();
        }
    }

    const std::string result_csv = out_path(g, "dot_result.csv");
    write_int64_csv(wq.rows, n, result, result_csv);
    const std::string hist_csv = out_path(g, "dot_pairs.csv");
    {
        std::ofstream out(hist_csv);
        if (!out) throw std::runtime_error("cannot open '" + hist_csv + "' for writing");
        out << "pairs,fraction\n";
        for (const auto& [pairs, count] : pair_hist)
            out << pairs << ','
                << format_double(static_cast<double>(count) /
                                 static_cast<double>(events))
                << '\n';
    }

    json report{{"rows", wq.rows},
                {"cols", n},
                {"scale_exponent",
                 wq.scheme.scale_exponent + xq.scheme.scale_exponent},
                {"term_pairs_total", pairs_total},
                {"mean_group_pairs",
                 round9(events ? static_cast<double>(pairs_total) /
                                     static_cast<double>(events)
                               : 0.0)},
                {"max_group_pairs", max_group_pairs},
                {"tr_enabled", !o.no_tr},
                {"result_csv", result_csv},
                {"histogram_csv", hist_csv}};
    if (!o.no_tr)
        report["tr_report"] =
            json{{"groups", groups_seen},
                 {"pruned_terms_total", pruned_total},
                 {"mean_sigma", round9(groups_seen ? sigma_sum / groups_seen : 0.0)},
                 {"max_sigma", round9(sigma_max)}};
    emit(report);
    return 0;
}

// ----------------------------------------------------------------------------
// simulate
// ----------------------------------------------------------------------------

struct SimulateOpts {
    std::string mode = "tr";
    std::string weights;
    std::string data;
    std::string config;
    int wrows = 64;
    int wcols = 64;
    int xcols = 8;
    double sigma = 1.0;
    int bits = 8;
    int group_size = 8;
    int budget = 12;
    int data_terms = 3;
    int array_rows = 128;
    int array_cols = 64;
    std::string encoding = "hese";
    bool no_sync = false;
    bool no_double_buffer = false;
};

int run_simulate(const GlobalOpts& g, const SimulateOpts& o) {
    ControlRegisters regs;
    if (!o.config.empty()) {
        regs = registers_from_json_file(o.config);
    } else if (o.mode == "qt") {
        regs = make_qt_registers(o.bits);
    } else if (o.mode == "tr") {
        regs = make_tr_registers(o.bits, o.group_size, o.budget, o.data_terms);
    } else {
        throw std::invalid_argument("mode must be qt or tr, got '" + o.mode + "'");
    }
    const QuantMode qmode = regs.mode();

    const RealMatrix wr = load_or_generate(o.weights, Distribution::normal, o.wrows,
                                           o.wcols, o.sigma, g.seed);
    const RealMatrix xr = load_or_generate(o.data, Distribution::half_normal,
                                           wr.cols, o.xcols, o.sigma, g.seed + 1);
    const QuantizedMatrix wq = quantize(wr, regs.quant_bitwidth);
    const QuantizedMatrix xq = quantize(xr, regs.quant_bitwidth);

    ArrayConfig cfg;
    cfg.rows = o.array_rows;
    cfg.cols = o.array_cols;
    cfg.mode = qmode == QuantMode::tr ? MacMode::tmac : MacMode::pmac;
    cfg.registers = regs;
    cfg.synchronized_groups = !o.no_sync;
    cfg.double_buffered_weights = !o.no_double_buffer;
    cfg.tr_encoding = parse_encoding(o.encoding);
    const MatmulResult res = simulate_matmul(wq, xq, cfg);

    const std::string result_csv = out_path(g, "simulate_result.csv");
    write_int64_csv(res.rows, res.cols, res.values, result_csv);
    const std::string tiles_csv = out_path(g, "simulate_tiles.csv");
    {
        std::ofstream out(tiles_csv);
        if (!out) throw std::runtime_error("cannot open '" + tiles_csv + "' for writing");
        out << "tile,cycles\n";
        for (size_t i = 0; i < res.tile_cycles.size(); ++i)
            out << i << ',' << res.tile_cycles[i] << '\n';
    }

    emit(json{{"mode", qmode == QuantMode::tr ? "tr" : "qt"},
              {"registers", registers_to_json(regs)},
              {"rows", res.rows},
              {"cols", res.cols},
              {"tiles", res.tile_cycles.size()},
              {"scale_exponent",
               wq.scheme.scale_exponent + xq.scheme.scale_exponent},
              {"work", work_to_json(res.work)},
              {"result_csv", result_csv},
              {"tiles_csv", tiles_csv}});
    return 0;
}

// ----------------------------------------------------------------------------
// stats
// ----------------------------------------------------------------------------

struct StatsOpts {
    std::string input;
    std::string data;
    int rows = 64;
    int cols = 64;
    int xcols = 8;
    double sigma = 1.0;
    int bits = 8;
    int group_size = 16;
    std::string pair_encoding = "binary";
};

int run_stats(const GlobalOpts& g, const StatsOpts& o) {
    const RealMatrix wr = load_or_generate(o.input, Distribution::normal, o.rows,
                                           o.cols, o.sigma, g.seed);
    const RealMatrix xr = load_or_generate(o.data, Distribution::half_normal,
                                           wr.cols, o.xcols, o.sigma, g.seed + 1);
    HistogramConfig cfg;
    cfg.bitwidth = o.bits;
    cfg.group_size = o.group_size;
    cfg.pair_encoding = parse_encoding(o.pair_encoding);
    const HistogramBundle bundle = emit_histograms(wr, xr, cfg);

    std::vector<std::string> files;
    for (const auto& [enc, hist] : bundle.term_histograms) {
        const std::string path =
            out_path(g, std::string("terms_") + encoding_name(enc) + ".csv");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
        out << "term_count,fraction\n";
        for (const auto& [count, fraction] : hist)
            out << count << ',' << format_double(fraction) << '\n';
        files.push_back(path);
    }
    {
        const std::string path = out_path(g, "group_pairs.csv");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
        out << "pairs,fraction\n";
        for (const auto& [pairs, fraction] : bundle.group_pair_histogram)
            out << pairs << ',' << format_double(fraction) << '\n';
        files.push_back(path);
    }
    {
        const std::string path = out_path(g, "quant_error.csv");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
        out << "setting,mean_abs_error\n";
        for (const auto& row : bundle.error_table)
            out << row.label << ',' << format_double(row.mean_abs_error) << '\n';
        files.push_back(path);
    }
    emit(json{{"bitwidth", o.bits},
              {"group_size", o.group_size},
              {"max_possible_pairs", bundle.max_possible_pairs},
              {"files", files}});
    return 0;
}

// ----------------------------------------------------------------------------
// pipeline & sweep (shared sourcing)
// ----------------------------------------------------------------------------

struct PipelineSourceOpts {
    std::vector<std::string> layer_paths;
    std::vector<std::string> synthetic_layers = {"64x128", "10x64"};
    std::string input;
    std::string synthetic_input = "128x16";
    double sigma = 1.0;
    int bits = 8;
};

PipelineSpec build_pipeline(const GlobalOpts& g, const PipelineSourceOpts& o,
                            RealMatrix& input_out) {
    PipelineSpec pipeline;
    pipeline.qt_bitwidth = o.bits;
    if (!o.layer_paths.empty()) {
        for (const auto& path : o.layer_paths)
            pipeline.layers.push_back({read_real_csv(path), true});
    } else {
        for (size_t i = 0; i < o.synthetic_layers.size(); ++i) {
            const auto [rows, cols] = parse_shape(o.synthetic_layers[i]);
            pipeline.layers.push_back(
                {generate_synthetic(Distribution::normal, rows, cols, o.sigma,
                                    g.seed + i),
                 true});
        }
    }
    if (pipeline.layers.empty()) throw std::invalid_argument("no layers given");
    pipeline.layers.back().relu_activation = false;  // raw final scores

    if (!o.input.empty()) {
        input_out = read_real_csv(o.input);
    } else {
        const auto [rows, cols] = parse_shape(o.synthetic_input);
        input_out = generate_synthetic(Distribution::half_normal, rows, cols,
                                       o.sigma, g.seed + 1000);
    }
    return pipeline;
}

struct PipelineOpts {
    PipelineSourceOpts source;
    int group_size = 8;
    int budget = 12;
    int data_terms = 3;
    std::string encoding = "hese";
    bool no_tr = false;
};

int run_pipeline(const GlobalOpts& g, const PipelineOpts& o) {
    RealMatrix input;
    PipelineSpec pipeline = build_pipeline(g, o.source, input);
    if (!o.no_tr) {
        TrConfig cfg;
        cfg.group_size = o.group_size;
        cfg.budget = o.budget;
        cfg.data_terms = o.data_terms;
        cfg.encoding = parse_encoding(o.encoding);
        pipeline.tr = cfg;
    }
    const CompareReport report = compare_qt_tr(pipeline, input);

    json layers = json::array();
    for (const auto& layer : report.layers) {
        json row{{"weight_error_qt", round9(layer.weight_error_qt)}};
        if (report.tr_enabled)
            row["weight_error_tr"] = round9(layer.weight_error_tr);
        layers.push_back(row);
    }
    json out{{"tr_enabled", report.tr_enabled},
             {"layers", layers},
             {"output_rel_error_qt", round9(report.output_rel_error_qt)},
             {"term_pairs_qt", report.term_pairs_qt}};
    if (report.tr_enabled) {
        out["output_rel_error_tr"] = round9(report.output_rel_error_tr);
        out["term_pairs_tr"] = report.term_pairs_tr;
        out["pair_reduction_ratio"] = round9(report.pair_reduction_ratio);
        out["mean_sigma"] = round9(report.mean_sigma);
        out["max_sigma"] = round9(report.max_sigma);
    }
    emit(out);
    return 0;
}

struct SweepOpts {
    PipelineSourceOpts source;
    std::vector<int> g_values = {1, 2, 4, 8};
    std::vector<double> alpha_values = {1.0, 1.5, 2.0};
    std::vector<int> s_values = {3};
    std::vector<std::string> encodings = {"hese"};
};

int run_sweep(const GlobalOpts& g, const SweepOpts& o) {
    RealMatrix input;
    const PipelineSpec pipeline = build_pipeline(g, o.source, input);
    SweepSpec spec;
    spec.g_values = o.g_values;
    spec.alpha_values = o.alpha_values;
    spec.s_values = o.s_values;
    for (const auto& name : o.encodings)
        spec.encodings.push_back(parse_encoding(name));
    const std::vector<SweepRow> rows = sweep(pipeline, spec, input);

    const std::string csv = out_path(g, "sweep.csv");
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot open '" + csv + "' for writing");
    out << "g,alpha,k,s,encoding,mean_sigma,output_rel_error,term_pairs\n";
    for (const auto& row : rows)
        out << row.g << ',' << format_double(row.alpha) << ',' << row.k << ','
            << row.s << ',' << encoding_name(row.encoding) << ','
            << format_double(row.mean_sigma) << ','
            << format_double(row.output_rel_error) << ',' << row.term_pairs
            << '\n';
    emit(json{{"rows", rows.size()}, {"csv", csv}});
    return 0;
}

}  // namespace

// ----------------------------------------------------------------------------
// main
// ----------------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{"term-revealing quantization toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "seed for synthetic data (default 12345)");
    app.add_option("--output-dir", g.output_dir,
                   "directory for emitted files (default .)");

    EncodeOpts enc_o;
    auto* enc_cmd = app.add_subcommand("encode", "encode one value as signed digits");
    enc_cmd->add_option("--value", enc_o.value, "integer to encode")->required();
    enc_cmd->add_option("--encoding", enc_o.encoding, "binary|booth|hese");
    enc_cmd->add_option("--bits", enc_o.bits, "bit-width (default 8)");

    QuantizeOpts q_o;
    auto* q_cmd = app.add_subcommand("quantize", "quantize a real matrix");
    q_cmd->add_option("--input", q_o.input, "real matrix CSV (else synthetic)");
    q_cmd->add_option("--dist", q_o.dist, "synthetic distribution");
    q_cmd->add_option("--rows", q_o.rows, "synthetic rows");
    q_cmd->add_option("--cols", q_o.cols, "synthetic cols");
    q_cmd->add_option("--sigma", q_o.sigma, "synthetic sigma");
    q_cmd->add_option("--bits", q_o.bits, "bitwidth 2..8");

    TrOpts tr_o;
    auto* tr_cmd = app.add_subcommand("tr", "apply term revealing to a quantized matrix");
    tr_cmd->add_option("--input", tr_o.input, "quantized CSV (with .json sidecar)")
        ->required();
    tr_cmd->add_option("--group-size", tr_o.group_size, "g, 1..8");
    tr_cmd->add_option("--budget", tr_o.budget, "k, 1..24");
    tr_cmd->add_option("--encoding", tr_o.encoding, "binary|booth|hese");

    DotOpts dot_o;
    auto* dot_cmd = app.add_subcommand("dot", "term-pair dot products of two matrices");
    dot_cmd->add_option("--weights", dot_o.weights, "weights CSV (else synthetic normal)");
    dot_cmd->add_option("--data", dot_o.data, "data CSV (else synthetic half-normal)");
    dot_cmd->add_option("--wrows", dot_o.wrows, "synthetic weight rows");
    dot_cmd->add_option("--wcols", dot_o.wcols, "synthetic weight cols");
    dot_cmd->add_option("--xcols", dot_o.xcols, "synthetic data cols");
    dot_cmd->add_option("--sigma", dot_o.sigma, "synthetic sigma");
    dot_cmd->add_option("--bits", dot_o.bits, "bitwidth 2..8");
    dot_cmd->add_option("--group-size", dot_o.group_size, "g, 1..8");
    dot_cmd->add_option("--budget", dot_o.budget, "k, 1..24");
    dot_cmd->add_option("--data-terms", dot_o.data_terms, "s leading data terms");
    dot_cmd->add_option("--encoding", dot_o.encoding, "binary|booth|hese");
    dot_cmd->add_flag("--no-tr", dot_o.no_tr, "skip TR and data truncation");

    SimulateOpts sim_o;
    auto* sim_cmd = app.add_subcommand("simulate", "systolic-array matmul simulation");
    sim_cmd->add_option("--mode", sim_o.mode, "qt|tr (ignored with --config)");
    sim_cmd->add_option("--config", sim_o.config,
                        "control-register JSON (HESE_ENCODER_ON, ...)");
    sim_cmd->add_option("--weights", sim_o.weights, "weights CSV (else synthetic)");
    sim_cmd->add_option("--data", sim_o.data, "data CSV (else synthetic)");
    sim_cmd->add_option("--wrows", sim_o.wrows, "synthetic weight rows");
    sim_cmd->add_option("--wcols", sim_o.wcols, "synthetic weight cols");
    sim_cmd->add_option("--xcols", sim_o.xcols, "synthetic data cols");
    sim_cmd->add_option("--sigma", sim_o.sigma, "synthetic sigma");
    sim_cmd->add_option("--bits", sim_o.bits, "bitwidth 2..8");
    sim_cmd->add_option("--group-size", sim_o.group_size, "g, 2..8 (TR)");
    sim_cmd->add_option("--budget", sim_o.budget, "k, 1..24 (TR)");
    sim_cmd->add_option("--data-terms", sim_o.data_terms, "s (TR)");
    sim_cmd->add_option("--rows", sim_o.array_rows, "array rows (cells)");
    sim_cmd->add_option("--cols", sim_o.array_cols, "array cols (cells)");
    sim_cmd->add_option("--encoding", sim_o.encoding, "weight expansion in TR mode");
    sim_cmd->add_flag("--no-sync", sim_o.no_sync, "straggler (max-pairs) timing");
    sim_cmd->add_flag("--no-double-buffer", sim_o.no_double_buffer,
                      "charge weight loads per tile");

    StatsOpts st_o;
    auto* st_cmd = app.add_subcommand("stats", "histograms and error tables");
    st_cmd->add_option("--input", st_o.input, "weights CSV (else synthetic normal)");
    st_cmd->add_option("--data", st_o.data, "data CSV (else synthetic half-normal)");
    st_cmd->add_option("--rows", st_o.rows, "synthetic weight rows");
    st_cmd->add_option("--cols", st_o.cols, "synthetic weight cols");
    st_cmd->add_option("--xcols", st_o.xcols, "synthetic data cols");
    st_cmd->add_option("--sigma", st_o.sigma, "synthetic sigma");
    st_cmd->add_option("--bits", st_o.bits, "bitwidth 2..8");
    st_cmd->add_option("--group-size", st_o.group_size, "pair-histogram group size");
    st_cmd->add_option("--pair-encoding", st_o.pair_encoding,
                       "encoding for pair counting");

    auto add_pipeline_source = [](CLI::App* cmd, PipelineSourceOpts& src) {
        cmd->add_option("--layer", src.layer_paths,
                        "weight CSV, repeatable (else synthetic layers)");
        cmd->add_option("--synthetic-layer", src.synthetic_layers,
                        "synthetic weight shape RxC, repeatable")
            ->delimiter(',');
        cmd->add_option("--input", src.input, "input CSV (else synthetic)");
        cmd->add_option("--synthetic-input", src.synthetic_input,
                        "synthetic input shape RxC");
        cmd->add_option("--sigma", src.sigma, "synthetic sigma");
        cmd->add_option("--bits", src.bits, "QT bitwidth 2..8");
    };

    PipelineOpts pl_o;
    auto* pl_cmd = app.add_subcommand("pipeline", "float vs QT vs TR forward passes");
    add_pipeline_source(pl_cmd, pl_o.source);
    pl_cmd->add_option("--group-size", pl_o.group_size, "g (TR)");
    pl_cmd->add_option("--budget", pl_o.budget, "k (TR)");
    pl_cmd->add_option("--data-terms", pl_o.data_terms, "s (TR)");
    pl_cmd->add_option("--encoding", pl_o.encoding, "binary|booth|hese");
    pl_cmd->add_flag("--no-tr", pl_o.no_tr, "QT-only comparison");

    SweepOpts sw_o;
    auto* sw_cmd = app.add_subcommand("sweep", "(g, alpha, s, encoding) cross product");
    add_pipeline_source(sw_cmd, sw_o.source);
    sw_cmd->add_option("--g-values", sw_o.g_values, "group sizes")->delimiter(',');
    sw_cmd->add_option("--alpha-values", sw_o.alpha_values, "k = round(alpha*g)")
        ->delimiter(',');
    sw_cmd->add_option("--s-values", sw_o.s_values, "data term counts")
        ->delimiter(',');
    sw_cmd->add_option("--encodings", sw_o.encodings, "encodings")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }

    try {
        if (enc_cmd->parsed()) return run_encode(g, enc_o);
        if (q_cmd->parsed()) return run_quantize(g, q_o);
        if (tr_cmd->parsed()) return run_tr(g, tr_o);
        if (dot_cmd->parsed()) return run_dot(g, dot_o);
        if (sim_cmd->parsed()) return run_simulate(g, sim_o);
        if (st_cmd->parsed()) return run_stats(g, st_o);
        if (pl_cmd->parsed()) return run_pipeline(g, pl_o);
        if (sw_cmd->parsed()) return run_sweep(g, sw_o);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    std::cerr << json{{"error", "no subcommand given"}}.dump() << "\n";
    return 1;
}

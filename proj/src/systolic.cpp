// ============================================================================
// systolic.cpp — pMAC/tMAC systolic array simulation
// ============================================================================
#include "termrev/systolic.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace termrev {

// ----------------------------------------------------------------------------
// Control registers
// ----------------------------------------------------------------------------

void ControlRegisters::validate() const {
    auto check = [](int v, int lo, int hi, const char* name) {
        if (v < lo || v > hi)
            throw std::invalid_argument(std::string(name) + " must be in " +
                                        std::to_string(lo) + ".." + std::to_string(hi) +
                                        ", got " + std::to_string(v));
    };
    check(hese_encoder_on, 0, 1, "hese_encoder_on");
    check(comparator_on, 0, 1, "comparator_on");
    check(quant_bitwidth, 2, 8, "quant_bitwidth");
    check(data_terms, 1, 15, "data_terms");
    check(group_size, 1, kMaxRegisterGroupSize, "group_size");  // 3-bit field
    check(group_budget, 1, kMaxGroupBudget, "group_budget");    // 5-bit field
}

QuantMode ControlRegisters::mode() const {
    validate();
    if (!hese_encoder_on && !comparator_on && group_size == 1 &&
        group_budget == quant_bitwidth && data_terms == quant_bitwidth)
        return QuantMode::qt;
    if (hese_encoder_on && comparator_on && group_size >= 2) return QuantMode::tr;
    throw std::invalid_argument("register pattern matches neither QT nor TR mode");
}

ControlRegisters make_qt_registers(int bitwidth) {
    ControlRegisters r;
    r.hese_encoder_on = 0;
    r.comparator_on = 0;
    r.quant_bitwidth = bitwidth;
    r.data_terms = bitwidth;
    r.group_size = 1;
    r.group_budget = bitwidth;
    r.validate();
    return r;
}

ControlRegisters make_tr_registers(int bitwidth, int group_size, int budget,
                                   int data_terms) {
    ControlRegisters r;
    r.hese_encoder_on = 1;
    r.comparator_on = 1;
    r.quant_bitwidth = bitwidth;
    r.data_terms = data_terms;
    r.group_size = group_size;
    r.group_budget = budget;
    r.validate();
    if (group_size < 2)
        throw std::invalid_argument("TR group size must be in 2..=8, got " +
                                    std::to_string(group_size));
    return r;
}

ReconfigureResult reconfigure(const ControlRegisters& current, QuantMode target,
                              int switch_latency, const TrParams& tr) {
    if (switch_latency < 0)
        throw std::invalid_argument("switch latency must be >= 0");
    const QuantMode active = current.mode();
    if (active == target) return {current, 0};  // no-op switch is free
    ControlRegisters next =
        target == QuantMode::qt
            ? make_qt_registers(current.quant_bitwidth)
            : make_tr_registers(current.quant_bitwidth, tr.group_size, tr.budget,
                                tr.data_terms);
    return {next, switch_latency};
}

// ----------------------------------------------------------------------------
// Work accounting
// ----------------------------------------------------------------------------

void WorkReport::accumulate(const WorkReport& o) {
    cycles += o.cycles;
    add3_count += o.add3_count;
    add8_count += o.add8_count;
    acc32_count += o.acc32_count;
    bookkeeping_count += o.bookkeeping_count;
    term_pairs_total += o.term_pairs_total;
    work_units += o.work_units;
}

void WorkReport::recompute_work(const WorkCosts& costs) {
    work_units = add3_count * costs.add3 + add8_count * costs.add8 +
                 acc32_count * costs.acc32 + bookkeeping_count * costs.bookkeeping;
}

WorkReport simulate_group_pmac(int g, const WorkCosts& costs) {
    if (g < 1)
        throw std::invalid_argument("pMAC group size must be >= 1, got " +
                                    std::to_string(g));
    WorkReport r;
    r.cycles = g;  // one multiply-accumulate per cycle
    r.add8_count = 7LL * g;
    r.acc32_count = g;
    r.recompute_work(costs);
    return r;
}

WorkReport simulate_group_tmac(long long pairs_actual, int k, int s,
                               bool synchronized, const WorkCosts& costs) {
    if (k < 1 || s < 1)
        throw std::invalid_argument("tMAC bounds require k >= 1 and s >= 1");
    if (pairs_actual < 0)
        throw std::invalid_argument("negative pair count");
    const long long bound = static_cast<long long>(s) * k;
    if (pairs_actual > bound)
        throw std::invalid_argument(
            "group has " + std::to_string(pairs_actual) + " term pairs, above the s*k bound " +
            std::to_string(bound) + " — term revealing was not applied upstream");
    WorkReport r;
    // Synchronized cells march at the worst-case group time so the wavefront
    // stays aligned; unsynchronized accounting charges only the actual pairs.
    r.cycles = synchronized ? bound : pairs_actual;
    r.add3_count = r.cycles;
    r.bookkeeping_count = r.cycles;
    r.term_pairs_total = pairs_actual;
    r.recompute_work(costs);
    return r;
}

double work_ratio(const WorkReport& a, const WorkReport& b) {
    if (a.work_units == 0.0)
        throw std::invalid_argument("work ratio denominator is zero");
    return b.work_units / a.work_units;
}

// ----------------------------------------------------------------------------
// Tiled matmul
// ----------------------------------------------------------------------------

MatmulResult simulate_matmul(const QuantizedMatrix& W, const QuantizedMatrix& X,
                             const ArrayConfig& cfg) {
    W.validate();
    X.validate();
    if (W.cols != X.rows)
        throw std::invalid_argument("inner dimensions differ: W is " +
                                    std::to_string(W.rows) + "x" + std::to_string(W.cols) +
                                    ", X is " + std::to_string(X.rows) + "x" +
                                    std::to_string(X.cols));
    if (cfg.rows < 1 || cfg.cols < 1)
        throw std::invalid_argument("array dimensions must be >= 1");
    const QuantMode qmode = cfg.registers.mode();
    if ((cfg.mode == MacMode::pmac) != (qmode == QuantMode::qt))
        throw std::invalid_argument("array mode and register mode disagree "
                                    "(pMAC pairs with QT, tMAC with TR)");

    const int m = W.rows, p = W.cols, n = X.cols;
    const int g = cfg.registers.group_size;
    const int k = cfg.registers.group_budget;
    const int s = cfg.registers.data_terms;
    const bool tmac = cfg.mode == MacMode::tmac;

    // --- operand preparation -------------------------------------------------
    // TR mode reveals the top-k terms per weight group (groups of g along each
    // row) and truncates every data value to its s leading signed-digit terms;
    // the encoder is always active in TR mode, so data uses hese expansions.
    std::vector<TermExpansion> w_kept, x_trunc;
    if (tmac) {
        const int bits = cfg.registers.quant_bitwidth;
        w_kept.resize(static_cast<size_t>(m) * p);
        std::vector<TermExpansion> row_exp;
        row_exp.reserve(p);
        for (int r = 0; r < m; ++r) {
            row_exp.clear();
            for (int c = 0; c < p; ++c)
                row_exp.push_back(expand(W.at(r, c), bits, cfg.tr_encoding));
            const auto groups = partition_into_groups(row_exp, g);
            for (size_t gi = 0; gi < groups.size(); ++gi) {
                const auto sel = receding_water_select(groups[gi], k);
                for (int j = 0; j < g; ++j) {
                    const int c = static_cast<int>(gi) * g + j;
                    if (c < p)
                        w_kept[static_cast<size_t>(r) * p + c] =
                            sel.kept.expansions[j];
                }
            }
        }
        x_trunc.resize(static_cast<size_t>(p) * n);
        for (size_t i = 0; i < x_trunc.size(); ++i)
            x_trunc[i] = truncate_data_terms(
                hese_encode(X.values[i], bits), s);
    }

    // --- tiled evaluation -----------------------------------------------------
    const int group_span = tmac ? g : 1;
    const long long tile_p = static_cast<long long>(cfg.cols) * group_span;
    const int row_tiles = (m + cfg.rows - 1) / cfg.rows;
    const int p_tiles = static_cast<int>((p + tile_p - 1) / tile_p);

    MatmulResult result;
    result.rows = m;
    result.cols = n;
    result.values.assign(static_cast<size_t>(m) * n, 0);
    result.tile_cycles.reserve(static_cast<size_t>(row_tiles) * p_tiles);

    WorkReport total;
    const long long sk_bound = static_cast<long long>(s) * k;

    for (int rt = 0; rt < row_tiles; ++rt) {
        const int r0 = rt * cfg.rows;
        const int r1 = std::min(m, r0 + cfg.rows);
        for (int pt = 0; pt < p_tiles; ++pt) {
            const int p0 = static_cast<int>(pt * tile_p);
            const int p1 = static_cast<int>(std::min<long long>(p, p0 + tile_p));
            long long stream_cycles = 0;

            for (int j = 0; j < n; ++j) {
                long long wave_time = tmac ? 0 : 1;  // pMAC: one MAC per cycle
                for (int r = r0; r < r1; ++r) {
                    if (!tmac) {
                        long long acc = 0;
                        for (int idx = p0; idx < p1; ++idx)
                            acc += static_cast<long long>(W.at(r, idx)) * X.at(idx, j);
                        result.values[static_cast<size_t>(r) * n + j] += acc;
                        // One single-value pMAC group per active cell; batched
                        // into one report with identical operation counts.
                        total.accumulate(simulate_group_pmac(p1 - p0, cfg.costs));
                        continue;
                    }
                    // tMAC row: coefficient vectors chain across the C cells
                    // of the tile (each cell starts from its neighbor's
                    // vector); the stream converter reduces once per tile row.
                    CoefficientVector cv;
                    for (int cell = 0; cell < cfg.cols; ++cell) {
                        const int q0 = p0 + cell * g;
                        if (q0 >= p1) break;
                        const int q1 = std::min(p1, q0 + g);
                        long long pairs = 0;
                        for (int idx = q0; idx < q1; ++idx) {
                            const auto& wt = w_kept[static_cast<size_t>(r) * p + idx];
                            const auto& xt = x_trunc[static_cast<size_t>(idx) * n + j];
                            for (const auto& a : wt.terms)
                                for (const auto& b : xt.terms) {
                                    cv.add(a.exponent + b.exponent, a.sign * b.sign);
                                    ++pairs;
                                }
                        }
                        total.accumulate(simulate_group_tmac(
                            pairs, k, s, cfg.synchronized_groups, cfg.costs));
                        wave_time = cfg.synchronized_groups
                                        ? sk_bound
                                        : std::max(wave_time, pairs);
                    }
                    result.values[static_cast<size_t>(r) * n + j] += cv.to_integer();
                }
                stream_cycles += wave_time;
            }

            long long tile = (cfg.rows + cfg.cols - 1) + stream_cycles;
            if (!cfg.double_buffered_weights)
                tile += static_cast<long long>(cfg.rows) * cfg.cols;  // weight load
            result.tile_cycles.push_back(tile);
        }
    }

    // Per-group cycle fields summed above describe cell-local time; the
    // array-level latency is the tile pipeline total.
    total.cycles = 0;
    for (long long t : result.tile_cycles) total.cycles += t;
    total.recompute_work(cfg.costs);
    result.work = total;
    return result;
}

}  // namespace termrev

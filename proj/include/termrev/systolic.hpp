// ============================================================================
// systolic.hpp — cycle/work-level simulator for pMAC and tMAC arrays
//
// Models a weight-stationary systolic array performing tiled integer matmul
// in two cell flavors:
//
//   pMAC — bit-parallel 8-bit multiply + 32-bit accumulate, one MAC per cycle
//          (a group of g values costs g cycles, 7g 8-bit adds, g 32-bit accs)
//   tMAC — term-pair serial cell; a group costs at most s*k cycles (k = group
//          term budget, s = data terms per value), each cycle one 3-bit
//          exponent add plus bookkeeping of equivalent cost
//
// "Work" is an abstract unit count under a configurable cost model, not
// joules. Cycle accounting per tile: pipeline fill (rows + cols - 1) plus one
// group-time per streamed data column; the per-tile formula is reported so
// alternative latency models can be substituted.
// ============================================================================
#pragma once

#include <string>
#include <vector>

#include "termrev/term_dot.hpp"

namespace termrev {

constexpr int kDefaultSwitchLatencyCycles = 10;

enum class MacMode { pmac, tmac };
enum class QuantMode { qt, tr };

// ----------------------------------------------------------------------------
// Control registers (per-array configuration, field widths in comments)
// ----------------------------------------------------------------------------

struct ControlRegisters {
    int hese_encoder_on = 0;  // 1 bit
    int comparator_on = 0;    // 1 bit
    int quant_bitwidth = 8;   // 4 bits, 2..=8
    int data_terms = 8;       // 4 bits, s
    int group_size = 1;       // 3 bits, 1 in QT / 2..=8 in TR
    int group_budget = 8;     // 5 bits, k <= 24

    // Field-width / range checks; std::invalid_argument on violation.
    void validate() const;

    // Derives the operating mode from the register pattern:
    //   QT: encoder off, comparator off, group_size 1, budget == bitwidth,
    //       data_terms == bitwidth
    //   TR: encoder on, comparator on, group_size 2..=8, budget <= 24
    // Any other combination throws std::invalid_argument.
    QuantMode mode() const;
};

ControlRegisters make_qt_registers(int bitwidth);
ControlRegisters make_tr_registers(int bitwidth, int group_size, int budget,
                                   int data_terms);

// Parameters applied when reconfiguring into TR mode.
struct TrParams {
    int group_size = 8;
    int budget = 12;
    int data_terms = 3;
};

struct ReconfigureResult {
    ControlRegisters registers;
    int switch_cycles = 0;  // 0 when the target mode was already active
};

// Rewrites the registers for the target mode, charging `switch_latency`
// cycles per actual mode change (a no-op switch costs zero). The bitwidth is
// carried over; TR parameters come from `tr`. Throws std::invalid_argument
// if the current or resulting register pattern is invalid.
ReconfigureResult reconfigure(const ControlRegisters& current, QuantMode target,
                              int switch_latency = kDefaultSwitchLatencyCycles,
                              const TrParams& tr = {});

// ----------------------------------------------------------------------------
// Work accounting
// ----------------------------------------------------------------------------

// Unit costs for the work model (defaults: a 3-bit add counts 3, an 8-bit add
// 8, a 32-bit accumulate 32, and tMAC bookkeeping is charged like a 3-bit
// add).
struct WorkCosts {
    double add3 = 3.0;
    double add8 = 8.0;
    double acc32 = 32.0;
    double bookkeeping = 3.0;
};

struct WorkReport {
    long long cycles = 0;
    long long add3_count = 0;
    long long add8_count = 0;
    long long acc32_count = 0;
    long long bookkeeping_count = 0;
    long long term_pairs_total = 0;
    double work_units = 0.0;

    void accumulate(const WorkReport& o);          // sums counts and cycles
    void recompute_work(const WorkCosts& costs);   // refreshes work_units
};

// One pMAC group: cycles = g, 7g 8-bit adds, g 32-bit accumulates.
WorkReport simulate_group_pmac(int g, const WorkCosts& costs = {});

// One tMAC group: cycles = s*k when synchronized (the systolic wavefront
// advances at the worst-case bound), otherwise the actual pair count; one
// 3-bit add plus one bookkeeping operation per cycle. pairs_actual > s*k
// throws std::invalid_argument (it means TR was not applied upstream).
WorkReport simulate_group_tmac(long long pairs_actual, int k, int s,
                               bool synchronized, const WorkCosts& costs = {});

// b.work_units / a.work_units; std::invalid_argument when a.work_units == 0.
double work_ratio(const WorkReport& a, const WorkReport& b);

// ----------------------------------------------------------------------------
// Tiled matmul simulation
// ----------------------------------------------------------------------------

struct ArrayConfig {
    int rows = 128;                       // cells
    int cols = 64;                        // cells
    MacMode mode = MacMode::pmac;         // must match registers.mode()
    ControlRegisters registers;           // QT for pmac, TR for tmac
    bool synchronized_groups = true;      // false: straggler (max-pairs) timing
    bool double_buffered_weights = true;  // false: charge rows*cols per tile load
    Encoding tr_encoding = Encoding::hese;  // weight expansion in TR mode
    WorkCosts costs;
};

struct MatmulResult {
    int rows = 0;
    int cols = 0;
    std::vector<long long> values;  // row-major integer product
    WorkReport work;
    std::vector<long long> tile_cycles;  // per processed tile

    long long at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
};

// Simulates W (m x p) times X (p x n) on the configured array.
//
// TR mode first applies receding-water TR to the weights (groups of
// group_size along each row) and truncates every data value to data_terms
// leading terms of its signed-digit expansion; the cell datapath then
// accumulates term pairs through chained coefficient vectors. QT mode runs
// the plain integer values through pMAC cells. The numeric result always
// equals the straightforward integer matmul of the (truncated) operands.
//
// Tiling: each tile covers `rows` output rows and cols*group_span inner
// indices (group_span = group_size in TR mode, 1 in QT); per tile the cycle
// charge is (rows + cols - 1) fill plus n times the group time.
// Throws std::invalid_argument on dimension mismatch or an inconsistent
// mode/register combination.
MatmulResult simulate_matmul(const QuantizedMatrix& W, const QuantizedMatrix& X,
                             const ArrayConfig& cfg);

}  // namespace termrev

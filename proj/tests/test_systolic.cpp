// ============================================================================
// test_systolic.cpp — control registers, work model, tiled matmul simulation
// ============================================================================
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "termrev/systolic.hpp"

using namespace termrev;

namespace {

QuantizedMatrix random_q(int rows, int cols, std::mt19937_64& rng, int bits = 8) {
    QuantizedMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.scheme = {bits, 0};
    m.values.resize(static_cast<size_t>(rows) * cols);
    std::uniform_int_distribution<int> dist(-m.scheme.max_magnitude(),
                                            m.scheme.max_magnitude());
    for (int& v : m.values) v = dist(rng);
    return m;
}

std::vector<long long> integer_matmul(const QuantizedMatrix& a,
                                      const QuantizedMatrix& b) {
    std::vector<long long> out(static_cast<size_t>(a.rows) * b.cols, 0);
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c)
            for (int j = 0; j < b.cols; ++j)
                out[static_cast<size_t>(r) * b.cols + j] +=
                    static_cast<long long>(a.at(r, c)) * b.at(c, j);
    return out;
}

// The numeric contract of TR-mode simulation: receding-water TR on the weight
// rows, leading-term truncation of the data, then a plain integer matmul.
std::vector<long long> reference_tr_matmul(const QuantizedMatrix& W,
                                           const QuantizedMatrix& X, int g, int k,
                                           int s, Encoding enc) {
    const QuantizedMatrix Wk = apply_tr(W, GroupBudget{g, k}, enc);
    std::vector<long long> xt(X.values.size());
    for (size_t i = 0; i < X.values.size(); ++i)
        xt[i] = truncate_data_terms(hese_encode(X.values[i], X.scheme.bitwidth), s)
                    .value();
    std::vector<long long> out(static_cast<size_t>(W.rows) * X.cols, 0);
    for (int r = 0; r < W.rows; ++r)
        for (int c = 0; c < W.cols; ++c)
            for (int j = 0; j < X.cols; ++j)
                out[static_cast<size_t>(r) * X.cols + j] +=
                    static_cast<long long>(Wk.at(r, c)) *
                    xt[static_cast<size_t>(c) * X.cols + j];
    return out;
}

ArrayConfig tmac_config(int rows, int cols, int bits, int g, int k, int s) {
    ArrayConfig cfg;
    cfg.rows = rows;
    cfg.cols = cols;
    cfg.mode = MacMode::tmac;
    cfg.registers = make_tr_registers(bits, g, k, s);
    return cfg;
}

ArrayConfig pmac_config(int rows, int cols, int bits) {
    ArrayConfig cfg;
    cfg.rows = rows;
    cfg.cols = cols;
    cfg.mode = MacMode::pmac;
    cfg.registers = make_qt_registers(bits);
    return cfg;
}

}  // namespace

TEST_CASE("control registers: mode detection and field validation") {
    const ControlRegisters qt = make_qt_registers(8);
    CHECK(qt.mode() == QuantMode::qt);
    CHECK(qt.group_size == 1);
    CHECK(qt.group_budget == 8);
    CHECK(qt.data_terms == 8);

    const ControlRegisters tr = make_tr_registers(8, 8, 12, 3);
    CHECK(tr.mode() == QuantMode::tr);
    CHECK(tr.hese_encoder_on == 1);
    CHECK(tr.comparator_on == 1);

    CHECK_THROWS_AS(make_qt_registers(9), std::invalid_argument);
    CHECK_THROWS_AS(make_tr_registers(8, 9, 12, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_tr_registers(8, 1, 12, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_tr_registers(8, 8, 25, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_tr_registers(8, 8, 12, 0), std::invalid_argument);

    // Half-configured pattern: encoder on, comparator off.
    ControlRegisters broken = tr;
    broken.comparator_on = 0;
    CHECK_THROWS_AS(broken.mode(), std::invalid_argument);
    // QT shape but budget != bitwidth.
    ControlRegisters odd = qt;
    odd.group_budget = 5;
    CHECK_THROWS_AS(odd.mode(), std::invalid_argument);
}

TEST_CASE("reconfigure: mode switches cost latency, no-ops are free") {
    const ControlRegisters tr = make_tr_registers(8, 8, 16, 3);
    const ReconfigureResult to_qt = reconfigure(tr, QuantMode::qt);
    CHECK(to_qt.switch_cycles == kDefaultSwitchLatencyCycles);
    CHECK(to_qt.registers.mode() == QuantMode::qt);
    CHECK(to_qt.registers.quant_bitwidth == 8);  // bitwidth carried over

    const ReconfigureResult still_qt = reconfigure(to_qt.registers, QuantMode::qt);
    CHECK(still_qt.switch_cycles == 0);
    CHECK(still_qt.registers.mode() == QuantMode::qt);

    const ReconfigureResult to_tr =
        reconfigure(make_qt_registers(6), QuantMode::tr, 25, TrParams{4, 6, 2});
    CHECK(to_tr.switch_cycles == 25);
    CHECK(to_tr.registers.quant_bitwidth == 6);
    CHECK(to_tr.registers.group_size == 4);
    CHECK(to_tr.registers.group_budget == 6);
    CHECK(to_tr.registers.data_terms == 2);

    CHECK_THROWS_AS(reconfigure(make_qt_registers(8), QuantMode::tr, 10,
                                TrParams{9, 6, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(reconfigure(make_qt_registers(8), QuantMode::tr, -1),
                    std::invalid_argument);
}

TEST_CASE("reconfigure: random mode walk keeps registers consistent") {
    std::mt19937_64 rng(61);
    ControlRegisters cur = make_qt_registers(8);
    QuantMode mode = QuantMode::qt;
    for (int step = 0; step < 200; ++step) {
        const QuantMode target = rng() % 2 ? QuantMode::tr : QuantMode::qt;
        const TrParams params{2 + static_cast<int>(rng() % 7),
                              1 + static_cast<int>(rng() % 24),
                              1 + static_cast<int>(rng() % 8)};
        const ReconfigureResult r = reconfigure(cur, target, 10, params);
        CHECK(r.registers.mode() == target);
        CHECK(r.registers.quant_bitwidth == 8);
        CHECK(r.switch_cycles == (target == mode ? 0 : 10));
        cur = r.registers;
        mode = target;
    }
}

TEST_CASE("simulate_group_pmac: cycle and op counts") {
    const WorkReport r3 = simulate_group_pmac(3);
    CHECK(r3.cycles == 3);
    CHECK(r3.add8_count == 21);
    CHECK(r3.acc32_count == 3);
    CHECK(r3.work_units == doctest::Approx(264.0));  // 21*8 + 3*32

    CHECK(simulate_group_pmac(8).cycles == 8);
    const WorkReport r1 = simulate_group_pmac(1);
    CHECK(r1.add8_count == 7);
    CHECK(r1.acc32_count == 1);
    CHECK(r1.cycles == 1);
    CHECK_THROWS_AS(simulate_group_pmac(0), std::invalid_argument);
}

TEST_CASE("simulate_group_tmac: synchronized bound vs actual pairs") {
    const WorkReport sync = simulate_group_tmac(8, 6, 2, true);
    CHECK(sync.cycles == 12);  // s*k wavefront time
    CHECK(sync.add3_count == 12);
    CHECK(sync.bookkeeping_count == 12);
    CHECK(sync.term_pairs_total == 8);
    CHECK(sync.work_units == doctest::Approx(72.0));  // 12*3 + 12*3

    const WorkReport async = simulate_group_tmac(8, 6, 2, false);
    CHECK(async.cycles == 8);
    CHECK(async.work_units == doctest::Approx(48.0));
    CHECK(simulate_group_tmac(0, 6, 2, false).cycles == 0);

    CHECK_THROWS_AS(simulate_group_tmac(13, 6, 2, true), std::invalid_argument);
    CHECK_THROWS_AS(simulate_group_tmac(-1, 6, 2, true), std::invalid_argument);
    CHECK_THROWS_AS(simulate_group_tmac(1, 0, 2, true), std::invalid_argument);
    CHECK_THROWS_AS(simulate_group_tmac(1, 6, 0, true), std::invalid_argument);
}

TEST_CASE("work_ratio: pMAC over tMAC for one group") {
    const WorkReport tmac = simulate_group_tmac(8, 6, 2, true);
    const WorkReport pmac = simulate_group_pmac(3);
    CHECK(work_ratio(tmac, pmac) == doctest::Approx(264.0 / 72.0));
    CHECK(work_ratio(pmac, pmac) == doctest::Approx(1.0));
    CHECK_THROWS_AS(work_ratio(WorkReport{}, pmac), std::invalid_argument);

    // Under a flat cost model the two cells do equal work on this group.
    const WorkCosts flat{1.0, 1.0, 1.0, 1.0};
    CHECK(work_ratio(simulate_group_tmac(8, 6, 2, true, flat),
                     simulate_group_pmac(3, flat)) == doctest::Approx(1.0));
}

TEST_CASE("simulate_matmul: a 1xg by gx1 product on a single pMAC cell") {
    // One weight row of five values against one data column on a 1x1 array:
    // five tiles of one inner element each, every tile charging 1 fill cycle
    // and 1 streaming cycle; the work is exactly one 5-element pMAC group.
    std::mt19937_64 rng(71);
    const QuantizedMatrix W = random_q(1, 5, rng);
    const QuantizedMatrix X = random_q(5, 1, rng);
    const MatmulResult r = simulate_matmul(W, X, pmac_config(1, 1, 8));

    CHECK(r.values == integer_matmul(W, X));
    REQUIRE(r.tile_cycles.size() == 5);
    for (long long t : r.tile_cycles) CHECK(t == 2);
    CHECK(r.work.cycles == 10);
    CHECK(r.work.add8_count == 7 * 5);
    CHECK(r.work.acc32_count == 5);
    CHECK(r.work.work_units == doctest::Approx(5 * (7 * 8.0 + 32.0)));
}

TEST_CASE("simulate_matmul: identity weights pass the data through") {
    std::mt19937_64 rng(73);
    QuantizedMatrix W = random_q(8, 8, rng);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) W.at(r, c) = r == c ? 1 : 0;
    const QuantizedMatrix X = random_q(8, 16, rng);

    const MatmulResult r = simulate_matmul(W, X, pmac_config(128, 64, 8));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 16; ++j) CHECK(r.at(i, j) == X.at(i, j));
    REQUIRE(r.tile_cycles.size() == 1);
    CHECK(r.tile_cycles[0] == (128 + 64 - 1) + 16);  // fill + one MAC per column
    CHECK(r.work.cycles == 207);
}

TEST_CASE("simulate_matmul: pMAC equals the plain integer matmul") {
    std::mt19937_64 rng(79);
    const QuantizedMatrix W = random_q(64, 64, rng);
    const QuantizedMatrix X = random_q(64, 64, rng);
    const MatmulResult r = simulate_matmul(W, X, pmac_config(16, 8, 8));
    CHECK(r.values == integer_matmul(W, X));
    // 4 row tiles x 8 inner tiles, each (16+8-1) fill + 64 streaming cycles.
    REQUIRE(r.tile_cycles.size() == 32);
    CHECK(r.work.cycles == 32 * (23 + 64));
}

TEST_CASE("simulate_matmul: tMAC result matches TR-then-truncate reference") {
    std::mt19937_64 rng(83);
    const QuantizedMatrix W = random_q(64, 64, rng);
    const QuantizedMatrix X = random_q(64, 64, rng);
    const ArrayConfig cfg = tmac_config(16, 8, 8, 8, 12, 3);

    const MatmulResult r = simulate_matmul(W, X, cfg);
    CHECK(r.values == reference_tr_matmul(W, X, 8, 12, 3, Encoding::hese));

    // Synchronized timing is deterministic: one inner tile spans the full
    // inner dimension (8 cells x group 8), each column streams for s*k.
    REQUIRE(r.tile_cycles.size() == 4);
    CHECK(r.work.cycles == 4 * ((16 + 8 - 1) + 64LL * 3 * 12));
    CHECK(r.work.term_pairs_total > 0);
    CHECK(r.work.term_pairs_total <= r.work.add3_count);  // pairs <= s*k slots

    // The binary weight encoding must satisfy the same numeric contract.
    ArrayConfig bin = cfg;
    bin.tr_encoding = Encoding::binary;
    CHECK(simulate_matmul(W, X, bin).values ==
          reference_tr_matmul(W, X, 8, 12, 3, Encoding::binary));
}

TEST_CASE("simulate_matmul: ragged shapes in both modes") {
    std::mt19937_64 rng(89);
    const QuantizedMatrix W = random_q(5, 7, rng);
    const QuantizedMatrix X = random_q(7, 3, rng);

    const MatmulResult p = simulate_matmul(W, X, pmac_config(2, 2, 8));
    CHECK(p.values == integer_matmul(W, X));

    const MatmulResult t = simulate_matmul(W, X, tmac_config(2, 2, 8, 2, 3, 2));
    CHECK(t.values == reference_tr_matmul(W, X, 2, 3, 2, Encoding::hese));
}

TEST_CASE("simulate_matmul: timing knobs move cycles the right way") {
    std::mt19937_64 rng(97);
    const QuantizedMatrix W = random_q(32, 32, rng);
    const QuantizedMatrix X = random_q(32, 16, rng);

    const MatmulResult wide = simulate_matmul(W, X, tmac_config(8, 4, 8, 4, 12, 3));
    const MatmulResult tight = simulate_matmul(W, X, tmac_config(8, 4, 8, 4, 8, 3));
    const MatmulResult shallow = simulate_matmul(W, X, tmac_config(8, 4, 8, 4, 12, 2));
    CHECK(tight.work.cycles <= wide.work.cycles);
    CHECK(shallow.work.cycles <= wide.work.cycles);

    ArrayConfig straggler = tmac_config(8, 4, 8, 4, 12, 3);
    straggler.synchronized_groups = false;
    const MatmulResult async = simulate_matmul(W, X, straggler);
    CHECK(async.values == wide.values);  // timing never changes the numbers
    CHECK(async.work.cycles <= wide.work.cycles);

    ArrayConfig reload = tmac_config(8, 4, 8, 4, 12, 3);
    reload.double_buffered_weights = false;
    const MatmulResult loaded = simulate_matmul(W, X, reload);
    REQUIRE(loaded.tile_cycles.size() == wide.tile_cycles.size());
    for (size_t i = 0; i < loaded.tile_cycles.size(); ++i)
        CHECK(loaded.tile_cycles[i] == wide.tile_cycles[i] + 8 * 4);
}

TEST_CASE("simulate_matmul: determinism and input validation") {
    std::mt19937_64 rng(101);
    const QuantizedMatrix W = random_q(12, 10, rng);
    const QuantizedMatrix X = random_q(10, 6, rng);
    const ArrayConfig cfg = tmac_config(4, 4, 8, 2, 4, 3);

    const MatmulResult a = simulate_matmul(W, X, cfg);
    const MatmulResult b = simulate_matmul(W, X, cfg);
    CHECK(a.values == b.values);
    CHECK(a.tile_cycles == b.tile_cycles);
    CHECK(a.work.cycles == b.work.cycles);
    CHECK(a.work.work_units == b.work.work_units);
    CHECK(a.work.term_pairs_total == b.work.term_pairs_total);

    const QuantizedMatrix bad = random_q(9, 6, rng);
    CHECK_THROWS_AS(simulate_matmul(W, bad, cfg), std::invalid_argument);

    ArrayConfig mismatched = cfg;
    mismatched.mode = MacMode::pmac;  // pMAC cells but TR registers
    CHECK_THROWS_AS(simulate_matmul(W, X, mismatched), std::invalid_argument);
    ArrayConfig qt_tmac = pmac_config(4, 4, 8);
    qt_tmac.mode = MacMode::tmac;  // tMAC cells but QT registers
    CHECK_THROWS_AS(simulate_matmul(W, X, qt_tmac), std::invalid_argument);

    ArrayConfig flat = cfg;
    flat.rows = 0;
    CHECK_THROWS_AS(simulate_matmul(W, X, flat), std::invalid_argument);
}

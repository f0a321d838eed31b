// ============================================================================
// term_dot.hpp — term-pair dot products and the coefficient accumulator
//
// A term MAC multiplies one weight term by one data term per step: the
// product of (s_w 2^a) and (s_x 2^b) is just s_w*s_x at exponent a+b, so a
// dot product reduces to counting signed hits per product exponent. The
// CoefficientVector holds those counters (exponents 0..14, covering
// 2^7 * 2^7 = 2^14 for 8-bit operands) and converts back to an integer at
// the end. Also models the streaming MSB-first group comparator that
// truncates digit streams once a group's term budget is spent.
// ============================================================================
#pragma once

#include <array>
#include <utility>
#include <vector>

#include "termrev/term_revealing.hpp"

namespace termrev {

// ----------------------------------------------------------------------------
// Domain types
// ----------------------------------------------------------------------------

struct TermPair {
    SignedTerm weight_term;
    SignedTerm data_term;

    int product_exponent() const { return weight_term.exponent + data_term.exponent; }
    int product_sign() const { return weight_term.sign * data_term.sign; }
};

// 15 signed counters indexed by product exponent, each confined to a 12-bit
// range [-2048, 2047]. When an increment would leave the range, the overflow
// folds upward (two units at exponent e become one unit at e+1), which
// preserves the represented value exactly; only exponent 14 has nowhere to
// fold and raises std::overflow_error.
class CoefficientVector {
public:
    static constexpr int kLength = 15;
    static constexpr int kCounterMax = 2047;
    static constexpr int kCounterMin = -2048;

    int at(int exponent) const;
    // Adds sign (+1/-1) at `exponent`, folding carries as needed.
    void add(int exponent, int sign);
    // Σ coefficients[i] * 2^i, exact.
    long long to_integer() const;

    bool operator==(const CoefficientVector& o) const = default;

private:
    std::array<int, kLength> c_{};  // all-zero initial state
};

struct DotResult {
    long long value = 0;
    long long term_pairs_processed = 0;
    long long cycles = 0;  // behavioral model: one pair per cycle
};

// ----------------------------------------------------------------------------
// Operations
// ----------------------------------------------------------------------------

// coefficients[product_exponent] += product_sign; other entries untouched.
CoefficientVector accumulate_pair(CoefficientVector cv, const TermPair& p);

long long coefficient_to_integer(const CoefficientVector& cv);

// Accumulates every per-value cross pair (terms of w_i x terms of x_i) into
// `initial` and returns the final vector plus the result converted to an
// integer. Pair order is weight-term-major per value (the data exponents are
// replayed once per weight exponent); the order never affects the outcome.
// Throws std::invalid_argument on group length mismatch; overflow propagates.
std::pair<CoefficientVector, DotResult> dot_product_terms(
    const TermGroup& w_group, const std::vector<TermExpansion>& x_group,
    CoefficientVector initial = {});

// Σ_i (terms of w_i) * (terms of x_i), no arithmetic performed.
long long count_term_pairs(const TermGroup& w_group,
                           const std::vector<TermExpansion>& x_group);

// max(0, v) — the stream converter's sign gate.
long long relu(long long v);

// Streaming group comparator: consumes parallel digit streams MSB-first
// (highest position = first time step), streams within a time step in list
// order, counting nonzero digits per group of g consecutive streams; once a
// group has seen k nonzero digits every later nonzero digit in that group is
// zeroed. Equivalent to receding_water_select on the decoded expansions.
// Requires streams.size() % g == 0, equal stream lengths, g in 1..=8, k >= 1.
std::vector<DigitStream> streaming_term_select(const std::vector<DigitStream>& streams,
                                               int g, int k);

}  // namespace termrev

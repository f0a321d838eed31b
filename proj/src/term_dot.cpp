// ============================================================================
// term_dot.cpp — coefficient-vector accumulation and streaming selection
// ============================================================================
#include "termrev/term_dot.hpp"

#include <stdexcept>
#include <string>

namespace termrev {

// ----------------------------------------------------------------------------
// CoefficientVector
// ----------------------------------------------------------------------------

int CoefficientVector::at(int exponent) const {
    if (exponent < 0 || exponent >= kLength)
        throw std::invalid_argument("coefficient exponent must be in 0..=14, got " +
                                    std::to_string(exponent));
    return c_[exponent];
}

void CoefficientVector::add(int exponent, int sign) {
    if (exponent < 0 || exponent >= kLength)
        throw std::invalid_argument("term-pair exponent must be in 0..=14, got " +
                                    std::to_string(exponent));
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("term-pair sign must be +1 or -1");
    int e = exponent;
    int x = c_[e] + sign;
    // Counter overflow folds upward: two units at exponent e equal one unit
    // at e+1, so the represented value is unchanged. Exponent 14 has no
    // higher neighbor and must hard-fail.
    while (x > kCounterMax || x < kCounterMin) {
        if (e == kLength - 1)
            throw std::overflow_error(
                "coefficient counter overflow at exponent 14");
        const int dir = x > kCounterMax ? 1 : -1;
        c_[e] = x - 2 * dir;
        ++e;
        x = c_[e] + dir;
    }
    c_[e] = x;
}

long long CoefficientVector::to_integer() const {
    long long v = 0;
    for (int e = 0; e < kLength; ++e) v += static_cast<long long>(c_[e]) << e;
    return v;
}

CoefficientVector accumulate_pair(CoefficientVector cv, const TermPair& p) {
    cv.add(p.product_exponent(), p.product_sign());
    return cv;
}

long long coefficient_to_integer(const CoefficientVector& cv) {
    return cv.to_integer();
}

// ----------------------------------------------------------------------------
// Dot products over term expansions
// ----------------------------------------------------------------------------

std::pair<CoefficientVector, DotResult> dot_product_terms(
    const TermGroup& w_group, const std::vector<TermExpansion>& x_group,
    CoefficientVector initial) {
    if (w_group.size() != static_cast<int>(x_group.size()))
        throw std::invalid_argument("weight group has " +
                                    std::to_string(w_group.size()) +
                                    " values but data group has " +
                                    std::to_string(x_group.size()));
    CoefficientVector cv = initial;
    long long pairs = 0;
    for (int i = 0; i < w_group.size(); ++i) {
        // Weight-term-major: the duplicator replays the data exponents once
        // per weight exponent. Order is semantically irrelevant.
        for (const auto& wt : w_group.expansions[i].terms) {
            for (const auto& xt : x_group[i].terms) {
                cv.add(wt.exponent + xt.exponent, wt.sign * xt.sign);
                ++pairs;
            }
        }
    }
    DotResult res;
    res.value = cv.to_integer();
    res.term_pairs_processed = pairs;
    res.cycles = pairs;  // one pair per cycle in the behavioral model
    return {cv, res};
}

long long count_term_pairs(const TermGroup& w_group,
                           const std::vector<TermExpansion>& x_group) {
    if (w_group.size() != static_cast<int>(x_group.size()))
        throw std::invalid_argument("weight group has " +
                                    std::to_string(w_group.size()) +
                                    " values but data group has " +
                                    std::to_string(x_group.size()));
    long long pairs = 0;
    for (int i = 0; i < w_group.size(); ++i)
        pairs += static_cast<long long>(w_group.expansions[i].term_count()) *
                 x_group[i].term_count();
    return pairs;
}

long long relu(long long v) { return v > 0 ? v : 0; }

// ----------------------------------------------------------------------------
// Streaming group comparator
// ----------------------------------------------------------------------------

std::vector<DigitStream> streaming_term_select(const std::vector<DigitStream>& streams,
                                               int g, int k) {
    if (g < 1 || g > kMaxRegisterGroupSize)
        throw std::invalid_argument("group size must be in 1..=8, got " +
                                    std::to_string(g));
    if (k < 1)
        throw std::invalid_argument("budget must be >= 1, got " + std::to_string(k));
    if (streams.size() % g != 0)
        throw std::invalid_argument("stream count " + std::to_string(streams.size()) +
                                    " is not a multiple of group size " +
                                    std::to_string(g));
    int length = -1;
    for (const auto& s : streams) {
        s.validate();
        if (length == -1) length = s.length();
        if (s.length() != length)
            throw std::invalid_argument("streams must share a common length");
    }

    std::vector<DigitStream> out = streams;
    for (size_t base = 0; base + g <= out.size(); base += g) {
        int seen = 0;
        // Time runs MSB-first: the highest stream position arrives first.
        for (int pos = length - 1; pos >= 0; --pos) {
            for (int j = 0; j < g; ++j) {
                auto& s = out[base + j];
                if (!s.magnitude_bits[pos]) continue;
                if (seen < k) {
                    ++seen;
                } else {
                    // Budget spent: every later nonzero digit is dropped.
                    s.magnitude_bits[pos] = 0;
                    s.sign_bits[pos] = 0;
                }
            }
        }
    }
    return out;
}

}  // namespace termrev

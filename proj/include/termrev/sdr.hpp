// ============================================================================
// sdr.hpp — signed digit representations of fixed-point values
//
// A "term" is a nonzero power-of-two component of an integer: 5 = 2^2 + 2^0
// has two terms. A signed digit representation (SDR) allows digits {-1,0,+1},
// so negative terms are permitted (27 = 2^5 - 2^2 - 2^0, three terms instead
// of binary's four). Three encoders are provided:
//
//   binary  — the plain set bits of |v|                     (<= n terms)
//   booth   — radix-4 Booth recoding                        (<= n/2+1 terms)
//   hese    — one-pass run-rewriting encoder producing an SDR with the
//             minimum possible number of terms              (<= booth, binary)
//
// The minimality claim is checked against minimal_sdr_term_count, an
// independent search over all SDRs.
// ============================================================================
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "termrev/quant.hpp"

namespace termrev {

// ----------------------------------------------------------------------------
// Domain types
// ----------------------------------------------------------------------------

struct SignedTerm {
    int exponent = 0;  // >= 0; operand terms stay <= 7, product terms <= 14
    int sign = 1;      // +1 or -1

    long long value() const { return sign * (1LL << exponent); }
    bool operator==(const SignedTerm& o) const = default;
};

// A value as a list of signed power-of-two terms, strictly decreasing
// exponents, no exponent repeated. Sum of term values reconstructs the source.
struct TermExpansion {
    std::vector<SignedTerm> terms;

    long long value() const;
    int term_count() const { return static_cast<int>(terms.size()); }
    bool operator==(const TermExpansion& o) const = default;
};

// Bit-serial form of an SDR: parallel magnitude/sign bit streams, stored
// LSB-first (position i holds the digit for 2^i). A sign bit may be set only
// where the magnitude bit is set.
struct DigitStream {
    std::vector<int> magnitude_bits;
    std::vector<int> sign_bits;

    int length() const { return static_cast<int>(magnitude_bits.size()); }
    // Digit at position i: 0, +1 or -1.
    int digit(int i) const { return magnitude_bits[i] ? (sign_bits[i] ? -1 : 1) : 0; }

    // MSB-first rendering ("00100001"). width == 0 prints all positions;
    // otherwise exactly `width` characters are printed and any digit at or
    // above `width` must be zero (std::invalid_argument otherwise).
    std::string magnitude_string(int width = 0) const;
    std::string sign_string(int width = 0) const;

    void validate() const;  // stream lengths equal, sign implies magnitude
};

enum class Encoding { binary, booth, hese };

Encoding parse_encoding(const std::string& name);  // "binary"|"booth"|"hese"
const char* encoding_name(Encoding e);

// ----------------------------------------------------------------------------
// Encoders
// ----------------------------------------------------------------------------

// Set bits of |v|, each term carrying sign(v). Requires |v| <= 255.
TermExpansion binary_expand(int v);

// Radix-4 Booth recoding of an n-bit magnitude; digit d_i in {-2..2} covers
// bit pair (2i, 2i+1), contributing a term at exponent 2i (|d|=1) or 2i+1
// (|d|=2). Guarantees term_count <= n/2 + 1. Requires |v| < 2^n, n in 1..=16.
TermExpansion booth_radix4_encode(long long v, int n);

// One-pass binary->SDR encoder: scans the magnitude LSB-to-MSB with a carry
// and one bit of lookahead, rewriting runs of 1s (0111..1 -> 1000..-1) and
// absorbing isolated 0s inside runs. Emits one digit per consumed input bit
// plus a final carry digit at position n. The result always has exactly
// minimal_sdr_term_count(v) terms. Requires |v| < 2^n, n in 1..=15.
TermExpansion hese_encode(long long v, int n);

// Same scan as hese_encode, but each input bit is pulled from `bit_at(i)`
// (i = 0..n-1, each index read exactly once). Returns raw digits LSB-first,
// length n+1. Used to demonstrate the single-pass contract.
std::vector<int> hese_digits_from_bits(int n, const std::function<int(int)>& bit_at);

// Bit-serial serialization of hese_encode: n+1 positions, LSB-first.
DigitStream hese_streams(long long v, int n);

// Sum of digits: Σ ±2^i over set magnitude positions.
long long decode_digit_stream(const DigitStream& s);

// Dispatch on encoding; n is the bit-width passed to booth/hese (binary
// ignores it).
TermExpansion expand(long long v, int n, Encoding e);

// ----------------------------------------------------------------------------
// Minimality oracle & statistics
// ----------------------------------------------------------------------------

// Minimum number of nonzero digits over all SDRs of v (digits {-1,0,+1},
// exponents 0..=15). Requires |v| <= 2^15.
int minimal_sdr_term_count(long long v);

// Fraction of matrix elements per term count under the given encoding
// (bit-width taken from the matrix scheme). Sums to 1.
std::map<int, double> term_count_histogram(const QuantizedMatrix& m, Encoding e);

}  // namespace termrev

// ============================================================================
// sdr.cpp — binary / Booth radix-4 / minimal signed-digit encoders
// ============================================================================
#include "termrev/sdr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace termrev {

long long TermExpansion::value() const {
    long long v = 0;
    for (const auto& t : terms) v += t.value();
    return v;
}

// ----------------------------------------------------------------------------
// DigitStream
// ----------------------------------------------------------------------------

void DigitStream::validate() const {
    if (magnitude_bits.size() != sign_bits.size())
        throw std::invalid_argument("digit stream magnitude/sign lengths differ");
    for (size_t i = 0; i < magnitude_bits.size(); ++i)
        if (sign_bits[i] && !magnitude_bits[i])
            throw std::invalid_argument("sign bit without magnitude bit at position " +
                                        std::to_string(i));
}

namespace {

std::string render_stream(const std::vector<int>& bits, int width) {
    const int n = static_cast<int>(bits.size());
    if (width == 0) width = n;
    // All positions at or above the printed width must be empty.
    for (int i = width; i < n; ++i)
        if (bits[i])
            throw std::invalid_argument("digit at position " + std::to_string(i) +
                                        " does not fit width " + std::to_string(width));
    std::string s(width, '0');
    for (int i = 0; i < width && i < n; ++i)
        if (bits[i]) s[width - 1 - i] = '1';
    return s;
}

}  // namespace

std::string DigitStream::magnitude_string(int width) const {
    return render_stream(magnitude_bits, width);
}

std::string DigitStream::sign_string(int width) const {
    return render_stream(sign_bits, width);
}

// ----------------------------------------------------------------------------
// Encoding names
// ----------------------------------------------------------------------------

Encoding parse_encoding(const std::string& name) {
    if (name == "binary") return Encoding::binary;
    if (name == "booth") return Encoding::booth;
    if (name == "hese") return Encoding::hese;
    throw std::invalid_argument("unknown encoding '" + name +
                                "' (expected binary|booth|hese)");
}

const char* encoding_name(Encoding e) {
    switch (e) {
        case Encoding::binary: return "binary";
        case Encoding::booth: return "booth";
        case Encoding::hese: return "hese";
    }
    return "?";
}

// ----------------------------------------------------------------------------
// Encoders
// ----------------------------------------------------------------------------

TermExpansion binary_expand(int v) {
    if (v > 255 || v < -255)
        throw std::invalid_argument("binary_expand expects |v| <= 255, got " +
                                    std::to_string(v));
    const int sign = v < 0 ? -1 : 1;
    const unsigned mag = static_cast<unsigned>(v < 0 ? -v : v);
    TermExpansion out;
    for (int e = 8; e >= 0; --e)
        if (mag & (1u << e)) out.terms.push_back({e, sign});
    return out;
}

TermExpansion booth_radix4_encode(long long v, int n) {
    if (n < 1 || n > 16)
        throw std::invalid_argument("booth bit-width must be in 1..=16, got " +
                                    std::to_string(n));
    const long long mag = v < 0 ? -v : v;
    if (mag >= (1LL << n))
        throw std::invalid_argument("value " + std::to_string(v) +
                                    " does not fit in " + std::to_string(n) + " bits");
    const int sign = v < 0 ? -1 : 1;
    auto bit = [&](int i) -> long long { return i < 0 ? 0 : (mag >> i) & 1; };

    TermExpansion out;
    // Digit d_i = b(2i-1) + b(2i) - 2 b(2i+1) recodes bit pair (2i, 2i+1)
    // against the previous pair's top bit; 2i runs one position past n to
    // absorb the carry out of the MSB.
    for (int i = 0; 2 * i <= n; ++i) {
        const long long d = bit(2 * i - 1) + bit(2 * i) - 2 * bit(2 * i + 1);
        if (d == 0) continue;
        const int exponent = (d == 2 || d == -2) ? 2 * i + 1 : 2 * i;
        const int term_sign = d > 0 ? sign : -sign;
        out.terms.push_back({exponent, term_sign});
    }
    std::reverse(out.terms.begin(), out.terms.end());
    return out;
}

std::vector<int> hese_digits_from_bits(int n, const std::function<int(int)>& bit_at) {
    if (n < 1 || n > 15)
        throw std::invalid_argument("hese bit-width must be in 1..=15, got " +
                                    std::to_string(n));
    std::vector<int> digits(static_cast<size_t>(n) + 1, 0);
    // One pass, LSB to MSB: `cur` is the bit being consumed, `nxt` the single
    // bit of lookahead (each input bit is read exactly once and buffered).
    int cur = bit_at(0) ? 1 : 0;
    int carry = 0;
    for (int i = 0; i < n; ++i) {
        const int nxt = (i + 1 < n) ? (bit_at(i + 1) ? 1 : 0) : 0;
        const int s = cur + carry;
        if (s == 0) {
            digits[i] = 0;
            carry = 0;
        } else if (s == 2) {
            // 1+carry: inside a run; the run's closing +1 is still pending.
            digits[i] = 0;
            carry = 1;
        } else if (nxt == 1) {
            // A 1 that starts (or continues into) a run: open it as -1 and
            // let the carry ripple to the run's end.
            digits[i] = -1;
            carry = 1;
        } else {
            // Isolated 1: emit as-is.
            digits[i] = 1;
            carry = 0;
        }
        cur = nxt;
    }
    digits[n] = carry;
    return digits;
}

TermExpansion hese_encode(long long v, int n) {
    const long long mag = v < 0 ? -v : v;
    if (n < 1 || n > 15 || mag >= (1LL << n))
        throw std::invalid_argument("hese_encode: value " + std::to_string(v) +
                                    " does not fit in " + std::to_string(n) + " bits");
    const int sign = v < 0 ? -1 : 1;
    const auto digits =
        hese_digits_from_bits(n, [&](int i) { return static_cast<int>((mag >> i) & 1); });
    TermExpansion out;
    for (int e = n; e >= 0; --e)
        if (digits[e]) out.terms.push_back({e, digits[e] * sign});
    return out;
}

DigitStream hese_streams(long long v, int n) {
    const long long mag = v < 0 ? -v : v;
    if (n < 1 || n > 15 || mag >= (1LL << n))
        throw std::invalid_argument("hese_streams: value " + std::to_string(v) +
                                    " does not fit in " + std::to_string(n) + " bits");
    const int sign = v < 0 ? -1 : 1;
    const auto digits =
        hese_digits_from_bits(n, [&](int i) { return static_cast<int>((mag >> i) & 1); });
    DigitStream s;
    s.magnitude_bits.resize(digits.size());
    s.sign_bits.resize(digits.size());
    for (size_t i = 0; i < digits.size(); ++i) {
        s.magnitude_bits[i] = digits[i] != 0;
        s.sign_bits[i] = digits[i] * sign < 0;
    }
    return s;
}

long long decode_digit_stream(const DigitStream& s) {
    s.validate();
    long long v = 0;
    for (int i = 0; i < s.length(); ++i)
        if (s.magnitude_bits[i]) v += (s.sign_bits[i] ? -1LL : 1LL) << i;
    return v;
}

TermExpansion expand(long long v, int n, Encoding e) {
    switch (e) {
        case Encoding::binary: return binary_expand(static_cast<int>(v));
        case Encoding::booth: return booth_radix4_encode(v, n);
        case Encoding::hese: return hese_encode(v, n);
    }
    throw std::invalid_argument("unknown encoding");
}

// ----------------------------------------------------------------------------
// Minimality oracle
// ----------------------------------------------------------------------------

namespace {

// Minimum nonzero-digit count over all SDRs of v. Classic recurrence: an even
// value must place nothing at 2^0 in some optimal SDR, an odd value places
// either +1 (continue with (v-1)/2) or -1 (continue with (v+1)/2).
int min_terms_rec(long long v, std::unordered_map<long long, int>& memo) {
    if (v == 0) return 0;
    if (v == 1) return 1;
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    int r;
    if ((v & 1) == 0) {
        r = min_terms_rec(v >> 1, memo);
    } else {
        r = 1 + std::min(min_terms_rec((v - 1) >> 1, memo),
                         min_terms_rec((v + 1) >> 1, memo));
    }
    memo.emplace(v, r);
    return r;
}

}  // namespace

int minimal_sdr_term_count(long long v) {
    long long mag = v < 0 ? -v : v;
    if (mag > (1LL << 15))
        throw std::invalid_argument("minimal_sdr_term_count expects |v| <= 2^15");
    std::unordered_map<long long, int> memo;
    return min_terms_rec(mag, memo);
}

std::map<int, double> term_count_histogram(const QuantizedMatrix& m, Encoding e) {
    std::map<int, double> hist;
    const int n = m.scheme.bitwidth;
    for (int v : m.values) hist[expand(v, n, e).term_count()] += 1.0;
    const double total = static_cast<double>(m.values.size());
    for (auto& [count, freq] : hist) freq /= total;
    return hist;
}

}  // namespace termrev

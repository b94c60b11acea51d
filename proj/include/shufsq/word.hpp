#pragma once
// Bit-packed binary words of length <= 63.
//
// Letters are stored LSB-first: bit i of `bits` is the (i+1)-th letter.
// The hash key appends a sentinel 1 above the top letter, so words of
// different lengths never collide: key(w) = bits | (1 << len).

#include <cstdint>
#include <string>
#include <vector>
#include <stdexcept>

namespace shufsq {

struct Word {
    uint64_t bits = 0;
    uint32_t len = 0;

    static constexpr uint32_t max_len = 63;

    Word() = default;
    Word(uint64_t b, uint32_t l) : bits(b), len(l) {}

    bool empty() const { return len == 0; }

    // first letter
    int head() const { return int(bits & 1u); }
    // last letter
    int last() const { return int((bits >> (len - 1)) & 1u); }
    int at(uint32_t i) const { return int((bits >> i) & 1u); }

    Word tail() const { return Word(bits >> 1, len - 1); }
    Word drop_last() const { return Word(bits & ~(uint64_t(1) << (len - 1)), len - 1); }
    Word append(int c) const { return Word(bits | (uint64_t(c & 1) << len), len + 1); }
    Word prepend(int c) const { return Word((bits << 1) | uint64_t(c & 1), len + 1); }

    uint64_t key() const { return bits | (uint64_t(1) << len); }
    static Word from_key(uint64_t k) {
        uint32_t l = 63u - uint32_t(__builtin_clzll(k));
        return Word(k & ~(uint64_t(1) << l), l);
    }

    Word reversed() const {
        uint64_t r = 0;
        for (uint32_t i = 0; i < len; ++i) r |= uint64_t(at(i)) << (len - 1 - i);
        return Word(r, len);
    }
    Word complemented() const {
        return Word(~bits & ((uint64_t(1) << len) - 1), len);
    }

    int popcount() const { return __builtin_popcountll(bits); }

    bool operator==(const Word& o) const { return bits == o.bits && len == o.len; }
    bool operator!=(const Word& o) const { return !(*this == o); }

    std::string str() const {
        std::string s(len, '0');
        for (uint32_t i = 0; i < len; ++i) s[i] = char('0' + at(i));
        return s;
    }
};

// Parses a word over {0,1}; throws std::invalid_argument on anything else.
Word parse_word(const std::string& s);

// Unpacked bit strings for lengths beyond 63 (shuffle experiments use n up to ~10^5).
using Bits = std::vector<uint8_t>;

Bits parse_bits(const std::string& s);
std::string bits_str(const Bits& b);

} // namespace shufsq

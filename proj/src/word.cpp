#include "shufsq/word.hpp"

namespace shufsq {

Word parse_word(const std::string& s) {
    if (s.size() > Word::max_len)
        throw std::invalid_argument("word longer than " + std::to_string(Word::max_len));
    Word w;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw std::invalid_argument("invalid symbol at position " + std::to_string(i + 1));
        w = w.append(s[i] - '0');
    }
    return w;
}

Bits parse_bits(const std::string& s) {
    Bits b;
    b.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw std::invalid_argument("invalid symbol at position " + std::to_string(i + 1));
        b.push_back(uint8_t(s[i] - '0'));
    }
    return b;
}

std::string bits_str(const Bits& b) {
    std::string s(b.size(), '0');
    for (size_t i = 0; i < b.size(); ++i) s[i] = char('0' + b[i]);
    return s;
}

} // namespace shufsq

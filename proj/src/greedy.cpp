#include "shufsq/greedy.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace shufsq {

Word TwoRun::word() const {
    if (empty()) return Word();
    long n = a + b;
    if (n > Word::max_len) throw std::length_error("TwoRun::word: state too long");
    Word w;
    w.len = static_cast<uint32_t>(n);
    // first a letters equal lead, the remaining b equal 1-lead
    uint64_t front = (uint64_t(1) << a) - 1;
    uint64_t back = ((uint64_t(1) << n) - 1) ^ front;
    w.bits = lead ? front : back;
    return w;
}

TwoRun TwoRun::of(const Word& w) {
    TwoRun s;
    if (w.len == 0) return s;
    s.lead = w.at(0);
    uint32_t i = 0;
    while (i < w.len && w.at(i) == s.lead) ++i;
    s.a = i;
    while (i < w.len && w.at(i) == 1 - s.lead) ++i;
    s.b = i - s.a;
    if (i != w.len) throw std::invalid_argument("TwoRun::of: more than two runs");
    return s;
}

std::string TwoRun::str() const {
    if (empty()) return "eps";
    std::string out = std::to_string(lead) + "^" + std::to_string(a);
    if (b > 0) out += " " + std::to_string(1 - lead) + "^" + std::to_string(b);
    return out;
}

TwoRun greedy_step(TwoRun s, int c) {
    if (s.empty()) return {c, 1, 0};
    if (s.lead == c) {
        // match: drop the head letter
        if (--s.a == 0) {
            if (s.b == 0) return {};
            s.lead = 1 - s.lead;
            s.a = s.b;
            s.b = 0;
        }
        return s;
    }
    // append c = 1-lead, which extends (or starts) the second run
    ++s.b;
    return s;
}

Word greedy_step(const Word& w, int c) {
    if (w.len > 0 && w.head() == c) return w.tail();
    assert(w.len < Word::max_len);
    return w.append(c);
}

std::vector<Word> greedy_trace(const Word& s, const Word& init) {
    std::vector<Word> out;
    out.reserve(s.len + 1);
    Word w = init;
    out.push_back(w);
    for (uint32_t t = 0; t < s.len; ++t) {
        w = greedy_step(w, s.at(t));
        out.push_back(w);
    }
    return out;
}

TwoRun greedy_run(const Bits& s) {
    TwoRun st;
    for (uint8_t c : s) st = greedy_step(st, c);
    return st;
}

} // namespace shufsq

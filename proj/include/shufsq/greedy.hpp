#pragma once
// Greedy thread: always match the buffer head when it equals the next input
// letter, otherwise append.  Started from the empty buffer the state never
// has more than two letter runs, so it is tracked in O(1) per step.

#include "word.hpp"

#include <vector>

namespace shufsq {

// lead^a (1-lead)^b with a >= 1, b >= 0; a == 0 means the empty buffer.
struct TwoRun {
    int lead = 0;
    long a = 0, b = 0;

    bool empty() const { return a == 0; }
    long length() const { return a + b; }
    int head() const { return lead; }

    bool operator==(const TwoRun& o) const {
        if (empty() && o.empty()) return true;
        return lead == o.lead && a == o.a && b == o.b;
    }

    Word word() const; // length must fit a Word
    static TwoRun of(const Word& w); // w must have <= 2 runs
    std::string str() const;
};

TwoRun greedy_step(TwoRun s, int c);

// One greedy step on a general buffer word.
Word greedy_step(const Word& w, int c);

// Buffer after each prefix of s, starting from init: |s|+1 entries.
std::vector<Word> greedy_trace(const Word& s, const Word& init = Word());

// Final greedy state over a long input.
TwoRun greedy_run(const Bits& s);

} // namespace shufsq

#pragma once
// Exact buffer-set dynamics for shuffle-square recognition.
//
// A word s of even length is a shuffle square when it splits into two
// disjoint identical subsequences.  Scanning s left to right and keeping, for
// every prefix, the set of possible "buffers" (the suffix by which the longer
// of the two growing copies leads the shorter) gives the recognition:
//   B_0 = {eps};  B_t = {w.s(t) : w in B_{t-1}} u {tail(w) : w in B_{t-1}, w(1) = s(t)}
// and s is a shuffle square iff eps is in B_{|s|}.
//
// Every buffer in B_t has length == t (mod 2), and |B_t| never decreases.
// For recognition one may drop any buffer longer than the remaining input.

#include "word.hpp"
#include "dyadic.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace shufsq {

using BufferSet = std::unordered_set<uint64_t>; // Word::key() values

// One transition B -> B' on reading letter c.  Buffers that would exceed
// max_len are not appended (pass Word::max_len for the untruncated set).
BufferSet buffer_step(const BufferSet& prev, int c, uint32_t max_len = Word::max_len);

enum class Move : uint8_t { Append = 0, Match = 1 };

// All levels B_0..B_|s| with the first-reaching move per element (Match
// preferred over Append on collision), for walking threads backwards.
// max_len < Word::max_len prunes; target_slack controls the remaining-length
// prune: keep w at level t only if |w| <= |s| - t + target_slack.
struct BufferLevels {
    std::vector<std::unordered_map<uint64_t, Move>> levels;
    const std::unordered_map<uint64_t, Move>& at(size_t t) const { return levels[t]; }
};
BufferLevels buffer_levels(const Word& s, uint32_t target_slack = 0);

bool recognize(const Word& s);
bool recognize(const Bits& s);

// Count of shuffle squares of length 2n over {0,1} by exhaustive recognition.
uint64_t count_squares(int n);

// Independent reference recognizer: branch and bound over explicit
// subsequence pairs, no buffer sets involved.  Exponential; fine for n <= 16.
bool recognize_by_split_search(const Word& s);

// A split of [n] witnessing s(A1) = s(A2) . residual (1-based positions).
struct Partition {
    std::vector<uint32_t> a1, a2;
    Word residual;
};
// s(A1) == s(A2) . residual, A1/A2 disjoint and covering, sizes consistent.
bool check_partition(const Word& s, const Partition& p);

// Walks one accepting thread backwards; nullopt when s is not a shuffle
// square.
std::optional<Partition> extract_partition(const Word& s);

// Stitches a forward thread reaching single-letter buffer j at odd time t*
// with a backward thread on rev(s) reaching j; scans t* = 1, 3, 5, ...
// Sufficient, not necessary: nullopt does not disprove squareness.
std::optional<Partition> two_sided_partition(const Word& s);

// Replay moves (Append | Match) from a start buffer; nullopt if some match
// was illegal.  The buffers w_t satisfy s(A1) = s(A2) . w_t with A1/A2 the
// append/match positions so far.
std::optional<Word> replay_moves(const Word& s, const std::vector<Move>& mv, Word start = Word());

// Y_t = min{|w| : w in Sigma2 and w in B}; buffer sets evolved from eps
// always contain the greedy thread, so this asserts nonempty intersection.
uint32_t min_sigma2(const BufferSet& b);
bool is_sigma2(const Word& w);

// Event detectors over a buffer set: A = none of {eps,0,1,01,10} present;
// E(k) = A and min_sigma2 <= k.
bool detect_A(const BufferSet& b);
bool detect_E(const BufferSet& b, uint32_t k);

// Exact P[v in B_t and w not in B_t] under uniform i.i.d. input bits,
// by enumerating all 2^t inputs.
Dyadic delta_exact(int t, const Word& v, const Word& w);

// Longest twins: the largest m such that some 2m positions of s carry two
// disjoint identical subsequences.  Equivalently max semi-length of a
// shuffle-square subsequence, computed as (|s| - d*)/2 via a buffer DP with a
// Delete move.  max_deletions >= 0 caps the allowed deletions (-1: no cap);
// returns -1 if no square subsequence is reachable within the cap.
int lt(const Word& s, int max_deletions = -1);
int lt(const Bits& s, int max_deletions = -1);

// Reference for lt(): maximize over all subsequences directly (n <= ~18).
int lt_by_subsequence_search(const Word& s);

} // namespace shufsq

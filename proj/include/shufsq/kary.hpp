#pragma once
// k-ary alphabets: buffer sets, greedy, exact counting of shuffle squares,
// the paired-indicator boosted step, and the alpha growth-rate inequality.

#include "rng.hpp"
#include "word.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace shufsq {

// Letters 0..k-1, one per byte.
using KWord = std::vector<uint8_t>;

KWord parse_kword(const std::string& s, int k);
std::string kword_str(const KWord& w);

// Exact buffer sets, keyed by nibble-packed words (k <= 15, length <= 30).
struct KarySets {
    static constexpr int max_len = 30;
    using Key = unsigned __int128;
    static Key key(const KWord& w);

    struct KeyHash { size_t operator()(Key k) const; };
    using Set = std::unordered_set<Key, KeyHash>;

    // B -> B' on reading letter c; buffers longer than max_store are not appended
    static Set step(const Set& prev, int c, int max_store);
};

bool kary_recognize(const KWord& s, int k);

// Exact |S_k(n)|; enumeration budget guards k^{2n} (default 1e8).
// Also verifies that every counted word has even letter multiplicities.
struct KaryCount {
    uint64_t count = 0;
    bool too_large = false;
};
KaryCount count_shuffle_squares(int k, int n, uint64_t budget = 100000000ull);

// Match the head or append; unlike the binary case the buffer can leave the
// two-run set.
KWord kary_greedy_step(const KWord& b, int c);

// ---------- paired-indicator boosted step ----------

// Buffer symbol: a plain letter, or half of an indicator pair (letter, tau).
// A pair occurs at exactly two positions; resolving it keeps one of the two
// (as the plain letter) and deletes the other.
struct KSym {
    uint8_t letter = 0;
    int32_t tau = -1; // -1: plain
    bool plain() const { return tau < 0; }
    bool operator==(const KSym& o) const { return letter == o.letter && tau == o.tau; }
};

struct KaryBoosted {
    int k = 2;
    std::vector<KSym> w;   // front = index 0
    long t = 0;            // letters consumed

    // open indicator construction: after a match of `a` exposing plain head
    // `b` != a, a run c1..cr (ci not in {a,b}) awaits a closing `a`
    int pend_a = -1, pend_b = -1;
    long pend_tau = -1;
    size_t pend_pos = 0;   // insertion slot = buffer length at match time
    long pend_run = 0;

    explicit KaryBoosted(int k_) : k(k_) {}

    void step(int c);

    bool pending() const { return pend_a >= 0; }
    long pairs() const;
    std::string str() const; // indicators rendered "(a@tau)"

    // Every choice over indicator pairs (keep-first vs keep-second), at most
    // `limit` expansions.
    std::vector<KWord> resolutions(size_t limit = 1u << 20) const;

private:
    void reset_pending() { pend_a = pend_b = -1; pend_tau = -1; pend_run = 0; pend_pos = 0; }
    void after_match(int a);
};

// Runs the boosted step over s and checks, at every step, that each
// resolution of the quasi-buffer lies in the exact k-ary buffer set.
bool kary_boosted_sound(const KWord& s, int k);

// Input sampler for boosted success-rate experiments: i.i.d. uniform letters,
// except that with probability `bias` a letter completing the machine's
// pending indicator is emitted instead.
KWord sample_biased_word(int k, int n, double bias, RngStream& rng, KaryBoosted* machine = nullptr);

// ---------- growth-rate inequality ----------

// Smallest alpha in (2/k, 1) with
//   alpha*ln(b/(alpha*k)) + (1-alpha)*ln((k-1)/(k*(1-alpha))) < 0,
// by grid scan plus bisection to 1e-9; nullopt when no alpha qualifies.
// b defaults to sqrt(k) + sqrt(k-1) when <= 0.
std::optional<double> alpha_bound(int k, double b = -1.0);

} // namespace shufsq

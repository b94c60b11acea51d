#include "shufsq/buffer.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace shufsq {

BufferSet buffer_step(const BufferSet& prev, int c, uint32_t max_len) {
    BufferSet next;
    next.reserve(prev.size() * 2);
    for (uint64_t key : prev) {
        Word w = Word::from_key(key);
        if (w.len < max_len) next.insert(w.append(c).key());
        if (w.len > 0 && w.head() == c) next.insert(w.tail().key());
    }
    return next;
}

BufferLevels buffer_levels(const Word& s, uint32_t target_slack) {
    BufferLevels bl;
    bl.levels.resize(s.len + 1);
    bl.levels[0].emplace(Word().key(), Move::Append); // move at level 0 is unused
    for (uint32_t t = 1; t <= s.len; ++t) {
        int c = s.at(t - 1);
        uint32_t room = s.len - t + target_slack;
        auto& cur = bl.levels[t];
        for (const auto& [key, mv] : bl.levels[t - 1]) {
            (void)mv;
            Word w = Word::from_key(key);
            if (w.len + 1 <= room && w.len < Word::max_len)
                cur.emplace(w.append(c).key(), Move::Append);
        }
        // Match second so it overwrites an Append reaching the same buffer.
        for (const auto& [key, mv] : bl.levels[t - 1]) {
            (void)mv;
            Word w = Word::from_key(key);
            if (w.len > 0 && w.head() == c) {
                Word u = w.tail();
                if (u.len <= room) cur[u.key()] = Move::Match;
            }
        }
    }
    return bl;
}

namespace {

// Recognition core shared by the Word and Bits fronts: only set membership,
// with the remaining-length prune.
template <class Seq>
bool recognize_seq(const Seq& s, size_t n) {
    if (n % 2 != 0) return false;
    BufferSet cur;
    cur.insert(Word().key());
    for (size_t t = 1; t <= n; ++t) {
        int c = int(s[t - 1]);
        size_t room = n - t;
        BufferSet next;
        next.reserve(cur.size() * 2);
        for (uint64_t key : cur) {
            Word w = Word::from_key(key);
            if (w.len + 1 <= room && w.len < Word::max_len) next.insert(w.append(c).key());
            if (w.len > 0 && w.head() == c) next.insert(w.tail().key());
        }
        cur.swap(next);
        if (cur.empty()) return false;
    }
    return cur.count(Word().key()) > 0;
}

struct WordSeq {
    const Word& w;
    int operator[](size_t i) const { return w.at(uint32_t(i)); }
};

} // namespace

bool recognize(const Word& s) { return recognize_seq(WordSeq{s}, s.len); }
bool recognize(const Bits& s) { return recognize_seq(s, s.size()); }

uint64_t count_squares(int n) {
    uint64_t total = 0;
    uint64_t words = uint64_t(1) << (2 * n);
    for (uint64_t x = 0; x < words; ++x)
        if (recognize(Word(x, uint32_t(2 * n)))) ++total;
    return total;
}

namespace {

// Branch and bound over explicit splits: scan s letter by letter, tracking
// the two copies as (longer-so-far u, shorter v with v a prefix-match of u).
// State: lengths only, since validity requires v == u[1..|v|]; we track the
// actual words.  Equivalent, simpler formulation: assign each letter to copy
// 1 or copy 2; prune when the copy being extended deviates from the other
// copy at its position.
bool split_search(const Word& s, uint32_t i, Word c1, Word c2) {
    if (i == s.len) return c1 == c2;
    // prune: either copy can ultimately reach at most |c| + remaining letters
    uint32_t rem = s.len - i;
    uint32_t need = (c1.len > c2.len ? c1.len - c2.len : c2.len - c1.len);
    if (need > rem) return false;
    int c = s.at(i);
    // extend copy 1: letter must agree with copy 2 at this position if known
    if (c1.len < c2.len ? c2.at(c1.len) == c : true)
        if (split_search(s, i + 1, c1.append(c), c2)) return true;
    if (c2.len < c1.len ? c1.at(c2.len) == c : true)
        if (split_search(s, i + 1, c1, c2.append(c))) return true;
    return false;
}

} // namespace

bool recognize_by_split_search(const Word& s) {
    if (s.len % 2 != 0) return false;
    if (s.len == 0) return true;
    // first letter goes to copy 1 without loss of generality
    return split_search(s, 1, Word().append(s.at(0)), Word());
}

bool check_partition(const Word& s, const Partition& p) {
    std::vector<uint8_t> seen(s.len + 1, 0);
    for (uint32_t i : p.a1) {
        if (i < 1 || i > s.len || seen[i]) return false;
        seen[i] = 1;
    }
    for (uint32_t i : p.a2) {
        if (i < 1 || i > s.len || seen[i]) return false;
        seen[i] = 2;
    }
    for (uint32_t i = 1; i <= s.len; ++i)
        if (!seen[i]) return false;
    if (p.a1.size() != p.a2.size() + p.residual.len) return false;
    Word w1, w2;
    for (uint32_t i : p.a1) w1 = w1.append(s.at(i - 1));
    for (uint32_t i : p.a2) w2 = w2.append(s.at(i - 1));
    for (uint32_t i = 0; i < p.residual.len; ++i) w2 = w2.append(p.residual.at(i));
    return w1 == w2;
}

namespace {

// Walk one thread backwards from `target` at the last level.  Relies on the
// recorded move being realizable: Append-parent drops the last letter,
// Match-parent prepends s(t).
Partition walk_back(const Word& s, const BufferLevels& bl, const Word& target) {
    Partition p;
    p.residual = target;
    Word w = target;
    for (uint32_t t = s.len; t >= 1; --t) {
        Move mv = bl.levels[t].at(w.key());
        int c = s.at(t - 1);
        if (mv == Move::Append) {
            assert(w.len > 0 && w.last() == c);
            p.a1.push_back(t);
            w = w.drop_last();
        } else {
            p.a2.push_back(t);
            w = w.prepend(c);
        }
    }
    std::reverse(p.a1.begin(), p.a1.end());
    std::reverse(p.a2.begin(), p.a2.end());
    return p;
}

} // namespace

std::optional<Partition> extract_partition(const Word& s) {
    if (s.len % 2 != 0) return std::nullopt;
    BufferLevels bl = buffer_levels(s);
    if (!bl.levels[s.len].count(Word().key())) return std::nullopt;
    Partition p = walk_back(s, bl, Word());
    assert(check_partition(s, p));
    return p;
}

std::optional<Partition> two_sided_partition(const Word& s) {
    if (s.len % 2 != 0 || s.len == 0) return std::nullopt;
    uint32_t ones = uint32_t(s.popcount());
    if (ones % 2 != 0 || (s.len - ones) % 2 != 0) return std::nullopt;
    // buffers can be up to one letter longer than what remains reachable
    BufferLevels fwd = buffer_levels(s, 1);
    BufferLevels bwd = buffer_levels(s.reversed(), 1);
    for (uint32_t tstar = 1; tstar < s.len; tstar += 2) {
        for (int j = 0; j < 2; ++j) {
            uint64_t jkey = Word().append(j).key();
            if (!fwd.levels[tstar].count(jkey)) continue;
            if (!bwd.levels[s.len - tstar].count(jkey)) continue;
            // forward thread on s[1..t*] reaching j, backward on rev(s)[1..n-t*]
            Word sf(s.bits & ((uint64_t(1) << tstar) - 1), tstar);
            Partition pf = walk_back(sf, fwd, Word().append(j));
            Word sr = s.reversed();
            Word sb(sr.bits & ((uint64_t(1) << (s.len - tstar)) - 1), s.len - tstar);
            Partition pb = walk_back(sb, bwd, Word().append(j));
            // stitch: s(A1 u A2') = s(A1) . j . s(A2'') and likewise for the
            // other side; backward index i maps to original |s| + 1 - i
            Partition p;
            p.a1 = pf.a1;
            for (auto it = pb.a2.rbegin(); it != pb.a2.rend(); ++it)
                p.a1.push_back(s.len + 1 - *it);
            p.a2 = pf.a2;
            for (auto it = pb.a1.rbegin(); it != pb.a1.rend(); ++it)
                p.a2.push_back(s.len + 1 - *it);
            if (check_partition(s, p)) return p;
        }
    }
    return std::nullopt;
}

std::optional<Word> replay_moves(const Word& s, const std::vector<Move>& mv, Word start) {
    if (mv.size() != s.len) return std::nullopt;
    Word w = start;
    for (uint32_t t = 0; t < s.len; ++t) {
        int c = s.at(t);
        if (mv[t] == Move::Append) {
            if (w.len >= Word::max_len) return std::nullopt;
            w = w.append(c);
        } else {
            if (w.len == 0 || w.head() != c) return std::nullopt;
            w = w.tail();
        }
    }
    return w;
}

bool is_sigma2(const Word& w) {
    if (w.len <= 1) return true;
    uint64_t x = w.bits ^ (w.bits >> 1);          // 1 at each run boundary
    x &= (uint64_t(1) << (w.len - 1)) - 1;
    return __builtin_popcountll(x) <= 1;
}

uint32_t min_sigma2(const BufferSet& b) {
    uint32_t best = ~uint32_t(0);
    for (uint64_t key : b) {
        Word w = Word::from_key(key);
        if (w.len < best && is_sigma2(w)) best = w.len;
    }
    assert(best != ~uint32_t(0));
    return best;
}

bool detect_A(const BufferSet& b) {
    static const uint64_t keys[5] = {
        Word().key(),
        Word().append(0).key(), Word().append(1).key(),
        Word().append(0).append(1).key(), Word().append(1).append(0).key(),
    };
    for (uint64_t k : keys)
        if (b.count(k)) return false;
    return true;
}

bool detect_E(const BufferSet& b, uint32_t k) {
    return detect_A(b) && min_sigma2(b) <= k;
}

Dyadic delta_exact(int t, const Word& v, const Word& w) {
    if (t < 0 || t > 26) throw std::invalid_argument("delta_exact: t out of range");
    uint64_t hits = 0;
    uint64_t prefixes = uint64_t(1) << t;
    for (uint64_t x = 0; x < prefixes; ++x) {
        BufferSet cur;
        cur.insert(Word().key());
        for (int i = 0; i < t; ++i) cur = buffer_step(cur, int((x >> i) & 1u), Word::max_len);
        if (cur.count(v.key()) && !cur.count(w.key())) ++hits;
    }
    return Dyadic::from_ratio(mpz_class(hits), t);
}

// ---------- longest twins ----------

namespace {

// DP over (buffer, min deletions): Delete skips the input letter for cost 1.
template <class Seq>
int lt_seq(const Seq& s, size_t n, int max_del) {
    if (n == 0) return 0;
    int dcap = max_del >= 0 ? max_del : int(n);
    // best[wkey] = min deletions realizing buffer w at this level
    std::unordered_map<uint64_t, int> cur, next;
    cur.emplace(Word().key(), 0);
    for (size_t t = 1; t <= n; ++t) {
        int c = int(s[t - 1]);
        size_t rem = n - t;
        next.clear();
        next.reserve(cur.size() * 2);
        auto offer = [&](uint64_t key, int d) {
            auto [it, fresh] = next.emplace(key, d);
            if (!fresh && d < it->second) it->second = d;
        };
        for (const auto& [key, d] : cur) {
            Word w = Word::from_key(key);
            // each remaining letter shrinks the buffer by at most one
            if (d < dcap && w.len <= rem) offer(key, d + 1); // delete s(t)
            if (w.len + 1 <= rem && w.len < Word::max_len)
                offer(w.append(c).key(), d);
            if (w.len > 0 && w.head() == c) offer(w.tail().key(), d);
        }
        cur.swap(next);
        if (cur.empty()) return -1;
    }
    auto it = cur.find(Word().key());
    if (it == cur.end()) return -1;
    return int(n - size_t(it->second)) / 2;
}

} // namespace

int lt(const Word& s, int max_deletions) { return lt_seq(WordSeq{s}, s.len, max_deletions); }
int lt(const Bits& s, int max_deletions) { return lt_seq(s, s.size(), max_deletions); }

int lt_by_subsequence_search(const Word& s) {
    int best = 0;
    for (uint64_t mask = 0; mask < (uint64_t(1) << s.len); ++mask) {
        int kept = __builtin_popcountll(mask);
        if (kept % 2 != 0 || kept / 2 <= best) continue;
        Word u;
        for (uint32_t i = 0; i < s.len; ++i)
            if ((mask >> i) & 1u) u = u.append(s.at(i));
        if (recognize(u)) best = kept / 2;
    }
    return best;
}

} // namespace shufsq

#include "shufsq/decomposition.hpp"

#include "shufsq/buffer.hpp"
#include "shufsq/greedy.hpp"

#include <cassert>
#include <stdexcept>

namespace shufsq {

InitGreedyDist::InitGreedyDist(const Word& init) {
    cur_[init.key()] = 1;
}

void InitGreedyDist::step() {
    nxt_.clear();
    for (const auto& [key, n] : cur_) {
        Word w = Word::from_key(key);
        for (int c = 0; c < 2; ++c) nxt_[greedy_step(w, c).key()] += n;
    }
    std::swap(cur_, nxt_);
    ++t_;
}

Dyadic InitGreedyDist::prob(const Word& w) const {
    auto it = cur_.find(w.key());
    if (it == cur_.end()) return Dyadic();
    return Dyadic::from_ratio(it->second, t_);
}

namespace {

// P[greedy buffer = rev(u) after m letters, started from rev(v)].  The branch
// buffer u is the endpoint here, not the start: the identity runs the reversed
// chain from the query word v.  The chain is not reversal-symmetric (checked
// by hand: from "01" the chain reaches the empty word in 4 steps with
// probability 4/16, but from the empty word it reaches "01" with 3/16), so
// the direction matters for asymmetric v.
Dyadic qr(int m, const Word& u, const Word& v) {
    InitGreedyDist dist(v.reversed());
    for (int i = 0; i < m; ++i) dist.step();
    return dist.prob(u.reversed());
}

struct DeltaCounters {
    // per step t, numerator * 2^{n-t} of P[x w x in B_t, w not in B_t]
    std::vector<std::unordered_map<uint64_t, mpz_class>> ones, zeros;
    mpz_class hits = 0; // inputs with v in B_n
};

void walk(int depth, int n, const BufferSet& bs, const Word& v, const mpz_class& weight,
          DeltaCounters& dc) {
    if (depth == n) {
        if (bs.count(v.key())) dc.hits += weight;
        return;
    }
    for (uint64_t key : bs) {
        Word x = Word::from_key(key);
        if (x.len < 2 || x.head() != x.last()) continue;
        Word inner = x.tail().drop_last();
        if (bs.count(inner.key())) continue;
        auto& tab = x.head() ? dc.ones[size_t(depth)] : dc.zeros[size_t(depth)];
        tab[inner.key()] += weight;
    }
    for (int c = 0; c < 2; ++c)
        walk(depth + 1, n, buffer_step(bs, c, n), v, weight / 2, dc);
}

} // namespace

DecompositionReport verify_decomposition(int n, const Word& v) {
    if (n < 1 || n > 26) throw std::invalid_argument("verify_decomposition: n out of range");

    DeltaCounters dc;
    dc.ones.resize(size_t(n));
    dc.zeros.resize(size_t(n));
    BufferSet b0{Word().key()};
    mpz_class w0 = mpz_class(1) << n;
    walk(0, n, b0, v, w0, dc);

    DecompositionReport rep;
    rep.lhs = Dyadic::from_ratio(dc.hits, n);

    Dyadic rhs = qr(n, Word(), v);
    for (int t = 0; t < n; ++t) {
        for (const auto& [key, cnt] : dc.ones[size_t(t)]) {
            Word w = Word::from_key(key);
            Dyadic term = Dyadic::from_ratio(cnt, n) * qr(n - t - 1, w.append(1), v);
            rhs = rhs + term.half();
        }
        for (const auto& [key, cnt] : dc.zeros[size_t(t)]) {
            Word w = Word::from_key(key);
            Dyadic term = Dyadic::from_ratio(cnt, n) * qr(n - t - 1, w.append(0), v);
            rhs = rhs + term.half();
        }
    }
    rep.rhs = rhs;
    rep.exact_match = (rep.lhs == rep.rhs);
    return rep;
}

} // namespace shufsq

#pragma once
// Exact decomposition of buffer-set membership probabilities.
//
// For uniform random input of length n,
//   P[v in B_n] = qr_n(eps; v)
//     + 1/2 * sum_{t<n} sum_w [ d_t(1w1, w) qr_{n-t-1}(w1; v)
//                             + d_t(0w0, w) qr_{n-t-1}(w0; v) ]
// where d_t(x, y) = P[x in B_t, y not in B_t] and qr_m(u; v) is the
// probability that the greedy thread started from buffer rev(v) sits at
// rev(u) after m random letters.  Everything is a dyadic rational; both
// sides are computed exactly and compared.

#include "dyadic.hpp"
#include "word.hpp"

#include <gmpxx.h>
#include <unordered_map>
#include <vector>

namespace shufsq {

// Greedy-buffer distribution from an arbitrary start buffer, as numerators
// q * 2^t keyed by Word::key().  No truncation.
class InitGreedyDist {
public:
    explicit InitGreedyDist(const Word& init);
    void step();
    int t() const { return t_; }
    const std::unordered_map<uint64_t, mpz_class>& table() const { return cur_; }
    Dyadic prob(const Word& w) const;

private:
    int t_ = 0;
    std::unordered_map<uint64_t, mpz_class> cur_, nxt_;
};

struct DecompositionReport {
    Dyadic lhs;        // P[v in B_n]
    Dyadic rhs;        // assembled from the identity above
    bool exact_match = false;
};

// Evaluates both sides for the given v over all 2^n inputs (n <= ~22).
DecompositionReport verify_decomposition(int n, const Word& v);

} // namespace shufsq

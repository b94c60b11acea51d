#pragma once
// Distribution of the greedy buffer under uniform random input.
//
// With q_t(w) = P[greedy buffer = w after t random bits], complements have
// equal mass, so the state space folds to the empty buffer plus one
// representative p(a,b) per two-run shape 1^a 0^b (a >= 1, b >= 0).  The
// folded transition is
//   e'      = p(1,0)
//   p'(1,0) = (e + p(2,0) + p(1,1)) / 2
//   p'(a,0) = (p(a+1,0) + p(1,a)) / 2            (a >= 2)
//   p'(a,b) = (p(a,b-1) + p(a+1,b)) / 2          (b >= 1)
// All masses at step t are multiples of 2^-t; the exact table stores the
// integer numerators q * 2^t and only ever adds.
//
// Shapes with a+b > L are truncated into a `lost` bucket; with L >= the input
// length there is no truncation and the table is the exact distribution.

#include "dyadic.hpp"
#include "greedy.hpp"

#include <gmpxx.h>
#include <string>
#include <vector>

namespace shufsq {

class QTableExact {
public:
    explicit QTableExact(int L);

    void step();                  // advance one input letter
    int t() const { return t_; }
    int L() const { return L_; }

    // numerators: value * 2^t
    const mpz_class& eps_num() const { return eps_; }
    const mpz_class& num(int a, int b) const { return cur_[idx(a, b)]; }
    const mpz_class& lost_num() const { return lost_; }

    Dyadic eps() const { return Dyadic::from_ratio(eps_, t_); }
    Dyadic q(int a, int b) const { return Dyadic::from_ratio(cur_[idx(a, b)], t_); }

    // sum of numerators over all shapes with a+b == k (one orientation)
    mpz_class level_num(int k) const;

    // eps numerator + 2 * (all shape numerators + lost) == 2^t
    bool conserved() const;

private:
    size_t idx(int a, int b) const { return size_t(rowstart_[a]) + size_t(b); }

    int L_, t_ = 0;
    std::vector<size_t> rowstart_;     // triangular layout: row a holds b = 0..L-a
    std::vector<mpz_class> cur_, nxt_;
    mpz_class eps_, lost_;
};

// Same recursion in double precision, for long horizons.
class QTableD {
public:
    explicit QTableD(int L);

    void step();
    int t() const { return t_; }
    int L() const { return L_; }

    double eps() const { return eps_; }
    double q(int a, int b) const { return cur_[idx(a, b)]; }
    double lost() const { return lost_; }
    double level_mass(int k) const; // both orientations: 2 * sum over a+b == k

private:
    size_t idx(int a, int b) const { return size_t(rowstart_[a]) + size_t(b); }

    int L_, t_ = 0;
    std::vector<size_t> rowstart_;
    std::vector<double> cur_, nxt_;
    double eps_ = 1.0, lost_ = 0.0;
};

// Closed forms checked exactly against the table at every even step:
//   q_t(eps) = C(t, t/2) / 2^t
//   sum_{|w| = k, w two-run} q_t(w) = 2 C(t, (t+k)/2) / 2^t   (k >= 1)
// Returns the number of steps verified (== t_max on success), or the first
// failing step as a negative value.
long qtable_check_closed_forms(int t_max);

// Shape monotonicity of the exact table, all steps t <= t_max:
//   q(a, 0) >= q(1, a+1) for a >= 0 (a = 0 reads eps >= q(1,1)),
//   q(a+1, b+1) >= q(a+2, b),
// and the level-pinch at every k >= 3:
//   q(a,b) * (k-2) <= level(k-2) and q(a,b) * (k+2) >= level(k+2).
long qtable_check_monotone(int t_max);

// Ratio r_t = q_{2t+|w|}(w) / q_{2t}(eps) for the two-run shape w = 1^a 0^b;
// empirically r_t -> c(w) with an O(1/t) correction.  Checkpoints are taken
// at t = t_max/4, t_max/2, t_max and extrapolated by least squares on the
// model c + a/sqrt(t).
struct CEstimate {
    std::vector<long> ts;
    std::vector<double> ratios;
    double extrapolated = 0.0;
    double at_tmax = 0.0;
    double last_delta = 0.0; // r(t_max) - r(t_max/2)
    double lost = 0.0;
    int L = 0;
};
CEstimate estimate_c(int a, int b, long t_max, int L = 0); // L = 0: auto 6.4*sqrt(2*t_max)

} // namespace shufsq

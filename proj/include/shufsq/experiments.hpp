#pragma once
// Monte Carlo harness: seeded samplers, distribution checks, and the density,
// LT, and Cesaro experiments.  Every experiment derives per-trial RNG streams
// from (seed, trial index), so results are reproducible regardless of
// scheduling.

#include "boosted.hpp"
#include "rng.hpp"
#include "word.hpp"

#include <string>
#include <vector>

namespace shufsq {

long sample_geom(RngStream& rng);              // geometric(1/2) on {0,1,...}
long sample_nb(long k, RngStream& rng);        // sum of k geometrics

Word random_word(int n, RngStream& rng);
Word random_even_parity_word(int n, RngStream& rng); // even count of each letter
Bits random_bits(int n, RngStream& rng);
Bits random_even_parity_bits(int n, RngStream& rng);

struct StatReport {
    std::string name;
    double estimate = 0.0;
    double stderr_ = 0.0;
    long n_samples = 0;
    double tolerance = 0.0;
    bool pass = true;
    std::string note;
};

// Empirical NB(k) tail frequencies against e^{-eps^2 k / (2(2+eps))}; passes
// when both tails sit below bound + 4*stderr.
StatReport chernoff_check(long k, double eps, long trials, uint64_t seed);

// Fraction of words that are shuffle squares at semi-length n.
//   exhaustive:   exact count over all 4^n words (n <= 16)
//   sampled:      exact recognition on `trials` random words
//   constructive: constructive_partition success rate on even-parity words
enum class DensityMode { Exhaustive, Sampled, Constructive };
struct DensityReport {
    int n = 0;
    DensityMode mode{};
    double rate = 0.0;            // over all words (exhaustive/sampled)
    double even_parity_rate = 0.0;
    double stderr_ = 0.0;
    long trials = 0;
    uint64_t exact_count = 0;     // exhaustive only
};
DensityReport density_experiment(int n, long trials, DensityMode mode, uint64_t seed,
                                 const PartitionerOptions& opt = {});

// Fraction of length-n words with LT >= ceil(n/2) - 1, plus the paired
// deleting-two-letters comparison: LT(s[1..n-2]) >= n/2 - 2 vs recognize(s).
struct LtReport {
    int n = 0;
    long trials = 0;
    double frac_lt_big = 0.0;     // LT(s) >= ceil(n/2) - 1
    double frac_dropped2 = 0.0;   // LT(s minus last two letters) >= n/2 - 2
    double frac_square = 0.0;     // recognize(s)
};
LtReport lt_experiment(int n, long trials, uint64_t seed);

// Cesaro mean of Y_t^delta, Y_t = min{|w| : w in Sigma2 and B_t}.  Exact mode
// (n <= 16) uses true buffer sets; proxy mode upper-bounds Y_t by the boosted
// thread's buffer length at each t (interpolating between cycle boundaries).
struct CesaroReport {
    long n = 0;
    double delta = 0.0;
    double cesaro_mean = 0.0;
    bool exact = false;
    long trials = 0;
};
CesaroReport cesaro_y_experiment(long n, long trials, double delta, uint64_t seed, bool exact_mode);

} // namespace shufsq

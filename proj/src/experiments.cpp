#include "shufsq/experiments.hpp"

#include "shufsq/buffer.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace shufsq {

long sample_geom(RngStream& rng) { return rng.geometric_half(); }

long sample_nb(long k, RngStream& rng) {
    long s = 0;
    for (long i = 0; i < k; ++i) s += rng.geometric_half();
    return s;
}

Word random_word(int n, RngStream& rng) {
    if (n < 0 || n > int(Word::max_len)) throw std::invalid_argument("random_word: bad length");
    Word w;
    w.len = uint32_t(n);
    w.bits = n == 0 ? 0 : (rng.next_u64() & ((uint64_t(1) << n) - 1));
    return w;
}

Word random_even_parity_word(int n, RngStream& rng) {
    if (n % 2) throw std::invalid_argument("random_even_parity_word: length must be even");
    for (;;) {
        Word w = random_word(n, rng);
        if (w.popcount() % 2 == 0) return w;
    }
}

Bits random_bits(int n, RngStream& rng) {
    Bits b(static_cast<size_t>(n), 0);
    for (auto& x : b) x = uint8_t(rng.bit());
    return b;
}

Bits random_even_parity_bits(int n, RngStream& rng) {
    if (n % 2) throw std::invalid_argument("random_even_parity_bits: length must be even");
    for (;;) {
        Bits b = random_bits(n, rng);
        long ones = 0;
        for (uint8_t x : b) ones += x;
        if (ones % 2 == 0) return b;
    }
}

StatReport chernoff_check(long k, double eps, long trials, uint64_t seed) {
    if (eps <= 0 || k < 1 || trials < 1) throw std::invalid_argument("chernoff_check: bad arguments");
    RngStream rng(seed, 0xcbe0);
    long hi = 0, lo = 0;
    for (long i = 0; i < trials; ++i) {
        long x = sample_nb(k, rng);
        if (double(x) >= (1.0 + eps) * double(k)) ++hi;
        if (double(x) <= (1.0 - eps) * double(k)) ++lo;
    }
    double n = double(trials);
    double ph = double(hi) / n, pl = double(lo) / n;
    double seh = std::sqrt(std::max(ph * (1 - ph), 1.0 / n) / n);
    double sel = std::sqrt(std::max(pl * (1 - pl), 1.0 / n) / n);
    double bound = std::exp(-eps * eps * double(k) / (2.0 * (2.0 + eps)));

    StatReport rep;
    rep.name = "chernoff k=" + std::to_string(k) + " eps=" + std::to_string(eps);
    rep.estimate = std::max(ph, pl);
    rep.stderr_ = ph >= pl ? seh : sel;
    rep.n_samples = trials;
    rep.tolerance = bound;
    rep.pass = ph <= bound + 4 * seh && pl <= bound + 4 * sel;
    rep.note = "upper=" + std::to_string(ph) + " lower=" + std::to_string(pl) +
               " bound=" + std::to_string(bound);
    return rep;
}

DensityReport density_experiment(int n, long trials, DensityMode mode, uint64_t seed,
                                 const PartitionerOptions& opt) {
    DensityReport rep;
    rep.n = n;
    rep.mode = mode;
    switch (mode) {
    case DensityMode::Exhaustive: {
        if (n > 16) throw std::invalid_argument("density_experiment: exhaustive needs n <= 16");
        rep.exact_count = count_squares(n);
        rep.rate = double(rep.exact_count) / std::ldexp(1.0, 2 * n);
        rep.even_parity_rate = double(rep.exact_count) / std::ldexp(1.0, 2 * n - 1);
        return rep;
    }
    case DensityMode::Sampled: {
        if (n > 16) throw std::invalid_argument("density_experiment: sampled needs n <= 16");
        long hit = 0, hit_even = 0;
        for (long i = 0; i < trials; ++i) {
            RngStream rng(seed, uint64_t(i));
            if (recognize(random_bits(2 * n, rng))) ++hit;
            if (recognize(random_even_parity_bits(2 * n, rng))) ++hit_even;
        }
        rep.trials = trials;
        rep.rate = double(hit) / double(trials);
        rep.even_parity_rate = double(hit_even) / double(trials);
        rep.stderr_ = std::sqrt(rep.rate * (1 - rep.rate) / double(trials));
        return rep;
    }
    case DensityMode::Constructive: {
        long ok = 0;
        for (long i = 0; i < trials; ++i) {
            RngStream rng(seed, uint64_t(i));
            Bits s = random_even_parity_bits(2 * n, rng);
            PartitionResult pr = constructive_partition(s, opt);
            if (pr.success && pr.verified) ++ok;
        }
        rep.trials = trials;
        rep.even_parity_rate = double(ok) / double(trials);
        rep.rate = 0.5 * rep.even_parity_rate; // odd-parity words are never squares
        rep.stderr_ = std::sqrt(rep.even_parity_rate * (1 - rep.even_parity_rate) / double(trials));
        return rep;
    }
    }
    throw std::logic_error("density_experiment: bad mode");
}

LtReport lt_experiment(int n, long trials, uint64_t seed) {
    if (n < 2 || n > 24) throw std::invalid_argument("lt_experiment: n out of range for exact LT");
    LtReport rep;
    rep.n = n;
    rep.trials = trials;
    long big = 0, dropped = 0, square = 0;
    int thr = (n + 1) / 2 - 1;
    int cap = n - 2 * thr; // allowed deletions for LT >= thr
    for (long i = 0; i < trials; ++i) {
        RngStream rng(seed, uint64_t(i));
        Bits s = random_bits(n, rng);
        if (lt(s, cap) >= thr) ++big;
        if (recognize(s)) ++square;
        if (n % 2 == 0) {
            Bits head(s.begin(), s.end() - 2);
            if (lt(head, 2) >= n / 2 - 2) ++dropped;
        }
    }
    rep.frac_lt_big = double(big) / double(trials);
    rep.frac_dropped2 = double(dropped) / double(trials);
    rep.frac_square = double(square) / double(trials);
    return rep;
}

CesaroReport cesaro_y_experiment(long n, long trials, double delta, uint64_t seed,
                                 bool exact_mode) {
    if (delta < 0 || delta >= 1.0 / 3.0)
        throw std::invalid_argument("cesaro_y_experiment: need 0 <= delta < 1/3");
    CesaroReport rep;
    rep.n = n;
    rep.delta = delta;
    rep.trials = trials;
    rep.exact = exact_mode;

    long double total = 0;
    if (exact_mode) {
        if (n > 16) throw std::invalid_argument("cesaro_y_experiment: exact mode needs n <= 16");
        for (long i = 0; i < trials; ++i) {
            RngStream rng(seed, uint64_t(i));
            Bits s = random_bits(int(n), rng);
            BufferSet b{Word().key()};
            long double acc = 0;
            for (long t = 0; t < n; ++t) {
                b = buffer_step(b, s[size_t(t)], uint32_t(n));
                acc += std::pow(double(min_sigma2(b)), delta);
            }
            total += acc / (long double)n;
        }
    } else {
        for (long i = 0; i < trials; ++i) {
            RngStream rng(seed, uint64_t(i));
            Bits s = random_bits(int(n), rng);
            BoostedRun run = run_boosted(s);
            // upper proxy: thread length moves by at most one per step, so
            // between boundaries it is bounded from both ends
            long double acc = 0;
            size_t j = 0;
            long prevT = 0, prevX = 0;
            for (long t = 1; t <= n; ++t) {
                while (j < run.records.size() && run.records[j].T < t) {
                    prevT = run.records[j].T;
                    prevX = run.records[j].X;
                    ++j;
                }
                long y = prevX + (t - prevT);
                if (j < run.records.size()) {
                    long next = run.records[j].X + (run.records[j].T - t);
                    y = std::min(y, next);
                }
                acc += std::pow(double(y), delta);
            }
            total += acc / (long double)n;
        }
    }
    rep.cesaro_mean = double(total / (long double)trials);
    return rep;
}

} // namespace shufsq

#pragma once
// Boosted greedy algorithm: indicator, turnover, and activation phases.
//
// One cycle starts from a constant buffer side^k and ends at another constant
// buffer side'^{X*} after T* input letters.  The cycle works on a quasi-buffer
// over {0,1,i}: an 'i' marks a 1 whose match/append decision is deferred.  The
// two readings of a quasi-buffer (every subset of indicators acting as
// separators) are
//   I-mode:       1^r u0' 1 u1' 1 ... 1 ur'          (prepended ones)
//   J-mode (z):   u0' 1 u1' 1 ... 1 ur' 1^{z-r}, r <= z   (cached ones)
// where uj' deletes the non-separator indicators.  Phase outputs keep every
// reading a true buffer, which is what verify_quasibuffer checks.
//
// Indicator fates drive the concrete move replay: an indicator born at a '1'
// that ends up a separator means that input bit appended; one that is deleted
// means it matched a leading 1.  This turns a finished cycle into explicit
// Append/Match moves without search.

#include "buffer.hpp"
#include "rng.hpp"
#include "word.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace shufsq {

// ---------- bit sources ----------

// Reads from either an RngStream or a fixed bit array, optionally flipping
// bits (used to relabel sides so cycles always see 1-run buffers).
struct BitFeed {
    RngStream* rng = nullptr;
    const uint8_t* data = nullptr;
    size_t pos = 0, n = 0;
    int flip = 0;

    static BitFeed of(RngStream& r) { return BitFeed{&r, nullptr, 0, 0, 0}; }
    static BitFeed of(const Bits& b, size_t start = 0, int flip_ = 0) {
        return BitFeed{nullptr, b.data(), start, b.size(), flip_};
    }

    // -1 on exhaustion (never for RNG feeds)
    int next() {
        if (rng) return rng->bit() ^ flip;
        if (pos < n) return int(data[pos++]) ^ flip;
        return -1;
    }
};

// ---------- general quasi-buffer expansion ----------

// All I-mode readings (every subset of i's as separators), or all J-mode
// readings with r <= z.  Input may contain '0', '1', 'i'.
std::vector<std::string> expand_I(const std::string& w);
std::vector<std::string> expand_J(const std::string& w, long z);

// Every expansion of w is a member of the exact buffer set reached from the
// buffer `init` after consuming the letters of `consumed`.
bool verify_quasibuffer(const std::string& w, const Word& init, const Word& consumed,
                        bool j_mode, long z = 0);

// ---------- phases ----------

enum class Fate : uint8_t { Pending, Del, Sep };

// Quasi-buffer in phase normal form: zero runs separated by indicators,
// 0^{runs[0]} i 0^{runs[1]} i ... i 0^{runs[M]}, plus a suffix of appended 1s.
// ids[j] names the indicator between runs[j] and runs[j+1].
struct QuasiState {
    std::vector<long> runs{0};
    std::vector<int> ids;
    long ones_suffix = 0;

    long zeros() const;
    bool empty() const { return ids.empty() && runs[0] == 0 && ones_suffix == 0; }
    std::string str() const;
};

// Optional instrumentation: (absolute time, phase tag, quasi-buffer text,
// effective J-budget or -1 for I-mode).
struct PhaseTrace {
    struct Entry { long t; char phase; std::string w; long budget; };
    std::vector<Entry> entries;
};

struct IndicatorResult {
    long k = 0;
    long X = 0;         // zeros read; T1 - t0 = k + X
    long M = 0;         // surviving indicators in W''
    long consumed = 0;
    bool exhausted = false;
    std::string wprime;     // W' (before the leftmost-indicator deletion)
    QuasiState state;       // W''
    std::vector<long> ones_ofs;   // phase-local offsets of the k ones read
    std::vector<Fate> fate;       // per indicator id (birth order), Del for bar-deleted
};
IndicatorResult run_indicator_phase(long k, BitFeed& feed, PhaseTrace* trace = nullptr, long t0 = 0);

struct TurnoverResult {
    long Z = 0;
    long consumed = 0;
    bool exhausted = false;
    bool plain_end = false;       // Z = 0: cycle ends, buffer 0^{X-1} on the flipped side
    std::vector<long> ones_ofs;   // phase-local offsets of the Z ones
    long zero_ofs = -1;
};
TurnoverResult run_turnover_phase(BitFeed& feed);

struct ActivationResult {
    long Y = 0, C3 = 0;
    long consumed = 0;
    bool exhausted = false;
    std::vector<long> match_ofs;  // phase-local offsets whose concrete move is Match
    long final_ones = 0;          // Y + z - 2*C3
};
// Mutates st (consuming zeros/indicators, assigning Sep/Del fates through
// `fate` indexed by indicator id); zeros_needed is the total zero count of st
// at entry.
ActivationResult run_activation_phase(QuasiState& st, std::vector<Fate>& fate, long z,
                                      long zeros_needed, BitFeed& feed,
                                      PhaseTrace* trace = nullptr, long t0 = 0);

// ---------- cycles ----------

enum class CycleEnd : uint8_t { Indicator, Turnover, Activation, Exhausted };

struct CycleDelta {
    long k = 0;
    long X = 0, Z = 0, Y = 0, C3 = 0, M = 0;
    long Xstar = 0;
    long Tstar = 0;          // bits consumed
    CycleEnd end = CycleEnd::Indicator;
    bool side_flips = false; // turnover-ended cycles leave an opposite-letter run
};

// One full cycle from buffer side^k.  If `moves` is given, the concrete
// Append/Match move for every consumed bit is appended to it.
CycleDelta boosted_cycle(long k, BitFeed& feed, std::vector<Move>* moves = nullptr,
                         PhaseTrace* trace = nullptr, long t0 = 0);

struct CycleRecord {
    long m = 0;
    long X = 0;      // buffer length after the cycle
    long T = 0;      // cumulative time
    CycleEnd end = CycleEnd::Indicator;
    int side = 1;
};

struct BoostedRun {
    std::vector<CycleRecord> records;
    long T = 0;           // letters consumed in completed cycles + restarts
    long X = 0;           // buffer length at T
    int side = 1;
    bool exhausted_mid_cycle = false;
    long final_len = 0;   // concrete buffer length after all consumed letters
};

// Iterates cycles over the word (restart rule: an empty buffer takes one
// greedy append and continues with k = 1).  Records every cycle boundary.
// If `moves` is given, collects the full move sequence including the trailing
// partial cycle.
BoostedRun run_boosted(const Bits& s, std::vector<Move>* moves = nullptr);

// max{m : T_m <= t} over the record sequence (-1 if none)
long cycles_completed_by(const std::vector<CycleRecord>& records, long t);

// ---------- constructive partitioner ----------

struct PartitionerOptions {
    long tail_window = 24;              // cut the cycle thread at n - tail_window
    size_t level_cap = size_t(4) << 20; // abort the tail DP past this many states per level
};

enum class PartitionFailure : uint8_t { None, OddCounts, TailUnreachable, ResourceLimit };

struct PartitionResult {
    bool success = false;
    PartitionFailure failure = PartitionFailure::None;
    std::vector<uint32_t> a1, a2;  // 1-based append/match positions
    long cycles = 0;
    long tail_len = 0;
    bool verified = false;         // s(A1) == s(A2) checked letter by letter
    double millis = 0.0;
};

PartitionResult constructive_partition(const Bits& s, const PartitionerOptions& opt = {});

// ---------- distribution validators ----------

struct CycleStats {
    long k = 0;
    long cycles = 0;
    double mean_drift = 0.0;    // mean(X* - k)
    double mean_sq_drift = 0.0; // mean((X* - k)^2)
    double p_long = 0.0;        // P[T* >= 4.5 k]
    double p_far = 0.0;         // P[|X* - k| >= 0.5 k]
};
CycleStats boosted_cycle_stats(long k, long cycles, uint64_t seed);

struct MomentCheck {
    std::string name;
    double sample = 0.0;  // empirical mean
    double target = 0.0;  // claimed value (equality) or bound (inequality)
    double stderr_ = 0.0;
    bool equality = false;
    bool pass = false;    // |sample-target| <= 4 se, resp. sample <= target + 4 se
};
// Claimed per-cycle moments at the given k: E[(Y-Z)1_{Z>0}] equals
// (k-3+2^-k)/2, E[(Y-Z-k)^2 1_{Z>0}] < 4k+9, E[C'] <= 2(7/8)^{k-1},
// E[C'^2] <= 6(7/8)^{k-1}, with the extensions Z|X=0 ~ geom(1/2), Y|X=0 = 0,
// C' = Z - C3 zeroed unless X>0 and Z>0.
std::vector<MomentCheck> validate_claims(long k, long samples, uint64_t seed);

} // namespace shufsq

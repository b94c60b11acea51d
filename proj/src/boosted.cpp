#include "shufsq/boosted.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace shufsq {

// ---------- quasi-buffer expansion ----------

namespace {

std::vector<size_t> indicator_positions(const std::string& w) {
    std::vector<size_t> pos;
    for (size_t p = 0; p < w.size(); ++p)
        if (w[p] == 'i') pos.push_back(p);
    if (pos.size() > 20) throw std::invalid_argument("expansion: too many indicators");
    return pos;
}

std::string read_with(const std::string& w, unsigned mask) {
    std::string out;
    size_t j = 0;
    for (size_t p = 0; p < w.size(); ++p) {
        if (w[p] != 'i') {
            out += w[p];
            continue;
        }
        if (mask & (1u << j)) out += '1'; // separator
        ++j;                              // otherwise deleted
    }
    return out;
}

} // namespace

std::vector<std::string> expand_I(const std::string& w) {
    auto pos = indicator_positions(w);
    std::vector<std::string> out;
    for (unsigned mask = 0; mask < (1u << pos.size()); ++mask) {
        unsigned r = unsigned(std::popcount(mask));
        out.push_back(std::string(r, '1') + read_with(w, mask));
    }
    return out;
}

std::vector<std::string> expand_J(const std::string& w, long z) {
    auto pos = indicator_positions(w);
    std::vector<std::string> out;
    for (unsigned mask = 0; mask < (1u << pos.size()); ++mask) {
        long r = std::popcount(mask);
        if (r > z) continue;
        out.push_back(read_with(w, mask) + std::string(size_t(z - r), '1'));
    }
    return out;
}

bool verify_quasibuffer(const std::string& w, const Word& init, const Word& consumed,
                        bool j_mode, long z) {
    uint32_t cap = init.len + consumed.len;
    if (cap > Word::max_len) throw std::invalid_argument("verify_quasibuffer: context too long");
    BufferSet cur{init.key()};
    for (uint32_t t = 0; t < consumed.len; ++t) cur = buffer_step(cur, consumed.at(t), cap);
    auto readings = j_mode ? expand_J(w, z) : expand_I(w);
    for (const auto& r : readings)
        if (!cur.count(parse_word(r).key())) return false;
    return true;
}

// ---------- quasi-buffer state ----------

long QuasiState::zeros() const {
    long s = 0;
    for (long r : runs) s += r;
    return s;
}

std::string QuasiState::str() const {
    std::string out(size_t(runs[0]), '0');
    for (size_t j = 0; j < ids.size(); ++j) {
        out += 'i';
        out += std::string(size_t(runs[j + 1]), '0');
    }
    out += std::string(size_t(ones_suffix), '1');
    return out;
}

// ---------- indicator phase ----------

IndicatorResult run_indicator_phase(long k, BitFeed& feed, PhaseTrace* trace, long t0) {
    IndicatorResult r;
    r.k = k;
    std::vector<char> syms; // '0' or 'i', in read order
    long ones = 0;
    while (ones < k) {
        int c = feed.next();
        if (c < 0) {
            r.exhausted = true;
            break;
        }
        if (c == 0) {
            syms.push_back('0');
            ++r.X;
        } else {
            r.ones_ofs.push_back(r.consumed);
            r.fate.push_back(Fate::Pending);
            syms.push_back('i');
            ++ones;
        }
        ++r.consumed;
        if (trace) {
            std::string w(size_t(k - ones), '1');
            w.append(syms.begin(), syms.end());
            trace->entries.push_back({t0 + r.consumed, 'I', w, -1});
        }
    }

    // An indicator survives only if a zero immediately follows it; the one
    // read last never does.  Fates of the deleted ones are fixed as matches.
    std::vector<size_t> surv;
    {
        size_t j = 0;
        for (size_t p = 0; p < syms.size(); ++p) {
            if (syms[p] != 'i') continue;
            bool keep = !r.exhausted && p + 1 < syms.size() && syms[p + 1] == '0';
            if (keep)
                surv.push_back(p);
            else
                r.fate[j] = Fate::Del;
            ++j;
        }
    }
    for (size_t p = 0; p < syms.size(); ++p) {
        if (syms[p] == '0')
            r.wprime += '0';
        else if (std::binary_search(surv.begin(), surv.end(), p))
            r.wprime += 'i';
    }
    // dropping the leftmost survivor guarantees the state starts with a zero
    if (!surv.empty()) {
        size_t j = 0, del = surv.front();
        for (size_t p = 0; p < syms.size(); ++p) {
            if (syms[p] != 'i') continue;
            if (p == del) r.fate[j] = Fate::Del;
            ++j;
        }
        surv.erase(surv.begin());
    }
    r.M = long(surv.size());

    r.state = QuasiState{};
    size_t si = 0, j = 0;
    for (size_t p = 0; p < syms.size(); ++p) {
        if (syms[p] == '0') {
            ++r.state.runs.back();
        } else {
            if (si < surv.size() && surv[si] == p) {
                r.state.ids.push_back(int(j));
                r.state.runs.push_back(0);
                ++si;
            }
            ++j;
        }
    }
    return r;
}

// ---------- turnover phase ----------

TurnoverResult run_turnover_phase(BitFeed& feed) {
    TurnoverResult r;
    for (;;) {
        int c = feed.next();
        if (c < 0) {
            r.exhausted = true;
            return r;
        }
        if (c == 1) {
            r.ones_ofs.push_back(r.consumed);
            ++r.Z;
            ++r.consumed;
        } else {
            r.zero_ofs = r.consumed;
            ++r.consumed;
            break;
        }
    }
    r.plain_end = (r.Z == 0);
    return r;
}

// ---------- activation phase ----------

ActivationResult run_activation_phase(QuasiState& st, std::vector<Fate>& fate, long z,
                                      long zeros_needed, BitFeed& feed, PhaseTrace* trace,
                                      long t0) {
    ActivationResult r;
    long zeros_done = 0;
    while (zeros_done < zeros_needed) {
        int c = feed.next();
        if (c < 0) {
            r.exhausted = true;
            break;
        }
        if (c == 0) {
            // leading indicators resolve as matches, exposing a zero head
            while (st.runs[0] == 0 && !st.ids.empty()) {
                fate[size_t(st.ids.front())] = Fate::Del;
                st.ids.erase(st.ids.begin());
                st.runs.erase(st.runs.begin());
            }
            assert(st.runs[0] > 0);
            --st.runs[0];
            ++zeros_done;
            r.match_ofs.push_back(r.consumed);
        } else {
            ++r.Y;
            if (st.runs[0] == 0 && !st.ids.empty() && r.C3 < z) {
                // the head indicator becomes a separator and is matched
                fate[size_t(st.ids.front())] = Fate::Sep;
                st.ids.erase(st.ids.begin());
                st.runs.erase(st.runs.begin());
                ++r.C3;
                r.match_ofs.push_back(r.consumed);
            } else {
                ++st.ones_suffix;
            }
        }
        ++r.consumed;
        if (trace) trace->entries.push_back({t0 + r.consumed, 'A', st.str(), z - r.C3});
    }
    if (!r.exhausted) assert(st.ids.empty() && st.zeros() == 0);
    r.final_ones = r.Y + z - 2 * r.C3;
    return r;
}

// ---------- full cycle ----------

CycleDelta boosted_cycle(long k, BitFeed& feed, std::vector<Move>* moves, PhaseTrace* trace,
                         long t0) {
    if (k < 1) throw std::invalid_argument("boosted_cycle: need k >= 1");
    CycleDelta d;
    d.k = k;

    IndicatorResult ind = run_indicator_phase(k, feed, trace, t0);
    d.X = ind.X;
    d.M = ind.M;
    long t1 = ind.consumed;

    auto emit_indicator = [&]() {
        if (!moves) return;
        size_t j = 0;
        for (long o = 0; o < ind.consumed; ++o) {
            if (j < ind.ones_ofs.size() && ind.ones_ofs[j] == o) {
                moves->push_back(ind.fate[j] == Fate::Sep ? Move::Append : Move::Match);
                ++j;
            } else {
                moves->push_back(Move::Append);
            }
        }
    };

    if (ind.exhausted) {
        for (auto& f : ind.fate)
            if (f == Fate::Pending) f = Fate::Del;
        emit_indicator();
        d.end = CycleEnd::Exhausted;
        d.Tstar = t1;
        d.Xstar = (k - long(ind.ones_ofs.size())) + ind.X;
        return d;
    }
    if (ind.X == 0) {
        // every one matched a leading 1 and nothing was appended
        emit_indicator();
        d.end = CycleEnd::Indicator;
        d.Tstar = t1;
        d.Xstar = 0;
        return d;
    }

    TurnoverResult tn = run_turnover_phase(feed);
    d.Z = tn.Z;
    if (trace) {
        for (long j = 0; j < tn.Z; ++j)
            trace->entries.push_back({t0 + t1 + j + 1, 'T', ind.state.str(), j + 1});
    }

    auto emit_turnover = [&](long c3) {
        if (!moves) return;
        for (long o = 0; o < tn.consumed; ++o) {
            if (o == tn.zero_ofs)
                moves->push_back(Move::Match);
            else
                moves->push_back(o < c3 ? Move::Match : Move::Append);
        }
    };

    if (tn.exhausted) {
        for (auto& f : ind.fate)
            if (f == Fate::Pending) f = Fate::Del;
        emit_indicator();
        emit_turnover(0);
        d.end = CycleEnd::Exhausted;
        d.Tstar = t1 + tn.consumed;
        d.Xstar = ind.X + tn.Z;
        return d;
    }
    if (tn.plain_end) {
        // the zero matches the head of the state; all pendings are matches
        for (auto& f : ind.fate)
            if (f == Fate::Pending) f = Fate::Del;
        emit_indicator();
        emit_turnover(0);
        if (trace)
            trace->entries.push_back(
                {t0 + t1 + 1, 'T', std::string(size_t(ind.X - 1), '0'), 0});
        d.end = CycleEnd::Turnover;
        d.Tstar = t1 + tn.consumed;
        d.Xstar = ind.X - 1;
        d.side_flips = true;
        return d;
    }

    QuasiState st = ind.state;
    assert(st.runs[0] >= 1);
    --st.runs[0]; // the turnover zero matched the state's leading zero
    if (trace)
        trace->entries.push_back({t0 + t1 + tn.consumed, 'T', st.str(), tn.Z});
    long zeros_needed = ind.X - 1;
    assert(st.zeros() == zeros_needed);

    ActivationResult act =
        run_activation_phase(st, ind.fate, tn.Z, zeros_needed, feed, trace, t0 + t1 + tn.consumed);
    d.Y = act.Y;
    d.C3 = act.C3;

    auto emit_activation = [&]() {
        if (!moves) return;
        size_t j = 0;
        for (long o = 0; o < act.consumed; ++o) {
            if (j < act.match_ofs.size() && act.match_ofs[j] == o) {
                moves->push_back(Move::Match);
                ++j;
            } else {
                moves->push_back(Move::Append);
            }
        }
    };

    if (act.exhausted) {
        for (auto& f : ind.fate)
            if (f == Fate::Pending) f = Fate::Del;
        emit_indicator();
        emit_turnover(act.C3);
        emit_activation();
        d.end = CycleEnd::Exhausted;
        d.Tstar = t1 + tn.consumed + act.consumed;
        d.Xstar = st.zeros() + st.ones_suffix + (tn.Z - act.C3);
        return d;
    }

    emit_indicator();
    emit_turnover(act.C3);
    emit_activation();
    d.end = CycleEnd::Activation;
    d.Tstar = t1 + tn.consumed + act.consumed;
    d.Xstar = act.Y - 2 * act.C3 + tn.Z;
    assert(d.Tstar == (k + ind.X) + (tn.Z + 1) + (ind.X - 1 + act.Y));
    assert(d.Xstar == act.final_ones);
#ifndef NDEBUG
    for (auto f : ind.fate) assert(f != Fate::Pending);
#endif
    return d;
}

// ---------- iterated runs ----------

BoostedRun run_boosted(const Bits& s, std::vector<Move>* moves) {
    BoostedRun run;
    long n = long(s.size());
    long T = 0, X = 0, m = 0;
    int side = 1;
    while (T < n) {
        if (X == 0) {
            side = s[size_t(T)];
            if (moves) moves->push_back(Move::Append);
            X = 1;
            ++T;
            continue;
        }
        BitFeed feed = BitFeed::of(s, size_t(T), side == 0 ? 1 : 0);
        CycleDelta d = boosted_cycle(X, feed, moves);
        if (d.end == CycleEnd::Exhausted) {
            run.exhausted_mid_cycle = true;
            run.T = T;
            run.X = X;
            run.side = side;
            run.final_len = d.Xstar;
            return run;
        }
        T += d.Tstar;
        X = d.Xstar;
        if (d.side_flips) side ^= 1;
        run.records.push_back({++m, X, T, d.end, side});
    }
    run.T = T;
    run.X = X;
    run.side = side;
    run.final_len = X;
    return run;
}

long cycles_completed_by(const std::vector<CycleRecord>& records, long t) {
    long best = -1;
    for (const auto& r : records) {
        if (r.T > t) break;
        best = r.m;
    }
    return best;
}

// ---------- constructive partitioner ----------

namespace {

// Path-reconstructing exact buffer-set DP: find a move sequence that empties
// `start` over s[T0..n).  Returns the moves, or nothing with `why` set.
std::optional<std::vector<Move>> tail_dp(const Bits& s, long T0, const Word& start,
                                         const PartitionerOptions& opt, PartitionFailure& why) {
    long n = long(s.size());
    long rem0 = n - T0;
    if (long(start.len) > rem0 || (rem0 - long(start.len)) % 2 != 0) {
        why = PartitionFailure::TailUnreachable;
        return std::nullopt;
    }

    using Level = std::unordered_map<uint64_t, std::pair<uint64_t, Move>>;
    std::vector<Level> lv(size_t(rem0) + 1);
    lv[0].emplace(start.key(), std::make_pair(uint64_t(0), Move::Append));
    for (long t = 0; t < rem0; ++t) {
        int c = s[size_t(T0 + t)];
        long rem_after = rem0 - t - 1;
        Level& next = lv[size_t(t) + 1];
        for (const auto& [key, back] : lv[size_t(t)]) {
            (void)back;
            Word w = Word::from_key(key);
            if (w.len > 0 && w.head() == c)
                next.emplace(w.tail().key(), std::make_pair(key, Move::Match));
            if (long(w.len) + 1 <= rem_after && w.len < Word::max_len)
                next.emplace(w.append(c).key(), std::make_pair(key, Move::Append));
        }
        if (next.empty()) {
            why = PartitionFailure::TailUnreachable;
            return std::nullopt;
        }
        if (next.size() > opt.level_cap) {
            why = PartitionFailure::ResourceLimit;
            return std::nullopt;
        }
    }
    uint64_t cur = Word().key();
    if (!lv[size_t(rem0)].count(cur)) {
        why = PartitionFailure::TailUnreachable;
        return std::nullopt;
    }
    std::vector<Move> mv(size_t(rem0), Move::Append);
    for (long t = rem0; t > 0; --t) {
        const auto& [prev, move] = lv[size_t(t)].at(cur);
        mv[size_t(t) - 1] = move;
        cur = prev;
    }
    return mv;
}

} // namespace

PartitionResult constructive_partition(const Bits& s, const PartitionerOptions& opt) {
    auto t_start = std::chrono::steady_clock::now();
    PartitionResult res;
    auto finish = [&]() {
        res.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               t_start)
                         .count();
        return res;
    };

    long n = long(s.size());
    long ones = 0;
    for (uint8_t c : s) ones += c;
    if (n % 2 != 0 || ones % 2 != 0) {
        res.failure = PartitionFailure::OddCounts;
        return finish();
    }
    if (n == 0) {
        res.success = true;
        res.verified = true;
        return finish();
    }

    // The committed thread is cut at n - tail_window and the exact DP takes
    // over from the cut buffer.  Completability is monotone along a committed
    // thread (the committed move itself witnesses one completion step), so
    // scanning later cut positions on the same thread can never succeed when
    // the first one fails; a single cut loses nothing.
    long window = std::min(std::max<long>(opt.tail_window, 0), std::min<long>(n, Word::max_len));
    long cut = n - window;

    std::vector<Move> mv;
    Word start;
    if (cut > 0) {
        std::vector<Move> all;
        BoostedRun run = run_boosted(s, &all);
        assert(long(all.size()) == n);
        long done = cycles_completed_by(run.records, cut);
        res.cycles = done < 0 ? 0 : done;
        // replay the committed thread up to the cut; its length can exceed a
        // machine word mid-run, so use a plain queue
        std::deque<uint8_t> buf;
        for (long t = 0; t < cut; ++t) {
            if (all[size_t(t)] == Move::Append) {
                buf.push_back(s[size_t(t)]);
            } else {
                assert(!buf.empty() && buf.front() == s[size_t(t)]);
                buf.pop_front();
            }
        }
        res.tail_len = window;
        if (long(buf.size()) > window) {
            res.failure = PartitionFailure::TailUnreachable;
            return finish();
        }
        for (uint8_t c : buf) start = start.append(c);
        mv.assign(all.begin(), all.begin() + cut);
    } else {
        res.tail_len = n;
    }

    PartitionFailure why = PartitionFailure::TailUnreachable;
    auto tail = tail_dp(s, cut, start, opt, why);
    if (!tail) {
        res.failure = why;
        return finish();
    }
    mv.insert(mv.end(), tail->begin(), tail->end());

    for (size_t i = 0; i < mv.size(); ++i)
        (mv[i] == Move::Append ? res.a1 : res.a2).push_back(uint32_t(i + 1));
    bool ok = res.a1.size() == res.a2.size();
    for (size_t i = 0; ok && i < res.a1.size(); ++i)
        ok = s[res.a1[i] - 1] == s[res.a2[i] - 1];
    res.verified = ok;
    res.success = ok;
    res.failure = ok ? PartitionFailure::None : PartitionFailure::TailUnreachable;
    return finish();
}

// ---------- distribution validators ----------

CycleStats boosted_cycle_stats(long k, long cycles, uint64_t seed) {
    CycleStats st;
    st.k = k;
    st.cycles = cycles;
    RngStream rng(seed, 0xc1c1e);
    BitFeed feed = BitFeed::of(rng);
    double sd = 0, sdd = 0;
    long nlong = 0, nfar = 0;
    for (long i = 0; i < cycles; ++i) {
        CycleDelta d = boosted_cycle(k, feed);
        double drift = double(d.Xstar - k);
        sd += drift;
        sdd += drift * drift;
        if (double(d.Tstar) >= 4.5 * double(k)) ++nlong;
        if (std::abs(drift) >= 0.5 * double(k)) ++nfar;
    }
    st.mean_drift = sd / double(cycles);
    st.mean_sq_drift = sdd / double(cycles);
    st.p_long = double(nlong) / double(cycles);
    st.p_far = double(nfar) / double(cycles);
    return st;
}

std::vector<MomentCheck> validate_claims(long k, long samples, uint64_t seed) {
    RngStream rng(seed, 0xc1a1);
    BitFeed feed = BitFeed::of(rng);
    double s1 = 0, q1 = 0, s2 = 0, q2 = 0, s3 = 0, q3 = 0, s4 = 0, q4 = 0;
    for (long i = 0; i < samples; ++i) {
        CycleDelta d = boosted_cycle(k, feed);
        long Z, Y, C3;
        if (d.X == 0) {
            // the turnover never ran; its variable is an independent draw
            Z = rng.geometric_half();
            Y = 0;
            C3 = 0;
        } else {
            Z = d.Z;
            Y = d.Y;
            C3 = d.C3;
        }
        double v1 = Z > 0 ? double(Y - Z) : 0.0;
        double dv = double(Y - Z - k);
        double v2 = Z > 0 ? dv * dv : 0.0;
        double v3 = (d.X > 0 && Z > 0) ? double(Z - C3) : 0.0;
        double v4 = v3 * v3;
        s1 += v1;
        q1 += v1 * v1;
        s2 += v2;
        q2 += v2 * v2;
        s3 += v3;
        q3 += v3 * v3;
        s4 += v4;
        q4 += v4 * v4;
    }
    double N = double(samples);
    auto mk = [&](std::string name, double sum, double sumsq, double target, bool eq) {
        MomentCheck c;
        c.name = std::move(name);
        c.sample = sum / N;
        double var = std::max(0.0, sumsq / N - c.sample * c.sample);
        c.stderr_ = std::sqrt(var / N);
        c.target = target;
        c.equality = eq;
        c.pass = eq ? std::abs(c.sample - target) <= 4 * c.stderr_
                    : c.sample <= target + 4 * c.stderr_;
        return c;
    };
    double pw = std::pow(7.0 / 8.0, double(k - 1));
    std::vector<MomentCheck> out;
    out.push_back(mk("E[(Y-Z)1{Z>0}]", s1, q1, 0.5 * (double(k) - 3.0 + std::pow(2.0, -double(k))), true));
    out.push_back(mk("E[(Y-Z-k)^2 1{Z>0}]", s2, q2, 4.0 * double(k) + 9.0, false));
    out.push_back(mk("E[C']", s3, q3, 2.0 * pw, false));
    out.push_back(mk("E[C'^2]", s4, q4, 6.0 * pw, false));
    return out;
}

} // namespace shufsq

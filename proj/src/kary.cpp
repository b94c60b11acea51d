#include "shufsq/kary.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace shufsq {

KWord parse_kword(const std::string& s, int k) {
    if (k < 1 || k > 15) throw std::invalid_argument("parse_kword: k out of range");
    KWord w;
    if (k <= 10) {
        for (char ch : s) {
            if (ch < '0' || ch > '9' || ch - '0' >= k)
                throw std::invalid_argument("parse_kword: bad letter");
            w.push_back(uint8_t(ch - '0'));
        }
        return w;
    }
    size_t p = 0;
    while (p < s.size()) {
        size_t q = s.find(',', p);
        if (q == std::string::npos) q = s.size();
        int v = std::stoi(s.substr(p, q - p));
        if (v < 0 || v >= k) throw std::invalid_argument("parse_kword: bad letter");
        w.push_back(uint8_t(v));
        p = q + 1;
    }
    return w;
}

std::string kword_str(const KWord& w) {
    bool digits = std::all_of(w.begin(), w.end(), [](uint8_t c) { return c <= 9; });
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (!digits && i) out += ',';
        out += std::to_string(int(w[i]));
    }
    return out;
}

// ---------- exact k-ary buffer sets ----------

namespace {

int key_bitlen(KarySets::Key x) {
    uint64_t hi = uint64_t(x >> 64);
    if (hi) return 128 - std::countl_zero(hi);
    return 64 - std::countl_zero(uint64_t(x));
}

inline int key_len(KarySets::Key x) { return (key_bitlen(x) - 1) / 4; }

} // namespace

KarySets::Key KarySets::key(const KWord& w) {
    if (w.size() > max_len) throw std::length_error("KarySets::key: word too long");
    Key k = 1;
    for (uint8_t c : w) k = (k << 4) | Key(c);
    return k;
}

size_t KarySets::KeyHash::operator()(Key k) const {
    uint64_t lo = uint64_t(k), hi = uint64_t(k >> 64);
    return size_t(splitmix64(lo ^ (hi * 0x9e3779b97f4a7c15ull)));
}

KarySets::Set KarySets::step(const Set& prev, int c, int max_store) {
    Set out;
    out.reserve(prev.size() * 2);
    int cap = std::min(max_store, int(max_len));
    for (Key k : prev) {
        int len = key_len(k);
        if (len + 1 <= cap) out.insert((k << 4) | Key(c));
        if (len > 0) {
            int head = int((k >> (4 * (len - 1))) & 15);
            if (head == c) {
                Key low = Key(1) << (4 * (len - 1));
                out.insert((k & (low - 1)) | low);
            }
        }
    }
    return out;
}

bool kary_recognize(const KWord& s, int k) {
    (void)k;
    size_t n = s.size();
    if (n % 2) return false;
    if (n > 2 * KarySets::max_len) throw std::length_error("kary_recognize: word too long");
    KarySets::Set cur{KarySets::Key(1)};
    for (size_t t = 0; t < n; ++t) {
        cur = KarySets::step(cur, s[t], int(n - t - 1));
        if (cur.empty()) return false;
    }
    return cur.count(KarySets::Key(1)) != 0;
}

// ---------- exact counting ----------

namespace {

void count_walk(int k, int n2, int depth, const KarySets::Set& cur, std::vector<long>& mult,
                uint64_t& cnt) {
    if (depth == n2) {
        if (cur.count(KarySets::Key(1))) {
            for (long m : mult)
                if (m % 2) throw std::logic_error("count_shuffle_squares: odd multiplicity");
            ++cnt;
        }
        return;
    }
    for (int c = 0; c < k; ++c) {
        KarySets::Set next = KarySets::step(cur, c, n2 - depth - 1);
        if (next.empty()) continue;
        ++mult[size_t(c)];
        count_walk(k, n2, depth + 1, next, mult, cnt);
        --mult[size_t(c)];
    }
}

uint64_t catalan(int n) {
    // C(2n, n)/(n+1), exact for n <= 30
    unsigned long long c = 1;
    for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}

} // namespace

KaryCount count_shuffle_squares(int k, int n, uint64_t budget) {
    KaryCount res;
    if (k < 1 || n < 0) throw std::invalid_argument("count_shuffle_squares: bad arguments");
    long double total = 1;
    for (int i = 0; i < 2 * n; ++i) total *= k;
    if (total > (long double)budget) {
        res.too_large = true;
        return res;
    }
    std::vector<long> mult(size_t(k), 0);
    KarySets::Set b0{KarySets::Key(1)};
    count_walk(k, 2 * n, 0, b0, mult, res.count);

    uint64_t lb = catalan(n);
    for (int i = 0; i < n; ++i) lb *= uint64_t(k - 1);
    if (res.count < lb) throw std::logic_error("count_shuffle_squares: lower bound violated");
    return res;
}

KWord kary_greedy_step(const KWord& b, int c) {
    KWord out = b;
    if (!out.empty() && out.front() == c) {
        out.erase(out.begin());
    } else {
        out.push_back(uint8_t(c));
    }
    return out;
}

// ---------- paired-indicator boosted step ----------

void KaryBoosted::after_match(int a) {
    assert(!pending());
    if (!w.empty() && w.front().plain() && int(w.front().letter) != a) {
        pend_a = a;
        pend_b = w.front().letter;
        pend_tau = t;
        pend_pos = w.size();
        pend_run = 0;
    }
}

void KaryBoosted::step(int c) {
    ++t;
    if (pending()) {
        if (c == pend_b) {
            // the construction fails and the letter is an ordinary head match
            int b = pend_b;
            reset_pending();
            w.erase(w.begin());
            after_match(b);
        } else if (c == pend_a) {
            if (pend_run >= 1) {
                KSym sym{uint8_t(pend_a), int32_t(pend_tau)};
                w.insert(w.begin() + long(pend_pos), sym);
                w.push_back(sym);
            } else {
                w.push_back(KSym{uint8_t(c), -1});
            }
            reset_pending();
        } else {
            w.push_back(KSym{uint8_t(c), -1});
            ++pend_run;
        }
    } else if (w.empty()) {
        w.push_back(KSym{uint8_t(c), -1});
    } else if (w.front().plain()) {
        if (int(w.front().letter) == c) {
            w.erase(w.begin());
            after_match(c);
        } else {
            w.push_back(KSym{uint8_t(c), -1});
        }
    } else {
        // indicator head (a,tau); the symbol after it is always plain
        KSym head = w.front();
        int a = head.letter;
        if (c == a) {
            // resolve keeping the head as a plain a, which this letter matches
            w.erase(w.begin());
            for (auto it = w.begin(); it != w.end(); ++it)
                if (!it->plain() && it->tau == head.tau) {
                    w.erase(it);
                    break;
                }
            after_match(a);
        } else if (w.size() >= 2 && w[1].plain() && int(w[1].letter) == c) {
            // resolve deleting the head; the exposed plain letter matches and
            // the partner commits to a plain a
            w.erase(w.begin());
            w.erase(w.begin());
            for (auto& s : w)
                if (!s.plain() && s.tau == head.tau) {
                    s.tau = -1;
                    break;
                }
            after_match(c);
        } else {
            w.push_back(KSym{uint8_t(c), -1});
        }
    }
#ifndef NDEBUG
    std::unordered_map<int32_t, int> seen;
    for (const auto& s : w)
        if (!s.plain()) ++seen[s.tau];
    for (const auto& [tau, cnt] : seen) {
        (void)tau;
        assert(cnt == 2);
    }
#endif
}

long KaryBoosted::pairs() const {
    long halves = 0;
    for (const auto& s : w)
        if (!s.plain()) ++halves;
    return halves / 2;
}

std::string KaryBoosted::str() const {
    std::string sep = k <= 10 ? "" : ",";
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += sep;
        if (w[i].plain())
            out += std::to_string(int(w[i].letter));
        else
            out += "(" + std::to_string(int(w[i].letter)) + "@" + std::to_string(w[i].tau) + ")";
    }
    return out;
}

std::vector<KWord> KaryBoosted::resolutions(size_t limit) const {
    std::vector<int32_t> taus;
    for (const auto& s : w)
        if (!s.plain() && std::find(taus.begin(), taus.end(), s.tau) == taus.end())
            taus.push_back(s.tau);
    size_t total = taus.size() < 60 ? (size_t(1) << taus.size()) : limit;
    if (total > limit) total = limit;
    std::vector<KWord> out;
    out.reserve(total);
    for (size_t mask = 0; mask < total; ++mask) {
        KWord r;
        std::vector<int> occ(taus.size(), 0);
        for (const auto& s : w) {
            if (s.plain()) {
                r.push_back(s.letter);
                continue;
            }
            size_t j = size_t(std::find(taus.begin(), taus.end(), s.tau) - taus.begin());
            if (occ[j]++ == int((mask >> j) & 1)) r.push_back(s.letter);
        }
        out.push_back(std::move(r));
    }
    return out;
}

bool kary_boosted_sound(const KWord& s, int k) {
    if (s.size() > KarySets::max_len)
        throw std::length_error("kary_boosted_sound: word too long for exact sets");
    KaryBoosted m(k);
    KarySets::Set cur{KarySets::Key(1)};
    for (uint8_t c : s) {
        m.step(c);
        cur = KarySets::step(cur, c, KarySets::max_len);
        for (const auto& r : m.resolutions())
            if (!cur.count(KarySets::key(r))) return false;
    }
    return true;
}

KWord sample_biased_word(int k, int n, double bias, RngStream& rng, KaryBoosted* machine) {
    KaryBoosted local(k);
    KaryBoosted* m = machine ? machine : &local;
    KWord out;
    out.reserve(size_t(n));
    for (int i = 0; i < n; ++i) {
        int c = -1;
        if (m->pending() && rng.uniform01() < bias) {
            if (m->pend_run >= 1) {
                c = m->pend_a;
            } else if (k > 2) {
                // open the run with a letter outside {a, b}
                int r = int(rng.below(uint64_t(k - 2)));
                for (int v = 0; v < k; ++v) {
                    if (v == m->pend_a || v == m->pend_b) continue;
                    if (r-- == 0) {
                        c = v;
                        break;
                    }
                }
            }
        }
        if (c < 0) c = int(rng.below(uint64_t(k)));
        m->step(c);
        out.push_back(uint8_t(c));
    }
    return out;
}

// ---------- growth-rate inequality ----------

std::optional<double> alpha_bound(int k, double b) {
    if (k < 2) throw std::invalid_argument("alpha_bound: k must be >= 2");
    if (b <= 0) b = std::sqrt(double(k)) + std::sqrt(double(k - 1));
    double kk = double(k);
    auto f = [&](double a) {
        return a * std::log(b / (a * kk)) + (1 - a) * std::log((kk - 1) / (kk * (1 - a)));
    };
    double lo = 2.0 / kk, hi = 1.0;
    if (lo >= hi) return std::nullopt;
    const int N = 100000;
    double left = lo, neg = 0;
    bool found = false;
    for (int i = 1; i <= N; ++i) {
        double x = lo + (hi - lo) * double(i) / double(N + 1);
        if (f(x) < 0) {
            neg = x;
            found = true;
            break;
        }
        left = x;
    }
    if (!found) return std::nullopt;
    while (neg - left > 1e-9) {
        double mid = 0.5 * (neg + left);
        if (f(mid) < 0)
            neg = mid;
        else
            left = mid;
    }
    return neg;
}

} // namespace shufsq

#include "shufsq/qtable.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace shufsq {

namespace {

// triangular layout shared by both tables: row a holds b = 0..L-a
std::vector<size_t> make_rowstart(int L, size_t& total) {
    std::vector<size_t> rs(size_t(L) + 1, 0);
    size_t acc = 0;
    for (int a = 1; a <= L; ++a) {
        rs[size_t(a)] = acc;
        acc += size_t(L - a + 1);
    }
    total = acc;
    return rs;
}

} // namespace

QTableExact::QTableExact(int L) : L_(L) {
    if (L < 1) throw std::invalid_argument("QTableExact: L must be >= 1");
    size_t total = 0;
    rowstart_ = make_rowstart(L, total);
    cur_.assign(total, mpz_class(0));
    nxt_.assign(total, mpz_class(0));
    eps_ = 1;
    lost_ = 0;
}

void QTableExact::step() {
    int tn = t_ + 1;
    int reach = std::min(L_, tn);
    auto get = [&](int a, int b) -> const mpz_class& {
        static const mpz_class zero(0);
        if (a + b > L_) return zero;
        return cur_[idx(a, b)];
    };
    for (int a = 1; a <= reach; ++a) {
        int hi = reach - a;
        // only shapes with a+b == tn (mod 2) carry mass; the rest stay zero
        int b0 = ((tn - a) % 2 + 2) % 2;
        if (b0 == 0) {
            if (a == 1)
                nxt_[idx(1, 0)] = eps_ + get(2, 0) + get(1, 1);
            else
                nxt_[idx(a, 0)] = get(a + 1, 0) + get(1, a);
            b0 = 2;
        }
        for (int b = b0; b <= hi; b += 2)
            nxt_[idx(a, b)] = cur_[idx(a, b - 1)] + get(a + 1, b);
    }
    // append-half of every level-L shape flows out of the tracked window
    mpz_class out(0);
    if (L_ <= t_)
        for (int a = 1; a <= L_; ++a) out += cur_[idx(a, L_ - a)];
    lost_ = 2 * lost_ + out;
    eps_ = 2 * cur_[idx(1, 0)];
    std::swap(cur_, nxt_);
    t_ = tn;
}

mpz_class QTableExact::level_num(int k) const {
    mpz_class s(0);
    if (k < 1 || k > L_) return s;
    for (int a = 1; a <= k; ++a) s += cur_[idx(a, k - a)];
    return s;
}

bool QTableExact::conserved() const {
    mpz_class total = eps_ + 2 * lost_;
    for (const auto& v : cur_) total += 2 * v;
    mpz_class pow2;
    mpz_ui_pow_ui(pow2.get_mpz_t(), 2, static_cast<unsigned long>(t_));
    return total == pow2;
}

QTableD::QTableD(int L) : L_(L) {
    if (L < 1) throw std::invalid_argument("QTableD: L must be >= 1");
    size_t total = 0;
    rowstart_ = make_rowstart(L, total);
    cur_.assign(total, 0.0);
    nxt_.assign(total, 0.0);
}

void QTableD::step() {
    int tn = t_ + 1;
    int reach = std::min(L_, tn);
    const double* c = cur_.data();
    double* nx = nxt_.data();
    auto get = [&](int a, int b) -> double {
        return (a + b > L_) ? 0.0 : c[idx(a, b)];
    };
    for (int a = 1; a <= reach; ++a) {
        int hi = reach - a;
        int b0 = ((tn - a) % 2 + 2) % 2;
        size_t row = rowstart_[size_t(a)];
        if (b0 == 0) {
            if (a == 1)
                nx[row] = 0.5 * (eps_ + get(2, 0) + get(1, 1));
            else
                nx[row] = 0.5 * (get(a + 1, 0) + get(1, a));
            b0 = 2;
        }
        if (a + 1 <= L_) {
            size_t up = rowstart_[size_t(a + 1)];
            int cap = std::min(hi, L_ - a - 1);
            int b = b0;
            for (; b <= cap; b += 2) nx[row + size_t(b)] = 0.5 * (c[row + size_t(b) - 1] + c[up + size_t(b)]);
            for (; b <= hi; b += 2) nx[row + size_t(b)] = 0.5 * c[row + size_t(b) - 1];
        } else {
            for (int b = b0; b <= hi; b += 2) nx[row + size_t(b)] = 0.5 * c[row + size_t(b) - 1];
        }
    }
    if (L_ <= t_) {
        double out = 0.0;
        for (int a = 1; a <= L_; ++a) out += c[idx(a, L_ - a)];
        lost_ += 0.5 * out;
    }
    eps_ = c[idx(1, 0)];
    std::swap(cur_, nxt_);
    t_ = tn;
}

double QTableD::level_mass(int k) const {
    if (k < 1 || k > L_) return 0.0;
    double s = 0.0;
    for (int a = 1; a <= k; ++a) s += cur_[idx(a, k - a)];
    return 2.0 * s;
}

long qtable_check_closed_forms(int t_max) {
    QTableExact qt(t_max);
    std::vector<mpz_class> binom{mpz_class(1)}; // row t of Pascal's triangle
    for (int t = 1; t <= t_max; ++t) {
        qt.step();
        binom.push_back(0);
        for (size_t j = binom.size() - 1; j >= 1; --j) binom[j] += binom[j - 1];
        if (!qt.conserved()) return -t;
        if (t % 2 == 0 && qt.eps_num() != binom[size_t(t / 2)]) return -t;
        for (int k = 1 + (t % 2 == 0 ? 1 : 0); k <= t; k += 2)
            if (qt.level_num(k) != binom[size_t((t + k) / 2)]) return -t;
    }
    return t_max;
}

long qtable_check_monotone(int t_max) {
    QTableExact qt(t_max + 2);
    for (int t = 1; t <= t_max; ++t) {
        qt.step();
        // chain down the zero-b spine: q(a,0) >= q(1,a+1), with eps at a = 0
        if (qt.eps_num() < qt.num(1, 1)) return -t;
        for (int a = 1; a <= t; ++a)
            if (qt.num(a, 0) < qt.num(1, a + 1)) return -t;
        // diagonal: q(a+1,b+1) >= q(a+2,b)
        for (int a = 0; a + 2 <= t; ++a)
            for (int b = 0; a + 2 + b <= t; ++b)
                if (qt.num(a + 1, b + 1) < qt.num(a + 2, b)) return -t;
        // level pinch for every shape at level k >= 3
        for (int k = 3; k <= t; ++k) {
            mpz_class lo = qt.level_num(k - 2), hi = qt.level_num(k + 2);
            for (int a = 1; a <= k; ++a) {
                const mpz_class& v = qt.num(a, k - a);
                if (v * (k - 2) > lo) return -t;
                if (v * (k + 2) < hi) return -t;
            }
        }
    }
    return t_max;
}

CEstimate estimate_c(int a, int b, long t_max, int L) {
    if (a < 1 || b < 0) throw std::invalid_argument("estimate_c: need a >= 1, b >= 0");
    long len = a + b;
    if (t_max < 8 || t_max / 2 < len)
        throw std::invalid_argument("estimate_c: t_max too small for this shape");
    if (L == 0) L = int(std::ceil(6.4 * std::sqrt(2.0 * double(t_max))));
    if (L < len + 2) L = int(len) + 2;

    CEstimate est;
    est.L = L;
    est.ts = {t_max / 4, t_max / 2, t_max};

    QTableD qt(L);
    long step = 0;
    auto advance_to = [&](long target) {
        assert(target >= step);
        while (step < target) {
            qt.step();
            ++step;
        }
    };
    for (long t : est.ts) {
        advance_to(2 * t);
        double e = qt.eps();
        advance_to(2 * t + len);
        est.ratios.push_back(qt.q(a, b) / e);
    }
    est.at_tmax = est.ratios.back();
    est.last_delta = est.ratios[2] - est.ratios[1];
    est.lost = qt.lost();

    // least squares for r = c + alpha / sqrt(t)
    double sx = 0, sxx = 0, sy = 0, sxy = 0;
    int n = int(est.ts.size());
    for (int i = 0; i < n; ++i) {
        double x = 1.0 / std::sqrt(double(est.ts[size_t(i)]));
        double y = est.ratios[size_t(i)];
        sx += x;
        sxx += x * x;
        sy += y;
        sxy += x * y;
    }
    double det = n * sxx - sx * sx;
    est.extrapolated = (sy * sxx - sx * sxy) / det;
    return est;
}

} // namespace shufsq

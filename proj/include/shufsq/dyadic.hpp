#pragma once
// Exact dyadic rationals num / 2^exp over GMP integers.
//
// Everything the buffer-set and greedy distributions produce at step t is a
// multiple of 2^-t, so this is closed under the arithmetic we need and keeps
// identity checks exact (no float round-off to reason about).

#include <gmpxx.h>
#include <string>
#include <utility>

namespace shufsq {

struct Dyadic {
    mpz_class num;
    long exp = 0; // value = num / 2^exp, exp >= 0

    Dyadic() : num(0) {}
    Dyadic(long n) : num(n) {}
    Dyadic(mpz_class n, long e) : num(std::move(n)), exp(e) {}

    static Dyadic from_ratio(mpz_class n, long e) { Dyadic d(std::move(n), e); d.normalize(); return d; }

    void normalize() {
        if (num == 0) { exp = 0; return; }
        unsigned long tz = mpz_scan1(num.get_mpz_t(), 0);
        unsigned long k = tz < (unsigned long)exp ? tz : (unsigned long)exp;
        if (k > 0) { num >>= k; exp -= long(k); }
    }

    bool is_zero() const { return num == 0; }

    Dyadic operator+(const Dyadic& o) const {
        long e = exp > o.exp ? exp : o.exp;
        Dyadic r((num << (e - exp)) + (o.num << (e - o.exp)), e);
        r.normalize();
        return r;
    }
    Dyadic operator-(const Dyadic& o) const {
        long e = exp > o.exp ? exp : o.exp;
        Dyadic r((num << (e - exp)) - (o.num << (e - o.exp)), e);
        r.normalize();
        return r;
    }
    Dyadic operator*(const Dyadic& o) const {
        Dyadic r(num * o.num, exp + o.exp);
        r.normalize();
        return r;
    }
    Dyadic half() const { return from_ratio(num, exp + 1); }

    bool operator==(const Dyadic& o) const { return num == o.num && exp == o.exp; }
    bool operator!=(const Dyadic& o) const { return !(*this == o); }
    bool operator<(const Dyadic& o) const {
        long e = exp > o.exp ? exp : o.exp;
        return (num << (e - exp)) < (o.num << (e - o.exp));
    }
    bool operator<=(const Dyadic& o) const { return *this < o || *this == o; }

    double to_double() const {
        mpq_class q(num, mpz_class(1) << exp);
        return q.get_d();
    }
    std::string str() const {
        return num.get_str() + "/2^" + std::to_string(exp);
    }
};

} // namespace shufsq

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shufsq/qtable.hpp"

#include <cmath>
#include <gmpxx.h>

using namespace shufsq;

namespace {

mpz_class binom(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

} // namespace

TEST_CASE("hand-checked numerators for the first five steps") {
    QTableExact q(8);
    q.step(); // t = 1
    CHECK(q.num(1, 0) == 1);
    CHECK(q.eps_num() == 0);

    q.step(); // t = 2
    CHECK(q.eps_num() == 2);
    CHECK(q.num(1, 1) == 1);
    CHECK(q.num(2, 0) == 0);

    q.step(); // t = 3
    CHECK(q.num(1, 0) == 3);
    CHECK(q.num(1, 2) == 1);

    q.step(); // t = 4
    CHECK(q.eps_num() == 6);
    CHECK(q.num(1, 1) == 3);
    CHECK(q.num(2, 0) == 1);
    CHECK(q.num(1, 3) == 1);

    q.step(); // t = 5
    CHECK(q.num(1, 0) == 10);
    CHECK(q.num(3, 0) == 1);
    CHECK(q.num(2, 1) == 1);
    CHECK(q.num(1, 2) == 3);
    CHECK(q.num(1, 4) == 1);
}

TEST_CASE("mass conservation with and without truncation") {
    QTableExact full(40);
    for (int t = 0; t < 40; ++t) {
        full.step();
        REQUIRE(full.conserved());
    }
    CHECK(full.lost_num() == 0);

    QTableExact truncated(6);
    for (int t = 0; t < 40; ++t) {
        truncated.step();
        REQUIRE(truncated.conserved()); // lost bucket participates in the identity
    }
    CHECK(truncated.lost_num() > 0);
}

TEST_CASE("closed forms from independent binomials") {
    QTableExact q(24);
    for (int t = 1; t <= 24; ++t) {
        q.step();
        if (t % 2 == 0) CHECK(q.eps_num() == binom(t, t / 2));
        for (int k = 1; k <= t && k <= 24; ++k) {
            if ((t + k) % 2 != 0) continue;
            CHECK(q.level_num(k) == binom(t, (t + k) / 2));
        }
    }
}

TEST_CASE("closed-form checker covers the requested horizon") {
    CHECK(qtable_check_closed_forms(120) == 120);
}

TEST_CASE("shape monotonicity holds along the table") {
    CHECK(qtable_check_monotone(120) == 120);
}

TEST_CASE("double-precision table tracks the exact one") {
    const int L = 20, T = 20;
    QTableExact ex(L);
    QTableD d(L);
    for (int t = 0; t < T; ++t) {
        ex.step();
        d.step();
    }
    CHECK(std::abs(d.eps() - ex.eps().to_double()) < 1e-12);
    for (int a = 1; a <= L; ++a)
        for (int b = 0; a + b <= L; ++b)
            REQUIRE(std::abs(d.q(a, b) - ex.q(a, b).to_double()) < 1e-12);
    CHECK(std::abs(d.lost() - Dyadic::from_ratio(ex.lost_num(), T).to_double()) < 1e-12);
    for (int k = 1; k <= L; ++k) {
        double want = 2.0 * Dyadic::from_ratio(ex.level_num(k), T).to_double();
        REQUIRE(std::abs(d.level_mass(k) - want) < 1e-12);
    }
}

TEST_CASE("truncation keeps only negligible mass out at the default width") {
    long T = 4000;
    int L = int(std::ceil(6.4 * std::sqrt(2.0 * double(T))));
    QTableD d(L);
    for (long t = 0; t < T; ++t) d.step();
    CHECK(d.lost() < 2e-4);
}

TEST_CASE("ratio extrapolation approaches the known limits") {
    // single letter: the ratio tends to 1
    CEstimate one = estimate_c(1, 0, 4000);
    CHECK(one.ts.size() == 3);
    CHECK(one.ratios.size() == 3);
    CHECK(std::abs(one.extrapolated - 1.0) < 0.02);

    // the two-letter shape: limit is pi^2/6 - 1
    CEstimate c01 = estimate_c(1, 1, 2000);
    CHECK(std::abs(c01.extrapolated - (M_PI * M_PI / 6.0 - 1.0)) < 0.02);
    CHECK(c01.lost < 1e-3);
    CHECK(c01.at_tmax > 0.0);
    // checkpoints increase toward the limit from below for this shape
    CHECK(c01.ratios[0] < c01.ratios[1]);
    CHECK(c01.ratios[1] < c01.ratios[2]);
    CHECK(c01.ratios[2] < 0.66);
}

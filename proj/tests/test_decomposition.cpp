#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shufsq/buffer.hpp"
#include "shufsq/decomposition.hpp"

#include <gmpxx.h>

using namespace shufsq;

TEST_CASE("initialized greedy distribution basics") {
    InitGreedyDist d(parse_word("01"));
    CHECK(d.t() == 0);
    CHECK(d.prob(parse_word("01")) == Dyadic(1));
    CHECK(d.prob(Word()).is_zero());

    d.step();
    CHECK(d.t() == 1);
    // 0 matches the head, 1 appends
    CHECK(d.prob(parse_word("1")) == Dyadic::from_ratio(1, 1));
    CHECK(d.prob(parse_word("011")) == Dyadic::from_ratio(1, 1));

    // numerators always sum to 2^t
    for (int extra = 0; extra < 10; ++extra) d.step();
    mpz_class total = 0;
    for (const auto& [key, n] : d.table()) {
        total += n;
        (void)key;
    }
    CHECK(total == mpz_class(1) << d.t());
}

TEST_CASE("the walk is not reversal-symmetric") {
    // hand-enumerated: 3 of 16 four-letter inputs drive eps to 01,
    // but 4 of 16 drive 01 to eps
    InitGreedyDist from_eps((Word()));
    for (int i = 0; i < 4; ++i) from_eps.step();
    CHECK(from_eps.prob(parse_word("01")) == Dyadic::from_ratio(3, 4));

    InitGreedyDist from_01(parse_word("01"));
    for (int i = 0; i < 4; ++i) from_01.step();
    CHECK(from_01.prob(Word()) == Dyadic::from_ratio(4, 4));
}

TEST_CASE("membership probability splits into greedy plus branch terms") {
    for (int n = 1; n <= 10; ++n) {
        for (const char* vs : {"", "1", "10", "01", "11", "110"}) {
            Word v = parse_word(vs);
            auto rep = verify_decomposition(n, v);
            INFO("n=", n, " v=\"", vs, "\" lhs=", rep.lhs.str(), " rhs=", rep.rhs.str());
            REQUIRE(rep.exact_match);
            REQUIRE(rep.lhs == rep.rhs);
        }
    }
}

TEST_CASE("empty-word membership equals the square density") {
    for (int n = 2; n <= 12; n += 2) {
        auto rep = verify_decomposition(n, Word());
        CHECK(rep.lhs == Dyadic::from_ratio(mpz_class(count_squares(n / 2)), n));
    }
}

TEST_CASE("odd-parity queries carry no mass") {
    // |v| and n of different parity cannot meet
    auto rep = verify_decomposition(5, Word());
    CHECK(rep.lhs.is_zero());
    CHECK(rep.rhs.is_zero());
    CHECK(rep.exact_match);

    auto rep2 = verify_decomposition(4, parse_word("1"));
    CHECK(rep2.lhs.is_zero());
    CHECK(rep2.exact_match);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(verify_decomposition(0, Word()), std::invalid_argument);
    CHECK_THROWS_AS(verify_decomposition(27, Word()), std::invalid_argument);
}

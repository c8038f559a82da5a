#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "zeno/dyadic.hpp"

using zeno::BigInt;
using zeno::DyadicTime;
namespace mp = boost::multiprecision;

namespace {

BigInt random_bigint(std::mt19937_64& rng, unsigned max_bits) {
    std::uniform_int_distribution<unsigned> bits_dist(0, max_bits);
    unsigned bits = bits_dist(rng);
    BigInt value = 0;
    for (unsigned produced = 0; produced < bits; produced += 64) {
        value <<= 64;
        value += rng();
    }
    if (bits > 0) value &= (BigInt(1) << bits) - 1;
    return value;
}

mp::cpp_rational as_rational(const DyadicTime& t) {
    return mp::cpp_rational(t.numerator(), BigInt(1) << t.exponent());
}

}  // namespace

TEST_CASE("construction normalizes") {
    SECTION("zero collapses to 0/2^0") {
        DyadicTime t(std::uint64_t{0}, 5);
        CHECK(t.numerator() == 0);
        CHECK(t.exponent() == 0);
    }
    SECTION("common powers of two cancel") {
        DyadicTime t(std::uint64_t{4}, 3);
        CHECK(t.numerator() == 1);
        CHECK(t.exponent() == 1);
    }
    SECTION("odd numerator is already normalized") {
        DyadicTime t(std::uint64_t{3}, 2);
        CHECK(t.numerator() == 3);
        CHECK(t.exponent() == 2);
    }
    SECTION("negative numerator rejected") {
        CHECK_THROWS_AS(DyadicTime(BigInt(-1), 0), std::invalid_argument);
    }
}

TEST_CASE("normalization is idempotent") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        DyadicTime t(random_bigint(rng, 140), std::uniform_int_distribution<unsigned>(0, 128)(rng));
        DyadicTime again(t.numerator(), t.exponent());
        CHECK(again.numerator() == t.numerator());
        CHECK(again.exponent() == t.exponent());
    }
}

TEST_CASE("addition") {
    DyadicTime half(std::uint64_t{1}, 1);
    DyadicTime quarter(std::uint64_t{1}, 2);

    SECTION("1/2 + 1/4 = 3/4") {
        DyadicTime sum = half + quarter;
        CHECK(sum.numerator() == 3);
        CHECK(sum.exponent() == 2);
    }
    SECTION("additive identity") {
        DyadicTime x(std::uint64_t{13}, 7);
        CHECK(x + DyadicTime::zero() == x);
    }
    SECTION("1/2 + 1/2 renormalizes to 1") {
        CHECK(half + half == DyadicTime::one());
    }
}

TEST_CASE("scalar multiplication by nonnegative integers") {
    DyadicTime three_quarters(std::uint64_t{3}, 2);
    CHECK(three_quarters * 4 == DyadicTime(std::uint64_t{3}, 0));
    CHECK(three_quarters * 0 == DyadicTime::zero());
    CHECK(DyadicTime::quantum(5) * 2 == DyadicTime::quantum(4));
}

TEST_CASE("comparison") {
    CHECK(compare(DyadicTime(std::uint64_t{3}, 2), DyadicTime(std::uint64_t{1}, 1)) ==
          std::strong_ordering::greater);
    CHECK(compare(DyadicTime(std::uint64_t{1}, 1), DyadicTime(std::uint64_t{2}, 2)) ==
          std::strong_ordering::equal);

    // Write-before-read ordering of the cascade: 1 + 3/2^(n+1) < 1 + 2/2^n for
    // every n. Checked both through DyadicTime and through an independent
    // cross-multiplied integer comparison.
    for (unsigned n = 0; n <= 64; ++n) {
        DyadicTime lhs = DyadicTime::one() + DyadicTime(std::uint64_t{3}, n + 1);
        DyadicTime rhs = DyadicTime::one() + DyadicTime(std::uint64_t{2}, n);
        CHECK(compare(lhs, rhs) == std::strong_ordering::less);

        BigInt lhs_num = (BigInt(1) << (n + 1)) + 3;  // over 2^(n+1)
        BigInt rhs_num = (BigInt(1) << n) + 2;        // over 2^n
        CHECK(lhs_num * (BigInt(1) << n) < rhs_num * (BigInt(1) << (n + 1)));
    }
}

TEST_CASE("decimal rendering") {
    CHECK(DyadicTime(std::uint64_t{3}, 2).to_decimal_string(2) == "0.75");
    CHECK(DyadicTime::zero().to_decimal_string(0) == "0");
    CHECK(DyadicTime(std::uint64_t{5}, 1).to_decimal_string(1) == "2.5");

    SECTION("padding and truncation") {
        bool truncated = true;
        CHECK(DyadicTime(std::uint64_t{3}, 2).to_decimal_string(5, &truncated) == "0.75000");
        CHECK_FALSE(truncated);
        CHECK(DyadicTime(std::uint64_t{3}, 2).to_decimal_string(1, &truncated) == "0.7");
        CHECK(truncated);
    }
    SECTION("exact expansion") {
        CHECK(DyadicTime(std::uint64_t{11}, 3).decimal_exact() == "1.375");
        CHECK(DyadicTime(std::uint64_t{7}, 0).decimal_exact() == "7");
    }
}

TEST_CASE("canonical form") {
    CHECK(DyadicTime::zero().canonical() == "0/2^0");
    CHECK(DyadicTime(std::uint64_t{4}, 3).canonical() == "1/2^1");
    CHECK(DyadicTime(std::uint64_t{5}, 1).canonical() == "5/2^1");
}

TEST_CASE("agreement with big-rational oracle") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<unsigned> exp_dist(0, 128);
    for (int i = 0; i < 10000; ++i) {
        DyadicTime a(random_bigint(rng, 140), exp_dist(rng));
        DyadicTime b(random_bigint(rng, 140), exp_dist(rng));

        mp::cpp_rational ra = as_rational(a);
        mp::cpp_rational rb = as_rational(b);

        REQUIRE(as_rational(a + b) == ra + rb);

        auto ours = compare(a, b);
        if (ra < rb) {
            REQUIRE(ours == std::strong_ordering::less);
        } else if (ra > rb) {
            REQUIRE(ours == std::strong_ordering::greater);
        } else {
            REQUIRE(ours == std::strong_ordering::equal);
        }
    }
}

TEST_CASE("prefix sums of quanta") {
    // sum_{m=1..n-1} 1/2^m == 1 - 2^(1-n), exactly, for n up to 128.
    DyadicTime sum;
    for (unsigned n = 1; n <= 128; ++n) {
        DyadicTime closed((BigInt(1) << (n - 1)) - 1, n - 1);
        CHECK(sum == closed);
        sum += DyadicTime::quantum(n);
    }
}

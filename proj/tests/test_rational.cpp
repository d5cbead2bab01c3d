#include "doctest.h"

#include <limits>

#include <stdexcept>

#include "skipsim/rational.hpp"

using skipsim::Rational;

TEST_CASE("rational normalizes sign and common factors")
{
	Rational r(6, -8);
	CHECK(r.num() == -3);
	CHECK(r.den() == 4);
	CHECK(Rational(0, 5) == Rational(0));
	CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational arithmetic is exact")
{
	CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
	CHECK(Rational(3, 4) - Rational(1) == Rational(-1, 4));
	CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
	CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
	CHECK(-Rational(5, 7) == Rational(-5, 7));
	CHECK_THROWS(Rational(1) / Rational(0));
}

TEST_CASE("rational ordering")
{
	CHECK(Rational(1, 3) < Rational(1, 2));
	CHECK(Rational(-1, 2) < Rational(0));
	CHECK(skipsim::min(Rational(3, 4), Rational(2, 3)) == Rational(2, 3));
	CHECK(skipsim::max(Rational(3, 4), Rational(2, 3)) == Rational(3, 4));
}

TEST_CASE("rational floor, ceil and predicates")
{
	CHECK(Rational(7, 2).floor() == 3);
	CHECK(Rational(7, 2).ceil() == 4);
	CHECK(Rational(-7, 2).floor() == -4);
	CHECK(Rational(-7, 2).ceil() == -3);
	CHECK(Rational(4).is_integer());
	CHECK_FALSE(Rational(1, 2).is_integer());
	CHECK(Rational(-1, 9).is_negative());
	CHECK(Rational(1, 9).is_positive());
}

TEST_CASE("rational formatting")
{
	CHECK(Rational(23, 20).str() == "23/20");
	CHECK(Rational(11, 20).decimal() == "0.550000");
	CHECK(Rational(2, 3).decimal() == "0.666667");
	CHECK(Rational(-1, 8).decimal(2) == "-0.13");
	CHECK(Rational(5).decimal(0) == "5");
}

TEST_CASE("rational parsing")
{
	CHECK(Rational::parse("3/4") == Rational(3, 4));
	CHECK(Rational::parse(" 0.05 ") == Rational(1, 20));
	CHECK(Rational::parse("-2.5") == Rational(-5, 2));
	CHECK(Rational::parse("1e-2") == Rational(1, 100));
	CHECK(Rational::parse("12") == Rational(12));
	CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
	CHECK_THROWS(Rational::parse("1/0"));
	CHECK(Rational::from_double(0.4) == Rational(2, 5));
}

TEST_CASE("rational overflow is reported, not wrapped")
{
	const std::int64_t big = std::numeric_limits<std::int64_t>::max() / 2;
	CHECK_THROWS_AS(Rational(big) * Rational(4), std::overflow_error);
	CHECK_THROWS_AS(skipsim::lcm64(big, big - 1), std::overflow_error);
	CHECK(skipsim::lcm64(4, 6) == 12);
	CHECK(skipsim::gcd64(12, 18) == 6);
}

#ifndef SKIPSIM_RATIONAL_HPP
#define SKIPSIM_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace skipsim {

// Exact rational number with a normalized int64 numerator/denominator pair.
// The denominator is always positive and gcd(num, den) == 1. Intermediate
// products use 128-bit arithmetic; results that do not fit in 64 bits throw
// std::overflow_error rather than wrapping.
class Rational {
public:
	constexpr Rational() = default;
	constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
	Rational(std::int64_t n, std::int64_t d);

	std::int64_t num() const { return num_; }
	std::int64_t den() const { return den_; }

	bool is_integer() const { return den_ == 1; }
	bool is_zero() const { return num_ == 0; }
	bool is_negative() const { return num_ < 0; }
	bool is_positive() const { return num_ > 0; }

	// floor and ceiling towards -inf / +inf
	std::int64_t floor() const;
	std::int64_t ceil() const;

	double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

	// "num/den" (always with a slash, also for integers)
	std::string str() const;
	// fixed-point decimal, rounded half away from zero
	std::string decimal(int digits = 6) const;

	// Accepts "7", "-3/4", "0.05", "1e-2" (the latter via decimal expansion).
	static Rational parse(std::string_view text);
	// Exact value of the shortest decimal representation of `v`.
	static Rational from_double(double v);

	Rational& operator+=(const Rational& o);
	Rational& operator-=(const Rational& o);
	Rational& operator*=(const Rational& o);
	Rational& operator/=(const Rational& o);

	friend Rational operator+(Rational a, const Rational& b) { return a += b; }
	friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
	friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
	friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
	Rational operator-() const;

	friend bool operator==(const Rational& a, const Rational& b)
	{
		return a.num_ == b.num_ && a.den_ == b.den_;
	}
	friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
	static Rational from_wide(__int128 n, __int128 d);

	std::int64_t num_ = 0;
	std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::int64_t gcd64(std::int64_t a, std::int64_t b);
// Throws std::overflow_error when the result exceeds int64.
std::int64_t lcm64(std::int64_t a, std::int64_t b);

} // namespace skipsim

#endif

#include "skipsim/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace skipsim {

namespace {

using wide = __int128;

wide wide_abs(wide v) { return v < 0 ? -v : v; }

wide wide_gcd(wide a, wide b)
{
	a = wide_abs(a);
	b = wide_abs(b);
	while (b != 0) {
		wide t = a % b;
		a = b;
		b = t;
	}
	return a;
}

bool fits(wide v)
{
	return v >= std::numeric_limits<std::int64_t>::min()
	    && v <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t parse_int(std::string_view s)
{
	std::int64_t v = 0;
	auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc() || p != s.data() + s.size())
		throw std::invalid_argument("malformed number: '" + std::string(s) + "'");
	return v;
}

} // namespace

std::int64_t gcd64(std::int64_t a, std::int64_t b)
{
	return static_cast<std::int64_t>(wide_gcd(a, b));
}

std::int64_t lcm64(std::int64_t a, std::int64_t b)
{
	if (a == 0 || b == 0)
		return 0;
	wide l = wide_abs(static_cast<wide>(a) / wide_gcd(a, b) * b);
	if (!fits(l))
		throw std::overflow_error("lcm exceeds 64-bit range");
	return static_cast<std::int64_t>(l);
}

Rational::Rational(std::int64_t n, std::int64_t d)
{
	*this = from_wide(n, d);
}

Rational Rational::from_wide(wide n, wide d)
{
	if (d == 0)
		throw std::domain_error("rational with zero denominator");
	if (d < 0) {
		n = -n;
		d = -d;
	}
	wide g = wide_gcd(n, d);
	if (g > 1) {
		n /= g;
		d /= g;
	}
	if (!fits(n) || !fits(d))
		throw std::overflow_error("rational arithmetic overflow");
	Rational r;
	r.num_ = static_cast<std::int64_t>(n);
	r.den_ = static_cast<std::int64_t>(d);
	return r;
}

std::int64_t Rational::floor() const
{
	std::int64_t q = num_ / den_;
	if (num_ % den_ != 0 && num_ < 0)
		--q;
	return q;
}

std::int64_t Rational::ceil() const
{
	std::int64_t q = num_ / den_;
	if (num_ % den_ != 0 && num_ > 0)
		++q;
	return q;
}

Rational& Rational::operator+=(const Rational& o)
{
	if (den_ == o.den_)
		return *this = from_wide(static_cast<wide>(num_) + o.num_, den_);
	wide g = wide_gcd(den_, o.den_);
	wide n = static_cast<wide>(num_) * (o.den_ / g) + static_cast<wide>(o.num_) * (den_ / g);
	wide d = static_cast<wide>(den_) / g * o.den_;
	return *this = from_wide(n, d);
}

Rational& Rational::operator-=(const Rational& o)
{
	return *this += -o;
}

Rational& Rational::operator*=(const Rational& o)
{
	wide g1 = wide_gcd(num_, o.den_);
	wide g2 = wide_gcd(o.num_, den_);
	if (g1 == 0)
		g1 = 1;
	if (g2 == 0)
		g2 = 1;
	wide n = (num_ / g1) * (o.num_ / g2);
	wide d = (den_ / g2) * (o.den_ / g1);
	return *this = from_wide(n, d);
}

Rational& Rational::operator/=(const Rational& o)
{
	if (o.num_ == 0)
		throw std::domain_error("rational division by zero");
	Rational inv;
	inv.num_ = o.num_ < 0 ? -o.den_ : o.den_;
	inv.den_ = o.num_ < 0 ? -o.num_ : o.num_;
	return *this *= inv;
}

Rational Rational::operator-() const
{
	Rational r;
	r.num_ = -num_;
	r.den_ = den_;
	return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
	if (a.den_ == b.den_)
		return a.num_ <=> b.num_;
	wide l = static_cast<wide>(a.num_) * b.den_;
	wide r = static_cast<wide>(b.num_) * a.den_;
	if (l < r)
		return std::strong_ordering::less;
	if (l > r)
		return std::strong_ordering::greater;
	return std::strong_ordering::equal;
}

std::string Rational::str() const
{
	return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::decimal(int digits) const
{
	wide scale = 1;
	for (int i = 0; i < digits; ++i)
		scale *= 10;
	wide n = wide_abs(num_);
	wide scaled = (n * scale * 2 + den_) / (static_cast<wide>(den_) * 2);
	wide ip = scaled / scale;
	wide fp = scaled % scale;

	std::string frac;
	for (int i = 0; i < digits; ++i) {
		frac.insert(frac.begin(), static_cast<char>('0' + static_cast<int>(fp % 10)));
		fp /= 10;
	}
	std::string out;
	if (num_ < 0 && scaled != 0)
		out += '-';
	out += std::to_string(static_cast<std::int64_t>(ip));
	if (digits > 0)
		out += "." + frac;
	return out;
}

Rational Rational::parse(std::string_view text)
{
	while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
		text.remove_prefix(1);
	while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
		text.remove_suffix(1);
	if (text.empty())
		throw std::invalid_argument("empty rational literal");

	if (auto slash = text.find('/'); slash != std::string_view::npos)
		return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));

	std::int64_t exponent = 0;
	if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
		exponent = parse_int(text.substr(e + 1 + (text[e + 1] == '+' ? 1 : 0)));
		text = text.substr(0, e);
	}

	bool negative = false;
	if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
		negative = text.front() == '-';
		text.remove_prefix(1);
	}

	std::string digits;
	std::int64_t frac_digits = 0;
	if (auto dot = text.find('.'); dot != std::string_view::npos) {
		digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
		frac_digits = static_cast<std::int64_t>(text.size() - dot - 1);
	} else {
		digits = std::string(text);
	}
	if (digits.empty())
		throw std::invalid_argument("malformed number");
	Rational r(parse_int(digits));
	std::int64_t shift = exponent - frac_digits;
	Rational ten(10);
	for (; shift > 0; --shift)
		r *= ten;
	for (; shift < 0; ++shift)
		r /= ten;
	return negative ? -r : r;
}

Rational Rational::from_double(double v)
{
	if (!std::isfinite(v))
		throw std::invalid_argument("non-finite value cannot be made rational");
	char buf[64];
	auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
	if (ec != std::errc())
		throw std::invalid_argument("cannot format double");
	return parse(std::string_view(buf, static_cast<std::size_t>(p - buf)));
}

std::ostream& operator<<(std::ostream& os, const Rational& r)
{
	return os << r.str();
}

} // namespace skipsim

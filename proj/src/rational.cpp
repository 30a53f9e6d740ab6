#include "arreg/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>

#include "arreg/errors.hpp"

namespace arreg {

namespace {

using Wide = __int128;

Rational from_wide(Wide num, Wide den) {
  if (den == 0) throw InvalidArgument("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide a = num < 0 ? -num : num;
  Wide b = den;
  while (b != 0) {
    const Wide t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr Wide lo = std::numeric_limits<std::int64_t>::min();
  constexpr Wide hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw InvalidArgument("rational: overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw InvalidArgument("rational: cannot parse '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidArgument("rational: zero denominator");
  if (den < 0) {
    if (num == std::numeric_limits<std::int64_t>::min() || den == std::numeric_limits<std::int64_t>::min()) {
      throw InvalidArgument("rational: overflow");
    }
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw InvalidArgument("rational: empty string");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return from_wide(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = false;
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
      negative = whole.front() == '-';
      whole.remove_prefix(1);
    }
    if (frac.size() > 18) throw InvalidArgument("rational: too many decimal digits");
    Wide den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const Wide w = whole.empty() ? 0 : parse_int(whole);
    const Wide f = frac.empty() ? 0 : parse_int(frac);
    if (w < 0 || f < 0) throw InvalidArgument("rational: cannot parse '" + std::string(text) + "'");
    Wide num = w * den + f;
    if (negative) num = -num;
    return from_wide(num, den);
  }
  return Rational(parse_int(text));
}

bool Rational::bounds_count(std::uint64_t count, std::uint64_t total) const noexcept {
  return static_cast<Wide>(count) * den_ <= static_cast<Wide>(num_) * static_cast<Wide>(total);
}

Rational operator+(const Rational& a, const Rational& b) {
  return from_wide(static_cast<Wide>(a.num_) * b.den_ + static_cast<Wide>(b.num_) * a.den_,
                   static_cast<Wide>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return from_wide(static_cast<Wide>(a.num_) * b.den_ - static_cast<Wide>(b.num_) * a.den_,
                   static_cast<Wide>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return from_wide(static_cast<Wide>(a.num_) * b.num_, static_cast<Wide>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return from_wide(static_cast<Wide>(a.num_) * b.den_, static_cast<Wide>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  const Wide l = static_cast<Wide>(a.num_) * b.den_;
  const Wide r = static_cast<Wide>(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace arreg

#ifndef FDLITE_DEGREE_HPP
#define FDLITE_DEGREE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace fdlite {

/// A truth degree: an exact rational in [0,1].
///
/// All comparisons in the engine are exact; no floating point is used
/// anywhere. Degrees parse from decimal strings ("0.6", up to nine
/// fractional digits) or from explicit fractions ("2/3"), and print back
/// in the shortest of those two forms.
class Degree {
public:
  Degree() : v_(0) {}

  static Degree zero() { return Degree(); }
  static Degree one() { return Degree(mpq_class(1)); }

  /// Build from an integer fraction. Throws std::invalid_argument if the
  /// value falls outside [0,1] or the denominator is zero.
  static Degree fraction(long num, long den) {
    if (den == 0) throw std::invalid_argument("degree: zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return checked(std::move(q));
  }

  /// Parse "1", "0.75", ".5" or "p/q". Throws std::invalid_argument.
  static Degree parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("degree: empty string");
    std::string s(text);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      std::string num = s.substr(0, slash), den = s.substr(slash + 1);
      if (!all_digits(num) || !all_digits(den) || den.empty() || num.empty())
        throw std::invalid_argument("degree: malformed fraction '" + s + "'");
      mpz_class dz(den);
      if (dz == 0) throw std::invalid_argument("degree: zero denominator");
      mpq_class q{mpz_class(num), dz};
      q.canonicalize();
      return checked(std::move(q));
    }
    auto dot = s.find('.');
    std::string whole = dot == std::string::npos ? s : s.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (whole.empty() && frac.empty())
      throw std::invalid_argument("degree: malformed number '" + s + "'");
    if (!all_digits(whole) || !all_digits(frac))
      throw std::invalid_argument("degree: malformed number '" + s + "'");
    if (frac.size() > 9)
      throw std::invalid_argument("degree: more than 9 fractional digits in '" + s + "'");
    mpz_class scale = pow10(frac.size());
    mpz_class num = mpz_class(whole.empty() ? "0" : whole) * scale +
                    (frac.empty() ? mpz_class(0) : mpz_class(frac));
    mpq_class q(num, scale);
    q.canonicalize();
    return checked(std::move(q));
  }

  /// Shortest textual form: decimal when the denominator divides 10^9,
  /// otherwise "p/q".
  std::string str() const {
    const mpz_class& den = v_.get_den();
    mpz_class billion = pow10(9);
    if (mpz_divisible_p(billion.get_mpz_t(), den.get_mpz_t())) {
      mpz_class scale = billion / den;
      mpz_class num = v_.get_num() * scale;
      std::string digits = num.get_str();
      if (digits.size() < 10) digits.insert(0, 10 - digits.size(), '0');
      std::string whole = digits.substr(0, digits.size() - 9);
      std::string frac = digits.substr(digits.size() - 9);
      while (!frac.empty() && frac.back() == '0') frac.pop_back();
      return frac.empty() ? whole : whole + "." + frac;
    }
    return v_.get_str();
  }

  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  /// Underlying rational; exposed for the algebra and the model search.
  const mpq_class& raw() const { return v_; }

  /// Wrap a rational known to lie in [0,1].
  static Degree from_raw(mpq_class q) { return checked(std::move(q)); }

  friend bool operator==(const Degree& a, const Degree& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Degree& a, const Degree& b) { return a.v_ != b.v_; }
  friend bool operator<(const Degree& a, const Degree& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Degree& a, const Degree& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Degree& a, const Degree& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Degree& a, const Degree& b) { return a.v_ >= b.v_; }

private:
  explicit Degree(mpq_class v) : v_(std::move(v)) {}

  static Degree checked(mpq_class q) {
    if (q < 0 || q > 1)
      throw std::invalid_argument("degree out of [0,1]: " + q.get_str());
    return Degree(std::move(q));
  }

  static bool all_digits(const std::string& s) {
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  }

  static mpz_class pow10(std::size_t n) {
    mpz_class r(1);
    for (std::size_t i = 0; i < n; ++i) r *= 10;
    return r;
  }

  mpq_class v_;
};

}  // namespace fdlite

#endif

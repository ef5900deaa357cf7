#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mta {

// Arithmetic mode shared by all entries of a tensor. Exact mode works over
// Gaussian rationals and never loses precision; float mode works over
// std::complex<double> and prunes negligible entries.
enum class ScalarMode { kExact, kFloat };

std::string to_string(ScalarMode mode);
ScalarMode parse_scalar_mode(const std::string& name);

// Entries with magnitude below this are dropped after float arithmetic.
// Well under the 1e-8 cutoff used for rank decisions, so pruning never
// changes a rank.
inline constexpr double kFloatDropEps = 1e-12;

// Default relative singular-value cutoff for float rank decisions.
inline constexpr double kDefaultRankTol = 1e-8;

// Exact rational number. Values are held as a canonical machine-word
// fraction (gcd 1, positive denominator) while they fit and spill to
// arbitrary precision only when an operation overflows, so long
// elimination chains stay exact without paying bignum cost on the
// overwhelmingly common small values.
class Rational {
 public:
  Rational() = default;
  Rational(long long v) : num_(v) {}
  Rational(long v) : num_(v) {}
  Rational(int v) : num_(v) {}

  Rational(const Rational& o)
      : num_(o.num_),
        den_(o.den_),
        big_(o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr) {}
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    num_ = o.num_;
    den_ = o.den_;
    big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;

  bool is_big() const { return big_ != nullptr; }

  friend int sgn(const Rational& q) {
    if (!q.big_) return (q.num_ > 0) - (q.num_ < 0);
    return mpq_sgn(q.big_->get_mpq_t());
  }

  Rational& operator+=(const Rational& o) {
    if (!big_ && !o.big_) {
      if (num_ == 0) return *this = o;
      if (o.num_ == 0) return *this;
      const unsigned long long g =
          std::gcd<unsigned long long>(den_, o.den_);
      const long long bg = den_ / static_cast<long long>(g);
      const long long dg = o.den_ / static_cast<long long>(g);
      const I128 t = static_cast<I128>(num_) * dg +
                     static_cast<I128>(o.num_) * bg;
      if (t == 0) {
        num_ = 0;
        den_ = 1;
        return *this;
      }
      const I128 den = static_cast<I128>(bg) * o.den_;
      unsigned long long g2 = g;
      if (g > 1) g2 = std::gcd(static_cast<unsigned long long>(mag(t) % g), g);
      if (set_if_fits(g2 == 1 ? t : t / static_cast<long long>(g2),
                      g2 == 1 ? den : den / static_cast<long long>(g2)))
        return *this;
      return add_big(o);
    }
    return add_big(o);
  }
  Rational& operator-=(const Rational& o) {
    if (!big_ && !o.big_ && o.num_ != 0) {
      Rational neg;
      neg.num_ = -o.num_;
      neg.den_ = o.den_;
      return *this += neg;
    }
    if (!big_ && !o.big_) return *this;
    return sub_big(o);
  }
  friend Rational operator+(Rational a, const Rational& b) {
    a += b;
    return a;
  }
  friend Rational operator-(Rational a, const Rational& b) {
    a -= b;
    return a;
  }
  Rational operator-() const {
    Rational r(*this);
    r.negate();
    return r;
  }
  void negate() {
    if (!big_) {
      num_ = -num_;
      return;
    }
    mpq_neg(big_->get_mpq_t(), big_->get_mpq_t());
  }

  Rational operator*(const Rational& o) const {
    if (!big_ && !o.big_) {
      if (num_ == 0 || o.num_ == 0) return Rational();
      const unsigned long long g1 =
          std::gcd<unsigned long long>(mag64(num_), o.den_);
      const unsigned long long g2 =
          std::gcd<unsigned long long>(mag64(o.num_), den_);
      const I128 num = static_cast<I128>(num_ / static_cast<long long>(g1)) *
                       (o.num_ / static_cast<long long>(g2));
      const I128 den = static_cast<I128>(den_ / static_cast<long long>(g2)) *
                       (o.den_ / static_cast<long long>(g1));
      Rational r;
      if (r.set_if_fits(num, den)) return r;
    }
    return mul_big(o);
  }
  Rational operator/(const Rational& o) const {
    const int s = sgn(o);
    if (s == 0) throw std::domain_error("division by zero");
    if (!big_ && !o.big_) {
      if (num_ == 0) return Rational();
      const unsigned long long g1 =
          std::gcd<unsigned long long>(mag64(num_), mag64(o.num_));
      const unsigned long long g2 =
          std::gcd<unsigned long long>(static_cast<unsigned long long>(den_),
                                       o.den_);
      I128 num = static_cast<I128>(num_ / static_cast<long long>(g1)) *
                 (o.den_ / static_cast<long long>(g2));
      I128 den = static_cast<I128>(den_ / static_cast<long long>(g2)) *
                 (o.num_ / static_cast<long long>(g1));
      if (den < 0) {
        num = -num;
        den = -den;
      }
      Rational r;
      if (r.set_if_fits(num, den)) return r;
    }
    return div_big(o);
  }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    return a.cmp_big(b) == 0;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }

  double get_d() const;
  std::string str() const;
  static Rational from_string(const std::string& text);

  // Numerator and denominator reduced mod m (both in [0, m)), for
  // homomorphic images of exact rows. m must be odd and below 2^63.
  std::uint64_t num_mod(std::uint64_t m) const;
  std::uint64_t den_mod(std::uint64_t m) const;

 private:
  using I128 = __int128;
  using U128 = unsigned __int128;

  static U128 mag(I128 v) { return v < 0 ? U128(0) - U128(v) : U128(v); }
  static unsigned long long mag64(long long v) {
    return v < 0 ? 0ull - static_cast<unsigned long long>(v)
                 : static_cast<unsigned long long>(v);
  }
  // Keeps INT64_MIN out of the small arm so negation can never overflow.
  bool set_if_fits(I128 num, I128 den) {
    constexpr I128 kMax = 0x7fffffffffffffff;
    if (num < -kMax || num > kMax || den > kMax) return false;
    num_ = static_cast<long long>(num);
    den_ = static_cast<long long>(den);
    big_.reset();
    return true;
  }

  Rational& add_big(const Rational& o);
  Rational& sub_big(const Rational& o);
  Rational mul_big(const Rational& o) const;
  Rational div_big(const Rational& o) const;
  int cmp_big(const Rational& o) const;
  void demote_if_fits();
  mpq_class to_mpq() const;

  // Canonical: gcd(|num_|, den_) == 1, den_ >= 1, ignored when big_ set.
  long long num_ = 0;
  long long den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

Rational rational_from_string(const std::string& text);  // "p/q" or "p"
std::string rational_to_string(const Rational& q);

// Count of rational operations that left the machine-word fast path.
// Meaningful only when a single thread does the arithmetic.
std::uint64_t& rational_big_ops();

// Complex number with rational real and imaginary parts. Closed under
// +, -, *, conjugation and division by nonzero values.
struct GaussianRational {
  Rational re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussianRational conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) {
    a += b;
    return a;
  }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) {
    a -= b;
    return a;
  }
  GaussianRational operator*(const GaussianRational& o) const;
  GaussianRational operator/(const GaussianRational& o) const;  // throws on zero divisor
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

// A complex scalar in one of the two modes. Binary operations on mixed
// modes throw; conversion is always explicit via to_float().
class Scalar {
 public:
  Scalar() : mode_(ScalarMode::kExact) {}  // exact zero

  static Scalar zero(ScalarMode mode);
  static Scalar one(ScalarMode mode);
  static Scalar exact(GaussianRational q);
  static Scalar exact(long re, long im = 0);
  static Scalar exact(Rational re, Rational im = Rational(0));
  static Scalar floating(std::complex<double> z);
  static Scalar floating(double re, double im = 0.0);

  ScalarMode mode() const { return mode_; }
  const GaussianRational& exact_value() const;
  std::complex<double> float_value() const;
  // Numeric view in either mode (exact values converted to double).
  std::complex<double> as_complex() const;

  bool is_zero() const;
  // True when the value should be pruned from a sparse container:
  // exact zero, or float magnitude below kFloatDropEps.
  bool negligible() const;

  Scalar conj() const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) {
    a += b;
    return a;
  }
  friend Scalar operator-(Scalar a, const Scalar& b) {
    a -= b;
    return a;
  }
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  bool operator==(const Scalar& o) const;  // same mode and same value

  Scalar to_float() const;
  std::string str() const;

 private:
  ScalarMode mode_;
  GaussianRational q_;             // kExact payload
  std::complex<double> f_{0, 0};   // kFloat payload

  void require_same_mode(const Scalar& o) const;
};

}  // namespace mta

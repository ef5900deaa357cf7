#include "mta/scalar.hpp"

#include <cmath>
#include <sstream>

namespace mta {

std::string to_string(ScalarMode mode) {
  return mode == ScalarMode::kExact ? "exact" : "float";
}

ScalarMode parse_scalar_mode(const std::string& name) {
  if (name == "exact") return ScalarMode::kExact;
  if (name == "float") return ScalarMode::kFloat;
  throw std::invalid_argument("unknown scalar mode: " + name);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q;
  // Already canonical, so no mpq_canonicalize round.
  mpq_set_si(q.get_mpq_t(), static_cast<long>(num_),
             static_cast<unsigned long>(den_));
  return q;
}

void Rational::demote_if_fits() {
  if (!big_) return;
  const mpq_class& q = *big_;
  if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) return;
  const long n = q.get_num().get_si();
  const long d = q.get_den().get_si();
  if (set_if_fits(n, d)) return;  // rejects only LONG_MIN
}

std::uint64_t& rational_big_ops() {
  static std::uint64_t count = 0;
  return count;
}

Rational& Rational::add_big(const Rational& o) {
  ++rational_big_ops();
  mpq_class r = to_mpq() + o.to_mpq();
  big_ = std::make_unique<mpq_class>(std::move(r));
  demote_if_fits();
  return *this;
}

Rational& Rational::sub_big(const Rational& o) {
  ++rational_big_ops();
  mpq_class r = to_mpq() - o.to_mpq();
  big_ = std::make_unique<mpq_class>(std::move(r));
  demote_if_fits();
  return *this;
}

Rational Rational::mul_big(const Rational& o) const {
  ++rational_big_ops();
  Rational out;
  out.big_ = std::make_unique<mpq_class>(to_mpq() * o.to_mpq());
  out.demote_if_fits();
  return out;
}

Rational Rational::div_big(const Rational& o) const {
  ++rational_big_ops();
  Rational out;
  out.big_ = std::make_unique<mpq_class>(to_mpq() / o.to_mpq());
  out.demote_if_fits();
  return out;
}

int Rational::cmp_big(const Rational& o) const {
  return mpq_cmp(to_mpq().get_mpq_t(), o.to_mpq().get_mpq_t());
}

double Rational::get_d() const {
  if (big_) return big_->get_d();
  // Below 2^53 both conversions and the division round exactly once, the
  // same result the bignum path produces.
  constexpr long long kExactDouble = 1ll << 53;
  if (num_ > -kExactDouble && num_ < kExactDouble && den_ < kExactDouble) {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  return to_mpq().get_d();
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  std::string s = std::to_string(num_);
  if (den_ != 1) {
    s += '/';
    s += std::to_string(den_);
  }
  return s;
}

std::uint64_t Rational::num_mod(std::uint64_t m) const {
  if (big_) return mpz_fdiv_ui(big_->get_num().get_mpz_t(), m);
  long long r = num_ % static_cast<long long>(m);
  if (r < 0) r += static_cast<long long>(m);
  return static_cast<std::uint64_t>(r);
}

std::uint64_t Rational::den_mod(std::uint64_t m) const {
  if (big_) return mpz_fdiv_ui(big_->get_den().get_mpz_t(), m);
  return static_cast<std::uint64_t>(den_ % static_cast<long long>(m));
}

Rational Rational::from_string(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) {
    throw std::invalid_argument("not a rational: " + text);
  }
  q.canonicalize();
  Rational r;
  r.big_ = std::make_unique<mpq_class>(std::move(q));
  r.demote_if_fits();
  return r;
}

Rational rational_from_string(const std::string& text) {
  return Rational::from_string(text);
}

std::string rational_to_string(const Rational& q) { return q.str(); }

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussianRational GaussianRational::operator*(const GaussianRational& o) const {
  // Values are real far more often than not; skip the dead products then.
  if (sgn(im) == 0) {
    if (sgn(o.im) == 0) return {re * o.re, Rational(0)};
    return {re * o.re, re * o.im};
  }
  if (sgn(o.im) == 0) return {re * o.re, im * o.re};
  return {re * o.re - im * o.im, re * o.im + im * o.re};
}

GaussianRational GaussianRational::operator/(const GaussianRational& o) const {
  if (sgn(o.im) == 0) {
    if (sgn(o.re) == 0) throw std::domain_error("division by zero");
    if (sgn(im) == 0) return {re / o.re, Rational(0)};
    return {re / o.re, im / o.re};
  }
  Rational norm = o.re * o.re + o.im * o.im;
  return {(re * o.re + im * o.im) / norm, (im * o.re - re * o.im) / norm};
}

Scalar Scalar::zero(ScalarMode mode) {
  Scalar s;
  s.mode_ = mode;
  return s;
}

Scalar Scalar::one(ScalarMode mode) {
  return mode == ScalarMode::kExact ? exact(1) : floating(1.0);
}

Scalar Scalar::exact(GaussianRational q) {
  Scalar s;
  s.mode_ = ScalarMode::kExact;
  s.q_ = std::move(q);
  return s;
}

Scalar Scalar::exact(long re, long im) {
  return exact(GaussianRational(Rational(re), Rational(im)));
}

Scalar Scalar::exact(Rational re, Rational im) {
  return exact(GaussianRational(std::move(re), std::move(im)));
}

Scalar Scalar::floating(std::complex<double> z) {
  Scalar s;
  s.mode_ = ScalarMode::kFloat;
  s.f_ = z;
  return s;
}

Scalar Scalar::floating(double re, double im) { return floating({re, im}); }

const GaussianRational& Scalar::exact_value() const {
  if (mode_ != ScalarMode::kExact) throw std::logic_error("not an exact scalar");
  return q_;
}

std::complex<double> Scalar::float_value() const {
  if (mode_ != ScalarMode::kFloat) throw std::logic_error("not a float scalar");
  return f_;
}

std::complex<double> Scalar::as_complex() const {
  return mode_ == ScalarMode::kExact ? q_.to_complex() : f_;
}

bool Scalar::is_zero() const {
  return mode_ == ScalarMode::kExact ? q_.is_zero() : (f_ == std::complex<double>(0, 0));
}

bool Scalar::negligible() const {
  return mode_ == ScalarMode::kExact ? q_.is_zero() : std::abs(f_) < kFloatDropEps;
}

Scalar Scalar::conj() const {
  Scalar s = *this;
  if (mode_ == ScalarMode::kExact) {
    s.q_ = q_.conj();
  } else {
    s.f_ = std::conj(f_);
  }
  return s;
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (mode_ == ScalarMode::kExact) {
    s.q_ = -q_;
  } else {
    s.f_ = -f_;
  }
  return s;
}

void Scalar::require_same_mode(const Scalar& o) const {
  if (mode_ != o.mode_) {
    throw std::invalid_argument("scalar mode mismatch: " + to_string(mode_) + " vs " +
                                to_string(o.mode_));
  }
}

Scalar& Scalar::operator+=(const Scalar& o) {
  require_same_mode(o);
  if (mode_ == ScalarMode::kExact) {
    q_ += o.q_;
  } else {
    f_ += o.f_;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  require_same_mode(o);
  if (mode_ == ScalarMode::kExact) {
    q_ -= o.q_;
  } else {
    f_ -= o.f_;
  }
  return *this;
}

Scalar Scalar::operator*(const Scalar& o) const {
  require_same_mode(o);
  if (mode_ == ScalarMode::kExact) return exact(q_ * o.q_);
  return floating(f_ * o.f_);
}

Scalar Scalar::operator/(const Scalar& o) const {
  require_same_mode(o);
  if (mode_ == ScalarMode::kExact) return exact(q_ / o.q_);
  if (o.f_ == std::complex<double>(0, 0)) throw std::domain_error("division by zero");
  return floating(f_ / o.f_);
}

bool Scalar::operator==(const Scalar& o) const {
  if (mode_ != o.mode_) return false;
  return mode_ == ScalarMode::kExact ? q_ == o.q_ : f_ == o.f_;
}

Scalar Scalar::to_float() const {
  return mode_ == ScalarMode::kFloat ? *this : floating(q_.to_complex());
}

std::string Scalar::str() const {
  std::ostringstream os;
  if (mode_ == ScalarMode::kExact) {
    os << rational_to_string(q_.re);
    if (sgn(q_.im) != 0) {
      os << (sgn(q_.im) > 0 ? "+" : "") << rational_to_string(q_.im) << "i";
    }
  } else {
    os << f_.real();
    if (f_.imag() != 0) os << (f_.imag() > 0 ? "+" : "") << f_.imag() << "i";
  }
  return os.str();
}

}  // namespace mta

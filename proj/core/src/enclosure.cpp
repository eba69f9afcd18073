#include "cwforest/enclosure.hpp"

#include <vector>

namespace cwforest {

namespace {

void check_precision(int precision_bits) {
  if (precision_bits < Enclosure::kMinPrecisionBits) {
    throw DomainError("enclosure: precision must be at least " +
                      std::to_string(Enclosure::kMinPrecisionBits) + " bits, got " +
                      std::to_string(precision_bits));
  }
}

}  // namespace

Enclosure::Enclosure(int precision_bits) {
  check_precision(precision_bits);
  mpfr_init2(lo_, precision_bits);
  mpfr_init2(hi_, precision_bits);
  mpfr_set_zero(lo_, +1);
  mpfr_set_zero(hi_, +1);
  initialized_ = true;
}

Enclosure::Enclosure(const Rational& x, int precision_bits) : Enclosure(precision_bits) {
  mpfr_set_q(lo_, x.mpq().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, x.mpq().get_mpq_t(), MPFR_RNDU);
}

Enclosure::Enclosure(const Enclosure& other) {
  mpfr_init2(lo_, mpfr_get_prec(other.lo_));
  mpfr_init2(hi_, mpfr_get_prec(other.hi_));
  // Same precision on both sides makes these copies exact.
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
  initialized_ = true;
}

Enclosure::Enclosure(Enclosure&& other) noexcept {
  lo_[0] = other.lo_[0];
  hi_[0] = other.hi_[0];
  initialized_ = other.initialized_;
  other.initialized_ = false;
}

Enclosure& Enclosure::operator=(const Enclosure& other) {
  if (this == &other) return *this;
  if (initialized_) {
    mpfr_set_prec(lo_, mpfr_get_prec(other.lo_));
    mpfr_set_prec(hi_, mpfr_get_prec(other.hi_));
  } else {
    mpfr_init2(lo_, mpfr_get_prec(other.lo_));
    mpfr_init2(hi_, mpfr_get_prec(other.hi_));
    initialized_ = true;
  }
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
  return *this;
}

Enclosure& Enclosure::operator=(Enclosure&& other) noexcept {
  if (this == &other) return *this;
  if (initialized_) {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }
  lo_[0] = other.lo_[0];
  hi_[0] = other.hi_[0];
  initialized_ = other.initialized_;
  other.initialized_ = false;
  return *this;
}

Enclosure::~Enclosure() {
  if (initialized_) {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }
}

void Enclosure::add(const Rational& x) { add(x.mpq()); }

void Enclosure::add(const mpq_class& x) {
  mpfr_add_q(lo_, lo_, x.get_mpq_t(), MPFR_RNDD);
  mpfr_add_q(hi_, hi_, x.get_mpq_t(), MPFR_RNDU);
}

void Enclosure::add(const Enclosure& other) {
  mpfr_add(lo_, lo_, other.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, other.hi_, MPFR_RNDU);
}

void Enclosure::add_integer(const mpz_class& k) {
  mpfr_add_z(lo_, lo_, k.get_mpz_t(), MPFR_RNDD);
  mpfr_add_z(hi_, hi_, k.get_mpz_t(), MPFR_RNDU);
}

void Enclosure::subtract(const Enclosure& other) {
  // lo and hi of `other` swap roles under subtraction.
  mpfr_t new_lo;
  mpfr_init2(new_lo, mpfr_get_prec(lo_));
  mpfr_sub(new_lo, lo_, other.hi_, MPFR_RNDD);
  mpfr_sub(hi_, hi_, other.lo_, MPFR_RNDU);
  mpfr_swap(lo_, new_lo);
  mpfr_clear(new_lo);
}

void Enclosure::scale_pow2(int e) {
  mpfr_mul_2si(lo_, lo_, e, MPFR_RNDD);
  mpfr_mul_2si(hi_, hi_, e, MPFR_RNDU);
}

void Enclosure::scale_int(const mpz_class& k) {
  // A negative factor would swap which endpoint rounds down.
  if (sgn(k) < 0) throw DomainError("enclosure: scale factor must be nonnegative");
  mpfr_mul_z(lo_, lo_, k.get_mpz_t(), MPFR_RNDD);
  mpfr_mul_z(hi_, hi_, k.get_mpz_t(), MPFR_RNDU);
}

Enclosure Enclosure::sum(const Enclosure& a, const Enclosure& b) {
  Enclosure r(a);
  r.add(b);
  return r;
}

Enclosure Enclosure::difference(const Enclosure& a, const Enclosure& b) {
  Enclosure r(a);
  r.subtract(b);
  return r;
}

bool Enclosure::contains(const Rational& x) const {
  return mpfr_cmp_q(lo_, x.mpq().get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, x.mpq().get_mpq_t()) >= 0;
}

bool Enclosure::certainly_below(const Rational& x) const {
  return mpfr_cmp_q(hi_, x.mpq().get_mpq_t()) < 0;
}

bool Enclosure::certainly_below(const Enclosure& other) const {
  return mpfr_cmp(hi_, other.lo_) < 0;
}

bool Enclosure::certainly_positive() const { return mpfr_sgn(lo_) > 0; }

namespace {

mpq_class endpoint_exact(mpfr_srcptr x) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x);
  return q;
}

std::string endpoint_str(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
  if (digits < 2) throw DomainError("enclosure: need at least 2 significant digits");
  const int n = mpfr_snprintf(nullptr, 0, "%.*R*e", digits - 1, rnd, x);
  std::vector<char> buf(static_cast<std::size_t>(n) + 1);
  mpfr_snprintf(buf.data(), buf.size(), "%.*R*e", digits - 1, rnd, x);
  return std::string(buf.data());
}

}  // namespace

mpq_class Enclosure::lo_exact() const { return endpoint_exact(lo_); }
mpq_class Enclosure::hi_exact() const { return endpoint_exact(hi_); }

std::string Enclosure::lo_str(int digits) const { return endpoint_str(lo_, digits, MPFR_RNDD); }
std::string Enclosure::hi_str(int digits) const { return endpoint_str(hi_, digits, MPFR_RNDU); }

}  // namespace cwforest

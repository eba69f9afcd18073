#include "cwforest/rational.hpp"

#include <cctype>

namespace cwforest {

namespace {

mpq_class make_reduced(const mpz_class& n, const mpz_class& d) {
  if (sgn(d) == 0) throw DomainError("rational: zero denominator");
  mpq_class q(n, d);
  q.canonicalize();
  if (sgn(q) < 0) throw DomainError("rational: negative value: " + n.get_str() + "/" + d.get_str());
  return q;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (const char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational::Rational(const mpz_class& value) : q_(value) {
  if (sgn(value) < 0) throw DomainError("rational: negative value: " + value.get_str());
}

Rational::Rational(long numerator, long denominator)
    : Rational(make_reduced(mpz_class(numerator), mpz_class(denominator)), reduced_tag{}) {}

Rational::Rational(const mpz_class& numerator, const mpz_class& denominator)
    : Rational(make_reduced(numerator, denominator), reduced_tag{}) {}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError("rational: empty input");

  const auto slash = s.find('/');
  std::string_view num_part = s.substr(0, slash);
  std::string_view den_part = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!all_digits(num_part) || !all_digits(den_part)) {
    throw ParseError("rational: expected \"a/b\" or \"a\" with decimal digits, got \"" + std::string(text) + "\"");
  }
  return Rational(mpz_class(std::string(num_part)), mpz_class(std::string(den_part)));
}

Rational Rational::from_reduced(mpz_class n, mpz_class d) {
  mpq_class q;
  mpz_swap(q.get_num_mpz_t(), n.get_mpz_t());
  mpz_swap(q.get_den_mpz_t(), d.get_mpz_t());
  return Rational(std::move(q), reduced_tag{});
}

Rational Rational::from_mpq(mpq_class q) {
  q.canonicalize();
  if (sgn(q) < 0) throw DomainError("rational: negative value");
  return Rational(std::move(q), reduced_tag{});
}

mpz_class Rational::floor() const {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return f;
}

std::pair<mpz_class, Rational> Rational::split() const {
  mpz_class f = floor();
  // frac = (num - f*den)/den stays reduced: subtracting an integer does not
  // change the denominator.
  mpz_class rem;
  mpz_fdiv_r(rem.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  Rational frac = from_reduced(std::move(rem), mpz_class(q_.get_den()));
  return {std::move(f), std::move(frac)};
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw DomainError("rational: reciprocal of zero");
  return from_reduced(mpz_class(q_.get_den()), mpz_class(q_.get_num()));
}

std::string Rational::str() const {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(mpq_class(a.q_ + b.q_), Rational::reduced_tag{});
}

Rational operator-(const Rational& a, const Rational& b) {
  if (a < b) throw DomainError("rational: negative difference");
  return Rational(mpq_class(a.q_ - b.q_), Rational::reduced_tag{});
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(mpq_class(a.q_ * b.q_), Rational::reduced_tag{});
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw DomainError("rational: division by zero");
  return Rational(mpq_class(a.q_ / b.q_), Rational::reduced_tag{});
}

}  // namespace cwforest

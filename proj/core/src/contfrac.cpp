#include "cwforest/contfrac.hpp"

#include <algorithm>
#include <cctype>

namespace cwforest {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (const char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

ContinuedFraction ContinuedFraction::encode(const Rational& x) {
  std::vector<mpz_class> coeffs;
  if (x.is_zero()) {
    coeffs.emplace_back(0);
    return ContinuedFraction(std::move(coeffs), unchecked_tag{});
  }
  // Euclid's algorithm; the final quotient is automatically >= 2 whenever
  // there is more than one, so the result is canonical as produced.
  mpz_class a = x.num();
  mpz_class b = x.den();
  mpz_class q, r;
  while (true) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    coeffs.push_back(q);
    if (sgn(r) == 0) break;
    mpz_swap(a.get_mpz_t(), b.get_mpz_t());
    mpz_swap(b.get_mpz_t(), r.get_mpz_t());
  }
  return ContinuedFraction(std::move(coeffs), unchecked_tag{});
}

ContinuedFraction ContinuedFraction::from_coeffs(std::vector<mpz_class> coeffs) {
  if (coeffs.empty()) throw DomainError("cf: empty coefficient list");
  if (sgn(coeffs.front()) < 0) throw DomainError("cf: negative leading coefficient");
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    if (coeffs[i] < 1) throw DomainError("cf: coefficient at index " + std::to_string(i) + " must be >= 1");
  }
  return ContinuedFraction(std::move(coeffs), unchecked_tag{});
}

ContinuedFraction ContinuedFraction::parse(std::string_view text) {
  std::string_view s = trimmed(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw ParseError("cf: expected \"[q0,q1,...]\", got \"" + std::string(text) + "\"");
  }
  s.remove_prefix(1);
  s.remove_suffix(1);
  std::vector<mpz_class> coeffs;
  while (true) {
    const auto comma = s.find(',');
    const std::string_view token = trimmed(s.substr(0, comma));
    if (!all_digits(token)) {
      throw ParseError("cf: bad coefficient \"" + std::string(token) + "\" in \"" + std::string(text) + "\"");
    }
    coeffs.emplace_back(std::string(token));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return from_coeffs(std::move(coeffs));
}

Rational ContinuedFraction::decode() const {
  // Continuant recurrence; consecutive convergents are coprime, so the final
  // fraction is already reduced for any well-formed coefficient list.
  mpz_class p_prev(1), p(coeffs_[0]);
  mpz_class d_prev(0), d(1);
  mpz_class t;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    t = coeffs_[i] * p + p_prev;
    p_prev = p;
    mpz_swap(p.get_mpz_t(), t.get_mpz_t());
    t = coeffs_[i] * d + d_prev;
    d_prev = d;
    mpz_swap(d.get_mpz_t(), t.get_mpz_t());
  }
  return Rational::from_reduced(std::move(p), std::move(d));
}

bool ContinuedFraction::is_canonical() const {
  return coeffs_.size() == 1 || coeffs_.back() >= 2;
}

ContinuedFraction ContinuedFraction::long_form() const {
  if (!is_canonical()) throw DomainError("cf: long_form requires a canonical input");
  if (coeffs_.size() == 1 && sgn(coeffs_[0]) == 0) {
    throw DomainError("cf: 0 = [0] has no second representation");
  }
  std::vector<mpz_class> out = coeffs_;
  out.back() -= 1;
  out.emplace_back(1);
  return ContinuedFraction(std::move(out), unchecked_tag{});
}

ContinuedFraction ContinuedFraction::short_form() const {
  if (coeffs_.size() < 2 || coeffs_.back() != 1) {
    throw DomainError("cf: short_form requires a trailing 1 and at least two coefficients");
  }
  std::vector<mpz_class> out = coeffs_;
  out.pop_back();
  out.back() += 1;
  return ContinuedFraction(std::move(out), unchecked_tag{});
}

ContinuedFraction ContinuedFraction::canonicalized() const {
  if (coeffs_.size() >= 2 && coeffs_.back() == 1) return short_form();
  return *this;
}

std::string ContinuedFraction::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i != 0) out += ',';
    out += coeffs_[i].get_str();
  }
  out += ']';
  return out;
}

std::strong_ordering ContinuedFraction::compare(const ContinuedFraction& a, const ContinuedFraction& b) {
  const ContinuedFraction ca = a.canonicalized();
  const ContinuedFraction cb = b.canonicalized();
  const std::size_t common = std::min(ca.size(), cb.size());
  for (std::size_t i = 0; i < common; ++i) {
    const int c = cmp(ca[i], cb[i]);
    if (c == 0) continue;
    // At even depth a smaller coefficient means a smaller value; the
    // direction alternates with each level of the fraction.
    const bool even = i % 2 == 0;
    if ((c < 0) == even) return std::strong_ordering::less;
    return std::strong_ordering::greater;
  }
  if (ca.size() == cb.size()) return std::strong_ordering::equal;
  // One canonical sequence is a proper prefix of the other; the prefix is the
  // smaller value exactly when its last index is even.
  const bool a_shorter = ca.size() < cb.size();
  const std::size_t s = (a_shorter ? ca : cb).last_index();
  const bool prefix_smaller = s % 2 == 0;
  if (a_shorter == prefix_smaller) return std::strong_ordering::less;
  return std::strong_ordering::greater;
}

Rational ContinuedFraction::prefix_difference_bound(const ContinuedFraction& a, const ContinuedFraction& b) {
  if (a == b) throw DomainError("cf: prefix bound requires distinct sequences");
  if (a[0] != b[0]) throw DomainError("cf: prefix bound requires equal integer parts");
  const std::size_t common = std::min(a.size(), b.size());
  std::size_t k = common - 1;
  for (std::size_t i = 1; i < common; ++i) {
    if (a[i] != b[i]) {
      k = i - 1;
      break;
    }
  }
  mpz_class denom(1);
  for (std::size_t j = 1; j <= k; ++j) denom *= a[j] * a[j];
  return Rational::from_reduced(mpz_class(1), std::move(denom));
}

long long cf_length(const Rational& x) {
  if (x.is_zero()) throw DomainError("cf_length: undefined at 0");
  return detail::cf_length_raw(x.num().get_mpz_t(), x.den().get_mpz_t());
}

namespace detail {

long long cf_length_raw(mpz_srcptr num, mpz_srcptr den) {
  mpz_class a(num), b(den), r;
  long long terms = 0;
  while (true) {
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    ++terms;
    if (sgn(r) == 0) break;
    mpz_swap(a.get_mpz_t(), b.get_mpz_t());
    mpz_swap(b.get_mpz_t(), r.get_mpz_t());
  }
  return terms - 1;
}

}  // namespace detail

}  // namespace cwforest

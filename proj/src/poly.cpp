#include "atiyah_lab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "atiyah_lab/errors.hpp"

namespace alab {

namespace {

unsigned total_degree(const Poly::Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); }

}  // namespace

bool Poly::GradedLex::operator()(const Exponents& a, const Exponents& b) const {
  const unsigned da = total_degree(a);
  const unsigned db = total_degree(b);
  if (da != db)
    return da < db;
  return a < b;
}

Poly Poly::constant(std::size_t nvars, const Rational& c) {
  Poly p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t var) {
  if (var >= nvars)
    throw InputError("variable index " + std::to_string(var + 1) + " out of range");
  Exponents e(nvars, 0);
  e[var] = 1;
  Poly p(nvars);
  p.add_term(e, Rational(1));
  return p;
}

Poly Poly::monomial(const Exponents& exps, const Rational& c) {
  Poly p(exps.size());
  p.add_term(exps, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

Rational Poly::constant_term() const { return coefficient(Exponents(nvars_, 0)); }

Rational Poly::coefficient(const Exponents& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::degree() const {
  if (terms_.empty())
    return -1;
  return static_cast<int>(total_degree(terms_.rbegin()->first));
}

bool Poly::depends_on(std::size_t var) const {
  return std::any_of(terms_.begin(), terms_.end(), [var](const auto& t) { return t.first[var] != 0; });
}

void Poly::add_term(const Exponents& exps, const Rational& c) {
  if (exps.size() != nvars_)
    throw InputError("monomial arity does not match polynomial variable count");
  if (c == 0)
    return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0)
      terms_.erase(it);
  }
}

void Poly::check_compatible(const Poly& other) const {
  if (nvars_ != other.nvars_)
    throw InputError("polynomial variable counts differ (" + std::to_string(nvars_) + " vs " +
                     std::to_string(other.nvars_) + ")");
}

Poly& Poly::operator+=(const Poly& other) {
  check_compatible(other);
  for (const auto& [e, c] : other.terms_)
    add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  check_compatible(other);
  for (const auto& [e, c] : other.terms_)
    add_term(e, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_compatible(b);
  Poly out(a.nvars_);
  Poly::Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Poly& Poly::operator*=(const Poly& other) { return *this = *this * other; }

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coeff] : terms_)
    coeff *= c;
  return *this;
}

Poly Poly::operator-() const {
  Poly out(*this);
  for (auto& [e, c] : out.terms_)
    c = -c;
  return out;
}

Poly Poly::derivative(std::size_t var) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0)
      continue;
    Exponents d = e;
    --d[var];
    out.add_term(d, c * e[var]);
  }
  return out;
}

Poly Poly::antiderivative(std::size_t var) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    ++d[var];
    out.add_term(d, c / Rational(d[var]));
  }
  return out;
}

Poly Poly::at_zero(std::size_t var) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_)
    if (e[var] == 0)
      out.add_term(e, c);
  return out;
}

Poly Poly::truncated(int max_degree) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_)
    if (static_cast<int>(total_degree(e)) <= max_degree)
      out.terms_.emplace_hint(out.terms_.end(), e, c);
  return out;
}

Poly Poly::drop_leading_variables(std::size_t count) const {
  Poly out(nvars_ - count);
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < count; ++i)
      if (e[i] != 0)
        throw PreconditionError("polynomial " + to_string() + " depends on a dropped variable");
    out.add_term(Exponents(e.begin() + static_cast<std::ptrdiff_t>(count), e.end()), c);
  }
  return out;
}

Poly Poly::embedded(std::size_t nvars, std::size_t offset) const {
  if (offset + nvars_ > nvars)
    throw InputError("embedding does not fit the target variable count");
  Poly out(nvars);
  Exponents d(nvars, 0);
  for (const auto& [e, c] : terms_) {
    std::fill(d.begin(), d.end(), 0);
    std::copy(e.begin(), e.end(), d.begin() + static_cast<std::ptrdiff_t>(offset));
    out.add_term(d, c);
  }
  return out;
}

std::string Poly::to_string() const {
  if (terms_.empty())
    return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational magnitude = abs(c);
    if (first) {
      if (c < 0)
        out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0)
        continue;
      if (!mono.empty())
        mono += "*";
      mono += "x" + std::to_string(i + 1);
      if (e[i] > 1)
        mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      out += alab::to_string(magnitude);
    else if (magnitude == 1)
      out += mono;
    else
      out += alab::to_string(magnitude) + "*" + mono;
  }
  return out;
}

// --- parser ---------------------------------------------------------------

namespace {

class PolyParser {
public:
  PolyParser(std::string_view text, std::size_t nvars) : text_(text), nvars_(nvars) {}

  Poly parse() {
    Poly result = expr();
    skip_space();
    if (pos_ != text_.size())
      throw SyntaxError(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    return result;
  }

private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char ch) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string digits() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_)
      throw SyntaxError(pos_, pos_ < text_.size() ? std::string("expected digits, found '") + text_[pos_] + "'"
                                                  : std::string("expected digits, found end of input"));
    return std::string(text_.substr(start, pos_ - start));
  }

  Poly expr() {
    Poly acc(nvars_);
    bool negate = false;
    if (accept('-'))
      negate = true;
    else
      accept('+');
    acc = term();
    if (negate)
      acc = -acc;
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Poly term() {
    Poly acc = factor();
    while (accept('*'))
      acc *= factor();
    return acc;
  }

  Poly factor() {
    if (accept('-'))
      return -factor();
    Poly base = primary();
    if (accept('^')) {
      const std::size_t at = pos_;
      const std::string d = digits();
      if (d.size() > 4)
        throw SyntaxError(at, "exponent too large");
      const unsigned n = static_cast<unsigned>(std::stoul(d));
      Poly out = Poly::constant(nvars_, Rational(1));
      for (unsigned i = 0; i < n; ++i)
        out *= base;
      return out;
    }
    return base;
  }

  Poly primary() {
    skip_space();
    if (pos_ >= text_.size())
      throw SyntaxError(pos_, "unexpected end of input");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      Poly inner = expr();
      if (!accept(')'))
        throw SyntaxError(pos_, "expected ')'");
      return inner;
    }
    if (ch == 'x') {
      const std::size_t at = pos_;
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw SyntaxError(pos_, "expected variable index after 'x'");
      const std::string d = digits();
      const std::size_t index = d.size() > 6 ? 0 : std::stoul(d);
      if (index < 1 || index > nvars_)
        throw SyntaxError(at, "variable x" + d + " out of range (chart has " + std::to_string(nvars_) +
                                  " variables)");
      return Poly::variable(nvars_, index - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      mpz_class num(digits(), 10);
      mpz_class den(1);
      // A '/' directly after an integer literal is a rational literal, not division.
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        const std::size_t at = pos_;
        den = mpz_class(digits(), 10);
        if (den == 0)
          throw SyntaxError(at, "zero denominator");
      }
      Rational c(num, den);
      c.canonicalize();
      return Poly::constant(nvars_, c);
    }
    throw SyntaxError(pos_, std::string("unexpected character '") + ch + "'");
  }

  std::string_view text_;
  std::size_t nvars_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly Poly::parse(std::string_view text, std::size_t nvars) { return PolyParser(text, nvars).parse(); }

Poly poly_add(const Poly& a, const Poly& b) { return a + b; }
Poly poly_sub(const Poly& a, const Poly& b) { return a - b; }
Poly poly_mul(const Poly& a, const Poly& b) { return a * b; }

Poly poly_diff(const Poly& p, std::size_t var) {
  if (var >= p.nvars())
    throw InputError("derivative variable " + std::to_string(var + 1) + " out of range");
  return p.derivative(var);
}

}  // namespace alab

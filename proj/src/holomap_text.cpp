#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pmrig/holomap.hpp"

namespace pmrig {

namespace {

double parse_real(std::string_view s, std::string_view whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DomainError("parse_complex: malformed number '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Complex parse_complex(std::string_view token) {
  if (token.empty()) throw DomainError("parse_complex: empty literal");
  if (token.back() != 'i') return {parse_real(token, token), 0.0};
  const std::string_view body = token.substr(0, token.size() - 1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, parse_real(body, token)};
  return {parse_real(body.substr(0, split), token), parse_real(body.substr(split), token)};
}

std::string format_complex(Complex c) {
  char buf[64];
  if (c.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", c.real());
  } else if (c.real() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17gi", c.imag());
  } else {
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", c.real(), c.imag());
  }
  return buf;
}

namespace {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  HoloMap parse_all() {
    HoloMap f = parse_map();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "parse_holomap: " << what << " at offset " << pos_ << " in '" << text_ << "'";
    throw DomainError(os.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view atom() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      ++pos_;
    if (start == pos_) fail("expected an atom");
    return text_.substr(start, pos_ - start);
  }

  Complex complex_atom() { return parse_complex(atom()); }

  double real_atom() {
    const Complex c = complex_atom();
    if (c.imag() != 0.0) fail("expected a real number");
    return c.real();
  }

  HoloMap parse_map() {
    expect('(');
    const std::string head(atom());
    HoloMap out = HoloMap::identity();
    if (head == "id") {
    } else if (head == "const") {
      out = HoloMap::constant(complex_atom());
    } else if (head == "mono") {
      const double k = real_atom();
      if (k < 0 || k != std::floor(k)) fail("monomial exponent must be a non-negative integer");
      out = HoloMap::monomial(static_cast<int>(k));
    } else if (head == "poly") {
      std::vector<Complex> c;
      while (!peek(')')) c.push_back(complex_atom());
      if (c.empty()) fail("polynomial needs at least one coefficient");
      out = HoloMap::polynomial(std::move(c));
    } else if (head == "aut") {
      const Complex a = complex_atom();
      const double theta = real_atom();
      out = HoloMap::automorphism(a, theta);
    } else if (head == "blaschke") {
      const double theta = real_atom();
      std::vector<Complex> zeros;
      while (!peek(')')) zeros.push_back(complex_atom());
      out = HoloMap::blaschke(std::move(zeros), theta);
    } else if (head == "compose" || head == "sum") {
      HoloMap a = parse_map();
      HoloMap b = parse_map();
      out = head == "compose" ? HoloMap::compose(a, b) : HoloMap::sum(a, b);
    } else if (head == "scale") {
      const Complex c = complex_atom();
      out = HoloMap::scale(c, parse_map());
    } else if (head == "feps") {
      out = maps::f_epsilon(real_atom());
    } else {
      fail("unknown map head '" + head + "'");
    }
    expect(')');
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

HoloMap parse_holomap(std::string_view text) { return Parser(text).parse_all(); }

std::string to_text(const HoloMap& f) {
  using K = HoloMap::Kind;
  std::string out;
  switch (f.kind()) {
    case K::Identity: return "(id)";
    case K::Constant: return "(const " + format_complex(f.scalar()) + ")";
    case K::Monomial: return "(mono " + std::to_string(f.exponent()) + ")";
    case K::Polynomial:
      out = "(poly";
      for (const auto& c : f.list()) out += " " + format_complex(c);
      return out + ")";
    case K::Automorphism:
      return "(aut " + format_complex(f.scalar()) + " " + format_real(f.angle()) + ")";
    case K::Blaschke:
      out = "(blaschke " + format_real(f.angle());
      for (const auto& a : f.list()) out += " " + format_complex(a);
      return out + ")";
    case K::Compose: return "(compose " + to_text(f.left()) + " " + to_text(f.right()) + ")";
    case K::Sum: return "(sum " + to_text(f.left()) + " " + to_text(f.right()) + ")";
    case K::Scale: return "(scale " + format_complex(f.scalar()) + " " + to_text(f.left()) + ")";
  }
  throw Error("to_text: unknown node kind");
}

}  // namespace pmrig

#include <cctype>
#include <charconv>
#include <cmath>

#include "pmrig/cli.hpp"

namespace pmrig::cli {

namespace {

// Recursive-descent reader over one object description.
class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip();
    return pos_ >= s_.size();
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }
  /// Raw argument text up to the next top-level ',' or ')'.
  std::string_view raw() {
    skip();
    const std::size_t start = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ',' && depth == 0) break;
      ++pos_;
    }
    std::size_t end = pos_;
    while (end > start && std::isspace(static_cast<unsigned char>(s_[end - 1]))) --end;
    if (end == start) fail("empty argument");
    return s_.substr(start, end - start);
  }
  double real() {
    const auto t = raw();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
      fail("malformed number '" + std::string(t) + "'");
    return v;
  }
  int integer() {
    const auto t = raw();
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail("malformed integer '" + std::string(t) + "'");
    return v;
  }
  Complex complex() { return parse_complex(raw()); }
  HoloMap map() {
    if (peek() != '(') fail("expected a map s-expression");
    return parse_holomap(raw());
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("'" + std::string(s_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

CurvatureFunction read_curvature(Reader& r) {
  const std::string name = r.ident();
  r.expect('(');
  const double x = r.real();
  r.expect(')');
  if (name == "constant") return curvature_constant(x);
  if (name == "radial") return curvature_radial(x);
  r.fail("unknown curvature '" + name + "'");
}

Pseudometric read_metric(Reader& r) {
  const std::string name = r.ident();
  if (name == "poincare") return poincare();
  r.expect('(');
  Pseudometric out = poincare();
  if (name == "mu_max") {
    out = mu_max(r.real());
  } else if (name == "pullback") {
    const HoloMap f = r.map();
    r.expect(',');
    out = pullback(f, read_metric(r));
  } else if (name == "scale" || name == "dilate") {
    const double t = r.real();
    r.expect(',');
    const Pseudometric m = read_metric(r);
    out = name == "scale" ? scale(t, m) : dilate(t, m);
  } else if (name == "example4_1") {
    out = example_4_1(r.integer());
  } else if (name == "exp_weight") {
    if (r.ident() != "example4_1") r.fail("exp_weight accepts example4_1(n) only");
    r.expect('(');
    out = example_4_1(r.integer());
    r.expect(')');
  } else if (name == "example4_2") {
    const int n = r.integer();
    r.expect(',');
    const double alpha = r.real();
    r.expect(',');
    out = example_4_2(n, alpha, r.complex());
  } else if (name == "liouville") {
    const CurvatureFunction kappa = read_curvature(r);
    r.expect(',');
    const double R = r.real();
    SolverOptions opts;
    if (r.peek() == ',') {
      r.expect(',');
      opts.n = r.integer();
    }
    out = make_pinched_metric(kappa, R, opts);
  } else {
    r.fail("unknown metric '" + name + "'");
  }
  r.expect(')');
  return out;
}

// Runs a reader to completion, turning library errors into ConfigError.
template <typename T, typename F>
T read_all(std::string_view text, const char* what, F&& body) {
  try {
    Reader r(text);
    T out = body(r);
    if (!r.at_end()) r.fail("trailing input");
    return out;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string(what) + " '" + std::string(text) + "': " + e.what());
  }
}

}  // namespace

Pseudometric parse_metric(std::string_view text) {
  return read_all<Pseudometric>(text, "metric", [](Reader& r) { return read_metric(r); });
}

CurvatureFunction parse_curvature(std::string_view text) {
  return read_all<CurvatureFunction>(text, "curvature", [](Reader& r) { return read_curvature(r); });
}

MetricSequence parse_sequence(std::string_view text) {
  return read_all<MetricSequence>(text, "sequence", [](Reader& r) {
    const std::string name = r.ident();
    if (name == "smoothed_weights") return sequences::smoothed_weights();
    if (name == "fading_zeros") return sequences::fading_zeros();
    r.expect('(');
    MetricSequence out;
    if (name == "constant")
      out = sequences::constant(read_metric(r));
    else if (name == "scaled")
      out = sequences::scaled(read_metric(r));
    else if (name == "mu_max_ladder")
      out = sequences::mu_max_ladder(r.real());
    else
      r.fail("unknown sequence '" + name + "'");
    r.expect(')');
    return out;
  });
}

std::function<HoloMap(int)> parse_map_family(std::string_view text) {
  return read_all<std::function<HoloMap(int)>>(text, "map family", [](Reader& r) -> std::function<HoloMap(int)> {
    const std::string name = r.ident();
    if (name == "rotations")
      return [](int n) { return HoloMap::scale(std::polar(1.0, 1.0 / n), HoloMap::identity()); };
    if (name == "rim_automorphisms") return [](int n) { return HoloMap::automorphism(1.0 - 1.0 / n); };
    if (name != "constant") r.fail("unknown map family '" + name + "'");
    r.expect('(');
    const HoloMap f = r.map();
    r.expect(')');
    return [f](int) { return f; };
  });
}

std::function<Complex(int)> parse_point_sequence(std::string_view text) {
  return read_all<std::function<Complex(int)>>(text, "point sequence", [](Reader& r) -> std::function<Complex(int)> {
    const std::string name = r.ident();
    if (name == "rim" && (r.at_end() || r.peek() != '(')) return [](int n) { return Complex(1.0 - 1.0 / n); };
    r.expect('(');
    std::function<Complex(int)> out;
    if (name == "rim") {
      const double s = r.real();
      if (!(s >= 1.0)) r.fail("rim scale must be >= 1");
      out = [s](int n) { return Complex(1.0 - 1.0 / (s * n)); };
    } else if (name == "point") {
      const Complex z = r.complex();
      if (!(std::abs(z) < 1.0)) r.fail("point must lie in the unit disk");
      out = [z](int) { return z; };
    } else {
      r.fail("unknown point sequence '" + name + "'");
    }
    r.expect(')');
    return out;
  });
}

std::vector<Complex> parse_complex_list(std::string_view text) {
  std::vector<Complex> out;
  std::size_t start = 0;
  try {
    while (start <= text.size()) {
      std::size_t end = text.find(',', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view item = text.substr(start, end - start);
      while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
      while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
      out.push_back(parse_complex(item));
      start = end + 1;
    }
  } catch (const Error& e) {
    throw ConfigError("complex list '" + std::string(text) + "': " + e.what());
  }
  return out;
}

}  // namespace pmrig::cli

#pragma once

// Potential expression language. Admissible potentials are even polynomials
// with non-negative coefficients,
//
//   V(xi) = sum_k c_k xi^(2k),  c_k >= 0, at least one c_k > 0,
//
// a checkable sufficient condition for the three admissibility requirements:
// U(y) = sum c_k y^k convex on y >= 0, V a function of (x/a)^2, and V strictly
// increasing for xi > 0. Coefficients are dimensionless (energies already
// divided by the unit E0).
//
// Grammar (whitespace-insensitive, '^' binds tighter than '*'):
//   expr  := term ('+' term)*
//   term  := number '*' power | power | number
//   power := 'x' '^' integer | 'x'
//   named := ident '(' args ')'        -- harmonic(w) or power(n, v0)
// Coefficients are parsed with strtod, so decimal round-trips are bit-exact.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "gup/core.hpp"

namespace gup {

/// Syntax or well-formedness error in a potential expression. Carries the
/// character offset the parse failed at.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at position " +
                           std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// One monomial c * xi^e of an even polynomial potential.
struct PotentialTerm {
  double coefficient = 0.0;
  int exponent = 0;

  bool operator==(const PotentialTerm&) const = default;
};

/// Validated-form potential: collected terms sorted by ascending exponent,
/// plus the text it was parsed from.
struct PotentialSpec {
  std::vector<PotentialTerm> terms;
  std::string source_text;

  /// V(xi) = w xi^2.
  static PotentialSpec harmonic(double w = 1.0) {
    return {{{w, 2}}, "harmonic(" + format_coefficient(w) + ")"};
  }

  /// V(xi) = v0 xi^(2n).
  static PotentialSpec power(int n, double v0) {
    return {{{v0, 2 * n}},
            "power(" + std::to_string(n) + ", " + format_coefficient(v0) + ")"};
  }

  static std::string format_coefficient(double c) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", c);
    return buf;
  }
};

/// Canonical text form; parsing it back yields the identical terms list.
inline std::string to_string(const PotentialSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.terms.size(); ++i) {
    if (i) out += " + ";
    out += PotentialSpec::format_coefficient(spec.terms[i].coefficient);
    out += "*x^";
    out += std::to_string(spec.terms[i].exponent);
  }
  return out;
}

namespace detail {

class PotentialParser {
 public:
  explicit PotentialParser(const std::string& text) : s_(text) {}

  PotentialSpec parse() {
    skip_ws();
    if (at_end()) throw parse_error("empty potential expression", pos_);

    PotentialSpec spec;
    spec.source_text = s_;

    if (std::isalpha(peek()) && peek() != 'x') {
      parse_named(spec);
    } else if (peek() == 'x') {
      // Plain 'x...' may still be a call-looking typo such as "x(2)".
      const std::size_t mark = pos_;
      std::string ident = read_identifier();
      skip_ws();
      if (!at_end() && peek() == '(')
        throw parse_error("unknown identifier '" + ident + "'", mark);
      pos_ = mark;
      parse_expression(spec);
    } else {
      parse_expression(spec);
    }

    skip_ws();
    if (!at_end())
      throw parse_error(std::string("unexpected character '") + peek() + "'",
                        pos_);
    return spec;
  }

 private:
  void parse_named(PotentialSpec& spec) {
    const std::size_t mark = pos_;
    const std::string ident = read_identifier();
    skip_ws();
    expect('(');
    if (ident == "harmonic") {
      const double w = parse_number("harmonic strength");
      skip_ws();
      expect(')');
      spec.terms = {{w, 2}};
    } else if (ident == "power") {
      const int n = parse_integer("power index n");
      if (n < 1) throw parse_error("power index n must be >= 1", pos_);
      skip_ws();
      expect(',');
      const double v0 = parse_number("power strength v0");
      if (!(v0 > 0.0))
        throw parse_error("power strength v0 must be positive", pos_);
      skip_ws();
      expect(')');
      spec.terms = {{v0, 2 * n}};
    } else {
      throw parse_error("unknown identifier '" + ident + "'", mark);
    }
  }

  void parse_expression(PotentialSpec& spec) {
    std::map<int, double> collected;
    parse_term(collected);
    skip_ws();
    while (!at_end() && peek() == '+') {
      ++pos_;
      parse_term(collected);
      skip_ws();
    }
    for (const auto& [exponent, coefficient] : collected)
      spec.terms.push_back({coefficient, exponent});
  }

  void parse_term(std::map<int, double>& collected) {
    skip_ws();
    const std::size_t term_pos = pos_;
    double coefficient = 1.0;

    if (at_end()) throw parse_error("expected term", pos_);
    if (peek() != 'x') {
      coefficient = parse_number("coefficient");
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
      } else {
        // A bare constant is a xi^0 term, which the potential form excludes.
        throw parse_error("constant term has zero exponent", term_pos);
      }
    }

    if (at_end() || peek() != 'x')
      throw parse_error("expected 'x'", pos_);
    ++pos_;
    int exponent = 1;
    skip_ws();
    if (!at_end() && peek() == '^') {
      ++pos_;
      exponent = parse_integer("exponent");
    }

    if (coefficient < 0.0)
      throw parse_error("negative coefficient", term_pos);
    if (exponent <= 0)
      throw parse_error("zero exponent", term_pos);
    if (exponent % 2 != 0)
      throw parse_error("odd exponent " + std::to_string(exponent) +
                            " (potential must be even in x)",
                        term_pos);
    collected[exponent] += coefficient;
  }

  double parse_number(const std::string& what) {
    skip_ws();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin)
      throw parse_error("expected " + what, pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return value;
  }

  int parse_integer(const std::string& what) {
    skip_ws();
    const std::size_t start = pos_;
    std::size_t p = pos_;
    while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p])))
      ++p;
    if (p == start) throw parse_error("expected " + what, pos_);
    const long value = std::strtol(s_.c_str() + start, nullptr, 10);
    pos_ = p;
    if (value > 1000000) throw parse_error(what + " too large", start);
    return static_cast<int>(value);
  }

  std::string read_identifier() {
    std::size_t p = pos_;
    while (p < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[p])) || s_[p] == '_'))
      ++p;
    std::string ident = s_.substr(pos_, p - pos_);
    pos_ = p;
    return ident;
  }

  void expect(char c) {
    skip_ws();
    if (at_end() || peek() != c)
      throw parse_error(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool at_end() const noexcept { return pos_ >= s_.size(); }
  char peek() const noexcept { return s_[pos_]; }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an expression or named form into a normalized terms list.
/// Throws parse_error on syntax errors, odd or zero exponents, negative
/// coefficients and unknown identifiers.
inline PotentialSpec parse_potential(const std::string& text) {
  return detail::PotentialParser(text).parse();
}

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

/// The three admissibility requirements on the potential.
enum class Admissibility {
  Convexity,        ///< U(y) convex on y >= 0
  EvenForm,         ///< function of (x/a)^2 only
  Monotonicity,     ///< dV/dx > 0 for x > 0 (excludes singular/flat wells)
};

inline const char* admissibility_name(Admissibility c) noexcept {
  switch (c) {
    case Admissibility::Convexity: return "convexity";
    case Admissibility::EvenForm: return "even_form";
    case Admissibility::Monotonicity: return "monotonicity";
  }
  return "unknown";
}

struct ConditionViolation {
  Admissibility condition;
  std::string detail;
};

/// Checks the spec against all three conditions. An empty list means the
/// potential is admissible.
inline std::vector<ConditionViolation> validate(const PotentialSpec& spec) {
  std::vector<ConditionViolation> out;
  bool any_positive = false;
  bool convex = true;
  bool even = true;
  for (const auto& term : spec.terms) {
    if (term.coefficient < 0.0) convex = false;
    if (term.exponent <= 0 || term.exponent % 2 != 0) even = false;
    if (term.coefficient > 0.0 && term.exponent >= 2) any_positive = true;
  }
  if (!convex)
    out.push_back({Admissibility::Convexity,
                   "negative coefficient; U((x/a)^2) is not convex"});
  if (!even)
    out.push_back({Admissibility::EvenForm,
                   "exponent not an even positive integer"});
  if (!any_positive)
    out.push_back({Admissibility::Monotonicity,
                   "potential is identically zero; dV/dx is not positive"});
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Analytic evaluators for an admissible potential:
///   v(xi)       = sum c xi^e
///   dv(xi)      = sum c e xi^(e-1)
///   vtilde(xi)  = dv/(2 xi) = sum c (e/2) xi^(e-2)   (> 0 for xi > 0)
///   dvtilde(xi) = sum c (e/2)(e-2) xi^(e-3)
struct PotentialEvaluator {
  std::vector<PotentialTerm> terms;

  double v(double xi) const {
    check_domain(xi);
    double sum = 0.0;
    for (const auto& t : terms) sum += t.coefficient * std::pow(xi, t.exponent);
    return sum;
  }

  double dv(double xi) const {
    check_domain(xi);
    double sum = 0.0;
    for (const auto& t : terms)
      sum += t.coefficient * t.exponent * std::pow(xi, t.exponent - 1);
    return sum;
  }

  double vtilde(double xi) const {
    check_domain(xi);
    double sum = 0.0;
    for (const auto& t : terms)
      sum += t.coefficient * (t.exponent / 2) * std::pow(xi, t.exponent - 2);
    return sum;
  }

  double dvtilde(double xi) const {
    check_domain(xi);
    double sum = 0.0;
    for (const auto& t : terms)
      sum += t.coefficient * (t.exponent / 2) * (t.exponent - 2) *
             std::pow(xi, t.exponent - 3);
    return sum;
  }

 private:
  static void check_domain(double xi) {
    if (!(xi > 0.0))
      throw std::domain_error("potential evaluation requires xi > 0");
  }
};

/// Builds the evaluator. The spec must be admissible.
inline PotentialEvaluator evaluator(const PotentialSpec& spec) {
  const auto violations = validate(spec);
  if (!violations.empty()) {
    std::string msg = "potential is not admissible:";
    for (const auto& v : violations) {
      msg += ' ';
      msg += admissibility_name(v.condition);
    }
    throw config_error(msg);
  }
  return PotentialEvaluator{spec.terms};
}

}  // namespace gup

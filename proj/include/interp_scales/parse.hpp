#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <string_view>

#include "interp_scales/boyd.hpp"
#include "interp_scales/error.hpp"
#include "interp_scales/kfunc.hpp"
#include "interp_scales/snorm.hpp"

namespace interp_scales {

/// Stored length of weight sequences built from spec strings; the closed-form
/// generator covers anything longer.
inline constexpr std::size_t kSpecWeightLength = 4096;

class SpecError : public InvalidInput {
 public:
  SpecError(const std::string& token, const std::string& why)
      : InvalidInput("bad spec '" + token + "': " + why), token_(token) {}
  [[nodiscard]] const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Drops one pair of parentheses enclosing the whole string.
inline std::string_view strip_parens(std::string_view s) {
  s = trim(s);
  while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    bool encloses = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') --depth;
      if (depth == 0 && i + 1 < s.size()) {
        encloses = false;
        break;
      }
    }
    if (!encloses) break;
    s = trim(s.substr(1, s.size() - 2));
  }
  return s;
}

inline std::size_t find_top_level(std::string_view s, char c) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == c && depth == 0) return i;
  }
  return std::string_view::npos;
}

/// key=value pairs separated by commas.
inline std::map<std::string, std::string> parse_kv(std::string_view body, const std::string& token) {
  std::map<std::string, std::string> kv;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const auto item = trim(body.substr(0, comma));
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw SpecError(token, "expected key=value, got '" + std::string(item) + "'");
    kv[std::string(trim(item.substr(0, eq)))] = std::string(trim(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return kv;
}

}  // namespace detail

/// Real number with `inf` / `infinity` accepted.
inline double parse_real(std::string_view s, const std::string& token) {
  s = detail::trim(s);
  if (s == "inf" || s == "infinity" || s == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw SpecError(token, "'" + std::string(s) + "' is not a number");
  }
  return v;
}

/// power:<theta> | phialphap:a=<a>,p=<p> | quot:<A>/<B> | prod:<A>*<B>.
/// Operands may be parenthesised to nest.
inline BoydFunction parse_boyd(std::string_view spec) {
  const std::string token(spec);
  spec = detail::strip_parens(spec);
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw SpecError(token, "expected <kind>:<args>");
  const auto kind = spec.substr(0, colon);
  const auto body = spec.substr(colon + 1);
  if (kind == "power") return BoydFunction::power(parse_real(body, token));
  if (kind == "phialphap") {
    auto kv = detail::parse_kv(body, token);
    if (!kv.count("a") || !kv.count("p")) throw SpecError(token, "phialphap needs a=<a>,p=<p>");
    return BoydFunction::phi_alpha_p(power_weights(parse_real(kv["a"], token), kSpecWeightLength),
                                     parse_real(kv["p"], token));
  }
  if (kind == "quot" || kind == "prod") {
    const char op = kind == "quot" ? '/' : '*';
    const auto at = detail::find_top_level(body, op);
    if (at == std::string_view::npos) throw SpecError(token, std::string("expected <A>") + op + "<B>");
    auto lhs = parse_boyd(body.substr(0, at));
    auto rhs = parse_boyd(body.substr(at + 1));
    return op == '/' ? BoydFunction::quotient(std::move(lhs), std::move(rhs))
                     : BoydFunction::product(std::move(lhs), std::move(rhs));
  }
  throw SpecError(token, "unknown function kind '" + std::string(kind) + "'");
}

/// phi1 | phiinf | eps:a=<a> | eps:a=<a>,p=<p>.
inline SymmetricNormingFunction parse_snf(std::string_view spec) {
  const std::string token(spec);
  spec = detail::trim(spec);
  if (spec == "phi1") return SymmetricNormingFunction::extremal_one();
  if (spec == "phiinf") return SymmetricNormingFunction::extremal_infinity();
  if (spec.substr(0, 4) == "eps:") {
    auto kv = detail::parse_kv(spec.substr(4), token);
    if (!kv.count("a")) throw SpecError(token, "eps needs a=<a>");
    auto w = power_weights(parse_real(kv["a"], token), kSpecWeightLength);
    if (kv.count("p")) return SymmetricNormingFunction::convexified(std::move(w), parse_real(kv["p"], token));
    return SymmetricNormingFunction::weighted(std::move(w));
  }
  throw SpecError(token, "unknown symmetric norming function");
}

/// lp:<p> | lm:<q>:<boyd spec> | phi:<snf spec>.
inline SequenceSpaceDescriptor parse_descriptor(std::string_view spec) {
  const std::string token(spec);
  spec = detail::trim(spec);
  if (spec.substr(0, 3) == "lp:") return SequenceSpaceDescriptor::lp(parse_real(spec.substr(3), token));
  if (spec.substr(0, 3) == "lm:") {
    const auto rest = spec.substr(3);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw SpecError(token, "expected lm:<q>:<function>");
    return SequenceSpaceDescriptor::lorentz(parse_boyd(rest.substr(colon + 1)), parse_real(rest.substr(0, colon), token));
  }
  if (spec.substr(0, 4) == "phi:") return SequenceSpaceDescriptor::phi_type(parse_snf(spec.substr(4)));
  throw SpecError(token, "unknown sequence space (expected lp:, lm: or phi:)");
}

}  // namespace interp_scales

#pragma once

// Model specification mini-language:
//   spec      = call { "." call } ;
//   call      = name "(" [ arg { "," arg } ] ")" ;
//   arg       = number | name "=" value | call ;
//   value     = number | call ;
// Names and admissible arities depend on the requested object kind
// (distribution, intensity, branching function, length sequence, tree).
// Errors carry the byte offset of the offending token.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fpt/branching.hpp"
#include "fpt/constructions.hpp"
#include "fpt/distribution.hpp"
#include "fpt/errors.hpp"
#include "fpt/intensity.hpp"
#include "fpt/lazy_tree.hpp"
#include "fpt/stick.hpp"

namespace fpt {

namespace detail {

struct Call;

struct Value {
  std::variant<double, Call*> v;
  std::size_t offset = 0;
};

struct Call {
  std::string name;
  std::size_t offset = 0;
  std::vector<Value> positional;
  std::vector<std::pair<std::string, Value>> keyword;
};

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  // Owns all Call nodes for the lifetime of the parser.
  Call* parse_chain_root() {
    Call* c = parse_call();
    while (peek() == '.') {
      ++pos_;
      Call* mod = parse_call();
      mod->keyword.emplace_back("__base__", Value{c, mod->offset});
      c = mod;
    }
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("trailing input after specification", pos_);
    return c;
  }

 private:
  Call* parse_call() {
    skip_ws();
    std::size_t start = pos_;
    std::string name = parse_name();
    skip_ws();
    expect('(');
    auto* c = arena_.emplace_back(std::make_unique<Call>()).get();
    c->name = std::move(name);
    c->offset = start;
    skip_ws();
    if (peek() != ')') {
      while (true) {
        parse_arg(*c);
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect(')');
    return c;
  }

  void parse_arg(Call& c) {
    skip_ws();
    std::size_t start = pos_;
    if (std::isalpha(peek()) || peek() == '_') {
      std::string name = parse_name();
      skip_ws();
      if (peek() == '=') {
        ++pos_;
        c.keyword.emplace_back(std::move(name), parse_value());
        return;
      }
      if (peek() == '(') {
        pos_ = start;
        c.positional.push_back(Value{parse_call(), start});
        return;
      }
      throw ParseError("expected '=' or '(' after name '" + name + "'", start);
    }
    c.positional.push_back(Value{parse_number(), start});
  }

  Value parse_value() {
    skip_ws();
    std::size_t start = pos_;
    if (std::isalpha(peek()) || peek() == '_')
      return Value{parse_call(), start};
    return Value{parse_number(), start};
  }

  double parse_number() {
    skip_ws();
    std::size_t start = pos_;
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("expected a number", start);
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  std::string parse_name() {
    skip_ws();
    std::size_t start = pos_;
    if (!(std::isalpha(peek()) || peek() == '_'))
      throw ParseError("expected a name", start);
    while (std::isalnum(peek()) || peek() == '_') ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  [[nodiscard]] char peek() const {
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::unique_ptr<Call>> arena_;
};

inline double num_arg(const Call& c, std::size_t i) {
  if (i >= c.positional.size())
    throw ParseError(c.name + ": missing argument " + std::to_string(i + 1), c.offset);
  if (!std::holds_alternative<double>(c.positional[i].v))
    throw ParseError(c.name + ": argument must be a number", c.positional[i].offset);
  return std::get<double>(c.positional[i].v);
}

inline void check_arity(const Call& c, std::size_t lo, std::size_t hi) {
  if (c.positional.size() < lo || c.positional.size() > hi)
    throw ParseError(c.name + ": wrong number of arguments", c.offset);
}

inline std::vector<std::int64_t> int_args(const Call& c) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < c.positional.size(); ++i) {
    double v = num_arg(c, i);
    auto r = static_cast<std::int64_t>(std::llround(v));
    if (std::abs(v - static_cast<double>(r)) > 1e-9)
      throw ParseError(c.name + ": expected an integer argument",
                       c.positional[i].offset);
    out.push_back(r);
  }
  return out;
}

inline WeightDistribution build_distribution(const Call& c);
inline IntensityFunction build_intensity(const Call& c);
inline BranchingFunction build_branching(const Call& c);
inline LengthSequence build_length(const Call& c);

inline WeightDistribution build_distribution(const Call& c) {
  try {
    if (c.name == "exp") {
      check_arity(c, 1, 1);
      return make_exponential(num_arg(c, 0));
    }
    if (c.name == "pow0") {
      check_arity(c, 2, 2);
      return make_power_law_zero(num_arg(c, 0), num_arg(c, 1));
    }
    if (c.name == "const") {
      check_arity(c, 1, 1);
      return make_degenerate(num_arg(c, 0));
    }
    if (c.name == "step") {
      if (c.positional.size() < 2 || c.positional.size() % 2 != 0)
        throw ParseError("step: needs breakpoint,value pairs", c.offset);
      std::vector<double> bp, vals;
      for (std::size_t i = 0; i < c.positional.size(); i += 2) {
        bp.push_back(num_arg(c, i));
        vals.push_back(num_arg(c, i + 1));
      }
      return make_step_distribution(bp, vals);
    }
    if (c.name == "paper41") {
      auto bs = int_args(c);
      return build_paper41(bs, static_cast<int>(bs.size())).g0;
    }
    if (c.name == "paper42") {
      auto bs = int_args(c);
      return build_paper42(bs, static_cast<int>(bs.size())).g0;
    }
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what(), c.offset);
  }
  throw ParseError("unknown distribution '" + c.name + "'", c.offset);
}

inline IntensityFunction build_intensity(const Call& c) {
  try {
    if (c.name == "const") {
      check_arity(c, 1, 1);
      return make_const_intensity(num_arg(c, 0));
    }
    if (c.name == "lin") {
      check_arity(c, 1, 1);
      return make_linear_intensity(num_arg(c, 0));
    }
    if (c.name == "expgrow") {
      if (!c.keyword.empty() && c.keyword.front().first == "C") {
        if (!std::holds_alternative<double>(c.keyword.front().second.v))
          throw ParseError("expgrow: C must be a number", c.offset);
        return make_expgrow_intensity(std::get<double>(c.keyword.front().second.v));
      }
      check_arity(c, 1, 1);
      return make_expgrow_intensity(num_arg(c, 0));
    }
    if (c.name == "supexp") {
      check_arity(c, 0, 0);
      return make_supexp_intensity();
    }
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what(), c.offset);
  }
  throw ParseError("unknown intensity '" + c.name + "'", c.offset);
}

inline BranchingFunction build_branching(const Call& c) {
  try {
    if (c.name == "const") {
      check_arity(c, 1, 1);
      return branching_const(int_args(c)[0]);
    }
    if (c.name == "poly") {
      check_arity(c, 1, 1);
      return branching_poly(num_arg(c, 0));
    }
    if (c.name == "pow2shift") {
      check_arity(c, 1, 1);
      return branching_pow2shift(static_cast<int>(int_args(c)[0]));
    }
    if (c.name == "table") {
      return branching_table(int_args(c));
    }
    if (c.name == "paper41") {
      auto bs = int_args(c);
      return build_paper41(bs, static_cast<int>(bs.size())).f;
    }
    if (c.name == "paper42") {
      auto bs = int_args(c);
      return build_paper42(bs, static_cast<int>(bs.size())).f;
    }
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what(), c.offset);
  }
  throw ParseError("unknown branching function '" + c.name + "'", c.offset);
}

inline LengthSequence build_length(const Call& c) {
  try {
    if (c.name == "invpow") {
      check_arity(c, 1, 1);
      return length_invpow(num_arg(c, 0));
    }
    if (c.name == "invlog") {
      check_arity(c, 0, 0);
      return length_invlog();
    }
    if (c.name == "const") {
      check_arity(c, 1, 1);
      return length_const(num_arg(c, 0));
    }
    if (c.name == "table") {
      std::vector<double> vals;
      for (std::size_t i = 0; i < c.positional.size(); ++i)
        vals.push_back(num_arg(c, i));
      return length_table(std::move(vals));
    }
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what(), c.offset);
  }
  throw ParseError("unknown length sequence '" + c.name + "'", c.offset);
}

inline const Call* call_of(const Value& v, const char* what, std::size_t offset) {
  if (!std::holds_alternative<Call*>(v.v))
    throw ParseError(std::string(what) + " must be a specification", offset);
  return std::get<Call*>(v.v);
}

inline LazyTree build_tree(const Call& c, std::uint64_t seed) {
  if (c.name == "trim" || c.name == "renorm") {
    const Call* base = nullptr;
    for (const auto& [k, v] : c.keyword)
      if (k == "__base__") base = std::get<Call*>(v.v);
    if (!base) throw ParseError(c.name + ": modifier needs a base tree", c.offset);
    LazyTree t = build_tree(*base, seed);
    try {
      if (c.name == "trim") {
        check_arity(c, 1, 1);
        return t.trimmed(num_arg(c, 0));
      }
      check_arity(c, 0, 0);
      return t.renormalized();
    } catch (const Error& e) {
      throw ParseError(e.what(), c.offset);
    }
  }
  if (c.name == "pwit") {
    if (c.positional.size() != 1)
      throw ParseError("pwit: needs one intensity argument", c.offset);
    return LazyTree::pwit(
        build_intensity(*call_of(c.positional[0], "pwit intensity", c.offset)),
        seed);
  }
  if (c.name == "ssym") {
    const Call* f = nullptr;
    const Call* g = nullptr;
    for (const auto& [k, v] : c.keyword) {
      if (k == "f") f = call_of(v, "f", v.offset);
      if (k == "g") g = call_of(v, "g", v.offset);
    }
    if (!f || !g) throw ParseError("ssym: needs f=<fspec> and g=<distspec>", c.offset);
    return LazyTree::spherically_symmetric(build_branching(*f),
                                           build_distribution(*g), seed);
  }
  throw ParseError("unknown tree '" + c.name + "'", c.offset);
}

}  // namespace detail

inline WeightDistribution parse_distribution(std::string_view text) {
  detail::SpecParser p(text);
  return detail::build_distribution(*p.parse_chain_root());
}

inline IntensityFunction parse_intensity(std::string_view text) {
  detail::SpecParser p(text);
  return detail::build_intensity(*p.parse_chain_root());
}

inline BranchingFunction parse_branching(std::string_view text) {
  detail::SpecParser p(text);
  return detail::build_branching(*p.parse_chain_root());
}

inline LengthSequence parse_length(std::string_view text) {
  detail::SpecParser p(text);
  return detail::build_length(*p.parse_chain_root());
}

inline LazyTree parse_tree(std::string_view text, std::uint64_t seed) {
  detail::SpecParser p(text);
  return detail::build_tree(*p.parse_chain_root(), seed);
}

}  // namespace fpt

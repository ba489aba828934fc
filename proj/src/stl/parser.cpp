#include <cctype>
#include <charconv>
#include <cmath>

#include "confstl/formula.hpp"

namespace confstl {
namespace {

class Parser {
 public:
  Parser(std::string_view text, const ChannelNames& channels) : text_(text), channels_(channels) {}

  Formula parse() {
    Formula f = parse_disjunction();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char ch) {
    if (!accept(ch)) error(std::string("expected '") + ch + "'");
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Formula parse_disjunction() {
    std::vector<Formula> parts;
    parts.push_back(parse_conjunction());
    while (accept('|')) parts.push_back(parse_conjunction());
    if (parts.size() == 1) return std::move(parts.front());
    return Formula::disjunction(std::move(parts));
  }

  Formula parse_conjunction() {
    std::vector<Formula> parts;
    parts.push_back(parse_term());
    while (accept('&')) parts.push_back(parse_term());
    if (parts.size() == 1) return std::move(parts.front());
    return Formula::conjunction(std::move(parts));
  }

  bool at_temporal_keyword() {
    skip_ws();
    if (pos_ + 1 >= text_.size()) return false;
    const char c = text_[pos_];
    if (c != 'G' && c != 'F') return false;
    std::size_t k = pos_ + 1;
    while (k < text_.size() && std::isspace(static_cast<unsigned char>(text_[k]))) ++k;
    return k < text_.size() && text_[k] == '[';
  }

  Formula parse_term() {
    if (at_temporal_keyword()) {
      const bool always = text_[pos_] == 'G';
      ++pos_;
      expect('[');
      const std::size_t lo_pos = pos_;
      const int lo = parse_int();
      expect(',');
      std::optional<int> hi;
      skip_ws();
      if (text_.substr(pos_, 3) == "inf") {
        pos_ += 3;
      } else {
        hi = parse_int();
      }
      expect(']');
      if (hi && *hi < lo) {
        throw ParseError("malformed interval [" + std::to_string(lo) + "," + std::to_string(*hi) + "]", lo_pos);
      }
      expect('(');
      Formula inner = parse_disjunction();
      expect(')');
      const Interval w{lo, hi};
      return always ? Formula::always(w, std::move(inner)) : Formula::eventually(w, std::move(inner));
    }
    if (peek() == '(') {
      // Either a parenthesized formula or a parenthesized-free atom cannot
      // start with '(' in this grammar, so this is a grouped formula.
      ++pos_;
      Formula inner = parse_disjunction();
      expect(')');
      return inner;
    }
    return parse_atom();
  }

  int parse_int() {
    skip_ws();
    int v = 0;
    const auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (res.ec != std::errc{}) error("expected integer");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return v;
  }

  std::optional<double> try_number() {
    skip_ws();
    double v = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    if (begin == end || !(std::isdigit(static_cast<unsigned char>(*begin)) || *begin == '.' || *begin == '-')) {
      return std::nullopt;
    }
    const auto res = std::from_chars(begin, end, v, std::chars_format::general);
    if (res.ec != std::errc{}) return std::nullopt;
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return v;
  }

  std::string parse_identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '.')) {
      ++pos_;
    }
    if (start == pos_) error("expected channel name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::size_t channel_index(const std::string& name, std::size_t at) const {
    for (std::size_t i = 0; i < channels_.size(); ++i) {
      if (channels_[i] == name) return i;
    }
    throw ParseError("unknown channel '" + name + "'", at);
  }

  // mono := number ["*"] channel | channel
  void parse_monomial(double sign, std::vector<double>& coeffs) {
    skip_ws();
    double c = 1.0;
    if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      const auto v = try_number();
      if (!v) error("malformed coefficient");
      c = *v;
      accept('*');
    }
    skip_ws();
    const std::size_t at = pos_;
    const std::string name = parse_identifier();
    coeffs[channel_index(name, at)] += sign * c;
  }

  Formula parse_atom() {
    const std::size_t start = pos_;
    std::vector<double> coeffs(channels_.size(), 0.0);
    double sign = accept('-') ? -1.0 : 1.0;
    parse_monomial(sign, coeffs);
    while (true) {
      if (accept('+')) {
        parse_monomial(1.0, coeffs);
      } else if (accept('-')) {
        parse_monomial(-1.0, coeffs);
      } else {
        break;
      }
    }
    bool greater = false;
    if (accept('>')) {
      greater = true;
    } else if (!accept('<')) {
      error("expected '>' or '<'");
    }
    const auto bound = try_number();
    if (!bound || !std::isfinite(*bound)) error("expected numeric threshold");
    bool nonzero = false;
    for (double c : coeffs) nonzero = nonzero || c != 0.0;
    if (!nonzero) throw ParseError("atom has no nonzero coefficient", start);
    if (greater) return Formula::atom(std::move(coeffs), *bound);
    for (double& c : coeffs) c = -c;
    return Formula::atom(std::move(coeffs), -*bound);
  }

  std::string_view text_;
  const ChannelNames& channels_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text, const ChannelNames& channels) { return Parser(text, channels).parse(); }

}  // namespace confstl

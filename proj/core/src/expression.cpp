// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "sisso/expression.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <utility>

#include "sisso/error.hpp"

namespace sisso {

std::string_view precision_name(Precision p) noexcept {
  return p == Precision::fp32 ? "fp32" : "fp64";
}

struct Expression::Node {
  bool primary = false;
  std::size_t index = 0;
  std::string name;
  OpKind op = OpKind::add;
  std::vector<Expression> children;
  int rung = 0;
  Unit unit;
  std::string key;
};

namespace {

std::string make_key(OpKind op, std::span<const Expression> children) {
  const Operator& info = op_info(op);
  std::string out(info.name);
  out += '(';
  if (children.size() == 1) {
    out += children[0].key();
  } else {
    const std::string* a = &children[0].key();
    const std::string* b = &children[1].key();
    if (info.commutative && *b < *a) std::swap(a, b);
    out += *a;
    out += ',';
    out += *b;
  }
  out += ')';
  return out;
}

}  // namespace

Expression Expression::primary(std::size_t index, std::string name, Unit unit) {
  auto node = std::make_shared<Node>();
  node->primary = true;
  node->index = index;
  node->name = std::move(name);
  node->unit = std::move(unit);
  node->key = "#" + std::to_string(index);
  return Expression(std::move(node));
}

Expression Expression::apply(OpKind op, const Expression& child) {
  const Expression kids[] = {child};
  const Unit units[] = {child.unit()};
  return apply_unchecked(op, kids, unit_of(op, units));
}

Expression Expression::apply(OpKind op, const Expression& lhs, const Expression& rhs) {
  const Expression kids[] = {lhs, rhs};
  const Unit units[] = {lhs.unit(), rhs.unit()};
  return apply_unchecked(op, kids, unit_of(op, units));
}

Expression Expression::apply_unchecked(OpKind op, std::span<const Expression> children,
                                       Unit unit) {
  if (children.size() != static_cast<std::size_t>(op_info(op).arity)) {
    throw std::invalid_argument("Expression: wrong child count for '" +
                                std::string(op_info(op).name) + "'");
  }
  auto node = std::make_shared<Node>();
  node->op = op;
  node->children.assign(children.begin(), children.end());
  int rung = 0;
  for (const auto& c : children) rung = std::max(rung, c.rung());
  node->rung = rung + 1;
  node->unit = std::move(unit);
  node->key = make_key(op, children);
  return Expression(std::move(node));
}

bool Expression::is_primary() const noexcept { return node_->primary; }
std::size_t Expression::primary_index() const noexcept { return node_->index; }
const std::string& Expression::primary_name() const noexcept { return node_->name; }
OpKind Expression::op() const noexcept { return node_->op; }
std::span<const Expression> Expression::children() const noexcept { return node_->children; }
int Expression::rung() const noexcept { return node_->rung; }
const Unit& Expression::unit() const noexcept { return node_->unit; }
const std::string& Expression::key() const noexcept { return node_->key; }

// ---------------------------------------------------------------------------
// Rendering

namespace {

void render_into(const Expression& e, std::string& out) {
  if (e.is_primary()) {
    out += e.primary_name();
    return;
  }
  const auto kids = e.children();
  auto infix = [&](const char* sym) {
    out += '(';
    render_into(kids[0], out);
    out += sym;
    render_into(kids[1], out);
    out += ')';
  };
  auto call = [&](const char* fn) {
    out += fn;
    out += '(';
    render_into(kids[0], out);
    out += ')';
  };
  auto power = [&](const char* exp) {
    out += '(';
    render_into(kids[0], out);
    out += ")^";
    out += exp;
  };
  switch (e.op()) {
    case OpKind::add: infix(" + "); break;
    case OpKind::sub: infix(" - "); break;
    case OpKind::mul: infix(" * "); break;
    case OpKind::div: infix(" / "); break;
    case OpKind::abs_diff:
      out += '|';
      render_into(kids[0], out);
      out += " - ";
      render_into(kids[1], out);
      out += '|';
      break;
    case OpKind::sqrt: call("sqrt"); break;
    case OpKind::cbrt: call("cbrt"); break;
    case OpKind::log: call("log"); break;
    case OpKind::exp: call("exp"); break;
    case OpKind::sin: call("sin"); break;
    case OpKind::cos: call("cos"); break;
    case OpKind::neg_exp:
      out += "exp(-";
      render_into(kids[0], out);
      out += ')';
      break;
    case OpKind::abs:
      out += '|';
      render_into(kids[0], out);
      out += '|';
      break;
    case OpKind::sq: power("2"); break;
    case OpKind::cb: power("3"); break;
    case OpKind::six_pow: power("6"); break;
    case OpKind::inv: power("-1"); break;
  }
}

}  // namespace

std::string render(const Expression& e) {
  std::string out;
  render_into(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_name_char(char c) {
  return !(std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '|' ||
           c == '^' || c == ',');
}

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::span<const PrimaryFeature> primaries)
      : text_(text), primaries_(primaries) {}

  Expression parse() {
    Expression e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("cannot parse expression '" + std::string(text_) + "' at offset " +
                     std::to_string(pos_) + ": " + why);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string_view read_name() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Expression parse_expr() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (consume('(')) {
      Expression lhs = parse_expr();
      skip_ws();
      if (consume(')')) {
        expect('^');
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::string_view exp = text_.substr(start, pos_ - start);
        if (exp == "2") return Expression::apply(OpKind::sq, lhs);
        if (exp == "3") return Expression::apply(OpKind::cb, lhs);
        if (exp == "6") return Expression::apply(OpKind::six_pow, lhs);
        if (exp == "-1") return Expression::apply(OpKind::inv, lhs);
        fail("unsupported exponent '" + std::string(exp) + "'");
      }
      if (pos_ >= text_.size()) fail("unexpected end");
      const char sym = text_[pos_++];
      OpKind op;
      switch (sym) {
        case '+': op = OpKind::add; break;
        case '-': op = OpKind::sub; break;
        case '*': op = OpKind::mul; break;
        case '/': op = OpKind::div; break;
        default: fail(std::string("unknown binary operator '") + sym + "'");
      }
      Expression rhs = parse_expr();
      expect(')');
      return Expression::apply(op, lhs, rhs);
    }
    if (consume('|')) {
      Expression lhs = parse_expr();
      if (consume('|')) return Expression::apply(OpKind::abs, lhs);
      expect('-');
      Expression rhs = parse_expr();
      expect('|');
      return Expression::apply(OpKind::abs_diff, lhs, rhs);
    }
    const std::string_view name = read_name();
    if (name.empty()) fail("expected a feature name");
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      static constexpr std::pair<std::string_view, OpKind> kCalls[] = {
          {"sqrt", OpKind::sqrt}, {"cbrt", OpKind::cbrt}, {"log", OpKind::log},
          {"exp", OpKind::exp},   {"sin", OpKind::sin},   {"cos", OpKind::cos},
      };
      for (const auto& [fn, op] : kCalls) {
        if (fn != name) continue;
        ++pos_;
        OpKind actual = op;
        if (op == OpKind::exp && consume('-')) actual = OpKind::neg_exp;
        Expression arg = parse_expr();
        expect(')');
        return Expression::apply(actual, arg);
      }
      fail("unknown function '" + std::string(name) + "'");
    }
    for (std::size_t i = 0; i < primaries_.size(); ++i) {
      if (primaries_[i].name == name) {
        return Expression::primary(i, primaries_[i].name, primaries_[i].unit);
      }
    }
    fail("unknown feature '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::span<const PrimaryFeature> primaries_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text, std::span<const PrimaryFeature> primaries) {
  try {
    return ExpressionParser(text, primaries).parse();
  } catch (const UnitError& e) {
    throw ParseError("expression '" + std::string(text) + "' is not unit consistent: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Evaluation

template <typename T>
std::vector<T> evaluate_as(const Expression& e, const Matrix<double>& primary_values) {
  const std::size_t n = primary_values.cols();
  std::vector<T> out(n);
  if (e.is_primary()) {
    const auto row = primary_values.row(e.primary_index());
    std::transform(row.begin(), row.end(), out.begin(), [](double v) { return static_cast<T>(v); });
    return out;
  }
  const auto kids = e.children();
  const std::vector<T> a = evaluate_as<T>(kids[0], primary_values);
  std::vector<T> b;
  if (kids.size() == 2) b = evaluate_as<T>(kids[1], primary_values);
  apply_op<T>(e.op(), a, b, out);
  return out;
}

template std::vector<float> evaluate_as<float>(const Expression&, const Matrix<double>&);
template std::vector<double> evaluate_as<double>(const Expression&, const Matrix<double>&);

std::vector<double> evaluate(const Expression& e, const Matrix<double>& primary_values,
                             Precision precision) {
  if (precision == Precision::fp64) return evaluate_as<double>(e, primary_values);
  const std::vector<float> f = evaluate_as<float>(e, primary_values);
  return {f.begin(), f.end()};
}

}  // namespace sisso

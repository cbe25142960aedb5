#include "uhj/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_map>
#include <utility>

namespace uhj::expr {

ParseError::ParseError(const std::string& message, std::size_t position)
    : InputError(message + " at position " + std::to_string(position)),
      position_(position) {}

namespace {

using NodePtr = std::shared_ptr<const Node>;

const std::unordered_map<std::string_view, Op>& functions() {
  static const std::unordered_map<std::string_view, Op> table = {
      {"sin", Op::kSin},   {"cos", Op::kCos},   {"tan", Op::kTan},
      {"exp", Op::kExp},   {"log", Op::kLog},   {"sqrt", Op::kSqrt},
      {"abs", Op::kAbs},
  };
  return table;
}

const char* function_name(Op op) {
  switch (op) {
    case Op::kSin: return "sin";
    case Op::kCos: return "cos";
    case Op::kTan: return "tan";
    case Op::kExp: return "exp";
    case Op::kLog: return "log";
    case Op::kSqrt: return "sqrt";
    case Op::kAbs: return "abs";
    default: return "?";
  }
}

char binary_symbol(Op op) {
  switch (op) {
    case Op::kAdd: return '+';
    case Op::kSub: return '-';
    case Op::kMul: return '*';
    case Op::kDiv: return '/';
    case Op::kPow: return '^';
    default: return '?';
  }
}

bool is_binary(Op op) { return binary_symbol(op) != '?'; }

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::kNumber;
  n->value = v;
  return n;
}

NodePtr make_variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::kVariable;
  n->index = index;
  return n;
}

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

enum class Tok { kNumber, kName, kSymbol, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::size_t pos = 0;
  std::string_view text;
  double number = 0.0;
};

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& declared)
      : text_(text), declared_(declared) {
    advance();
  }

  NodePtr parse() {
    NodePtr e = expr();
    if (tok_.kind != Tok::kEnd) fail("unexpected '" + std::string(tok_.text) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, tok_.pos);
  }

  bool at(char c) const {
    return tok_.kind == Tok::kSymbol && tok_.text.size() == 1 &&
           tok_.text[0] == c;
  }

  void expect(char c) {
    if (!at(c)) {
      const std::string found =
          tok_.kind == Tok::kEnd ? "end of input"
                                 : "'" + std::string(tok_.text) + "'";
      fail(std::string("expected '") + c + "', found " + found);
    }
    advance();
  }

  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    tok_ = Token{};
    tok_.pos = pos_;
    if (pos_ >= text_.size()) {
      tok_.kind = Tok::kEnd;
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_ + 1;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) ||
              text_[end] == '_')) {
        ++end;
      }
      tok_.kind = Tok::kName;
      tok_.text = text_.substr(pos_, end - pos_);
      pos_ = end;
    } else if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      tok_.kind = Tok::kSymbol;
      tok_.text = text_.substr(pos_, 1);
      ++pos_;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
  }

  void lex_number() {
    std::size_t end = pos_;
    auto digits = [&] {
      std::size_t start = end;
      while (end < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[end]))) {
        ++end;
      }
      return end - start;
    };
    std::size_t mantissa = digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", pos_);
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      ++end;
      if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) ++end;
      if (digits() == 0) throw ParseError("malformed exponent", pos_);
    }
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw ParseError("number out of range", pos_);
    }
    tok_.kind = Tok::kNumber;
    tok_.text = text_.substr(pos_, end - pos_);
    tok_.number = v;
    pos_ = end;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (at('+') || at('-')) {
      const Op op = at('+') ? Op::kAdd : Op::kSub;
      advance();
      lhs = make_node(op, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (at('*') || at('/')) {
      const Op op = at('*') ? Op::kMul : Op::kDiv;
      advance();
      lhs = make_node(op, lhs, unary());
    }
    return lhs;
  }

  NodePtr unary() {
    if (at('-')) {
      advance();
      return make_node(Op::kNeg, unary());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (at('^')) {
      advance();
      return make_node(Op::kPow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    if (tok_.kind == Tok::kNumber) {
      NodePtr n = make_number(tok_.number);
      advance();
      return n;
    }
    if (tok_.kind == Tok::kName) {
      const Token name = tok_;
      const auto& fns = functions();
      if (auto it = fns.find(name.text); it != fns.end()) {
        advance();
        if (!at('(')) {
          throw ParseError("function '" + std::string(name.text) +
                               "' needs a parenthesized argument",
                           tok_.pos);
        }
        advance();
        if (at(')')) {
          throw ParseError("function '" + std::string(name.text) +
                               "' takes exactly one argument",
                           tok_.pos);
        }
        NodePtr arg = expr();
        if (at(',')) {
          throw ParseError("function '" + std::string(name.text) +
                               "' takes exactly one argument",
                           tok_.pos);
        }
        expect(')');
        return make_node(it->second, arg);
      }
      const auto found = std::find(declared_.begin(), declared_.end(),
                                   std::string(name.text));
      if (found == declared_.end()) {
        throw ParseError("unknown identifier '" + std::string(name.text) + "'",
                         name.pos);
      }
      advance();
      return make_variable(
          static_cast<std::size_t>(found - declared_.begin()));
    }
    if (at('(')) {
      advance();
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (tok_.kind == Tok::kEnd) fail("unexpected end of input");
    fail("unexpected '" + std::string(tok_.text) + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& declared_;
  std::size_t pos_ = 0;
  Token tok_;
};

void print(const Node& n, const std::vector<std::string>& names,
           std::string& out) {
  switch (n.op) {
    case Op::kNumber: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Op::kVariable:
      out += names[n.index];
      return;
    case Op::kNeg:
      out += "(-";
      print(*n.lhs, names, out);
      out += ')';
      return;
    default:
      break;
  }
  if (is_binary(n.op)) {
    out += '(';
    print(*n.lhs, names, out);
    out += ' ';
    out += binary_symbol(n.op);
    out += ' ';
    print(*n.rhs, names, out);
    out += ')';
    return;
  }
  out += function_name(n.op);
  out += '(';
  print(*n.lhs, names, out);
  out += ')';
}

class Evaluator {
 public:
  Evaluator(std::span<const double> values,
            const std::vector<std::string>& names)
      : values_(values), names_(names) {}

  double operator()(const Node& n) const {
    const double v = raw(n);
    if (!std::isfinite(v)) fault(n, "non-finite result");
    return v;
  }

 private:
  [[noreturn]] void fault(const Node& n, const char* why) const {
    std::string text;
    print(n, names_, text);
    throw EvalError(std::string(why) + " in " + text);
  }

  double raw(const Node& n) const {
    switch (n.op) {
      case Op::kNumber: return n.value;
      case Op::kVariable: return values_[n.index];
      case Op::kNeg: return -(*this)(*n.lhs);
      case Op::kAdd: return (*this)(*n.lhs) + (*this)(*n.rhs);
      case Op::kSub: return (*this)(*n.lhs) - (*this)(*n.rhs);
      case Op::kMul: return (*this)(*n.lhs) * (*this)(*n.rhs);
      case Op::kDiv: {
        const double a = (*this)(*n.lhs);
        const double b = (*this)(*n.rhs);
        if (b == 0.0) fault(n, "division by zero");
        return a / b;
      }
      case Op::kPow: {
        const double a = (*this)(*n.lhs);
        const double b = (*this)(*n.rhs);
        if (a < 0.0 && b != std::trunc(b)) {
          fault(n, "negative base with non-integer exponent");
        }
        if (a == 0.0 && b < 0.0) fault(n, "division by zero");
        return std::pow(a, b);
      }
      case Op::kSin: return std::sin((*this)(*n.lhs));
      case Op::kCos: return std::cos((*this)(*n.lhs));
      case Op::kTan: return std::tan((*this)(*n.lhs));
      case Op::kExp: return std::exp((*this)(*n.lhs));
      case Op::kLog: {
        const double a = (*this)(*n.lhs);
        if (a <= 0.0) fault(n, "log of a non-positive number");
        return std::log(a);
      }
      case Op::kSqrt: {
        const double a = (*this)(*n.lhs);
        if (a < 0.0) fault(n, "sqrt of a negative number");
        return std::sqrt(a);
      }
      case Op::kAbs: return std::abs((*this)(*n.lhs));
    }
    fault(n, "unknown operation");
  }

  std::span<const double> values_;
  const std::vector<std::string>& names_;
};

void collect(const Node& n, std::set<std::size_t>& used) {
  if (n.op == Op::kVariable) used.insert(n.index);
  if (n.lhs) collect(*n.lhs, used);
  if (n.rhs) collect(*n.rhs, used);
}

}  // namespace

bool same_tree(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  if (a.op == Op::kNumber) return a.value == b.value;
  if (a.op == Op::kVariable) return a.index == b.index;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs) ||
      static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) {
    return false;
  }
  if (a.lhs && !same_tree(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !same_tree(*a.rhs, *b.rhs)) return false;
  return true;
}

Expr::Expr(std::vector<std::string> declared, std::shared_ptr<const Node> root)
    : declared_(std::move(declared)), root_(std::move(root)) {}

Expr Expr::parse(std::string_view text, std::vector<std::string> declared) {
  std::set<std::string> seen;
  for (const auto& name : declared) {
    if (name.empty()) throw InputError("empty variable name");
    if (functions().count(name)) {
      throw InputError("variable name '" + name + "' is a function name");
    }
    if (!seen.insert(name).second) {
      throw InputError("variable '" + name + "' declared twice");
    }
  }
  Parser parser(text, declared);
  NodePtr root = parser.parse();
  return Expr(std::move(declared), std::move(root));
}

double Expr::eval(std::span<const double> values) const {
  if (values.size() != declared_.size()) {
    throw InputError("expected " + std::to_string(declared_.size()) +
                     " values, got " + std::to_string(values.size()));
  }
  return Evaluator(values, declared_)(*root_);
}

double Expr::eval(const std::map<std::string, double>& env) const {
  std::set<std::size_t> used;
  collect(*root_, used);
  std::vector<double> values(declared_.size(), 0.0);
  for (std::size_t i : used) {
    auto it = env.find(declared_[i]);
    if (it == env.end()) {
      throw InputError("no value for variable '" + declared_[i] + "'");
    }
    values[i] = it->second;
  }
  return Evaluator(values, declared_)(*root_);
}

std::string Expr::to_string() const {
  std::string out;
  print(*root_, declared_, out);
  return out;
}

std::vector<std::string> Expr::free_variables() const {
  std::set<std::size_t> used;
  collect(*root_, used);
  std::vector<std::string> out;
  for (std::size_t i : used) out.push_back(declared_[i]);
  return out;
}

bool Expr::operator==(const Expr& other) const {
  return declared_ == other.declared_ && same_tree(*root_, *other.root_);
}

Vector grad_fd(const Expr& e, const std::map<std::string, double>& env,
               const std::vector<std::string>& vars) {
  Vector g(static_cast<Eigen::Index>(vars.size()));
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto it = env.find(vars[i]);
    if (it == env.end()) {
      throw InputError("no value for variable '" + vars[i] + "'");
    }
    const double z = it->second;
    const double h = fd_step(z);
    std::map<std::string, double> shifted = env;
    try {
      shifted[vars[i]] = z + h;
      const double up = e.eval(shifted);
      shifted[vars[i]] = z - h;
      const double down = e.eval(shifted);
      g(static_cast<Eigen::Index>(i)) = (up - down) / (2.0 * h);
    } catch (const EvalError& err) {
      throw EvalError("finite-difference stencil in '" + vars[i] +
                      "' hit a domain fault: " + err.what());
    }
  }
  return g;
}

std::function<double(const Vector&)> bind(Expr e, Vector tail) {
  const std::size_t total = e.declared().size();
  return [e = std::move(e), tail = std::move(tail), total](const Vector& z) {
    if (static_cast<std::size_t>(z.size() + tail.size()) != total) {
      throw InputError("expression expects " + std::to_string(total) +
                       " values, got " +
                       std::to_string(z.size() + tail.size()));
    }
    if (tail.size() == 0) return e.eval(z);
    Vector all(z.size() + tail.size());
    all << z, tail;
    return e.eval(all);
  };
}

ScalarField scalar_field(Expr e, Vector tail) {
  return ScalarField(bind(std::move(e), std::move(tail)));
}

}  // namespace uhj::expr

#include "pdexact/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <optional>

namespace pdexact {

namespace {

const std::map<std::string, FieldKind, std::less<>> kFieldNames = {
    {"w", FieldKind::W},     {"w_t", FieldKind::Wt},   {"w_x", FieldKind::Wx},
    {"w_tt", FieldKind::Wtt}, {"w_tx", FieldKind::Wtx}, {"w_xx", FieldKind::Wxx},
};

const std::map<std::string, UnaryOp, std::less<>> kUnaryFns = {
    {"exp", UnaryOp::Exp},   {"ln", UnaryOp::Ln},     {"sqrt", UnaryOp::Sqrt},
    {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},   {"sinh", UnaryOp::Sinh},
    {"cosh", UnaryOp::Cosh}, {"tan", UnaryOp::Tan},   {"abs", UnaryOp::Abs},
};

struct SpecialInfo {
  SpecialKind kind;
  std::size_t arity;
};

const std::map<std::string, SpecialInfo, std::less<>> kSpecials = {
    {"lambertw0", {SpecialKind::LambertW0, 1}}, {"lambertwm1", {SpecialKind::LambertWm1, 1}},
    {"erf", {SpecialKind::Erf, 1}},             {"expint1", {SpecialKind::Expint1, 1}},
    {"whitM", {SpecialKind::WhitM, 3}},         {"kummerM", {SpecialKind::KummerM, 3}},
};

bool reserved_name(const std::string& s) {
  return s == "t" || s == "x" || s == "inf" || s == "int" || s == "root" || s == "in" ||
         kFieldNames.count(s) || kUnaryFns.count(s) || kSpecials.count(s);
}

}  // namespace

const char* field_name(FieldKind f) {
  switch (f) {
    case FieldKind::W: return "w";
    case FieldKind::Wt: return "w_t";
    case FieldKind::Wx: return "w_x";
    case FieldKind::Wtt: return "w_tt";
    case FieldKind::Wtx: return "w_tx";
    case FieldKind::Wxx: return "w_xx";
  }
  return "?";
}

ExprPtr make_const(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Const;
  e->value = v;
  return e;
}

ExprPtr make_param(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Param;
  e->name = std::move(name);
  return e;
}

ExprPtr make_var(VarKind k, std::string dummy_name) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Var;
  e->var = k;
  e->name = std::move(dummy_name);
  return e;
}

ExprPtr make_field(FieldKind f) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::FieldVar;
  e->field = f;
  return e;
}

ExprPtr make_arbfn(std::string slot, int deriv, ExprPtr arg) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::ArbFn;
  e->name = std::move(slot);
  e->deriv = deriv;
  e->args = {std::move(arg)};
  return e;
}

ExprPtr make_unary(UnaryOp op, ExprPtr arg) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Unary;
  e->uop = op;
  e->args = {std::move(arg)};
  return e;
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Binary;
  e->bop = op;
  e->args = {std::move(lhs), std::move(rhs)};
  return e;
}

ExprPtr make_special(SpecialKind k, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Special;
  e->special = k;
  e->args = std::move(args);
  return e;
}

ExprPtr make_integral(std::string dummy, ExprPtr lower, ExprPtr upper, ExprPtr integrand) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Integral;
  e->name = std::move(dummy);
  e->args = {std::move(lower), std::move(upper), std::move(integrand)};
  return e;
}

ExprPtr make_root(std::string unknown, ExprPtr lo, ExprPtr hi, ExprPtr equation, ExprPtr body) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::Root;
  e->name = std::move(unknown);
  e->args = {std::move(lo), std::move(hi), std::move(equation), std::move(body)};
  return e;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Type {
    Number,
    Ident,     // text + prime count
    Plus, Minus, Star, Slash, Caret,
    LParen, RParen, LBracket, RBracket,
    Comma, Equals, DotDot, Colon, Semicolon,
    End,
  };
  Type type = End;
  SourceSpan span{};
  double number = 0.0;
  std::string text;
  int primes = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.span = {pos_, pos_};
    if (pos_ >= src_.size()) {
      tok_.type = Token::End;
      return;
    }
    const char c = src_[pos_];
    auto single = [&](Token::Type t) {
      tok_.type = t;
      tok_.span = {pos_, pos_ + 1};
      ++pos_;
    };
    switch (c) {
      case '+': single(Token::Plus); return;
      case '-': single(Token::Minus); return;
      case '*': single(Token::Star); return;
      case '/': single(Token::Slash); return;
      case '^': single(Token::Caret); return;
      case '(': single(Token::LParen); return;
      case ')': single(Token::RParen); return;
      case '[': single(Token::LBracket); return;
      case ']': single(Token::RBracket); return;
      case ',': single(Token::Comma); return;
      case '=': single(Token::Equals); return;
      case ':': single(Token::Colon); return;
      case ';': single(Token::Semicolon); return;
      default: break;
    }
    if (c == '.' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '.') {
      tok_.type = Token::DotDot;
      tok_.span = {pos_, pos_ + 2};
      pos_ += 2;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      lex_ident();
      return;
    }
    throw ParseError({pos_, pos_ + 1}, std::string("unexpected character '") + c + "'");
  }

  void lex_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    // fractional part; a lone '.' followed by '.' is the range operator
    if (pos_ < src_.size() && src_[pos_] == '.' &&
        !(pos_ + 1 < src_.size() && src_[pos_ + 1] == '.')) {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to an identifier-like continuation; not an exponent
      }
    }
    tok_.type = Token::Number;
    tok_.span = {start, pos_};
    const char* first = src_.data() + start;
    auto [ptr, ec] = std::from_chars(first, src_.data() + pos_, tok_.number);
    if (ec != std::errc() || ptr != src_.data() + pos_)
      throw ParseError(tok_.span, "malformed number");
  }

  void lex_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    tok_.type = Token::Ident;
    tok_.text = src_.substr(start, pos_ - start);
    while (pos_ < src_.size() && src_[pos_] == '\'') {
      ++tok_.primes;
      ++pos_;
    }
    tok_.span = {start, pos_};
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  ExprPtr run() {
    ExprPtr e = parse_sum();
    if (lex_.peek().type != Token::End)
      throw ParseError(lex_.peek().span, "trailing input after expression");
    return e;
  }

 private:
  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    for (;;) {
      auto t = lex_.peek().type;
      if (t == Token::Plus || t == Token::Minus) {
        Token op = lex_.next();
        ExprPtr rhs = parse_term();
        lhs = spanned(make_binary(t == Token::Plus ? BinaryOp::Add : BinaryOp::Sub,
                                  std::move(lhs), std::move(rhs)),
                      op.span);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      auto t = lex_.peek().type;
      if (t == Token::Star || t == Token::Slash) {
        Token op = lex_.next();
        ExprPtr rhs = parse_unary();
        lhs = spanned(make_binary(t == Token::Star ? BinaryOp::Mul : BinaryOp::Div,
                                  std::move(lhs), std::move(rhs)),
                      op.span);
      } else {
        return lhs;
      }
    }
  }

  // '^' binds tighter than unary minus and associates to the right.
  ExprPtr parse_unary() {
    if (lex_.peek().type == Token::Minus) {
      Token op = lex_.next();
      ExprPtr arg = parse_unary();
      if (arg->kind == NodeKind::Const)  // fold so "-3" round-trips structurally
        return spanned(make_const(-arg->value), op.span);
      return spanned(make_unary(UnaryOp::Neg, std::move(arg)), op.span);
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (lex_.peek().type == Token::Caret) {
      Token op = lex_.next();
      ExprPtr exponent = parse_unary();
      return spanned(make_binary(BinaryOp::Pow, std::move(base), std::move(exponent)), op.span);
    }
    return base;
  }

  ExprPtr parse_atom() {
    Token tok = lex_.next();
    switch (tok.type) {
      case Token::Number:
        return spanned(make_const(tok.number), tok.span);
      case Token::LParen: {
        ExprPtr e = parse_sum();
        expect(Token::RParen, ")");
        return e;
      }
      case Token::Ident:
        return parse_ident(tok);
      default:
        throw ParseError(tok.span, "expected an expression");
    }
  }

  ExprPtr parse_ident(const Token& tok) {
    const std::string& name = tok.text;
    if (name == "int" && tok.primes == 0) return parse_integral(tok);
    if (name == "root" && tok.primes == 0) return parse_root(tok);

    const bool is_call = lex_.peek().type == Token::LParen;
    if (tok.primes > 0) {
      if (!is_call) throw ParseError(tok.span, "primed name must be applied to an argument");
      if (tok.primes > 3) throw ParseError(tok.span, "derivative order above 3 is not supported");
      if (reserved_name(name)) throw ParseError(tok.span, "'" + name + "' cannot carry primes");
      auto args = parse_call_args();
      if (args.size() != 1)
        throw ParseError(tok.span, "function slot application takes one argument");
      return spanned(make_arbfn(name, tok.primes, std::move(args[0])), tok.span);
    }

    if (is_call) {
      if (auto it = kUnaryFns.find(name); it != kUnaryFns.end()) {
        auto args = parse_call_args();
        if (args.size() != 1) throw ParseError(tok.span, name + " takes one argument");
        return spanned(make_unary(it->second, std::move(args[0])), tok.span);
      }
      if (auto it = kSpecials.find(name); it != kSpecials.end()) {
        auto args = parse_call_args();
        if (args.size() != it->second.arity)
          throw ParseError(tok.span, name + " takes " + std::to_string(it->second.arity) +
                                         " argument(s)");
        return spanned(make_special(it->second.kind, std::move(args)), tok.span);
      }
      if (reserved_name(name)) throw ParseError(tok.span, "'" + name + "' is not callable");
      auto args = parse_call_args();
      if (args.size() != 1)
        throw ParseError(tok.span, "function slot application takes one argument");
      return spanned(make_arbfn(name, 0, std::move(args[0])), tok.span);
    }

    // bare identifier
    if (name == "t") return spanned(make_var(VarKind::T), tok.span);
    if (name == "x") return spanned(make_var(VarKind::X), tok.span);
    if (name == "inf")
      return spanned(make_const(std::numeric_limits<double>::infinity()), tok.span);
    if (auto it = kFieldNames.find(name); it != kFieldNames.end())
      return spanned(make_field(it->second), tok.span);
    if (kUnaryFns.count(name) || kSpecials.count(name) || name == "in")
      throw ParseError(tok.span, "'" + name + "' is reserved");
    for (auto rit = binders_.rbegin(); rit != binders_.rend(); ++rit)
      if (*rit == name) return spanned(make_var(VarKind::Dummy, name), tok.span);
    return spanned(make_param(name), tok.span);
  }

  std::vector<ExprPtr> parse_call_args() {
    expect(Token::LParen, "(");
    std::vector<ExprPtr> args;
    args.push_back(parse_sum());
    while (lex_.peek().type == Token::Comma) {
      lex_.next();
      args.push_back(parse_sum());
    }
    expect(Token::RParen, ")");
    return args;
  }

  ExprPtr parse_integral(const Token& kw) {
    expect(Token::LParen, "(");
    Token dummy = lex_.next();
    if (dummy.type != Token::Ident || dummy.primes != 0)
      throw ParseError(dummy.span, "expected an integration dummy name");
    check_binder_name(dummy);
    expect(Token::Equals, "=");
    ExprPtr lower = parse_sum();
    expect(Token::DotDot, "..");
    ExprPtr upper = parse_sum();
    expect(Token::Comma, ",");
    binders_.push_back(dummy.text);
    ExprPtr integrand = parse_sum();
    binders_.pop_back();
    expect(Token::RParen, ")");
    return spanned(
        make_integral(dummy.text, std::move(lower), std::move(upper), std::move(integrand)),
        kw.span);
  }

  ExprPtr parse_root(const Token& kw) {
    expect(Token::LParen, "(");
    Token unknown = lex_.next();
    if (unknown.type != Token::Ident || unknown.primes != 0)
      throw ParseError(unknown.span, "expected a root unknown name");
    check_binder_name(unknown);
    Token in = lex_.next();
    if (in.type != Token::Ident || in.text != "in")
      throw ParseError(in.span, "expected 'in' after the root unknown");
    expect(Token::LBracket, "[");
    ExprPtr lo = parse_sum();
    expect(Token::Comma, ",");
    ExprPtr hi = parse_sum();
    expect(Token::RBracket, "]");
    expect(Token::Colon, ":");
    binders_.push_back(unknown.text);
    ExprPtr equation = parse_sum();
    expect(Token::Semicolon, ";");
    ExprPtr body = parse_sum();
    binders_.pop_back();
    expect(Token::RParen, ")");
    return spanned(make_root(unknown.text, std::move(lo), std::move(hi), std::move(equation),
                             std::move(body)),
                   kw.span);
  }

  void check_binder_name(const Token& tok) {
    if (reserved_name(tok.text))
      throw ParseError(tok.span, "'" + tok.text + "' cannot be used as a binder");
  }

  void expect(Token::Type type, const char* what) {
    Token t = lex_.next();
    if (t.type != type) throw ParseError(t.span, std::string("expected '") + what + "'");
  }

  static ExprPtr spanned(ExprPtr e, SourceSpan s) {
    const_cast<Expr*>(e.get())->span = s;
    return e;
  }

  Lexer lex_;
  std::vector<std::string> binders_;
};

}  // namespace

ExprPtr parse(const std::string& src) { return Parser(src).run(); }

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// precedence levels used for parenthesization
constexpr int kPrecAdd = 10;
constexpr int kPrecMul = 20;
constexpr int kPrecNeg = 30;
constexpr int kPrecPow = 40;
constexpr int kPrecAtom = 100;

int node_prec(const Expr& e) {
  switch (e.kind) {
    case NodeKind::Binary:
      switch (e.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return kPrecAdd;
        case BinaryOp::Mul:
        case BinaryOp::Div: return kPrecMul;
        case BinaryOp::Pow: return kPrecPow;
      }
      return kPrecAtom;
    case NodeKind::Unary:
      return e.uop == UnaryOp::Neg ? kPrecNeg : kPrecAtom;
    case NodeKind::Const:
      // negative literals print with a leading '-', parenthesize like a negation
      return (e.value < 0 || std::signbit(e.value)) && e.value != 0 ? kPrecNeg : kPrecAtom;
    default:
      return kPrecAtom;
  }
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

void print_node(const Expr& e, int parent_prec, std::string& out);

void print_child(const ExprPtr& c, int min_prec, std::string& out) {
  if (node_prec(*c) < min_prec) {
    out += '(';
    print_node(*c, 0, out);
    out += ')';
  } else {
    print_node(*c, min_prec, out);
  }
}

void print_node(const Expr& e, int /*parent_prec*/, std::string& out) {
  switch (e.kind) {
    case NodeKind::Const:
      out += format_double(e.value);
      return;
    case NodeKind::Param:
      out += e.name;
      return;
    case NodeKind::Var:
      out += (e.var == VarKind::T) ? "t" : (e.var == VarKind::X) ? "x" : e.name;
      return;
    case NodeKind::FieldVar:
      out += field_name(e.field);
      return;
    case NodeKind::ArbFn:
      out += e.name;
      out.append(static_cast<std::size_t>(e.deriv), '\'');
      out += '(';
      print_node(*e.args[0], 0, out);
      out += ')';
      return;
    case NodeKind::Unary: {
      if (e.uop == UnaryOp::Neg) {
        out += '-';
        print_child(e.args[0], kPrecNeg, out);
        return;
      }
      static const char* names[] = {"-",   "exp", "ln",   "sqrt", "sin",
                                    "cos", "sinh", "cosh", "tan",  "abs"};
      out += names[static_cast<int>(e.uop)];
      out += '(';
      print_node(*e.args[0], 0, out);
      out += ')';
      return;
    }
    case NodeKind::Binary: {
      switch (e.bop) {
        case BinaryOp::Add:
          print_child(e.args[0], kPrecAdd, out);
          out += " + ";
          print_child(e.args[1], kPrecAdd + 1, out);
          return;
        case BinaryOp::Sub:
          print_child(e.args[0], kPrecAdd, out);
          out += " - ";
          print_child(e.args[1], kPrecAdd + 1, out);
          return;
        case BinaryOp::Mul:
          print_child(e.args[0], kPrecMul, out);
          out += '*';
          print_child(e.args[1], kPrecMul + 1, out);
          return;
        case BinaryOp::Div:
          print_child(e.args[0], kPrecMul, out);
          out += '/';
          print_child(e.args[1], kPrecMul + 1, out);
          return;
        case BinaryOp::Pow:
          print_child(e.args[0], kPrecPow + 1, out);
          out += '^';
          print_child(e.args[1], kPrecNeg, out);
          return;
      }
      return;
    }
    case NodeKind::Special: {
      static const char* names[] = {"lambertw0", "lambertwm1", "erf",
                                    "expint1",   "whitM",      "kummerM"};
      out += names[static_cast<int>(e.special)];
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        print_node(*e.args[i], 0, out);
      }
      out += ')';
      return;
    }
    case NodeKind::Integral:
      out += "int(";
      out += e.name;
      out += '=';
      print_node(*e.args[0], 0, out);
      out += "..";
      print_node(*e.args[1], 0, out);
      out += ", ";
      print_node(*e.args[2], 0, out);
      out += ')';
      return;
    case NodeKind::Root:
      out += "root(";
      out += e.name;
      out += " in [";
      print_node(*e.args[0], 0, out);
      out += ", ";
      print_node(*e.args[1], 0, out);
      out += "] : ";
      print_node(*e.args[2], 0, out);
      out += " ; ";
      print_node(*e.args[3], 0, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_node(e, 0, out);
  return out;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case NodeKind::Const:
      if (!(a.value == b.value || (std::isnan(a.value) && std::isnan(b.value)))) return false;
      break;
    case NodeKind::Param:
      if (a.name != b.name) return false;
      break;
    case NodeKind::Var:
      if (a.var != b.var || a.name != b.name) return false;
      break;
    case NodeKind::FieldVar:
      if (a.field != b.field) return false;
      break;
    case NodeKind::ArbFn:
      if (a.name != b.name || a.deriv != b.deriv) return false;
      break;
    case NodeKind::Unary:
      if (a.uop != b.uop) return false;
      break;
    case NodeKind::Binary:
      if (a.bop != b.bop) return false;
      break;
    case NodeKind::Special:
      if (a.special != b.special) return false;
      break;
    case NodeKind::Integral:
    case NodeKind::Root:
      if (a.name != b.name) return false;
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(*a.args[i], *b.args[i])) return false;
  return true;
}

namespace {

void collect_free(const Expr& e, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (e.kind) {
    case NodeKind::Param:
      out.insert(e.name);
      return;
    case NodeKind::FieldVar:
      out.insert(field_name(e.field));
      return;
    case NodeKind::ArbFn:
      out.insert(e.name);
      collect_free(*e.args[0], bound, out);
      return;
    case NodeKind::Integral:
      collect_free(*e.args[0], bound, out);
      collect_free(*e.args[1], bound, out);
      bound.push_back(e.name);
      collect_free(*e.args[2], bound, out);
      bound.pop_back();
      return;
    case NodeKind::Root:
      collect_free(*e.args[0], bound, out);
      collect_free(*e.args[1], bound, out);
      bound.push_back(e.name);
      collect_free(*e.args[2], bound, out);
      collect_free(*e.args[3], bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& a : e.args) collect_free(*a, bound, out);
      return;
  }
}

}  // namespace

std::set<std::string> free_names(const Expr& e) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(e, bound, out);
  return out;
}

bool uses_field_vars(const Expr& e) {
  if (e.kind == NodeKind::FieldVar) return true;
  for (const auto& a : e.args)
    if (uses_field_vars(*a)) return true;
  return false;
}

namespace {

bool constant_valued(const Expr& e) {
  switch (e.kind) {
    case NodeKind::Const:
    case NodeKind::Param:
      return true;
    case NodeKind::Unary:
    case NodeKind::Binary:
      for (const auto& a : e.args)
        if (!constant_valued(*a)) return false;
      return true;
    default:
      return false;
  }
}

void validate_node(const Expr& e, const std::set<std::string>& params,
                   const std::set<std::string>& slots, bool is_residual) {
  switch (e.kind) {
    case NodeKind::Param:
      if (!params.count(e.name))
        throw UnboundNameError(e.span, "name '" + e.name + "' is not a declared parameter");
      break;
    case NodeKind::FieldVar:
      if (!is_residual)
        throw ParseError(e.span, std::string("field variable '") + field_name(e.field) +
                                     "' is not allowed in a solution expression");
      break;
    case NodeKind::ArbFn:
      if (!slots.count(e.name))
        throw UnboundNameError(e.span, "'" + e.name + "' is not a declared function slot");
      if (e.deriv > 3) throw ParseError(e.span, "derivative order above 3");
      break;
    case NodeKind::Integral:
      if (is_residual) throw ParseError(e.span, "integrals are not allowed in residuals");
      if (params.count(e.name) || slots.count(e.name))
        throw UnboundNameError(e.span, "binder '" + e.name + "' shadows a declared name");
      if (!constant_valued(*e.args[0]))
        throw ParseError(e.args[0]->span, "integral lower limit must be constant-valued");
      break;
    case NodeKind::Root:
      if (is_residual) throw ParseError(e.span, "root nodes are not allowed in residuals");
      if (params.count(e.name) || slots.count(e.name))
        throw UnboundNameError(e.span, "binder '" + e.name + "' shadows a declared name");
      break;
    default:
      break;
  }
  for (const auto& a : e.args) validate_node(*a, params, slots, is_residual);
}

}  // namespace

void validate_expr(const Expr& e, const std::set<std::string>& params,
                   const std::set<std::string>& slots, bool is_residual) {
  validate_node(e, params, slots, is_residual);
}

}  // namespace pdexact

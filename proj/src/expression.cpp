#include "fpl/expression.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace fpl::expr {

namespace {

constexpr std::array<const char*, 5> kFuncs{"cos", "sin", "exp", "abs", "sqrt"};

bool known_func(const std::string& name) {
    for (const char* f : kFuncs)
        if (name == f) return true;
    return false;
}

class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr run() {
        skip_ws();
        if (eof()) throw ParseError("empty expression", 0);
        NodePtr e = expr();
        skip_ws();
        if (!eof()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    std::string_view src_;
    size_t pos_ = 0;

    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (!eof() && peek() == c) { ++pos_; return true; }
        return false;
    }

    static NodePtr make_binary(NodeKind kind, NodePtr l, NodePtr r) {
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (accept('+')) e = make_binary(NodeKind::add, e, term());
            else if (accept('-')) e = make_binary(NodeKind::sub, e, term());
            else return e;
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        for (;;) {
            if (accept('*')) e = make_binary(NodeKind::mul, e, factor());
            else if (accept('/')) e = make_binary(NodeKind::div, e, factor());
            else return e;
        }
    }

    NodePtr factor() {
        NodePtr base = unary();
        if (accept('^')) return make_binary(NodeKind::pow, base, factor());
        return base;
    }

    NodePtr unary() {
        if (accept('-')) {
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::neg;
            n->lhs = atom();
            return n;
        }
        return atom();
    }

    NodePtr atom() {
        skip_ws();
        if (eof()) throw ParseError("expected operand at end of input", pos_);
        const char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) throw ParseError("missing ')'", pos_);
            return e;
        }
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if (c >= 'a' && c <= 'z') return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        const size_t start = pos_;
        while (!eof() && ((peek() >= '0' && peek() <= '9') || peek() == '.')) ++pos_;
        // optional exponent part
        if (!eof() && (peek() == 'e' || peek() == 'E')) {
            size_t save = pos_;
            ++pos_;
            if (!eof() && (peek() == '+' || peek() == '-')) ++pos_;
            if (!eof() && peek() >= '0' && peek() <= '9') {
                while (!eof() && peek() >= '0' && peek() <= '9') ++pos_;
            } else {
                pos_ = save;  // 'e' belongs to something else (e.g. "2exp(x)" is an error anyway)
            }
        }
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (res.ec != std::errc{} || res.ptr != src_.data() + pos_)
            throw ParseError("malformed number", start);
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::number;
        n->number = value;
        return n;
    }

    NodePtr identifier() {
        const size_t start = pos_;
        while (!eof() && peek() >= 'a' && peek() <= 'z') ++pos_;
        const std::string name(src_.substr(start, pos_ - start));
        if (name == "x") {
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::variable;
            return n;
        }
        if (!known_func(name))
            throw ParseError("unknown identifier '" + name + "'", start);
        if (!accept('('))
            throw ParseError("function '" + name + "' needs a parenthesized argument", pos_);
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::call;
        n->func = name;
        n->lhs = expr();
        if (!accept(')')) throw ParseError("missing ')'", pos_);
        return n;
    }
};

}  // namespace

NodePtr parse(std::string_view src) { return Parser(src).run(); }

double eval(const Node& node, double x) {
    double v = 0.0;
    switch (node.kind) {
        case NodeKind::number: v = node.number; break;
        case NodeKind::variable: v = x; break;
        case NodeKind::add: v = eval(*node.lhs, x) + eval(*node.rhs, x); break;
        case NodeKind::sub: v = eval(*node.lhs, x) - eval(*node.rhs, x); break;
        case NodeKind::mul: v = eval(*node.lhs, x) * eval(*node.rhs, x); break;
        case NodeKind::div: v = eval(*node.lhs, x) / eval(*node.rhs, x); break;
        case NodeKind::pow: v = std::pow(eval(*node.lhs, x), eval(*node.rhs, x)); break;
        case NodeKind::neg: v = -eval(*node.lhs, x); break;
        case NodeKind::call: {
            const double arg = eval(*node.lhs, x);
            if (node.func == "cos") v = std::cos(arg);
            else if (node.func == "sin") v = std::sin(arg);
            else if (node.func == "exp") v = std::exp(arg);
            else if (node.func == "abs") v = std::fabs(arg);
            else if (node.func == "sqrt") v = std::sqrt(arg);
            else throw EvalError("unknown function '" + node.func + "'");
            break;
        }
    }
    if (!std::isfinite(v)) throw EvalError("non-finite value in '" + to_string(node) + "'");
    return v;
}

namespace {

// Larger binds tighter; used to decide where parentheses are required.
int precedence(NodeKind kind) {
    switch (kind) {
        case NodeKind::add:
        case NodeKind::sub: return 1;
        case NodeKind::mul:
        case NodeKind::div: return 2;
        case NodeKind::pow: return 3;
        case NodeKind::neg: return 4;
        default: return 5;
    }
}

std::string format_number(double v) {
    std::array<char, 32> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void print(const Node& node, std::string& out);

void print_child(const Node& child, int parent_prec, bool force_parens, std::string& out) {
    const bool parens = force_parens || precedence(child.kind) < parent_prec;
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
}

void print(const Node& node, std::string& out) {
    const int prec = precedence(node.kind);
    switch (node.kind) {
        case NodeKind::number: out += format_number(node.number); break;
        case NodeKind::variable: out += 'x'; break;
        case NodeKind::add:
            print_child(*node.lhs, prec, false, out);
            out += " + ";
            print_child(*node.rhs, prec + 1, false, out);
            break;
        case NodeKind::sub:
            print_child(*node.lhs, prec, false, out);
            out += " - ";
            print_child(*node.rhs, prec + 1, false, out);
            break;
        case NodeKind::mul:
            print_child(*node.lhs, prec, false, out);
            out += "*";
            print_child(*node.rhs, prec + 1, false, out);
            break;
        case NodeKind::div:
            print_child(*node.lhs, prec, false, out);
            out += "/";
            print_child(*node.rhs, prec + 1, false, out);
            break;
        case NodeKind::pow:
            // Right-associative: the left child needs parens at equal
            // precedence, the right does not.
            print_child(*node.lhs, prec + 1, node.lhs->kind == NodeKind::neg, out);
            out += "^";
            print_child(*node.rhs, prec, false, out);
            break;
        case NodeKind::neg:
            out += '-';
            // The grammar's unary applies to an atom, so any compound
            // operand must be parenthesized.
            print_child(*node.lhs, 5, false, out);
            break;
        case NodeKind::call:
            out += node.func;
            out += '(';
            print(*node.lhs, out);
            out += ')';
            break;
    }
}

}  // namespace

std::string to_string(const Node& node) {
    std::string out;
    print(node, out);
    return out;
}

bool equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::number:
            return a.number == b.number ||
                   (std::isnan(a.number) && std::isnan(b.number));
        case NodeKind::variable: return true;
        case NodeKind::neg: return equal(*a.lhs, *b.lhs);
        case NodeKind::call: return a.func == b.func && equal(*a.lhs, *b.lhs);
        default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
}

}  // namespace fpl::expr

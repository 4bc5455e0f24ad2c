#include "plap/expr.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace plap::jets {

namespace {

const std::vector<std::string> kAtomStart{"NUMBER", "IDENT", "(", "-"};

Expr make(Op op, Expr lhs = nullptr, Expr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Expr parse() {
        Expr e = expr();
        skip();
        if (pos_ != s_.size()) {
            fail("unexpected character '" + std::string(1, s_[pos_]) + "'",
                 trailing_ok(depth_ == 0));
        }
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    int depth_ = 0;

    static std::vector<std::string> trailing_ok(bool top) {
        std::vector<std::string> v{"+", "-", "*", "/", "^"};
        v.push_back(top ? "end of input" : ")");
        return v;
    }

    [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
        std::ostringstream msg;
        msg << "parse error at offset " << pos_ << ": " << what << "; expected one of";
        for (const auto& e : expected) {
            msg << " '" << e << "'";
        }
        throw ParseError(msg.str(), pos_, std::move(expected));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept('+')) {
                e = make(Op::Plus, e, term());
            } else if (accept('-')) {
                e = make(Op::Minus, e, term());
            } else {
                return e;
            }
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (accept('*')) {
                e = make(Op::Times, e, factor());
            } else if (accept('/')) {
                e = make(Op::Divide, e, factor());
            } else {
                return e;
            }
        }
    }

    Expr factor() {
        if (accept('-')) {
            return make(Op::Neg, factor());
        }
        Expr base = primary();
        if (accept('^')) {
            return make(Op::Pow, base, factor());
        }
        return base;
    }

    Expr primary() {
        skip();
        if (pos_ >= s_.size()) {
            fail("unexpected end of input", kAtomStart);
        }
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ++depth_;
            Expr e = expr();
            if (!accept(')')) {
                skip();
                fail(pos_ < s_.size() ? "unexpected character '" + std::string(1, s_[pos_]) + "'"
                                      : std::string("unexpected end of input"),
                     trailing_ok(false));
            }
            --depth_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            return ident();
        }
        fail("unexpected character '" + std::string(1, c) + "'", kAtomStart);
    }

    Expr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
        };
        digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
                ++pos_;
            }
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                digits();
            } else {
                pos_ = save;
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != s_.data() + pos_) {
            pos_ = start;
            fail("malformed number", {"NUMBER"});
        }
        auto n = std::make_shared<Node>();
        n->op = Op::Number;
        n->number = v;
        return n;
    }

    Expr ident() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
        const std::string_view name = s_.substr(start, pos_ - start);
        if (name == "x1" || name == "x2" || name == "x3") {
            auto n = std::make_shared<Node>();
            n->op = Op::Variable;
            n->variable = name[1] - '1';
            return n;
        }
        Op op;
        if (name == "sin") {
            op = Op::Sin;
        } else if (name == "cos") {
            op = Op::Cos;
        } else if (name == "exp") {
            op = Op::Exp;
        } else if (name == "log") {
            op = Op::Log;
        } else if (name == "sqrt") {
            op = Op::Sqrt;
        } else {
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'",
                 {"x1", "x2", "x3", "sin", "cos", "exp", "log", "sqrt"});
        }
        if (!accept('(')) {
            skip();
            fail("function name must be followed by '('", {"("});
        }
        ++depth_;
        Expr arg = expr();
        if (!accept(')')) {
            skip();
            fail(pos_ < s_.size() ? "unexpected character '" + std::string(1, s_[pos_]) + "'"
                                  : std::string("unexpected end of input"),
                 trailing_ok(false));
        }
        --depth_;
        return make(op, arg);
    }
};

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

const char* name_of(Op op) {
    switch (op) {
    case Op::Neg: return "Neg";
    case Op::Plus: return "Plus";
    case Op::Minus: return "Minus";
    case Op::Times: return "Times";
    case Op::Divide: return "Divide";
    case Op::Pow: return "Pow";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    default: return "";
    }
}

Jet eval_impl(const Node& e, std::span<const Jet> vars, int nvars, int order) {
    switch (e.op) {
    case Op::Number:
        return Jet::constant(nvars, order, e.number);
    case Op::Variable:
        if (e.variable >= static_cast<int>(vars.size())) {
            throw InvalidArgument("expression uses x" + std::to_string(e.variable + 1) +
                                  " but only " + std::to_string(vars.size()) +
                                  " variables are bound");
        }
        return vars[static_cast<std::size_t>(e.variable)];
    case Op::Neg:
        return -eval_impl(*e.lhs, vars, nvars, order);
    case Op::Plus:
        return eval_impl(*e.lhs, vars, nvars, order) + eval_impl(*e.rhs, vars, nvars, order);
    case Op::Minus:
        return eval_impl(*e.lhs, vars, nvars, order) - eval_impl(*e.rhs, vars, nvars, order);
    case Op::Times:
        return eval_impl(*e.lhs, vars, nvars, order) * eval_impl(*e.rhs, vars, nvars, order);
    case Op::Divide:
        return eval_impl(*e.lhs, vars, nvars, order) / eval_impl(*e.rhs, vars, nvars, order);
    case Op::Pow: {
        Jet base = eval_impl(*e.lhs, vars, nvars, order);
        if (e.rhs->op == Op::Number) {
            return pow(base, e.rhs->number);
        }
        return pow(base, eval_impl(*e.rhs, vars, nvars, order));
    }
    case Op::Sin:
        return sin(eval_impl(*e.lhs, vars, nvars, order));
    case Op::Cos:
        return cos(eval_impl(*e.lhs, vars, nvars, order));
    case Op::Exp:
        return exp(eval_impl(*e.lhs, vars, nvars, order));
    case Op::Log:
        return log(eval_impl(*e.lhs, vars, nvars, order));
    case Op::Sqrt:
        return sqrt(eval_impl(*e.lhs, vars, nvars, order));
    }
    throw InvalidArgument("corrupt expression node");
}

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expr& e) {
    switch (e->op) {
    case Op::Number:
        return format_number(e->number);
    case Op::Variable:
        return "x" + std::to_string(e->variable + 1);
    case Op::Neg:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt:
        return std::string(name_of(e->op)) + "(" + to_string(e->lhs) + ")";
    default:
        return std::string(name_of(e->op)) + "(" + to_string(e->lhs) + ", " + to_string(e->rhs) +
               ")";
    }
}

int variable_count(const Expr& e) {
    if (!e) {
        return 0;
    }
    const int here = e->op == Op::Variable ? e->variable + 1 : 0;
    return std::max({here, variable_count(e->lhs), variable_count(e->rhs)});
}

Jet eval(const Expr& e, std::span<const Jet> vars) {
    if (vars.empty()) {
        throw InvalidArgument("eval needs at least one bound variable to fix the jet shape");
    }
    return eval_impl(*e, vars, vars[0].nvars(), vars[0].order());
}

Jet eval_jet(const Expr& e, std::span<const double> point, int order) {
    const int n = static_cast<int>(point.size());
    std::vector<Jet> vars;
    for (int k = 0; k < n; ++k) {
        vars.push_back(Jet::variable(n, order, k, point[static_cast<std::size_t>(k)]));
    }
    return eval_impl(*e, vars, n, order);
}

double eval_point(const Expr& e, std::span<const double> point) {
    return eval_jet(e, point, 0).value();
}

}  // namespace plap::jets

#include "ssst/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace ssst {

enum class NodeKind { Literal, Coord, Param, Add, Sub, Mul, Div, Pow, Neg, Call };

enum class Fn { Exp, Log, Sin, Cos, Sinh, Cosh, Tanh, Sqrt };

struct Expr::Node {
    NodeKind kind;
    double literal = 0.0;
    int slot = -1;  // coordinate or parameter index
    Fn fn = Fn::Exp;
    NodePtr a, b;
};

namespace {

using Node = Expr::Node;
using NodePtr = Expr::NodePtr;

NodePtr make_node(NodeKind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Sinh: return "sinh";
        case Fn::Cosh: return "cosh";
        case Fn::Tanh: return "tanh";
        case Fn::Sqrt: return "sqrt";
    }
    return "?";
}

bool lookup_fn(const std::string& name, Fn& out) {
    static const std::pair<const char*, Fn> table[] = {
        {"exp", Fn::Exp},   {"log", Fn::Log},   {"sin", Fn::Sin},   {"cos", Fn::Cos},
        {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh}, {"tanh", Fn::Tanh}, {"sqrt", Fn::Sqrt}};
    for (const auto& [n, f] : table) {
        if (name == n) {
            out = f;
            return true;
        }
    }
    return false;
}

class Parser {
  public:
    Parser(std::string_view text,
           const std::vector<std::string>& coords,
           const std::vector<std::string>& params)
        : text_(text), coords_(coords), params_(params) {}

    NodePtr run() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("empty expression", 0);
        NodePtr e = expr();
        skip_ws();
        if (pos_ < text_.size())
            throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

  private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make_node(NodeKind::Add, lhs, term());
            } else if (accept('-')) {
                lhs = make_node(NodeKind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_node(NodeKind::Mul, lhs, unary());
            } else if (accept('/')) {
                lhs = make_node(NodeKind::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make_node(NodeKind::Neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make_node(NodeKind::Pow, base, unary());
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of expression", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                pos_ = mark;  // 'e' belongs to an identifier-like token; reject below
            } else {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
        }
        std::string tok(text_.substr(start, pos_ - start));
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw SyntaxError("malformed number '" + tok + "'", start);
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Literal;
            n->literal = v;
            return n;
        } catch (const std::invalid_argument&) {
            throw SyntaxError("malformed number '" + tok + "'", start);
        }
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        Fn f;
        if (lookup_fn(name, f)) {
            if (!accept('(')) throw SyntaxError("expected '(' after function '" + name + "'", pos_);
            NodePtr arg = expr();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Call;
            n->fn = f;
            n->a = arg;
            return n;
        }
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (coords_[i] == name) {
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::Coord;
                n->slot = static_cast<int>(i);
                return n;
            }
        }
        for (std::size_t i = 0; i < params_.size(); ++i) {
            if (params_[i] == name) {
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::Param;
                n->slot = static_cast<int>(i);
                return n;
            }
        }
        throw UnknownSymbol(name, start);
    }

    std::string_view text_;
    const std::vector<std::string>& coords_;
    const std::vector<std::string>& params_;
    std::size_t pos_ = 0;
};

// Precedence levels for minimal-parenthesis printing.
int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Neg: return 3;
        case NodeKind::Pow: return 4;
        default: return 5;
    }
}

void print_node(const Node& n,
                const std::vector<std::string>& coords,
                const std::vector<std::string>& params,
                std::ostream& os) {
    auto child = [&](const NodePtr& c, int min_prec) {
        bool paren = precedence(c->kind) < min_prec;
        if (paren) os << '(';
        print_node(*c, coords, params, os);
        if (paren) os << ')';
    };
    switch (n.kind) {
        case NodeKind::Literal: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << n.literal;
            os << tmp.str();
            break;
        }
        case NodeKind::Coord: os << coords[n.slot]; break;
        case NodeKind::Param: os << params[n.slot]; break;
        case NodeKind::Add:
            child(n.a, 1);
            os << " + ";
            child(n.b, 2);
            break;
        case NodeKind::Sub:
            child(n.a, 1);
            os << " - ";
            child(n.b, 2);
            break;
        case NodeKind::Mul:
            child(n.a, 2);
            os << "*";
            child(n.b, 3);
            break;
        case NodeKind::Div:
            child(n.a, 2);
            os << "/";
            child(n.b, 3);
            break;
        case NodeKind::Neg:
            os << "-";
            child(n.a, 3);
            break;
        case NodeKind::Pow:
            child(n.a, 5);
            os << "^";
            child(n.b, 4);
            break;
        case NodeKind::Call:
            os << fn_name(n.fn) << "(";
            print_node(*n.a, coords, params, os);
            os << ")";
            break;
    }
}

NodePtr remap_node(const NodePtr& n, const std::vector<int>& coord_map,
                   const std::vector<int>& param_map) {
    auto m = std::make_shared<Node>(*n);
    if (n->kind == NodeKind::Coord) m->slot = coord_map[n->slot];
    if (n->kind == NodeKind::Param) m->slot = param_map[n->slot];
    if (n->a) m->a = remap_node(n->a, coord_map, param_map);
    if (n->b) m->b = remap_node(n->b, coord_map, param_map);
    return m;
}

}  // namespace

Expr Expr::parse(std::string_view text,
                 const std::vector<std::string>& coords,
                 const std::vector<std::string>& params) {
    for (const auto& c : coords)
        for (const auto& p : params)
            if (c == p) throw SpecError("'" + c + "' declared as both coordinate and parameter");
    Parser parser(text, coords, params);
    return Expr(parser.run(), coords, params);
}

Expr Expr::literal(double c,
                   const std::vector<std::string>& coords,
                   const std::vector<std::string>& params) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Literal;
    n->literal = c;
    return Expr(n, coords, params);
}

template <class J>
J Expr::eval_generic(const Vec& point, const ParamMap& params) const {
    if (!root_) throw Error("evaluating an empty expression");
    const int dim = static_cast<int>(coords_.size());
    if (point.size() != dim) throw Error("point dimension does not match chart");
    std::vector<double> pvals(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i) {
        auto it = params.find(params_[i]);
        if (it == params.end()) throw Error("unbound parameter '" + params_[i] + "'");
        pvals[i] = it->second;
    }

    struct Walker {
        const Vec& x;
        const std::vector<double>& p;
        int dim;
        J visit(const Node& n) {
            switch (n.kind) {
                case NodeKind::Literal: return J::constant(n.literal, dim);
                case NodeKind::Coord: return J::coordinate(n.slot, x[n.slot], dim);
                case NodeKind::Param: return J::constant(p[n.slot], dim);
                case NodeKind::Add: return visit(*n.a) + visit(*n.b);
                case NodeKind::Sub: return visit(*n.a) - visit(*n.b);
                case NodeKind::Mul: return visit(*n.a) * visit(*n.b);
                case NodeKind::Div: return visit(*n.a) / visit(*n.b);
                case NodeKind::Neg: return -visit(*n.a);
                case NodeKind::Pow: return jet_pow(visit(*n.a), visit(*n.b));
                case NodeKind::Call: {
                    J u = visit(*n.a);
                    switch (n.fn) {
                        case Fn::Exp: return jet_exp(u);
                        case Fn::Log: return jet_log(u);
                        case Fn::Sin: return jet_sin(u);
                        case Fn::Cos: return jet_cos(u);
                        case Fn::Sinh: return jet_sinh(u);
                        case Fn::Cosh: return jet_cosh(u);
                        case Fn::Tanh: return jet_tanh(u);
                        case Fn::Sqrt: return jet_sqrt(u);
                    }
                }
            }
            throw Error("corrupt expression node");
        }
    };
    Walker w{point, pvals, dim};
    return w.visit(*root_);
}

double Expr::eval(const Vec& point, const ParamMap& params) const {
    return eval_generic<Jet0>(point, params).v;
}

Jet1 Expr::eval_jet1(const Vec& point, const ParamMap& params) const {
    return eval_generic<Jet1>(point, params);
}

Jet2 Expr::eval_jet2(const Vec& point, const ParamMap& params) const {
    return eval_generic<Jet2>(point, params);
}

std::string Expr::str() const {
    if (!root_) return "";
    std::ostringstream os;
    print_node(*root_, coords_, params_, os);
    return os.str();
}

Expr Expr::rebind(const std::vector<std::string>& coords,
                  const std::vector<std::string>& params) const {
    std::vector<int> cmap(coords_.size(), -1), pmap(params_.size(), -1);
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        for (std::size_t j = 0; j < coords.size(); ++j)
            if (coords[j] == coords_[i]) cmap[i] = static_cast<int>(j);
        if (cmap[i] < 0) throw SpecError("rebind: coordinate '" + coords_[i] + "' missing");
    }
    for (std::size_t i = 0; i < params_.size(); ++i) {
        for (std::size_t j = 0; j < params.size(); ++j)
            if (params[j] == params_[i]) pmap[i] = static_cast<int>(j);
        if (pmap[i] < 0) throw SpecError("rebind: parameter '" + params_[i] + "' missing");
    }
    return Expr(remap_node(root_, cmap, pmap), coords, params);
}

Expr operator+(const Expr& a, const Expr& b) {
    Expr bb = b.rebind(a.coords_, a.params_);
    return Expr(make_node(NodeKind::Add, a.root_, bb.root_), a.coords_, a.params_);
}
Expr operator-(const Expr& a, const Expr& b) {
    Expr bb = b.rebind(a.coords_, a.params_);
    return Expr(make_node(NodeKind::Sub, a.root_, bb.root_), a.coords_, a.params_);
}
Expr operator*(const Expr& a, const Expr& b) {
    Expr bb = b.rebind(a.coords_, a.params_);
    return Expr(make_node(NodeKind::Mul, a.root_, bb.root_), a.coords_, a.params_);
}
Expr operator/(const Expr& a, const Expr& b) {
    Expr bb = b.rebind(a.coords_, a.params_);
    return Expr(make_node(NodeKind::Div, a.root_, bb.root_), a.coords_, a.params_);
}
Expr operator-(const Expr& a) { return Expr(make_node(NodeKind::Neg, a.root_), a.coords_, a.params_); }

Expr Expr::squared() const {
    return Expr(make_node(NodeKind::Mul, root_, root_), coords_, params_);
}

}  // namespace ssst

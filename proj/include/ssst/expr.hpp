#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ssst/jet.hpp"

namespace ssst {

using ParamMap = std::map<std::string, double>;

// Parsed scalar expression over declared coordinates and late-bound named
// parameters. Immutable after parse; evaluation is pure, so expressions are
// safe to share across threads.
//
// Grammar (documented in the README):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?            -- right-associative
//   atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
// Functions: exp log sin cos sinh cosh tanh sqrt. Implicit multiplication is
// a syntax error. abs is deliberately not in the grammar (fields must be C^2).
class Expr {
  public:
    Expr() = default;

    static Expr parse(std::string_view text,
                      const std::vector<std::string>& coords,
                      const std::vector<std::string>& params);

    // Convenience constructors used when assembling product metrics.
    static Expr literal(double c,
                        const std::vector<std::string>& coords,
                        const std::vector<std::string>& params);

    bool empty() const { return root_ == nullptr; }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<std::string>& params() const { return params_; }

    double eval(const Vec& point, const ParamMap& params) const;
    Jet1 eval_jet1(const Vec& point, const ParamMap& params) const;
    Jet2 eval_jet2(const Vec& point, const ParamMap& params) const;

    // Minimal-parenthesis rendering; parse(str()) evaluates identically.
    std::string str() const;

    // Re-express over a different (super)set of coordinates, matching by
    // name. Used to lift base-manifold expressions into the product chart.
    Expr rebind(const std::vector<std::string>& coords,
                const std::vector<std::string>& params) const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    Expr squared() const;

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

  private:
    Expr(NodePtr root, std::vector<std::string> coords, std::vector<std::string> params)
        : root_(std::move(root)), coords_(std::move(coords)), params_(std::move(params)) {}

    template <class J>
    J eval_generic(const Vec& point, const ParamMap& params) const;

    NodePtr root_;
    std::vector<std::string> coords_;
    std::vector<std::string> params_;
};

}  // namespace ssst

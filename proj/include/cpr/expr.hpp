#pragma once

// Element expressions:
//   expr   := term (('+' | '-') term)*
//   term   := rational? '*'? factor ('*' factor)*
//   factor := R:label | Q:label | P:label | p(v) | x(e1 e2 ...) | y(e1 e2 ...) | '(' expr ')'
// x(...) is a path of Q generators and y(...) the adjoint of a path, that is
// the P generators in reverse order.  A lone rational means that multiple of
// the unit (zero is always accepted).

#include "cpr/graphalg.hpp"
#include "cpr/toeplitz.hpp"

#include <memory>
#include <string>
#include <vector>

namespace cpr {

struct ExprNode {
    enum class Kind { sum, product, generator, scalar };
    Kind kind = Kind::scalar;
    std::vector<std::pair<int, ExprNode>> terms;  // sum: (sign, term)
    Rational coef = 1;                            // product, scalar
    std::vector<ExprNode> factors;                // product
    char prefix = 0;                              // generator: R Q P p x y
    std::vector<std::string> labels;              // generator
    int line = 1, column = 1;
};

ExprNode parse_expr(const std::string& text);  // throws SyntaxError

ToeplitzElement parse_toeplitz(const std::string& text, const RingPtr& ring);   // UnknownGenerator, PathError
LpaElement parse_lpa(const std::string& text, const LpaGraphPtr& g);           // UnknownGenerator, PathError
ToeplitzElement eval_toeplitz(const ExprNode& e, const RingPtr& ring);
LpaElement eval_lpa(const ExprNode& e, const LpaGraphPtr& g);

// Canonical text that parse_toeplitz reads back to an equal element.
std::string toeplitz_to_string(const ToeplitzElement& x);

} // namespace cpr

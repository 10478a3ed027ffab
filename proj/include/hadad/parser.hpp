#pragma once

#include <string>

#include "hadad/catalog.hpp"
#include "hadad/expr.hpp"

namespace hadad {

// Parses the R-flavored surface language and returns a shape-checked,
// hash-consed AST. `*` resolves to elementwise or scalar multiplication by
// operand shapes; `a - b` is stored as a + (-1 * b).
NodeId parse_expression(const std::string& text, ExprArena& arena, const Catalog& catalog);

NodeId parse_expression_file(const std::string& path, ExprArena& arena, const Catalog& catalog);

}

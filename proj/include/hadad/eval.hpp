#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "hadad/catalog.hpp"
#include "hadad/expr.hpp"
#include "hadad/matrix.hpp"

namespace hadad {

using Env = std::map<std::string, Matrix>;

// Exact (within float) evaluation; the soundness oracle for rewritings.
Matrix eval_numeric(const ExprArena& arena, NodeId root, const Env& bindings);

// Deterministic per-seed instance with catalog dims proportionally shrunk so the
// largest dimension becomes `scale` (never enlarged, clamped at 1). Honors the
// structural tags. When `arena` is given, view values are evaluated and bound too.
Env random_instance(const Catalog& catalog, std::uint64_t seed, std::size_t scale,
                    const ExprArena* arena = nullptr);

// The dimension map used by random_instance.
std::size_t scaled_dim(const Catalog& catalog, std::size_t dim, std::size_t scale);

}

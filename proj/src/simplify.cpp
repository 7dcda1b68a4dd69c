#include "fraigbmc/simplify.hpp"

namespace fraigbmc {

std::optional<NodeRef> trivial_simplify(NodeRef i1, NodeRef i2) {
  if (i1.is_false() || i2.is_false())
    return NodeRef::const_false();
  if (i1.is_true())
    return i2;
  if (i2.is_true())
    return i1;
  if (i1 == i2)
    return i1;
  if (i1 == ~i2)
    return NodeRef::const_false();
  return std::nullopt;
}

} // namespace fraigbmc

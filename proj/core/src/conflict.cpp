#include "aspt/conflict.hpp"

namespace aspt {

std::string_view to_string(ConflictKind kind) noexcept {
  switch (kind) {
    case ConflictKind::Vertex: return "vertex";
    case ConflictKind::Edge: return "edge";
    case ConflictKind::Swap: return "swap";
    case ConflictKind::Follow: return "follow";
    case ConflictKind::Cyclic: return "cyclic";
  }
  return "unknown";
}

}  // namespace aspt

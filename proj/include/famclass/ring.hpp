#pragma once

#include <cstdint>
#include <string>

namespace famclass {

/// Coefficient ring for counts and cochains.
enum class Ring { Z, F2 };

inline std::string to_string(Ring r) { return r == Ring::Z ? "Z" : "F2"; }

/// Canonical representative: identity over Z, {0,1} over F2.
inline std::int64_t reduce(Ring r, std::int64_t v) {
  if (r == Ring::Z) return v;
  return ((v % 2) + 2) % 2;
}

}  // namespace famclass

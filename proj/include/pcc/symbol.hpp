#pragma once

#include <cstdint>
#include <vector>

namespace pcc {

// Message symbols are positive integers; 0 is reserved for the escape.
using Symbol = std::uint64_t;

inline constexpr Symbol kMaxSymbol = Symbol{1} << 62;

using Message = std::vector<Symbol>;

}  // namespace pcc

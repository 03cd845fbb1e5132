#pragma once

#include <cstdint>

#include "pcc/bitstream.hpp"

namespace pcc {

// Elias delta code of w = v + 1: gamma(floor(log2 w) + 1) followed by the low
// floor(log2 w) bits of w. v = 0 is the one-bit codeword "1". Values up to
// 2^62 are supported.
void elias_encode(std::uint64_t v, Bitstream& out);

// Throws CorruptStream on an invalid prefix or end of stream.
std::uint64_t elias_decode(BitReader& in);

unsigned elias_length(std::uint64_t v);

// 1 + log2(j v 1) + 2 log2(1 + log2(j v 1)): the idealized insertion cost
// used in the redundancy analysis.
double elias_ideal_length(std::uint64_t j);

}  // namespace pcc

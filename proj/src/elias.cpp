#include "pcc/elias.hpp"

#include <bit>
#include <cmath>

#include "pcc/error.hpp"

namespace pcc {

namespace {

constexpr std::uint64_t kMaxValue = std::uint64_t{1} << 62;

unsigned floor_log2(std::uint64_t w) { return static_cast<unsigned>(std::bit_width(w)) - 1; }

}  // namespace

void elias_encode(std::uint64_t v, Bitstream& out) {
    if (v > kMaxValue) throw Error("elias value exceeds 2^62");
    const std::uint64_t w = v + 1;
    const unsigned n = floor_log2(w);
    const unsigned len = n + 1;
    const unsigned len_bits = floor_log2(len);
    out.append_bits(0, len_bits);
    out.append_bits(len, len_bits + 1);
    out.append_bits(w, n);
}

std::uint64_t elias_decode(BitReader& in) {
    unsigned zeros = 0;
    while (!in.read()) {
        if (++zeros > 5) throw CorruptStream("elias length prefix too long");
    }
    const std::uint64_t len = (std::uint64_t{1} << zeros) | in.read_bits(zeros);
    if (len > 63) throw CorruptStream("elias length out of range");
    const auto n = static_cast<unsigned>(len - 1);
    const std::uint64_t w = (std::uint64_t{1} << n) | in.read_bits(n);
    const std::uint64_t v = w - 1;
    if (v > kMaxValue) throw CorruptStream("elias value out of range");
    return v;
}

unsigned elias_length(std::uint64_t v) {
    const unsigned n = floor_log2(v + 1);
    return 2 * floor_log2(n + 1) + 1 + n;
}

double elias_ideal_length(std::uint64_t j) {
    const double lj = j <= 1 ? 0.0 : std::log2(static_cast<double>(j));
    return 1.0 + lj + 2.0 * std::log2(1.0 + lj);
}

}  // namespace pcc

#pragma once

#include <cstdint>

#include "pcc/bitstream.hpp"
#include "pcc/error.hpp"

namespace pcc {

// One symbol's slot [cum_lo, cum_hi) in a partition of [0, total).
struct SymbolInterval {
    std::uint64_t cum_lo = 0;
    std::uint64_t cum_hi = 1;
    std::uint64_t total = 1;
};

// Binary arithmetic coder with 62-bit registers and exact integer interval
// arithmetic. Totals up to 2^32 are accepted; after renormalization the
// register range always exceeds 2^60.
//
// Streams are cut into segments by flush(): a segment holding symbols of
// joint probability Q occupies at most ceil(-log2 Q) + 2 bits, and the
// decoder can compute where a segment ends from the symbols alone.
namespace arith {
inline constexpr unsigned kPrecision = 62;
inline constexpr std::uint64_t kTop = std::uint64_t{1} << kPrecision;
inline constexpr std::uint64_t kHalf = kTop >> 1;
inline constexpr std::uint64_t kQuarter = kTop >> 2;
inline constexpr std::uint64_t kMaxTotal = std::uint64_t{1} << 32;
}  // namespace arith

class ArithEncoder {
public:
    explicit ArithEncoder(Bitstream& out) : out_(&out) {}

    // Throws PrecisionOverflow when total > 2^32.
    void encode(SymbolInterval interval);

    // Terminates the current segment: emits the pending bits plus two bits
    // that pin a value inside the interval, then restarts on a fresh
    // interval at the next bit position.
    void flush();

    std::uint64_t range() const { return high_ - low_ + 1; }
    std::uint64_t low() const { return low_; }

private:
    void emit(bool bit);

    Bitstream* out_;
    std::uint64_t low_ = 0;
    std::uint64_t high_ = arith::kTop - 1;
    std::uint64_t pending_ = 0;
};

class ArithDecoder {
public:
    // Starts decoding a segment at bit `start`. Bits past the end of the
    // stream read as zero; finish() rejects segments that actually need them.
    ArithDecoder(const Bitstream& in, std::uint64_t start);

    // Cumulative count in [0, total) selected by the code value.
    // Throws CorruptStream if the code value left the interval.
    std::uint64_t target(std::uint64_t total) const;

    // Narrows to the decoded symbol's interval and renormalizes.
    void consume(SymbolInterval interval);

    // Decodes one symbol. lookup(target) must return {symbol, interval} with
    // interval.cum_lo <= target < interval.cum_hi.
    template <class Lookup>
    auto decode(std::uint64_t total, Lookup&& lookup) {
        const auto [symbol, interval] = lookup(target(total));
        consume(interval);
        return symbol;
    }

    // Bit position just after the flush bits of the current segment.
    std::uint64_t segment_end() const { return start_ + shifts_ + 2; }

    // Starts a new segment at `start` (the resync after a flush boundary).
    void restart(std::uint64_t start);

private:
    const Bitstream* in_;
    std::uint64_t start_ = 0;
    std::uint64_t next_ = 0;
    std::uint64_t shifts_ = 0;
    std::uint64_t low_ = 0;
    std::uint64_t high_ = arith::kTop - 1;
    std::uint64_t value_ = 0;
};

}  // namespace pcc

#include "pcc/arith.hpp"

namespace pcc {

using namespace arith;

namespace {

using u128 = unsigned __int128;

void narrow(std::uint64_t& low, std::uint64_t& high, SymbolInterval iv) {
    if (iv.total == 0 || iv.total > kMaxTotal) {
        throw PrecisionOverflow("interval total " + std::to_string(iv.total) + " exceeds 2^32");
    }
    if (!(iv.cum_lo < iv.cum_hi && iv.cum_hi <= iv.total)) {
        throw Error("malformed symbol interval");
    }
    const u128 range = static_cast<u128>(high - low) + 1;
    high = low + static_cast<std::uint64_t>(range * iv.cum_hi / iv.total) - 1;
    low = low + static_cast<std::uint64_t>(range * iv.cum_lo / iv.total);
}

}  // namespace

void ArithEncoder::emit(bool bit) {
    out_->push_back(bit);
    for (; pending_ > 0; --pending_) out_->push_back(!bit);
}

void ArithEncoder::encode(SymbolInterval interval) {
    narrow(low_, high_, interval);
    for (;;) {
        if (high_ < kHalf) {
            emit(false);
        } else if (low_ >= kHalf) {
            emit(true);
            low_ -= kHalf;
            high_ -= kHalf;
        } else if (low_ >= kQuarter && high_ < kHalf + kQuarter) {
            ++pending_;
            low_ -= kQuarter;
            high_ -= kQuarter;
        } else {
            break;
        }
        low_ <<= 1;
        high_ = (high_ << 1) | 1;
    }
}

void ArithEncoder::flush() {
    // The interval straddles the midpoint, so it contains [Q1,Q2) when
    // low < Q1 and [Q2,Q3) otherwise; two bits select that quarter.
    ++pending_;
    emit(low_ >= kQuarter);
    low_ = 0;
    high_ = kTop - 1;
}

ArithDecoder::ArithDecoder(const Bitstream& in, std::uint64_t start) : in_(&in) { restart(start); }

void ArithDecoder::restart(std::uint64_t start) {
    start_ = start;
    shifts_ = 0;
    low_ = 0;
    high_ = kTop - 1;
    value_ = 0;
    for (unsigned i = 0; i < kPrecision; ++i) {
        value_ = (value_ << 1) | static_cast<std::uint64_t>(in_->bit_or_zero(start + i));
    }
    next_ = start + kPrecision;
}

std::uint64_t ArithDecoder::target(std::uint64_t total) const {
    if (total == 0 || total > kMaxTotal) {
        throw PrecisionOverflow("interval total " + std::to_string(total) + " exceeds 2^32");
    }
    if (value_ < low_ || value_ > high_) throw CorruptStream("code value outside interval");
    const u128 range = static_cast<u128>(high_ - low_) + 1;
    const u128 offset = static_cast<u128>(value_ - low_) + 1;
    const auto t = static_cast<std::uint64_t>((offset * total - 1) / range);
    if (t >= total) throw CorruptStream("code value outside [0,total)");
    return t;
}

void ArithDecoder::consume(SymbolInterval interval) {
    narrow(low_, high_, interval);
    for (;;) {
        if (high_ < kHalf) {
        } else if (low_ >= kHalf) {
            low_ -= kHalf;
            high_ -= kHalf;
            value_ -= kHalf;
        } else if (low_ >= kQuarter && high_ < kHalf + kQuarter) {
            low_ -= kQuarter;
            high_ -= kQuarter;
            value_ -= kQuarter;
        } else {
            break;
        }
        low_ <<= 1;
        high_ = (high_ << 1) | 1;
        value_ = ((value_ << 1) | static_cast<std::uint64_t>(in_->bit_or_zero(next_++))) & (kTop - 1);
        ++shifts_;
    }
    if (segment_end() > in_->size()) throw CorruptStream("arithmetic segment runs past end");
}

}  // namespace pcc

#include "pcc/bitstream.hpp"

#include "pcc/error.hpp"

namespace pcc {

Bitstream::Bitstream(std::vector<std::uint8_t> bytes, std::uint64_t bit_length)
    : bytes_(std::move(bytes)), size_(bit_length) {
    const std::uint64_t capacity = 8 * static_cast<std::uint64_t>(bytes_.size());
    if (bit_length > capacity || capacity >= bit_length + 8) {
        throw CorruptStream("payload size does not match bit length");
    }
    if (bit_length & 7) {
        const auto used = static_cast<unsigned>(bit_length & 7);
        const auto pad_mask = static_cast<std::uint8_t>(0xFFu >> used);
        if (bytes_.back() & pad_mask) throw CorruptStream("nonzero padding bits");
    }
}

bool BitReader::read() {
    if (pos_ >= in_->size()) throw CorruptStream("unexpected end of stream");
    return (*in_)[pos_++];
}

std::uint64_t BitReader::read_bits(unsigned count) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < count; ++i) v = (v << 1) | static_cast<std::uint64_t>(read());
    return v;
}

void BitReader::seek(std::uint64_t pos) {
    if (pos > in_->size()) throw CorruptStream("seek past end of stream");
    pos_ = pos;
}

}  // namespace pcc

#pragma once

#include <cstdint>
#include <vector>

namespace pcc {

// Append-only bit sequence, most significant bit first within each byte. The
// final partial byte is zero-padded.
class Bitstream {
public:
    Bitstream() = default;
    // Adopts a serialized payload. Throws CorruptStream unless
    // bit_length <= 8 * bytes.size() < bit_length + 8 and the padding is zero.
    Bitstream(std::vector<std::uint8_t> bytes, std::uint64_t bit_length);

    void push_back(bool bit) {
        if ((size_ & 7) == 0) bytes_.push_back(0);
        if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (size_ & 7));
        ++size_;
    }

    // Low `count` bits of value, most significant first.
    void append_bits(std::uint64_t value, unsigned count) {
        for (unsigned i = count; i-- > 0;) push_back((value >> i) & 1u);
    }

    void append(const Bitstream& other) {
        for (std::uint64_t i = 0; i < other.size(); ++i) push_back(other[i]);
    }

    bool operator[](std::uint64_t pos) const { return (bytes_[pos >> 3] >> (7 - (pos & 7))) & 1u; }

    // Reads past the end as zero.
    bool bit_or_zero(std::uint64_t pos) const { return pos < size_ && (*this)[pos]; }

    std::uint64_t size() const { return size_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

    friend bool operator==(const Bitstream&, const Bitstream&) = default;

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t size_ = 0;
};

// Cursor over a Bitstream that never moves past its end.
class BitReader {
public:
    explicit BitReader(const Bitstream& in, std::uint64_t pos = 0) : in_(&in), pos_(pos) {}

    // Throws CorruptStream at end of stream.
    bool read();
    std::uint64_t read_bits(unsigned count);

    std::uint64_t position() const { return pos_; }
    void seek(std::uint64_t pos);
    std::uint64_t remaining() const { return in_->size() - pos_; }
    bool at_end() const { return pos_ == in_->size(); }

private:
    const Bitstream* in_;
    std::uint64_t pos_;
};

}  // namespace pcc

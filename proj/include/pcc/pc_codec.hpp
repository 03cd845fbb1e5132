#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "pcc/arith.hpp"
#include "pcc/bitstream.hpp"
#include "pcc/symbol.hpp"

namespace pcc {

inline constexpr std::uint64_t kMaxMessageLength = std::uint64_t{1} << 31;

// Symbols seen so far with their rank of insertion. Rank 0 is the escape
// symbol 0; message symbols get ranks 1..K in order of first occurrence.
class Dictionary {
public:
    std::optional<std::uint64_t> rank_of(Symbol s) const;
    // Inserts a symbol not yet present and returns its rank.
    std::uint64_t insert(Symbol s);
    Symbol symbol_at(std::uint64_t rank) const { return by_rank_.at(rank); }
    bool contains(Symbol s) const { return s == 0 || by_symbol_.contains(s); }
    // Number of message symbols inserted (K).
    std::uint64_t size() const { return by_rank_.size() - 1; }

private:
    std::unordered_map<Symbol, std::uint64_t> by_symbol_;
    std::vector<Symbol> by_rank_{0};
};

// Exact rational p = numerator / denominator.
struct Rational {
    std::uint64_t numerator;
    std::uint64_t denominator;
};

// Krichevsky-Trofimov mixture over the censored alphabet {0, ..., K}:
// rank k has predictive mass (2 n~^k + 1) / (2i + K + 1), where n~^0 = K and
// n~^k counts the repeats of the k-th inserted symbol. Cumulative masses are
// kept in a Fenwick tree so coding a rank costs O(log K).
class KTState {
public:
    std::uint64_t i() const { return i_; }
    std::uint64_t K() const { return weights_.size() - 1; }
    std::uint64_t count(std::uint64_t rank) const;
    // 2i + K + 1
    std::uint64_t total() const { return 2 * i_ + K() + 1; }

    Rational predictive(std::uint64_t rank) const;
    SymbolInterval interval(std::uint64_t rank) const;
    // Rank whose interval contains cumulative count `target`.
    std::uint64_t find(std::uint64_t target) const;

    // A repeat of rank k >= 1.
    void observe(std::uint64_t rank);
    // An escape that inserts a new symbol with rank K + 1.
    void observe_escape();

    // Order-sensitive fingerprint of (i, K, n~) for encoder/decoder agreement
    // checks.
    std::uint64_t digest() const { return digest_; }

private:
    std::uint64_t prefix(std::uint64_t rank) const;
    void add(std::uint64_t rank, std::uint64_t delta);
    void push_weight(std::uint64_t w);

    std::uint64_t i_ = 0;
    std::vector<std::uint64_t> weights_{1};
    std::vector<std::uint64_t> tree_{0, 1};
    std::uint64_t digest_ = 0;
};

// kt_predictive(state, k) = (2 n~^k + 1, 2i + K + 1); throws RankOutOfRange.
Rational kt_predictive(const KTState& state, std::uint64_t rank);

struct CensoredMessage {
    // Rank of each symbol in the dictionary built so far, 0 on first occurrence.
    std::vector<std::uint64_t> censored;
    // First occurrences in order.
    Message redacted;
    Dictionary dictionary;
};

// Throws InvalidSymbol on 0 or symbols above 2^62.
CensoredMessage censor(std::span<const Symbol> message);

// Container layout: "PCC1" | version 0x01 | bit length (8 bytes, big endian)
// | payload bytes.
struct PcContainer {
    static constexpr std::array<std::uint8_t, 4> kMagic{'P', 'C', 'C', '1'};
    static constexpr std::uint8_t kVersion = 1;
    static constexpr std::size_t kHeaderSize = 13;

    Bitstream payload;

    std::uint64_t bit_length() const { return payload.size(); }
    std::vector<std::uint8_t> serialize() const;
    // Throws CorruptStream on bad magic, version or length fields.
    static PcContainer parse(std::span<const std::uint8_t> bytes);
};

// Model state at a symbol boundary, recorded by encode/decode on request.
struct ModelSnapshot {
    std::uint64_t i;
    std::uint64_t K;
    std::uint64_t digest;

    friend bool operator==(const ModelSnapshot&, const ModelSnapshot&) = default;
};
using ModelTrace = std::vector<ModelSnapshot>;

struct EncodeStats {
    std::uint64_t bits = 0;
    std::uint64_t distinct = 0;
    std::uint64_t flushes = 0;
};

// Pattern Censoring encoder. Each repeat is coded by its rank under the KT
// mixture; each first occurrence is coded as an escape, the arithmetic coder
// is flushed and the symbol follows as an Elias codeword. A final escape and
// Elias(0) terminate the stream.
//
// Throws InvalidSymbol or LengthLimitExceeded (more than 2^31 symbols).
PcContainer encode(std::span<const Symbol> message, ModelTrace* trace = nullptr,
                   EncodeStats* stats = nullptr);

// Throws CorruptStream on anything but a stream produced by encode().
Message decode(const PcContainer& container, ModelTrace* trace = nullptr);

// Flush-free code length: mixture bits are -log2 of the KT predictive masses
// along the censored message including the final escape; Elias bits are the
// realized codeword lengths of the first occurrences and of the terminator.
struct IdealCodelength {
    double mixture_bits = 0.0;
    double elias_bits = 0.0;
    // Same, with 1 + log2 j + 2 log2(1 + log2 j) per codeword.
    double elias_ideal_bits = 0.0;

    double total() const { return mixture_bits + elias_bits; }
    double total_idealized() const { return mixture_bits + elias_ideal_bits; }
};

IdealCodelength ideal_codelength(std::span<const Symbol> message);

}  // namespace pcc

#include "pcc/pc_codec.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "pcc/elias.hpp"
#include "pcc/error.hpp"
#include "pcc/numeric.hpp"

namespace pcc {

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t lowbit(std::uint64_t x) { return x & (~x + 1); }

void validate(std::span<const Symbol> message) {
    if (message.size() > kMaxMessageLength) {
        throw LengthLimitExceeded("message longer than 2^31 symbols");
    }
    for (Symbol s : message) {
        if (s == 0 || s > kMaxSymbol) {
            throw InvalidSymbol("symbol " + std::to_string(s) + " outside [1, 2^62]");
        }
    }
}

}  // namespace

std::optional<std::uint64_t> Dictionary::rank_of(Symbol s) const {
    if (s == 0) return 0;
    const auto it = by_symbol_.find(s);
    if (it == by_symbol_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t Dictionary::insert(Symbol s) {
    const std::uint64_t rank = by_rank_.size();
    by_symbol_.emplace(s, rank);
    by_rank_.push_back(s);
    return rank;
}

std::uint64_t KTState::count(std::uint64_t rank) const {
    if (rank >= weights_.size()) throw RankOutOfRange("rank " + std::to_string(rank));
    return (weights_[rank] - 1) / 2;
}

std::uint64_t KTState::prefix(std::uint64_t rank) const {
    std::uint64_t s = 0;
    for (std::uint64_t pos = rank; pos > 0; pos -= lowbit(pos)) s += tree_[pos];
    return s;
}

void KTState::add(std::uint64_t rank, std::uint64_t delta) {
    weights_[rank] += delta;
    for (std::uint64_t pos = rank + 1; pos < tree_.size(); pos += lowbit(pos)) tree_[pos] += delta;
}

void KTState::push_weight(std::uint64_t w) {
    const std::uint64_t pos = weights_.size() + 1;
    weights_.push_back(w);
    tree_.push_back(w + prefix(pos - 1) - prefix(pos - lowbit(pos)));
}

Rational KTState::predictive(std::uint64_t rank) const {
    if (rank >= weights_.size()) throw RankOutOfRange("rank " + std::to_string(rank));
    return {weights_[rank], total()};
}

SymbolInterval KTState::interval(std::uint64_t rank) const {
    if (rank >= weights_.size()) throw RankOutOfRange("rank " + std::to_string(rank));
    const std::uint64_t lo = prefix(rank);
    return {lo, lo + weights_[rank], total()};
}

std::uint64_t KTState::find(std::uint64_t target) const {
    const std::uint64_t n = weights_.size();
    std::uint64_t pos = 0;
    std::uint64_t rem = target;
    for (std::uint64_t step = std::bit_floor(n); step > 0; step >>= 1) {
        if (pos + step <= n && tree_[pos + step] <= rem) {
            pos += step;
            rem -= tree_[pos];
        }
    }
    return pos;
}

void KTState::observe(std::uint64_t rank) {
    if (rank == 0 || rank >= weights_.size()) throw RankOutOfRange("rank " + std::to_string(rank));
    add(rank, 2);
    ++i_;
    digest_ += mix(rank);
}

void KTState::observe_escape() {
    add(0, 2);
    push_weight(1);
    ++i_;
    digest_ += mix(0);
}

Rational kt_predictive(const KTState& state, std::uint64_t rank) { return state.predictive(rank); }

CensoredMessage censor(std::span<const Symbol> message) {
    validate(message);
    CensoredMessage out;
    out.censored.reserve(message.size());
    for (Symbol s : message) {
        if (const auto rank = out.dictionary.rank_of(s)) {
            out.censored.push_back(*rank);
        } else {
            out.censored.push_back(0);
            out.redacted.push_back(s);
            out.dictionary.insert(s);
        }
    }
    return out;
}

std::vector<std::uint8_t> PcContainer::serialize() const {
    std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
    out.push_back(kVersion);
    const std::uint64_t bits = bit_length();
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(bits >> shift));
    out.insert(out.end(), payload.bytes().begin(), payload.bytes().end());
    return out;
}

PcContainer PcContainer::parse(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize) throw CorruptStream("container shorter than header");
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) throw CorruptStream("bad magic");
    if (bytes[4] != kVersion) throw CorruptStream("unsupported version");
    std::uint64_t bits = 0;
    for (std::size_t i = 5; i < kHeaderSize; ++i) bits = (bits << 8) | bytes[i];
    const auto body = bytes.subspan(kHeaderSize);
    if (bits > 8 * static_cast<std::uint64_t>(body.size())) {
        throw CorruptStream("payload shorter than bit length");
    }
    return PcContainer{Bitstream(std::vector<std::uint8_t>(body.begin(), body.end()), bits)};
}

PcContainer encode(std::span<const Symbol> message, ModelTrace* trace, EncodeStats* stats) {
    validate(message);
    PcContainer container;
    Bitstream& out = container.payload;
    ArithEncoder coder(out);
    KTState kt;
    Dictionary dict;
    std::uint64_t flushes = 0;
    auto snapshot = [&] {
        if (trace) trace->push_back({kt.i(), kt.K(), kt.digest()});
    };
    for (Symbol s : message) {
        snapshot();
        if (const auto rank = dict.rank_of(s)) {
            coder.encode(kt.interval(*rank));
            kt.observe(*rank);
        } else {
            coder.encode(kt.interval(0));
            coder.flush();
            ++flushes;
            elias_encode(s, out);
            dict.insert(s);
            kt.observe_escape();
        }
    }
    snapshot();
    coder.encode(kt.interval(0));
    coder.flush();
    ++flushes;
    elias_encode(0, out);
    if (stats) *stats = {out.size(), dict.size(), flushes};
    return container;
}

Message decode(const PcContainer& container, ModelTrace* trace) {
    const Bitstream& in = container.payload;
    ArithDecoder coder(in, 0);
    KTState kt;
    Dictionary dict;
    Message out;
    for (;;) {
        if (trace) trace->push_back({kt.i(), kt.K(), kt.digest()});
        if (kt.i() > kMaxMessageLength) throw CorruptStream("message exceeds length limit");
        const std::uint64_t rank = coder.decode(kt.total(), [&](std::uint64_t target) {
            const std::uint64_t r = kt.find(target);
            return std::pair{r, kt.interval(r)};
        });
        if (rank != 0) {
            out.push_back(dict.symbol_at(rank));
            kt.observe(rank);
            continue;
        }
        BitReader reader(in, coder.segment_end());
        const std::uint64_t v = elias_decode(reader);
        if (v == 0) {
            if (!reader.at_end()) throw CorruptStream("trailing bits after terminator");
            break;
        }
        if (dict.contains(v)) throw CorruptStream("escape for a symbol already in the dictionary");
        dict.insert(v);
        out.push_back(v);
        kt.observe_escape();
        coder.restart(reader.position());
    }
    // Only canonical streams are accepted: re-encoding must reproduce the
    // payload bit for bit.
    if (encode(out).payload != in) throw CorruptStream("payload is not the canonical encoding");
    return out;
}

IdealCodelength ideal_codelength(std::span<const Symbol> message) {
    validate(message);
    KTState kt;
    Dictionary dict;
    CompensatedSum mixture;
    CompensatedSum realized;
    CompensatedSum idealized;
    auto cost = [&](std::uint64_t rank) {
        const Rational q = kt.predictive(rank);
        mixture += std::log2(static_cast<double>(q.denominator)) -
                   std::log2(static_cast<double>(q.numerator));
    };
    for (Symbol s : message) {
        if (const auto rank = dict.rank_of(s)) {
            cost(*rank);
            kt.observe(*rank);
        } else {
            cost(0);
            realized += elias_length(s);
            idealized += elias_ideal_length(s);
            dict.insert(s);
            kt.observe_escape();
        }
    }
    cost(0);
    realized += elias_length(0);
    idealized += elias_ideal_length(0);
    return {mixture.value(), realized.value(), idealized.value()};
}

}  // namespace pcc

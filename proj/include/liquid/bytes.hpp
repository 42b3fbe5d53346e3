#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace liquid {

using Byte = std::uint8_t;
using Bytes = std::vector<Byte>;
using ByteView = std::span<const Byte>;

std::string to_hex(ByteView data);

/// Decodes lowercase or uppercase hex. Throws EncodingError on odd length or
/// non-hex characters.
Bytes from_hex(std::string_view hex);

/// Fixed-width byte string. The tag parameter keeps hashes, unit ids, keys
/// and signatures from being mixed up even though they share a width.
template <std::size_t N, class Tag>
struct FixedBytes {
    static constexpr std::size_t size = N;

    std::array<Byte, N> bytes{};

    FixedBytes() = default;
    explicit FixedBytes(const std::array<Byte, N>& b) : bytes(b) {}

    /// Throws EncodingError when the input is not exactly N bytes.
    static FixedBytes from_span(ByteView data);
    static FixedBytes from_hex(std::string_view hex) { return from_span(liquid::from_hex(hex)); }

    std::string hex() const { return to_hex(bytes); }
    ByteView view() const { return bytes; }
    const Byte* data() const { return bytes.data(); }
    Byte* data() { return bytes.data(); }

    friend bool operator==(const FixedBytes&, const FixedBytes&) = default;
    friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
};

[[noreturn]] void throw_length_error(std::string_view what, std::size_t expected, std::size_t got);

template <std::size_t N, class Tag>
FixedBytes<N, Tag> FixedBytes<N, Tag>::from_span(ByteView data) {
    if (data.size() != N) throw_length_error("fixed-width value", N, data.size());
    FixedBytes out;
    std::memcpy(out.bytes.data(), data.data(), N);
    return out;
}

struct HashTag;
struct UnitTag;
struct InnerTag;
struct NonceTag;
struct PublicKeyTag;
struct SignatureTag;

using Hash256 = FixedBytes<32, HashTag>;
/// Merkle root identifying one voting-power unit at one stage.
using UnitId = FixedBytes<32, UnitTag>;
/// H(h_n || h_p): the left child of a unit identifier.
using InnerCommitment = FixedBytes<32, InnerTag>;
using Nonce = FixedBytes<32, NonceTag>;
using PublicKey = FixedBytes<32, PublicKeyTag>;
using Signature = FixedBytes<64, SignatureTag>;

/// Appends raw bytes of each argument to `out`.
inline void append(Bytes& out, ByteView v) { out.insert(out.end(), v.begin(), v.end()); }
inline void append(Bytes& out, std::string_view s) { out.insert(out.end(), s.begin(), s.end()); }

}  // namespace liquid

template <std::size_t N, class Tag>
struct std::hash<liquid::FixedBytes<N, Tag>> {
    std::size_t operator()(const liquid::FixedBytes<N, Tag>& v) const noexcept {
        std::size_t h;
        std::memcpy(&h, v.bytes.data(), sizeof h);
        return h;
    }
};

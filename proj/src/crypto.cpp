#include "liquid/crypto.hpp"

#include <sodium.h>

#include <algorithm>
#include <mutex>
#include <sstream>
#include <vector>

#include "liquid/errors.hpp"

namespace liquid {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

std::string to_hex(ByteView data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (Byte b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw EncodingError("hex string has odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw EncodingError("invalid hex character");
        out[i] = static_cast<Byte>((hi << 4) | lo);
    }
    return out;
}

void throw_length_error(std::string_view what, std::size_t expected, std::size_t got) {
    std::ostringstream msg;
    msg << what << ": expected " << expected << " bytes, got " << got;
    throw EncodingError(msg.str());
}

}  // namespace liquid

namespace liquid::crypto {

const Profile Profile::llv1{"llv1", 256};
const Profile Profile::toy{"toy", 8};

const Profile& Profile::by_name(std::string_view name) {
    if (name == "llv1" || name == "LLV1") return llv1;
    if (name == "toy") return toy;
    throw ConfigError("unknown profile: " + std::string(name));
}

void ensure_initialized() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (sodium_init() < 0) throw Error("libsodium initialization failed");
    });
}

void le64(Bytes& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<Byte>(v >> (8 * i)));
}

Hash256 hash(ByteView message) {
    ensure_initialized();
    Hash256 out;
    crypto_hash_sha256(out.data(), message.data(), message.size());
    return out;
}

Hash256 hash(std::string_view message) {
    return hash(ByteView(reinterpret_cast<const Byte*>(message.data()), message.size()));
}

SecretKey::~SecretKey() { sodium_memzero(raw_.data(), raw_.size()); }

PublicKey SecretKey::public_key() const {
    ensure_initialized();
    PublicKey pk;
    crypto_sign_ed25519_sk_to_pk(pk.data(), raw_.data());
    return pk;
}

// ---- mnemonic -------------------------------------------------------------

namespace {
const char* const kWordlist[] = {
#include "wordlist_en.inc"
};
static_assert(std::size(kWordlist) == 2048);

constexpr std::size_t kMnemonicWords = 24;

int word_index(std::string_view w) {
    auto it = std::lower_bound(std::begin(kWordlist), std::end(kWordlist), w,
                               [](const char* a, std::string_view b) { return std::string_view(a) < b; });
    if (it == std::end(kWordlist) || std::string_view(*it) != w) return -1;
    return static_cast<int>(it - std::begin(kWordlist));
}
}  // namespace

Seed::~Seed() { sodium_memzero(entropy_.data(), entropy_.size()); }

std::string Seed::mnemonic() const {
    // 256 entropy bits followed by the first 8 bits of SHA-256(entropy).
    std::array<Byte, 33> bits{};
    std::copy(entropy_.begin(), entropy_.end(), bits.begin());
    bits[32] = hash(entropy_).bytes[0];

    std::string out;
    for (std::size_t w = 0; w < kMnemonicWords; ++w) {
        unsigned idx = 0;
        for (std::size_t b = 0; b < 11; ++b) {
            std::size_t pos = w * 11 + b;
            idx = (idx << 1) | ((bits[pos / 8] >> (7 - pos % 8)) & 1u);
        }
        if (w) out.push_back(' ');
        out += kWordlist[idx];
    }
    return out;
}

Seed Seed::from_mnemonic(std::string_view words) {
    std::vector<std::string> parts;
    std::istringstream in{std::string(words)};
    for (std::string w; in >> w;) parts.push_back(w);
    if (parts.size() != kMnemonicWords)
        throw EncodingError("mnemonic must have 24 words, got " + std::to_string(parts.size()));

    std::array<Byte, 33> bits{};
    for (std::size_t w = 0; w < parts.size(); ++w) {
        int idx = word_index(parts[w]);
        if (idx < 0) throw EncodingError("unknown mnemonic word: " + parts[w]);
        for (std::size_t b = 0; b < 11; ++b) {
            std::size_t pos = w * 11 + b;
            if ((idx >> (10 - b)) & 1) bits[pos / 8] |= static_cast<Byte>(1u << (7 - pos % 8));
        }
    }
    std::array<Byte, 32> entropy;
    std::copy_n(bits.begin(), 32, entropy.begin());
    if (hash(entropy).bytes[0] != bits[32]) throw EncodingError("mnemonic checksum mismatch");
    return Seed(entropy);
}

// ---- keys and signatures --------------------------------------------------

KeyPair derive_keypair(const Seed& seed, std::uint64_t index) {
    ensure_initialized();
    Bytes material;
    append(material, std::string_view("LLV1-KEY"));
    append(material, seed.entropy());
    le64(material, index);
    Hash256 ed_seed = hash(material);
    sodium_memzero(material.data(), material.size());

    std::array<Byte, 64> sk;
    KeyPair kp;
    crypto_sign_seed_keypair(kp.public_key.data(), sk.data(), ed_seed.data());
    sodium_memzero(ed_seed.data(), ed_seed.size);
    kp.secret_key = SecretKey(sk);
    sodium_memzero(sk.data(), sk.size());
    kp.index = index;
    return kp;
}

Signature sign(const SecretKey& sk, ByteView payload) {
    ensure_initialized();
    Signature sig;
    crypto_sign_detached(sig.data(), nullptr, payload.data(), payload.size(), sk.data());
    return sig;
}

bool verify(const PublicKey& pk, ByteView payload, const Signature& sig) {
    ensure_initialized();
    return crypto_sign_verify_detached(sig.data(), payload.data(), payload.size(), pk.data()) == 0;
}

bool verify(ByteView pk, ByteView payload, ByteView sig) {
    return verify(PublicKey::from_span(pk), payload, Signature::from_span(sig));
}

// ---- nonces ---------------------------------------------------------------

Nonce restrict_nonce(const std::array<Byte, 32>& raw, const Profile& profile) {
    Nonce n(raw);
    if (profile.nonce_bits >= 256) return n;
    std::size_t full = profile.nonce_bits / 8;
    unsigned rem = profile.nonce_bits % 8;
    std::size_t keep = full + (rem ? 1 : 0);
    if (rem) n.bytes[full] &= static_cast<Byte>((1u << rem) - 1);
    std::fill(n.bytes.begin() + static_cast<std::ptrdiff_t>(keep), n.bytes.end(), Byte{0});
    return n;
}

NonceSource NonceSource::os(const Profile& profile) {
    ensure_initialized();
    return NonceSource(false, profile, {});
}

NonceSource NonceSource::seeded(std::uint64_t seed, const Profile& profile) {
    Bytes material;
    append(material, std::string_view("LLV1-DRBG"));
    le64(material, seed);
    return NonceSource(true, profile, hash(material).bytes);
}

NonceSource NonceSource::fork(std::string_view label) const {
    if (!deterministic_) return os(*profile_);
    Bytes material(key_.begin(), key_.end());
    append(material, label);
    return NonceSource(true, *profile_, hash(material).bytes);
}

std::array<Byte, 32> NonceSource::next_bytes() {
    std::array<Byte, 32> out;
    if (!deterministic_) {
        randombytes_buf(out.data(), out.size());
        return out;
    }
    Bytes material(key_.begin(), key_.end());
    le64(material, counter_++);
    Hash256 block_key = hash(material);
    randombytes_buf_deterministic(out.data(), out.size(), block_key.data());
    return out;
}

Nonce NonceSource::next() { return restrict_nonce(next_bytes(), *profile_); }

std::uint64_t NonceSource::next_u64() {
    auto b = next_bytes();
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t NonceSource::uniform(std::uint64_t bound) {
    if (bound == 0) throw StateError("uniform bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        std::uint64_t v = next_u64();
        if (v < limit) return v % bound;
    }
}

}  // namespace liquid::crypto

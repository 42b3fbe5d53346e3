#pragma once

// LLV1 profile primitives: SHA-256, Ed25519, 32-byte nonces.

#include <cstdint>
#include <string>
#include <string_view>

#include "liquid/bytes.hpp"

namespace liquid::crypto {

inline constexpr std::string_view kProfileVersion = "LLV1";

/// Nonce entropy profile. `llv1` is the production profile; `toy` keeps only
/// 8 random bits per nonce and exists so brute-force games have a positive
/// control. Toy material must never be written to disk.
struct Profile {
    std::string_view name;
    unsigned nonce_bits;

    bool persistable() const { return nonce_bits == 256; }

    static const Profile llv1;
    static const Profile toy;
    static const Profile& by_name(std::string_view name);

    friend bool operator==(const Profile& a, const Profile& b) { return a.name == b.name; }
};

/// Initializes libsodium once. Every entry point below calls it, so callers
/// rarely need to.
void ensure_initialized();

Hash256 hash(ByteView message);
Hash256 hash(std::string_view message);

/// 64-byte libsodium secret key (seed || public key). Wiped on destruction.
class SecretKey {
public:
    SecretKey() = default;
    explicit SecretKey(const std::array<Byte, 64>& raw) : raw_(raw) {}
    SecretKey(const SecretKey&) = default;
    SecretKey& operator=(const SecretKey&) = default;
    ~SecretKey();

    ByteView view() const { return raw_; }
    const Byte* data() const { return raw_.data(); }
    PublicKey public_key() const;

private:
    std::array<Byte, 64> raw_{};
};

struct KeyPair {
    PublicKey public_key;
    SecretKey secret_key;
    std::uint64_t index = 0;
};

/// 32-byte master seed. Round-trips through a 24-word BIP-39 English mnemonic
/// (256 bits of entropy plus an 8-bit SHA-256 checksum).
class Seed {
public:
    Seed() = default;
    explicit Seed(const std::array<Byte, 32>& entropy) : entropy_(entropy) {}
    ~Seed();
    Seed(const Seed&) = default;
    Seed& operator=(const Seed&) = default;

    static Seed from_mnemonic(std::string_view words);
    std::string mnemonic() const;

    const std::array<Byte, 32>& entropy() const { return entropy_; }

    friend bool operator==(const Seed&, const Seed&) = default;

private:
    std::array<Byte, 32> entropy_{};
};

/// Flat deterministic derivation: the Ed25519 seed for index j is
/// SHA-256("LLV1-KEY" || seed || le64(j)).
KeyPair derive_keypair(const Seed& seed, std::uint64_t index);

Signature sign(const SecretKey& sk, ByteView payload);
bool verify(const PublicKey& pk, ByteView payload, const Signature& sig);
/// Length-checked variant for untrusted input; throws EncodingError when the
/// key is not 32 bytes or the signature not 64.
bool verify(ByteView pk, ByteView payload, ByteView sig);

/// Source of nonces and other random material. Seeded instances are a
/// deterministic ChaCha20 stream (for tests and simulation); the OS instance
/// reads the system CSPRNG. Single owner.
class NonceSource {
public:
    static NonceSource os(const Profile& profile = Profile::llv1);
    static NonceSource seeded(std::uint64_t seed, const Profile& profile = Profile::llv1);
    /// Child stream whose output depends only on this stream's key and `label`.
    NonceSource fork(std::string_view label) const;

    Nonce next();
    std::array<Byte, 32> next_bytes();
    std::uint64_t next_u64();
    /// Uniform in [0, bound).
    std::uint64_t uniform(std::uint64_t bound);

    const Profile& profile() const { return *profile_; }
    bool deterministic() const { return deterministic_; }

private:
    NonceSource(bool deterministic, const Profile& profile, const std::array<Byte, 32>& key)
        : deterministic_(deterministic), profile_(&profile), key_(key) {}

    bool deterministic_;
    const Profile* profile_;
    std::array<Byte, 32> key_;
    std::uint64_t counter_ = 0;
};

/// Masks a full 32-byte draw down to the profile's nonce entropy: the first
/// ceil(bits/8) bytes are kept (top bits of the last one cleared), the rest
/// zeroed.
Nonce restrict_nonce(const std::array<Byte, 32>& raw, const Profile& profile);

void le64(Bytes& out, std::uint64_t v);

}  // namespace liquid::crypto

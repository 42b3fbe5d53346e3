#include "liquid/commitment.hpp"

#include <array>

#include "liquid/crypto.hpp"
#include "liquid/errors.hpp"

namespace liquid::commitment {

namespace {
Hash256 hash_pair(ByteView left, ByteView right) {
    std::array<Byte, 64> buf;
    std::copy(left.begin(), left.end(), buf.begin());
    std::copy(right.begin(), right.end(), buf.begin() + 32);
    return crypto::hash(buf);
}
}  // namespace

InnerCommitment inner_commitment(const Hash256& nonce_hash, const Hash256& pubkey_hash) {
    return InnerCommitment(hash_pair(nonce_hash.view(), pubkey_hash.view()).bytes);
}

UnitId unit_id(const InnerCommitment& inner, const UnitId& prev) {
    return UnitId(hash_pair(inner.view(), prev.view()).bytes);
}

const UnitId& genesis_placeholder() {
    static const UnitId placeholder = [] {
        const Byte zero[1] = {0x00};
        Hash256 h0 = crypto::hash(ByteView(zero));
        return UnitId(hash_pair(h0.view(), h0.view()).bytes);
    }();
    return placeholder;
}

Stage compute_stage(const Nonce& nonce, const PublicKey& public_key, const UnitId& prev) {
    Stage s;
    s.secrets.nonce_hash = crypto::hash(nonce.view());
    s.secrets.pubkey_hash = crypto::hash(public_key.view());
    s.inner = inner_commitment(s.secrets.nonce_hash, s.secrets.pubkey_hash);
    s.id = unit_id(s.inner, prev);
    return s;
}

bool verify_stage(const Hash256& nonce_hash, const PublicKey& public_key, const UnitId& prev,
                  const UnitId& claimed) {
    if (claimed == genesis_placeholder()) return false;
    return unit_id(inner_commitment(nonce_hash, crypto::hash(public_key.view())), prev) == claimed;
}

Hash256 merkle_root(std::span<const Bytes> leaves) {
    if (leaves.empty()) throw StateError("merkle_root needs at least one leaf");
    std::vector<Hash256> level;
    level.reserve(leaves.size());
    for (const auto& leaf : leaves) level.push_back(crypto::hash(leaf));
    do {
        std::vector<Hash256> next;
        for (std::size_t i = 0; i < level.size(); i += 2) {
            const Hash256& right = i + 1 < level.size() ? level[i + 1] : level[i];
            next.push_back(hash_pair(level[i].view(), right.view()));
        }
        level = std::move(next);
    } while (level.size() > 1);
    return level.front();
}

}  // namespace liquid::commitment

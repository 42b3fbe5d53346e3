#pragma once

// Unit identifiers. One stage of a unit's evolution is the three-node tree
//
//        id = H(inner || prev)
//       /                    |
//   inner = H(h_n || h_p)     prev (predecessor id, used directly)
//   /            |
// h_n = H(nonce)  h_p = H(public key)
//
// The first unit of a lineage chains from the constant placeholder
// H(H(0x00) || H(0x00)).

#include <span>

#include "liquid/bytes.hpp"

namespace liquid::commitment {

struct StageSecrets {
    Hash256 nonce_hash;
    Hash256 pubkey_hash;

    friend bool operator==(const StageSecrets&, const StageSecrets&) = default;
};

struct Stage {
    StageSecrets secrets;
    InnerCommitment inner;
    UnitId id;

    friend bool operator==(const Stage&, const Stage&) = default;
};

InnerCommitment inner_commitment(const Hash256& nonce_hash, const Hash256& pubkey_hash);
UnitId unit_id(const InnerCommitment& inner, const UnitId& prev);
const UnitId& genesis_placeholder();

Stage compute_stage(const Nonce& nonce, const PublicKey& public_key, const UnitId& prev);

/// Public check that (h_n, pk, prev) reconstructs `claimed`. Never true for
/// the genesis placeholder, which has no predecessor.
bool verify_stage(const Hash256& nonce_hash, const PublicKey& public_key, const UnitId& prev,
                  const UnitId& claimed);

/// General Merkle root over hashed leaves. An odd node at any level pairs
/// with itself, so a single leaf L gives H(H(L) || H(L)).
Hash256 merkle_root(std::span<const Bytes> leaves);

}  // namespace liquid::commitment

#pragma once

// Public ledger entries and their validation.
//
// Transfers and delegations share one entry shape (Transition); nothing in it
// says which of the two happened. A Reversal lets the original sender of a
// delegation reclaim the live end of the lineage.

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "liquid/bytes.hpp"
#include "liquid/crypto.hpp"
#include "liquid/state.hpp"

namespace liquid {

struct Transition {
    Hash256 nonce_hash;
    PublicKey sender_pk;
    UnitId prev_unit;
    UnitId input_unit;
    UnitId output_unit;
    Signature signature;

    friend bool operator==(const Transition&, const Transition&) = default;
};

struct Reversal {
    Hash256 delegated_nonce_hash;
    Hash256 delegated_pk_hash;
    PublicKey sender_pk;
    UnitId delegated_input;
    UnitId delegated_output;
    UnitId new_output;
    Signature signature;

    friend bool operator==(const Reversal&, const Reversal&) = default;
};

/// Slot-0 issuance of a unit from the placeholder. The owner proves the
/// stage (h_n, pk, placeholder) -> unit and signs it.
struct GenesisRegistration {
    Hash256 nonce_hash;
    PublicKey owner_pk;
    UnitId unit;
    Signature signature;

    friend bool operator==(const GenesisRegistration&, const GenesisRegistration&) = default;
};

using Entry = std::variant<Transition, Reversal>;

/// Wallet-side secrets for one owned stage.
struct OwnershipRecord {
    Nonce nonce;
    std::uint64_t key_index = 0;
    UnitId prev_unit;
    UnitId unit;
    bool spent = false;

    friend bool operator==(const OwnershipRecord&, const OwnershipRecord&) = default;
};

/// Retained by the sender of a delegation so it can be reversed later.
struct DelegationStub {
    Hash256 h_n;
    Hash256 h_p;
    UnitId delegated_input;
    UnitId delegated_output;
    /// Key index the sender signed the delegation with.
    std::uint64_t sender_key_index = 0;

    bool consistent() const;

    friend bool operator==(const DelegationStub&, const DelegationStub&) = default;
};

enum class Rejection {
    UnknownInput,
    SpentInput,
    StageMismatch,
    BadSignature,
    DuplicateOutput,
    OptionKeySpend,
    NoLiveDescendant,
    NotOriginalSender,
    StateFrozen,
};

std::string_view to_string(Rejection r);
Rejection rejection_from_string(std::string_view s);

struct Verdict {
    std::optional<Rejection> reason;

    bool accepted() const { return !reason.has_value(); }
    static Verdict accept() { return {}; }
    static Verdict reject(Rejection r) { return {r}; }

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Domain-tagged canonical encoding of every field but the signature, in
/// tuple order, as raw fixed-width bytes.
Bytes signing_payload(const Transition& t);
Bytes signing_payload(const Reversal& r);
Bytes signing_payload(const GenesisRegistration& g);

void sign_entry(Transition& t, const crypto::SecretKey& sk);
void sign_entry(Reversal& r, const crypto::SecretKey& sk);
void sign_entry(GenesisRegistration& g, const crypto::SecretKey& sk);

/// Throws ConstructionError if the record's unit does not recompute from its
/// nonce and prev under `sk`'s public key.
Transition build_transition(const OwnershipRecord& record, const UnitId& output_unit,
                            const crypto::SecretKey& sk);

/// Throws ConstructionError if the stub fails its own commitment check.
Reversal build_reversal(const DelegationStub& stub, const UnitId& new_output, const crypto::SecretKey& sk);

/// Checks, in order: stage reconstruction (including that prev is the
/// recorded parent), liveness, output freshness, signature, option-key
/// discard rule, frozen state. First failure wins.
Verdict validate_transition(const Transition& t, const State& state, const LineageIndex& index,
                            const OptionRegistry& options);

/// Checks, in order: commitment of the revealed hashes, that the edge was an
/// earlier Transition signed by the same key, live descendant, output
/// freshness, signature, frozen state.
Verdict validate_reversal(const Reversal& r, const State& state, const LineageIndex& index);

Verdict validate_genesis(const GenesisRegistration& g, const LineageIndex& index);

}  // namespace liquid

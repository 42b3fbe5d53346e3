#pragma once

// Per-participant secrets and the off-ledger peer protocol.
//
//   delegation:  receiver --DelegationOffer{h_n,h_p}--> sender
//                sender computes the output and keeps a stub for reversal
//   transfer:    sender --InputAnnounce{v_t}--> receiver
//                receiver --TransferOffer{v_t+1}--> sender
//                the sender never sees h_n/h_p, so it cannot reverse
//
// Every stage uses a fresh key index and a fresh nonce. Losing the wallet
// file loses the units: nonces cannot be recovered from the seed.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liquid/codec.hpp"
#include "liquid/crypto.hpp"
#include "liquid/entries.hpp"
#include "liquid/ledger.hpp"

namespace liquid::wallet {

struct DelegationOffer {
    Hash256 h_n;
    Hash256 h_p;
    friend bool operator==(const DelegationOffer&, const DelegationOffer&) = default;
};

struct TransferOffer {
    UnitId output_unit;
    friend bool operator==(const TransferOffer&, const TransferOffer&) = default;
};

struct InputAnnounce {
    UnitId input_unit;
    friend bool operator==(const InputAnnounce&, const InputAnnounce&) = default;
};

/// Secrets behind an offer (or a registration/reclaim) that has not yet
/// shown up in the live set. `prev_unit` is unknown for delegation offers.
struct PendingOffer {
    Nonce nonce;
    std::uint64_t key_index = 0;
    std::optional<UnitId> prev_unit;
    friend bool operator==(const PendingOffer&, const PendingOffer&) = default;
};

struct IncomingScan {
    std::vector<OwnershipRecord> received;
    /// Transfer offers whose unit went live under a different predecessor
    /// than the one announced; the receiver cannot spend these.
    std::vector<UnitId> unclaimable;
};

class Wallet {
public:
    /// Fresh random seed drawn from `source`.
    static Wallet create(crypto::NonceSource source);
    static Wallet from_seed(const crypto::Seed& seed, crypto::NonceSource source);

    const crypto::Seed& seed() const { return seed_; }
    const crypto::Profile& profile() const { return source_.profile(); }
    crypto::KeyPair key(std::uint64_t index) const { return crypto::derive_keypair(seed_, index); }
    /// Public keys of every index handed out so far.
    std::vector<PublicKey> public_keys() const;

    GenesisRegistration make_registration();
    DelegationOffer make_delegation_offer();
    TransferOffer make_transfer_offer(const InputAnnounce& announce);

    /// Throws StateError for unknown or spent units.
    InputAnnounce announce(const UnitId& unit) const;
    std::pair<Transition, DelegationStub> accept_delegation_offer(const UnitId& unit, const DelegationOffer& offer);
    Transition accept_transfer_offer(const UnitId& unit, const TransferOffer& offer);

    /// Reclaims the live end of a delegated lineage into a fresh stage owned
    /// by this wallet. Throws StateError when the lineage has no reclaimable
    /// descendant.
    Reversal reverse(const DelegationStub& stub, const Ledger& ledger);

    /// Promotes pending offers whose unit is now live and marks records whose
    /// unit left the live set as spent. Idempotent.
    IncomingScan detect_incoming(const State& state, const LineageIndex& index);
    IncomingScan detect_incoming(const Ledger& ledger) { return detect_incoming(ledger.state(), ledger.index()); }

    std::vector<OwnershipRecord> spendable_units(const State& state) const;

    const std::vector<OwnershipRecord>& records() const { return records_; }
    const std::vector<DelegationStub>& stubs() const { return stubs_; }
    const std::vector<PendingOffer>& pending() const { return pending_; }
    std::uint64_t next_key_index() const { return next_key_index_; }
    const DelegationStub* find_stub(const UnitId& delegated_output) const;

    /// Encrypts with XChaCha20-Poly1305 under an Argon2id key. Refuses toy
    /// profile wallets.
    void persist(const std::filesystem::path& path, std::string_view passphrase) const;
    static Wallet restore(const std::filesystem::path& path, std::string_view passphrase,
                          crypto::NonceSource source = crypto::NonceSource::os());

    std::string to_plaintext_json() const;
    static Wallet from_plaintext_json(std::string_view text, crypto::NonceSource source);

    friend bool operator==(const Wallet& a, const Wallet& b) {
        return a.seed_ == b.seed_ && a.next_key_index_ == b.next_key_index_ && a.records_ == b.records_ &&
               a.stubs_ == b.stubs_ && a.pending_ == b.pending_;
    }

private:
    Wallet(const crypto::Seed& seed, crypto::NonceSource source) : seed_(seed), source_(std::move(source)) {}

    std::pair<PendingOffer, crypto::KeyPair> fresh_stage(std::optional<UnitId> prev);
    OwnershipRecord& owned(const UnitId& unit);
    const OwnershipRecord& owned(const UnitId& unit) const;

    crypto::Seed seed_;
    crypto::NonceSource source_;
    std::uint64_t next_key_index_ = 0;
    std::vector<OwnershipRecord> records_;
    std::vector<DelegationStub> stubs_;
    std::vector<PendingOffer> pending_;
};

// Wire messages: {"kind":"delegation_offer","h_n","h_p"},
// {"kind":"transfer_offer","output_unit"}, {"kind":"input_announce","input_unit"}.
codec::Json to_json(const DelegationOffer& m);
codec::Json to_json(const TransferOffer& m);
codec::Json to_json(const InputAnnounce& m);
DelegationOffer delegation_offer_from_json(const codec::Json& j);
TransferOffer transfer_offer_from_json(const codec::Json& j);
InputAnnounce input_announce_from_json(const codec::Json& j);

}  // namespace liquid::wallet

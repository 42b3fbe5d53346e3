#pragma once

// Voting on top of the unit ledger. A ballot option is a public key; a vote
// is an ordinary transfer whose output stage is keyed by the option. Options
// cannot spend what they receive (validators discard such entries). After
// finalization each option reveals the plaintext nonces of its units and any
// observer recomputes the tally from public data.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "liquid/codec.hpp"
#include "liquid/crypto.hpp"
#include "liquid/ledger.hpp"
#include "liquid/wallet.hpp"

namespace liquid::tally {

struct VoteClaim {
    UnitId unit;
    Nonce nonce;
    UnitId prev_unit;
    friend bool operator==(const VoteClaim&, const VoteClaim&) = default;
};

struct VoteReveal {
    std::string option;
    std::vector<VoteClaim> claims;
    friend bool operator==(const VoteReveal&, const VoteReveal&) = default;
};

/// Automated transfer-data endpoint for one ballot option. Unlike a voter
/// wallet it signs nothing and uses a single public key for every vote.
class OptionEntity {
public:
    static OptionEntity create(std::string label, crypto::NonceSource source);
    static OptionEntity from_seed(std::string label, const crypto::Seed& seed, crypto::NonceSource source);

    const std::string& label() const { return label_; }
    const PublicKey& public_key() const { return public_key_; }

    wallet::TransferOffer request_vote_offer(const wallet::InputAnnounce& announce);

    /// Units this entity issued offers for that appear on the ledger.
    std::set<UnitId> declare(const LineageIndex& index) const;
    /// Plaintext nonces for every declared unit.
    VoteReveal reveal(const LineageIndex& index) const;

    const std::vector<VoteClaim>& claims() const { return claims_; }

    codec::Json to_json() const;
    static OptionEntity from_json(const codec::Json& j, crypto::NonceSource source);

private:
    OptionEntity(std::string label, const crypto::Seed& seed, crypto::NonceSource source);

    std::string label_;
    crypto::Seed seed_;
    PublicKey public_key_;
    crypto::NonceSource source_;
    std::vector<VoteClaim> claims_;
};

struct PreliminaryTally {
    std::map<std::string, std::size_t> counts;
    /// Declared units that are not live.
    std::vector<UnitId> excluded;
    /// Live units declared by more than one option (counted for each).
    std::vector<UnitId> overlapping;
};

PreliminaryTally preliminary_tally(const State& state, const std::map<std::string, std::set<UnitId>>& declared);

struct InvalidClaim {
    std::string option;
    UnitId unit;
    std::string reason;
    friend bool operator==(const InvalidClaim&, const InvalidClaim&) = default;
};

struct TallyResult {
    std::map<std::string, std::size_t> counts;
    std::size_t unallocated = 0;
    /// Live units claimed by two or more options where no claim verifies.
    std::set<UnitId> disputed;
    /// Units with a verified claim and at least one competing claim.
    std::set<UnitId> contested;
    std::vector<InvalidClaim> invalid;

    std::size_t verified_total() const;
    friend bool operator==(const TallyResult&, const TallyResult&) = default;
};

/// Pure function of public data. A claim counts iff its unit is live, its
/// prev is the unit's recorded parent, and (H(nonce), option key, prev)
/// reconstructs the unit. Throws StateError unless the ledger is finalized.
TallyResult verify_tally(const Ledger& ledger, const std::vector<VoteReveal>& reveals, const OptionRegistry& registry);

/// Freezes a state snapshot. Throws StateError if it is already frozen.
State finalize(State state);

codec::Json to_json(const VoteReveal& reveal);
VoteReveal reveal_from_json(const codec::Json& j);
codec::Json to_json(const TallyResult& result);
codec::Json to_json(const PreliminaryTally& result);

}  // namespace liquid::tally

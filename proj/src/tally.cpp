#include "liquid/tally.hpp"

#include <stdexcept>

#include "liquid/commitment.hpp"
#include "liquid/errors.hpp"

namespace liquid::tally {

OptionEntity::OptionEntity(std::string label, const crypto::Seed& seed, crypto::NonceSource source)
    : label_(std::move(label)),
      seed_(seed),
      public_key_(crypto::derive_keypair(seed, 0).public_key),
      source_(std::move(source)) {}

OptionEntity OptionEntity::create(std::string label, crypto::NonceSource source) {
    crypto::Seed seed(source.next_bytes());
    return OptionEntity(std::move(label), seed, std::move(source));
}

OptionEntity OptionEntity::from_seed(std::string label, const crypto::Seed& seed, crypto::NonceSource source) {
    return OptionEntity(std::move(label), seed, std::move(source));
}

wallet::TransferOffer OptionEntity::request_vote_offer(const wallet::InputAnnounce& announce) {
    Nonce nonce = source_.next();
    UnitId out = commitment::compute_stage(nonce, public_key_, announce.input_unit).id;
    claims_.push_back({out, nonce, announce.input_unit});
    return {out};
}

std::set<UnitId> OptionEntity::declare(const LineageIndex& index) const {
    std::set<UnitId> out;
    for (const auto& c : claims_)
        if (index.contains(c.unit)) out.insert(c.unit);
    return out;
}

VoteReveal OptionEntity::reveal(const LineageIndex& index) const {
    VoteReveal r{label_, {}};
    for (const auto& c : claims_)
        if (index.contains(c.unit)) r.claims.push_back(c);
    return r;
}

codec::Json OptionEntity::to_json() const {
    codec::Json claims = codec::Json::array();
    for (const auto& c : claims_)
        claims.push_back({{"unit", c.unit.hex()}, {"nonce", c.nonce.hex()}, {"prev", c.prev_unit.hex()}});
    return {{"kind", "option_entity"},
            {"label", label_},
            {"seed", to_hex(seed_.entropy())},
            {"public_key", public_key_.hex()},
            {"claims", claims}};
}

OptionEntity OptionEntity::from_json(const codec::Json& j, crypto::NonceSource source) {
    try {
        auto seed_bytes = from_hex(j.at("seed").get<std::string>());
        if (seed_bytes.size() != 32) throw EncodingError("option seed must be 32 bytes");
        std::array<Byte, 32> entropy;
        std::copy(seed_bytes.begin(), seed_bytes.end(), entropy.begin());
        OptionEntity e(j.at("label").get<std::string>(), crypto::Seed(entropy), std::move(source));
        for (const auto& c : j.at("claims"))
            e.claims_.push_back({codec::hex_field<UnitId>(c, "unit"), codec::hex_field<Nonce>(c, "nonce"),
                                 codec::hex_field<UnitId>(c, "prev")});
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("corrupt option entity: ") + ex.what());
    }
}

PreliminaryTally preliminary_tally(const State& state, const std::map<std::string, std::set<UnitId>>& declared) {
    PreliminaryTally out;
    std::map<UnitId, std::size_t> claimants;
    for (const auto& [label, units] : declared) {
        auto& count = out.counts[label];
        for (const auto& u : units) {
            if (!state.is_live(u)) {
                out.excluded.push_back(u);
                continue;
            }
            ++count;
            ++claimants[u];
        }
    }
    for (const auto& [u, n] : claimants)
        if (n > 1) out.overlapping.push_back(u);
    return out;
}

std::size_t TallyResult::verified_total() const {
    std::size_t n = 0;
    for (const auto& [label, c] : counts) n += c;
    return n;
}

TallyResult verify_tally(const Ledger& ledger, const std::vector<VoteReveal>& reveals, const OptionRegistry& registry) {
    const State& state = ledger.state();
    const LineageIndex& index = ledger.index();
    if (!state.frozen) throw StateError("tally requires a finalized ledger");

    TallyResult result;
    for (const auto& [label, pk] : registry.options()) result.counts[label] = 0;

    std::map<UnitId, std::string> winner;
    std::map<UnitId, std::set<std::string>> claimants;

    for (const auto& reveal : reveals) {
        auto pk = registry.key_of(reveal.option);
        for (const auto& claim : reveal.claims) {
            auto reject = [&](std::string why) { result.invalid.push_back({reveal.option, claim.unit, std::move(why)}); };
            if (!pk) {
                reject("unknown option");
                continue;
            }
            if (!state.is_live(claim.unit)) {
                reject("unit not live");
                continue;
            }
            claimants[claim.unit].insert(reveal.option);
            if (index.parent_of(claim.unit) != claim.prev_unit) {
                reject("prev is not the unit's parent");
                continue;
            }
            if (!commitment::verify_stage(crypto::hash(claim.nonce.view()), *pk, claim.prev_unit, claim.unit)) {
                reject("stage does not verify");
                continue;
            }
            auto [it, inserted] = winner.emplace(claim.unit, reveal.option);
            if (!inserted) {
                if (it->second != reveal.option)
                    throw std::logic_error("two options verified the same unit " + claim.unit.hex());
                reject("duplicate claim");
                continue;
            }
            ++result.counts[reveal.option];
        }
    }

    for (const auto& [unit, who] : claimants) {
        if (winner.contains(unit)) {
            if (who.size() > 1) result.contested.insert(unit);
        } else if (who.size() > 1) {
            result.disputed.insert(unit);
        }
    }
    result.unallocated = state.live.size() - winner.size() - result.disputed.size();
    return result;
}

State finalize(State state) {
    if (state.frozen) throw StateError("state already finalized");
    state.frozen = true;
    return state;
}

codec::Json to_json(const VoteReveal& reveal) {
    codec::Json claims = codec::Json::array();
    for (const auto& c : reveal.claims)
        claims.push_back({{"unit", c.unit.hex()}, {"nonce", c.nonce.hex()}, {"prev", c.prev_unit.hex()}});
    return {{"option", reveal.option}, {"claims", claims}};
}

VoteReveal reveal_from_json(const codec::Json& j) {
    try {
        VoteReveal r{j.at("option").get<std::string>(), {}};
        for (const auto& c : j.at("claims"))
            r.claims.push_back({codec::hex_field<UnitId>(c, "unit"), codec::hex_field<Nonce>(c, "nonce"),
                                codec::hex_field<UnitId>(c, "prev")});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw EncodingError(std::string("malformed reveal: ") + e.what());
    }
}

codec::Json to_json(const TallyResult& result) {
    codec::Json counts = codec::Json::object();
    for (const auto& [label, n] : result.counts) counts[label] = n;
    codec::Json disputed = codec::Json::array();
    for (const auto& u : result.disputed) disputed.push_back(u.hex());
    codec::Json contested = codec::Json::array();
    for (const auto& u : result.contested) contested.push_back(u.hex());
    codec::Json invalid = codec::Json::array();
    for (const auto& c : result.invalid)
        invalid.push_back({{"option", c.option}, {"unit", c.unit.hex()}, {"reason", c.reason}});
    return {{"counts", counts},
            {"verified", result.verified_total()},
            {"unallocated", result.unallocated},
            {"disputed", disputed},
            {"contested", contested},
            {"invalid", invalid}};
}

codec::Json to_json(const PreliminaryTally& result) {
    codec::Json counts = codec::Json::object();
    for (const auto& [label, n] : result.counts) counts[label] = n;
    codec::Json excluded = codec::Json::array();
    for (const auto& u : result.excluded) excluded.push_back(u.hex());
    codec::Json overlapping = codec::Json::array();
    for (const auto& u : result.overlapping) overlapping.push_back(u.hex());
    return {{"counts", counts}, {"excluded", excluded}, {"overlapping", overlapping}};
}

}  // namespace liquid::tally

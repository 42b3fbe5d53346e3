#include "liquid/entries.hpp"

#include <array>
#include <string>

#include "liquid/commitment.hpp"
#include "liquid/errors.hpp"

namespace liquid {

namespace {
constexpr std::string_view kTransitionTag = "LLV1-TRANSITION";
constexpr std::string_view kReversalTag = "LLV1-REVERSAL";
constexpr std::string_view kGenesisTag = "LLV1-GENESIS";

constexpr std::array<std::string_view, 9> kRejectionNames = {
    "UnknownInput",    "SpentInput",     "StageMismatch",    "BadSignature", "DuplicateOutput",
    "OptionKeySpend",  "NoLiveDescendant", "NotOriginalSender", "StateFrozen",
};

Verdict input_liveness(const UnitId& input, const State& state, const LineageIndex& index) {
    if (state.is_live(input)) return Verdict::accept();
    return Verdict::reject(index.contains(input) ? Rejection::SpentInput : Rejection::UnknownInput);
}
}  // namespace

std::string_view to_string(Rejection r) { return kRejectionNames[static_cast<std::size_t>(r)]; }

Rejection rejection_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kRejectionNames.size(); ++i)
        if (kRejectionNames[i] == s) return static_cast<Rejection>(i);
    throw EncodingError("unknown rejection reason: " + std::string(s));
}

bool DelegationStub::consistent() const {
    return commitment::unit_id(commitment::inner_commitment(h_n, h_p), delegated_input) == delegated_output;
}

Bytes signing_payload(const Transition& t) {
    Bytes out;
    out.reserve(kTransitionTag.size() + 5 * 32);
    append(out, kTransitionTag);
    append(out, t.nonce_hash.view());
    append(out, t.sender_pk.view());
    append(out, t.prev_unit.view());
    append(out, t.input_unit.view());
    append(out, t.output_unit.view());
    return out;
}

Bytes signing_payload(const Reversal& r) {
    Bytes out;
    out.reserve(kReversalTag.size() + 6 * 32);
    append(out, kReversalTag);
    append(out, r.delegated_nonce_hash.view());
    append(out, r.delegated_pk_hash.view());
    append(out, r.sender_pk.view());
    append(out, r.delegated_input.view());
    append(out, r.delegated_output.view());
    append(out, r.new_output.view());
    return out;
}

Bytes signing_payload(const GenesisRegistration& g) {
    Bytes out;
    append(out, kGenesisTag);
    append(out, g.nonce_hash.view());
    append(out, g.owner_pk.view());
    append(out, g.unit.view());
    return out;
}

void sign_entry(Transition& t, const crypto::SecretKey& sk) { t.signature = crypto::sign(sk, signing_payload(t)); }
void sign_entry(Reversal& r, const crypto::SecretKey& sk) { r.signature = crypto::sign(sk, signing_payload(r)); }
void sign_entry(GenesisRegistration& g, const crypto::SecretKey& sk) {
    g.signature = crypto::sign(sk, signing_payload(g));
}

Transition build_transition(const OwnershipRecord& record, const UnitId& output_unit,
                            const crypto::SecretKey& sk) {
    Transition t;
    t.nonce_hash = crypto::hash(record.nonce.view());
    t.sender_pk = sk.public_key();
    t.prev_unit = record.prev_unit;
    t.input_unit = record.unit;
    t.output_unit = output_unit;
    if (!commitment::verify_stage(t.nonce_hash, t.sender_pk, t.prev_unit, t.input_unit))
        throw ConstructionError("ownership record does not reconstruct unit " + record.unit.hex());
    sign_entry(t, sk);
    return t;
}

Reversal build_reversal(const DelegationStub& stub, const UnitId& new_output, const crypto::SecretKey& sk) {
    if (!stub.consistent())
        throw ConstructionError("delegation stub does not reconstruct " + stub.delegated_output.hex());
    Reversal r;
    r.delegated_nonce_hash = stub.h_n;
    r.delegated_pk_hash = stub.h_p;
    r.sender_pk = sk.public_key();
    r.delegated_input = stub.delegated_input;
    r.delegated_output = stub.delegated_output;
    r.new_output = new_output;
    sign_entry(r, sk);
    return r;
}

Verdict validate_transition(const Transition& t, const State& state, const LineageIndex& index,
                            const OptionRegistry& options) {
    if (!commitment::verify_stage(t.nonce_hash, t.sender_pk, t.prev_unit, t.input_unit))
        return Verdict::reject(Rejection::StageMismatch);
    if (auto p = index.parent_of(t.input_unit); p && *p != t.prev_unit)
        return Verdict::reject(Rejection::StageMismatch);
    if (auto v = input_liveness(t.input_unit, state, index); !v.accepted()) return v;
    if (index.contains(t.output_unit) || t.output_unit == t.input_unit)
        return Verdict::reject(Rejection::DuplicateOutput);
    if (!crypto::verify(t.sender_pk, signing_payload(t), t.signature))
        return Verdict::reject(Rejection::BadSignature);
    if (options.is_option_key(t.sender_pk)) return Verdict::reject(Rejection::OptionKeySpend);
    if (state.frozen) return Verdict::reject(Rejection::StateFrozen);
    return Verdict::accept();
}

Verdict validate_reversal(const Reversal& r, const State& state, const LineageIndex& index) {
    if (commitment::unit_id(commitment::inner_commitment(r.delegated_nonce_hash, r.delegated_pk_hash),
                            r.delegated_input) != r.delegated_output)
        return Verdict::reject(Rejection::StageMismatch);
    if (!index.contains(r.delegated_input) || !index.contains(r.delegated_output))
        return Verdict::reject(Rejection::UnknownInput);
    auto parent = index.parent_of(r.delegated_output);
    auto signer = index.consumed_by_pk.find(r.delegated_input);
    if (!parent || *parent != r.delegated_input || !index.is_transition_edge(r.delegated_output) ||
        signer == index.consumed_by_pk.end() || signer->second != r.sender_pk)
        return Verdict::reject(Rejection::NotOriginalSender);
    auto descendant = live_descendant(index, state, r.delegated_output);
    if (!descendant) return Verdict::reject(Rejection::NoLiveDescendant);
    if (index.contains(r.new_output)) return Verdict::reject(Rejection::DuplicateOutput);
    if (!crypto::verify(r.sender_pk, signing_payload(r), r.signature))
        return Verdict::reject(Rejection::BadSignature);
    if (state.frozen) return Verdict::reject(Rejection::StateFrozen);
    return Verdict::accept();
}

Verdict validate_genesis(const GenesisRegistration& g, const LineageIndex& index) {
    if (!commitment::verify_stage(g.nonce_hash, g.owner_pk, commitment::genesis_placeholder(), g.unit))
        return Verdict::reject(Rejection::StageMismatch);
    if (index.contains(g.unit)) return Verdict::reject(Rejection::DuplicateOutput);
    if (!crypto::verify(g.owner_pk, signing_payload(g), g.signature))
        return Verdict::reject(Rejection::BadSignature);
    return Verdict::accept();
}

}  // namespace liquid

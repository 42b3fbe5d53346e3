#include "liquid/codec.hpp"

#include <string>

#include "liquid/errors.hpp"

namespace liquid::codec {

Json to_json(const Transition& t) {
    return Json{{"type", "transition"},
                {"nonce_hash", t.nonce_hash.hex()},
                {"sender_pk", t.sender_pk.hex()},
                {"prev_unit", t.prev_unit.hex()},
                {"input_unit", t.input_unit.hex()},
                {"output_unit", t.output_unit.hex()},
                {"signature", t.signature.hex()}};
}

Json to_json(const Reversal& r) {
    return Json{{"type", "reversal"},
                {"delegated_nonce_hash", r.delegated_nonce_hash.hex()},
                {"delegated_pk_hash", r.delegated_pk_hash.hex()},
                {"sender_pk", r.sender_pk.hex()},
                {"delegated_input", r.delegated_input.hex()},
                {"delegated_output", r.delegated_output.hex()},
                {"new_output", r.new_output.hex()},
                {"signature", r.signature.hex()}};
}

Json to_json(const GenesisRegistration& g) {
    return Json{{"type", "genesis"},
                {"nonce_hash", g.nonce_hash.hex()},
                {"owner_pk", g.owner_pk.hex()},
                {"unit", g.unit.hex()},
                {"signature", g.signature.hex()}};
}

Json to_json(const Entry& e) {
    return std::visit([](const auto& x) { return to_json(x); }, e);
}

Json to_json(const Verdict& v) {
    Json j{{"accepted", v.accepted()}};
    if (v.reason) j["reason"] = std::string(to_string(*v.reason));
    return j;
}

Json to_json(const OwnershipRecord& r) {
    return Json{{"nonce", r.nonce.hex()},
                {"key_index", r.key_index},
                {"prev_unit", r.prev_unit.hex()},
                {"unit", r.unit.hex()},
                {"spent", r.spent}};
}

Json to_json(const DelegationStub& s) {
    return Json{{"h_n", s.h_n.hex()},
                {"h_p", s.h_p.hex()},
                {"delegated_input", s.delegated_input.hex()},
                {"delegated_output", s.delegated_output.hex()},
                {"sender_key_index", s.sender_key_index}};
}

Json to_json(const OptionRegistry& registry) {
    Json options = Json::object();
    for (const auto& [label, pk] : registry.options()) options[label] = pk.hex();
    return Json{{"version", "LLV1"}, {"options", options}};
}

Transition transition_from_json(const Json& j) {
    Transition t;
    t.nonce_hash = hex_field<Hash256>(j, "nonce_hash");
    t.sender_pk = hex_field<PublicKey>(j, "sender_pk");
    t.prev_unit = hex_field<UnitId>(j, "prev_unit");
    t.input_unit = hex_field<UnitId>(j, "input_unit");
    t.output_unit = hex_field<UnitId>(j, "output_unit");
    t.signature = hex_field<Signature>(j, "signature");
    return t;
}

Reversal reversal_from_json(const Json& j) {
    Reversal r;
    r.delegated_nonce_hash = hex_field<Hash256>(j, "delegated_nonce_hash");
    r.delegated_pk_hash = hex_field<Hash256>(j, "delegated_pk_hash");
    r.sender_pk = hex_field<PublicKey>(j, "sender_pk");
    r.delegated_input = hex_field<UnitId>(j, "delegated_input");
    r.delegated_output = hex_field<UnitId>(j, "delegated_output");
    r.new_output = hex_field<UnitId>(j, "new_output");
    r.signature = hex_field<Signature>(j, "signature");
    return r;
}

GenesisRegistration genesis_from_json(const Json& j) {
    GenesisRegistration g;
    g.nonce_hash = hex_field<Hash256>(j, "nonce_hash");
    g.owner_pk = hex_field<PublicKey>(j, "owner_pk");
    g.unit = hex_field<UnitId>(j, "unit");
    g.signature = hex_field<Signature>(j, "signature");
    return g;
}

Entry entry_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("type")) throw EncodingError("entry without type");
    const auto type = j.at("type").get<std::string>();
    if (type == "transition") return transition_from_json(j);
    if (type == "reversal") return reversal_from_json(j);
    throw EncodingError("unknown entry type: " + type);
}

Verdict verdict_from_json(const Json& j) {
    if (j.value("accepted", false)) return Verdict::accept();
    return Verdict::reject(rejection_from_string(j.at("reason").get<std::string>()));
}

OwnershipRecord record_from_json(const Json& j) {
    OwnershipRecord r;
    r.nonce = hex_field<Nonce>(j, "nonce");
    r.key_index = j.at("key_index").get<std::uint64_t>();
    r.prev_unit = hex_field<UnitId>(j, "prev_unit");
    r.unit = hex_field<UnitId>(j, "unit");
    r.spent = j.value("spent", false);
    return r;
}

DelegationStub stub_from_json(const Json& j) {
    DelegationStub s;
    s.h_n = hex_field<Hash256>(j, "h_n");
    s.h_p = hex_field<Hash256>(j, "h_p");
    s.delegated_input = hex_field<UnitId>(j, "delegated_input");
    s.delegated_output = hex_field<UnitId>(j, "delegated_output");
    s.sender_key_index = j.value("sender_key_index", std::uint64_t{0});
    return s;
}

OptionRegistry registry_from_json(const Json& j) {
    OptionRegistry registry;
    if (!j.contains("options") || !j.at("options").is_object()) throw EncodingError("registry without options");
    for (const auto& [label, pk] : j.at("options").items())
        registry.add(label, PublicKey::from_hex(pk.get<std::string>()));
    return registry;
}

Json parse(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw EncodingError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace liquid::codec

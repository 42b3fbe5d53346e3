#pragma once

// JSON renderings shared by the ledger file, wire messages, reveal files and
// reports. All binary fields are lowercase hex without prefix.

#include <json.hpp>

#include "liquid/entries.hpp"
#include "liquid/errors.hpp"
#include "liquid/state.hpp"

namespace liquid::codec {

using Json = nlohmann::ordered_json;

template <class T>
T hex_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw EncodingError(std::string("missing hex field: ") + key);
    return T::from_hex(j.at(key).get<std::string>());
}

Json to_json(const Transition& t);
Json to_json(const Reversal& r);
Json to_json(const GenesisRegistration& g);
Json to_json(const Entry& e);
Json to_json(const Verdict& v);
Json to_json(const OwnershipRecord& r);
Json to_json(const DelegationStub& s);
Json to_json(const OptionRegistry& registry);

Transition transition_from_json(const Json& j);
Reversal reversal_from_json(const Json& j);
GenesisRegistration genesis_from_json(const Json& j);
/// Dispatches on the "type" field.
Entry entry_from_json(const Json& j);
Verdict verdict_from_json(const Json& j);
OwnershipRecord record_from_json(const Json& j);
DelegationStub stub_from_json(const Json& j);
OptionRegistry registry_from_json(const Json& j);

/// Parses text, mapping parse failures to EncodingError.
Json parse(std::string_view text);

}  // namespace liquid::codec

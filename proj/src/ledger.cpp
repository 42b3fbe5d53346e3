#include "liquid/ledger.hpp"

#include <fstream>
#include <sstream>

#include "liquid/codec.hpp"
#include "liquid/commitment.hpp"
#include "liquid/crypto.hpp"
#include "liquid/errors.hpp"

namespace liquid {

Ledger Ledger::genesis(const std::vector<GenesisRegistration>& registrations, OptionRegistry options) {
    Ledger ledger;
    ledger.options_ = std::move(options);
    ledger.index_.all_ids.insert(commitment::genesis_placeholder());
    ledger.index_.stage_depth[commitment::genesis_placeholder()] = 0;

    Slot slot0;
    for (std::size_t i = 0; i < registrations.size(); ++i) {
        const auto& g = registrations[i];
        Verdict v = validate_genesis(g, ledger.index_);
        if (!v.accepted())
            throw ConstructionError("genesis registration " + std::to_string(i) + " rejected: " +
                                    std::string(to_string(*v.reason)));
        ledger.apply_genesis(g);
        slot0.registrations.push_back(g);
    }
    ledger.genesis_count_ = registrations.size();
    ledger.slots_.push_back(std::move(slot0));
    return ledger;
}

std::size_t Ledger::entry_count() const {
    std::size_t n = 0;
    for (const auto& s : slots_) n += s.entries.size();
    return n;
}

Verdict Ledger::check(const Entry& entry) const {
    if (state_.frozen) return Verdict::reject(Rejection::StateFrozen);
    return std::visit(
        [&](const auto& e) -> Verdict {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Transition>)
                return validate_transition(e, state_, index_, options_);
            else
                return validate_reversal(e, state_, index_);
        },
        entry);
}

std::vector<Verdict> Ledger::append_slot(const std::vector<Entry>& entries) {
    Slot slot;
    slot.index = slots_.size();
    std::vector<Verdict> verdicts;
    verdicts.reserve(entries.size());
    for (const auto& e : entries) {
        Verdict v = check(e);
        if (v.accepted()) {
            apply(e);
            slot.entries.push_back(e);
        }
        verdicts.push_back(v);
    }
    slots_.push_back(std::move(slot));
    return verdicts;
}

void Ledger::finalize() {
    if (state_.frozen) throw StateError("ledger already finalized");
    state_.frozen = true;
    Slot slot;
    slot.index = slots_.size();
    slot.finalized = true;
    slots_.push_back(std::move(slot));
}

void Ledger::apply_genesis(const GenesisRegistration& g) {
    const UnitId& root = commitment::genesis_placeholder();
    index_.all_ids.insert(g.unit);
    index_.parent[g.unit] = root;
    index_.stage_depth[g.unit] = 1;
    state_.live.insert(g.unit);
}

void Ledger::apply(const Entry& entry) {
    UnitId consumed;
    UnitId produced;
    if (const auto* t = std::get_if<Transition>(&entry)) {
        consumed = t->input_unit;
        produced = t->output_unit;
        index_.consumed_by_pk[consumed] = t->sender_pk;
    } else {
        const auto& r = std::get<Reversal>(entry);
        auto d = live_descendant(index_, state_, r.delegated_output);
        if (!d) throw StateError("reversal applied without a live descendant");
        consumed = *d;
        produced = r.new_output;
        index_.reversal_of[produced] = r.delegated_output;
    }
    state_.live.erase(consumed);
    state_.live.insert(produced);
    index_.all_ids.insert(produced);
    index_.parent[produced] = consumed;
    index_.child[consumed] = produced;
    index_.stage_depth[produced] = index_.depth(consumed) + 1;
}

Ledger Ledger::from_slots(std::size_t genesis_count, OptionRegistry options, const std::vector<Slot>& slots) {
    if (slots.empty()) throw ReplayError(0, 0, "ledger has no genesis slot");
    for (std::size_t s = 0; s < slots.size(); ++s) {
        if (slots[s].index != s) throw ReplayError(s, 0, "slot index out of order");
        if (s > 0 && !slots[s].registrations.empty()) throw ReplayError(s, 0, "registration outside slot 0");
    }
    if (slots[0].registrations.size() != genesis_count || !slots[0].entries.empty())
        throw ReplayError(0, 0, "genesis slot does not match header count");

    Ledger ledger;
    try {
        ledger = genesis(slots[0].registrations, std::move(options));
    } catch (const ConstructionError& e) {
        throw ReplayError(0, 0, e.what());
    }
    for (std::size_t s = 1; s < slots.size(); ++s) {
        const Slot& slot = slots[s];
        if (slot.finalized) {
            if (!slot.entries.empty()) throw ReplayError(s, 0, "finalization slot carries entries");
            if (ledger.state_.frozen) throw ReplayError(s, 0, "ledger finalized twice");
            ledger.finalize();
            continue;
        }
        Slot rebuilt;
        rebuilt.index = s;
        for (std::size_t i = 0; i < slot.entries.size(); ++i) {
            Verdict v = ledger.check(slot.entries[i]);
            if (!v.accepted()) throw ReplayError(s, i, std::string(to_string(*v.reason)));
            ledger.apply(slot.entries[i]);
            rebuilt.entries.push_back(slot.entries[i]);
        }
        ledger.slots_.push_back(std::move(rebuilt));
    }
    return ledger;
}

Replayed replay(const Ledger& ledger) {
    Ledger fresh = Ledger::from_slots(ledger.genesis_count(), ledger.options(), ledger.slots());
    return {fresh.state(), fresh.index()};
}

// ---- persistence ----------------------------------------------------------

std::string serialize(const Ledger& ledger) {
    using codec::Json;
    std::string out;
    Json header{{"version", std::string(crypto::kProfileVersion)}, {"genesis_count", ledger.genesis_count()}};
    if (!ledger.options().empty()) header["options"] = codec::to_json(ledger.options())["options"];
    out += header.dump();
    out += '\n';
    for (const auto& slot : ledger.slots()) {
        Json entries = Json::array();
        for (const auto& g : slot.registrations) entries.push_back(codec::to_json(g));
        for (const auto& e : slot.entries) entries.push_back(codec::to_json(e));
        Json line{{"t", slot.index}, {"entries", entries}};
        if (slot.finalized) line["finalized"] = true;
        out += line.dump();
        out += '\n';
    }
    return out;
}

Ledger parse_ledger(std::string_view text) {
    using codec::Json;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) -> FormatError {
        return FormatError("ledger line " + std::to_string(lineno) + ": " + why);
    };

    if (!std::getline(in, line)) throw FormatError("empty ledger file");
    ++lineno;
    std::size_t genesis_count = 0;
    OptionRegistry options;
    try {
        Json header = Json::parse(line);
        if (!header.contains("version") || header.at("version") != crypto::kProfileVersion)
            throw fail("unsupported ledger version " + (header.contains("version") ? header.at("version").dump() : "(none)"));
        genesis_count = header.at("genesis_count").get<std::size_t>();
        if (header.contains("options")) options = codec::registry_from_json(Json{{"options", header.at("options")}});
    } catch (const nlohmann::json::exception& e) {
        throw fail(e.what());
    } catch (const EncodingError& e) {
        throw fail(e.what());
    }

    std::vector<Slot> slots;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            Json j = Json::parse(line);
            Slot slot;
            slot.index = j.at("t").get<std::uint64_t>();
            slot.finalized = j.value("finalized", false);
            for (const auto& e : j.at("entries")) {
                if (e.value("type", "") == "genesis")
                    slot.registrations.push_back(codec::genesis_from_json(e));
                else
                    slot.entries.push_back(codec::entry_from_json(e));
            }
            slots.push_back(std::move(slot));
        } catch (const nlohmann::json::exception& e) {
            throw fail(e.what());
        } catch (const EncodingError& e) {
            throw fail(e.what());
        }
    }
    return Ledger::from_slots(genesis_count, std::move(options), slots);
}

void save(const Ledger& ledger, const std::filesystem::path& path) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write " + tmp.string());
        out << serialize(ledger);
        if (!out) throw FormatError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Ledger load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ledger(buf.str());
}

std::string export_state(const State& state) {
    std::string out;
    for (const auto& u : state.sorted_live()) {
        out += u.hex();
        out += '\n';
    }
    return out;
}

}  // namespace liquid

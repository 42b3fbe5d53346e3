#include "liquid/liquid.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "liquid/codec.hpp"
#include "liquid/errors.hpp"
#include "liquid/ledger.hpp"
#include "liquid/sim.hpp"
#include "liquid/tally.hpp"
#include "liquid/wallet.hpp"

struct liquid_wallet {
    liquid::wallet::Wallet w;
};
struct liquid_ledger {
    liquid::Ledger l;
};
struct liquid_option {
    liquid::tally::OptionEntity o;
};

namespace {

using liquid::codec::Json;

thread_local std::string g_last_error;

liquid_status fail(liquid_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

/// Runs `body`, translating exceptions into status codes.
template <class F>
liquid_status guarded(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const liquid::ReplayError& e) {
        return fail(LIQUID_E_CORRUPT, e.what());
    } catch (const liquid::FormatError& e) {
        return fail(LIQUID_E_CORRUPT, e.what());
    } catch (const liquid::DecryptionError& e) {
        return fail(LIQUID_E_DECRYPT, e.what());
    } catch (const liquid::StateError& e) {
        return fail(LIQUID_E_STATE, e.what());
    } catch (const liquid::EncodingError& e) {
        return fail(LIQUID_E_ARGUMENT, e.what());
    } catch (const liquid::ConfigError& e) {
        return fail(LIQUID_E_ARGUMENT, e.what());
    } catch (const liquid::ConstructionError& e) {
        return fail(LIQUID_E_ARGUMENT, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(LIQUID_E_ARGUMENT, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(LIQUID_E_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(LIQUID_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(LIQUID_E_INTERNAL, e.what());
    } catch (...) {
        return fail(LIQUID_E_INTERNAL, "unknown error");
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void emit(char** out, const Json& j) { *out = dup(j.dump()); }

void need(const void* p, const char* what) {
    if (!p) throw liquid::ConfigError(std::string("null argument: ") + what);
}

void need_file(const char* path) {
    if (!std::filesystem::exists(path)) throw std::filesystem::filesystem_error(
        "no such file", path, std::make_error_code(std::errc::no_such_file_or_directory));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw liquid::FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_private(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw liquid::FormatError("cannot write " + tmp.string());
        std::filesystem::permissions(tmp, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write);
        out << text;
        if (!out) throw liquid::FormatError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

liquid::UnitId unit_arg(const char* hex) {
    need(hex, "unit");
    return liquid::UnitId::from_hex(hex);
}

Json entries_arg(const char* text) {
    need(text, "entries");
    Json j = liquid::codec::parse(text);
    if (!j.is_array()) j = Json::array({j});
    return j;
}

Json scan_json(const liquid::wallet::IncomingScan& scan) {
    Json received = Json::array();
    for (const auto& r : scan.received) received.push_back(r.unit.hex());
    Json unclaimable = Json::array();
    for (const auto& u : scan.unclaimable) unclaimable.push_back(u.hex());
    return {{"received", received}, {"unclaimable", unclaimable}};
}

}  // namespace

extern "C" {

const char* liquid_version(void) { return "1.0.0 (LLV1)"; }

const char* liquid_status_name(liquid_status s) {
    switch (s) {
        case LIQUID_OK: return "ok";
        case LIQUID_E_ARGUMENT: return "invalid_argument";
        case LIQUID_E_REJECTED: return "rejected";
        case LIQUID_E_CORRUPT: return "corrupt";
        case LIQUID_E_DECRYPT: return "decryption_failed";
        case LIQUID_E_STATE: return "invalid_state";
        case LIQUID_E_IO: return "io";
        case LIQUID_E_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* liquid_last_error(void) { return g_last_error.c_str(); }

void liquid_string_free(char* s) { std::free(s); }

// ---- wallet ----------------------------------------------------------------

liquid_status liquid_wallet_create(const char* profile, liquid_wallet_t** out) {
    return guarded([&] {
        need(out, "out");
        const auto& p = liquid::crypto::Profile::by_name(profile ? profile : "llv1");
        auto source = liquid::crypto::NonceSource::os(p);
        *out = new liquid_wallet{liquid::wallet::Wallet::create(source)};
        return LIQUID_OK;
    });
}

liquid_status liquid_wallet_from_mnemonic(const char* mnemonic, liquid_wallet_t** out) {
    return guarded([&] {
        need(mnemonic, "mnemonic");
        need(out, "out");
        auto seed = liquid::crypto::Seed::from_mnemonic(mnemonic);
        *out = new liquid_wallet{liquid::wallet::Wallet::from_seed(seed, liquid::crypto::NonceSource::os())};
        return LIQUID_OK;
    });
}

liquid_status liquid_wallet_load(const char* path, const char* passphrase, liquid_wallet_t** out) {
    return guarded([&] {
        need(path, "path");
        need(passphrase, "passphrase");
        need(out, "out");
        need_file(path);
        *out = new liquid_wallet{liquid::wallet::Wallet::restore(path, passphrase)};
        return LIQUID_OK;
    });
}

liquid_status liquid_wallet_save(const liquid_wallet_t* w, const char* path, const char* passphrase) {
    return guarded([&] {
        need(w, "wallet");
        need(path, "path");
        need(passphrase, "passphrase");
        w->w.persist(path, passphrase);
        return LIQUID_OK;
    });
}

void liquid_wallet_free(liquid_wallet_t* w) { delete w; }

liquid_status liquid_wallet_mnemonic(const liquid_wallet_t* w, char** out) {
    return guarded([&] {
        need(w, "wallet");
        need(out, "out");
        *out = dup(w->w.seed().mnemonic());
        return LIQUID_OK;
    });
}

liquid_status liquid_wallet_register(liquid_wallet_t* w, char** out) {
    return guarded([&] {
        need(w, "wallet");
        need(out, "out");
        emit(out, liquid::codec::to_json(w->w.make_registration()));
        return LIQUID_OK;
    });
}

liquid_status liquid_wallet_offer_delegation(liquid_wallet_t* w, char** out) {
    return guarded([&] {
        need(w, "wallet");
        need(out, "out");
        emit(out, liquid::wallet::to_json(w->w.make_delegation_offer()));
        return LIQUID_OK;
    });
}

liquid_status liquid_wallet_announce(const liquid_wallet_t* w, const char* unit_hex, char** out) {
    return guarded([&] {
        need(w, "wallet");
        need(out, "out");
        emit(out, liquid::wallet::to_json(w->w.announce(unit_arg(unit_hex))));
        return LIQUID_OK;
    });
}

liquid_status liquid_wallet_offer_transfer(liquid_wallet_t* w, const char* announce_json, char** out) {
    return guarded([&] {
        need(w, "wallet");
        need(announce_json, "announce");
        need(out, "out");
        auto announce = liquid::wallet::input_announce_from_json(liquid::codec::parse(announce_json));
        emit(out, liquid::wallet::to_json(w->w.make_transfer_offer(announce)));
        return LIQUID_OK;
    });
}

liquid_status liquid_wallet_send(liquid_wallet_t* w, const char* unit_hex, const char* offer_json, char** out) {
    return guarded([&] {
        need(w, "wallet");
        need(offer_json, "offer");
        need(out, "out");
        auto unit = unit_arg(unit_hex);
        Json offer = liquid::codec::parse(offer_json);
        auto kind = offer.value("kind", "");
        if (kind == "delegation_offer") {
            auto [t, stub] = w->w.accept_delegation_offer(unit, liquid::wallet::delegation_offer_from_json(offer));
            emit(out, liquid::codec::to_json(t));
        } else if (kind == "transfer_offer") {
            auto t = w->w.accept_transfer_offer(unit, liquid::wallet::transfer_offer_from_json(offer));
            emit(out, liquid::codec::to_json(t));
        } else {
            throw liquid::EncodingError("offer kind must be delegation_offer or transfer_offer");
        }
        return LIQUID_OK;
    });
}

liquid_status liquid_wallet_reverse(liquid_wallet_t* w, const char* stub_unit_hex, const liquid_ledger_t* ledger,
                                    char** out) {
    return guarded([&] {
        need(w, "wallet");
        need(ledger, "ledger");
        need(out, "out");
        const auto* stub = w->w.find_stub(unit_arg(stub_unit_hex));
        if (!stub) throw liquid::StateError("wallet holds no stub for that unit");
        emit(out, liquid::codec::to_json(w->w.reverse(*stub, ledger->l)));
        return LIQUID_OK;
    });
}

liquid_status liquid_wallet_sync(liquid_wallet_t* w, const liquid_ledger_t* ledger, char** out) {
    return guarded([&] {
        need(w, "wallet");
        need(ledger, "ledger");
        auto scan = w->w.detect_incoming(ledger->l);
        if (out) emit(out, scan_json(scan));
        return LIQUID_OK;
    });
}

liquid_status liquid_wallet_units(const liquid_wallet_t* w, const liquid_ledger_t* ledger, char** out) {
    return guarded([&] {
        need(w, "wallet");
        need(out, "out");
        Json units = Json::array();
        for (const auto& r : w->w.records()) {
            Json j{{"unit", r.unit.hex()}, {"prev", r.prev_unit.hex()}, {"key_index", r.key_index},
                   {"spent", r.spent}};
            if (ledger) j["live"] = ledger->l.state().is_live(r.unit);
            units.push_back(j);
        }
        Json stubs = Json::array();
        for (const auto& s : w->w.stubs())
            stubs.push_back({{"delegated_input", s.delegated_input.hex()},
                             {"delegated_output", s.delegated_output.hex()}});
        emit(out, {{"profile", std::string(w->w.profile().name)},
                   {"units", units},
                   {"stubs", stubs},
                   {"pending", w->w.pending().size()},
                   {"keys_used", w->w.next_key_index()}});
        return LIQUID_OK;
    });
}

// ---- ledger ----------------------------------------------------------------

liquid_status liquid_ledger_genesis(const char* registrations_json, const char* registry_json,
                                    liquid_ledger_t** out) {
    return guarded([&] {
        need(registrations_json, "registrations");
        need(out, "out");
        Json regs = liquid::codec::parse(registrations_json);
        if (!regs.is_array()) throw liquid::EncodingError("registrations must be a JSON array");
        std::vector<liquid::GenesisRegistration> list;
        for (const auto& r : regs) list.push_back(liquid::codec::genesis_from_json(r));
        liquid::OptionRegistry registry;
        if (registry_json) registry = liquid::codec::registry_from_json(liquid::codec::parse(registry_json));
        *out = new liquid_ledger{liquid::Ledger::genesis(list, std::move(registry))};
        return LIQUID_OK;
    });
}

liquid_status liquid_ledger_load(const char* path, liquid_ledger_t** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        need_file(path);
        *out = new liquid_ledger{liquid::load(path)};
        return LIQUID_OK;
    });
}

liquid_status liquid_ledger_save(const liquid_ledger_t* l, const char* path) {
    return guarded([&] {
        need(l, "ledger");
        need(path, "path");
        liquid::save(l->l, path);
        return LIQUID_OK;
    });
}

void liquid_ledger_free(liquid_ledger_t* l) { delete l; }

liquid_status liquid_ledger_check(const liquid_ledger_t* l, const char* entry_json, char** out) {
    return guarded([&] {
        need(l, "ledger");
        need(entry_json, "entry");
        auto entry = liquid::codec::entry_from_json(liquid::codec::parse(entry_json));
        auto v = l->l.check(entry);
        if (out) emit(out, liquid::codec::to_json(v));
        return v.accepted() ? LIQUID_OK : fail(LIQUID_E_REJECTED, std::string(liquid::to_string(*v.reason)));
    });
}

liquid_status liquid_ledger_append(liquid_ledger_t* l, const char* entries_json, char** out) {
    return guarded([&] {
        need(l, "ledger");
        std::vector<liquid::Entry> entries;
        for (const auto& e : entries_arg(entries_json)) entries.push_back(liquid::codec::entry_from_json(e));
        auto verdicts = l->l.append_slot(entries);
        Json arr = Json::array();
        std::string first_reject;
        for (const auto& v : verdicts) {
            arr.push_back(liquid::codec::to_json(v));
            if (!v.accepted() && first_reject.empty()) first_reject = liquid::to_string(*v.reason);
        }
        if (out) emit(out, arr);
        return first_reject.empty() ? LIQUID_OK : fail(LIQUID_E_REJECTED, first_reject);
    });
}

liquid_status liquid_ledger_finalize(liquid_ledger_t* l) {
    return guarded([&] {
        need(l, "ledger");
        l->l.finalize();
        return LIQUID_OK;
    });
}

liquid_status liquid_ledger_state(const liquid_ledger_t* l, char** out) {
    return guarded([&] {
        need(l, "ledger");
        need(out, "out");
        Json live = Json::array();
        for (const auto& u : l->l.state().sorted_live()) live.push_back(u.hex());
        emit(out, {{"live", live},
                   {"frozen", l->l.state().frozen},
                   {"state_hash", l->l.state().snapshot_hash().hex()}});
        return LIQUID_OK;
    });
}

liquid_status liquid_ledger_unit(const liquid_ledger_t* l, const char* unit_hex, char** out) {
    return guarded([&] {
        need(l, "ledger");
        need(out, "out");
        auto unit = unit_arg(unit_hex);
        const auto& index = l->l.index();
        Json j{{"unit", unit.hex()}, {"known", index.contains(unit)}, {"live", l->l.state().is_live(unit)}};
        if (auto p = index.parent_of(unit)) j["parent"] = p->hex();
        if (auto c = index.child.find(unit); c != index.child.end()) j["child"] = c->second.hex();
        if (index.contains(unit)) j["depth"] = index.depth(unit);
        emit(out, j);
        return LIQUID_OK;
    });
}

liquid_status liquid_ledger_info(const liquid_ledger_t* l, char** out) {
    return guarded([&] {
        need(l, "ledger");
        need(out, "out");
        emit(out, {{"version", std::string(liquid::crypto::kProfileVersion)},
                   {"genesis_count", l->l.genesis_count()},
                   {"slots", l->l.slots().size()},
                   {"entries", l->l.entry_count()},
                   {"live", l->l.state().live.size()},
                   {"frozen", l->l.state().frozen},
                   {"state_hash", l->l.state().snapshot_hash().hex()},
                   {"registry", liquid::codec::to_json(l->l.options())}});
        return LIQUID_OK;
    });
}

liquid_status liquid_ledger_verify_file(const char* path, char** out) {
    return guarded([&] {
        need(path, "path");
        need_file(path);
        try {
            auto ledger = liquid::load(path);
            auto replayed = liquid::replay(ledger);
            bool same = replayed.state == ledger.state();
            if (out)
                emit(out, {{"consistent", same},
                           {"slots", ledger.slots().size()},
                           {"entries", ledger.entry_count()},
                           {"state_hash", ledger.state().snapshot_hash().hex()}});
            return same ? LIQUID_OK : fail(LIQUID_E_CORRUPT, "replayed state differs from stored state");
        } catch (const liquid::ReplayError& e) {
            if (out)
                emit(out, {{"consistent", false}, {"slot", e.slot()}, {"position", e.position()}, {"error", e.what()}});
            return fail(LIQUID_E_CORRUPT, e.what());
        } catch (const liquid::FormatError& e) {
            if (out) emit(out, {{"consistent", false}, {"error", e.what()}});
            return fail(LIQUID_E_CORRUPT, e.what());
        }
    });
}

// ---- options and tally -----------------------------------------------------

liquid_status liquid_option_create(const char* label, liquid_option_t** out) {
    return guarded([&] {
        need(label, "label");
        need(out, "out");
        if (!*label) throw liquid::ConfigError("option label must not be empty");
        *out = new liquid_option{liquid::tally::OptionEntity::create(label, liquid::crypto::NonceSource::os())};
        return LIQUID_OK;
    });
}

liquid_status liquid_option_load(const char* path, liquid_option_t** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        need_file(path);
        Json j;
        try {
            j = liquid::codec::parse(read_file(path));
        } catch (const liquid::EncodingError& e) {
            throw liquid::FormatError(std::string("corrupt option file: ") + e.what());
        }
        if (j.value("kind", "") != "option_entity") throw liquid::FormatError("not an option entity file");
        *out = new liquid_option{liquid::tally::OptionEntity::from_json(j, liquid::crypto::NonceSource::os())};
        return LIQUID_OK;
    });
}

liquid_status liquid_option_save(const liquid_option_t* o, const char* path) {
    return guarded([&] {
        need(o, "option");
        need(path, "path");
        write_private(path, o->o.to_json().dump(2) + "\n");
        return LIQUID_OK;
    });
}

void liquid_option_free(liquid_option_t* o) { delete o; }

liquid_status liquid_option_public(const liquid_option_t* o, char** out) {
    return guarded([&] {
        need(o, "option");
        need(out, "out");
        emit(out, {{"label", o->o.label()}, {"public_key", o->o.public_key().hex()}});
        return LIQUID_OK;
    });
}

liquid_status liquid_option_vote_offer(liquid_option_t* o, const char* announce_json, char** out) {
    return guarded([&] {
        need(o, "option");
        need(announce_json, "announce");
        need(out, "out");
        auto announce = liquid::wallet::input_announce_from_json(liquid::codec::parse(announce_json));
        emit(out, liquid::wallet::to_json(o->o.request_vote_offer(announce)));
        return LIQUID_OK;
    });
}

liquid_status liquid_option_declare(const liquid_option_t* o, const liquid_ledger_t* l, char** out) {
    return guarded([&] {
        need(o, "option");
        need(l, "ledger");
        need(out, "out");
        Json units = Json::array();
        for (const auto& u : o->o.declare(l->l.index())) units.push_back(u.hex());
        emit(out, {{"option", o->o.label()}, {"units", units}});
        return LIQUID_OK;
    });
}

liquid_status liquid_option_reveal(const liquid_option_t* o, const liquid_ledger_t* l, char** out) {
    return guarded([&] {
        need(o, "option");
        need(l, "ledger");
        need(out, "out");
        emit(out, liquid::tally::to_json(o->o.reveal(l->l.index())));
        return LIQUID_OK;
    });
}

liquid_status liquid_registry_build(const char* options_json, char** out) {
    return guarded([&] {
        need(options_json, "options");
        need(out, "out");
        Json arr = liquid::codec::parse(options_json);
        if (!arr.is_array()) throw liquid::EncodingError("options must be a JSON array");
        liquid::OptionRegistry registry;
        for (const auto& o : arr)
            registry.add(o.at("label").get<std::string>(), liquid::codec::hex_field<liquid::PublicKey>(o, "public_key"));
        emit(out, liquid::codec::to_json(registry));
        return LIQUID_OK;
    });
}

liquid_status liquid_tally(const liquid_ledger_t* l, const char* reveals_json, const char* registry_json,
                           char** out) {
    return guarded([&] {
        need(l, "ledger");
        need(out, "out");
        std::vector<liquid::tally::VoteReveal> reveals;
        for (const auto& r : entries_arg(reveals_json)) reveals.push_back(liquid::tally::reveal_from_json(r));
        liquid::OptionRegistry registry =
            registry_json ? liquid::codec::registry_from_json(liquid::codec::parse(registry_json)) : l->l.options();
        if (registry.empty()) throw liquid::ConfigError("no option registry: pass one or store it in the ledger");
        emit(out, liquid::tally::to_json(liquid::tally::verify_tally(l->l, reveals, registry)));
        return LIQUID_OK;
    });
}

liquid_status liquid_preliminary_tally(const liquid_ledger_t* l, const char* declared_json, char** out) {
    return guarded([&] {
        need(l, "ledger");
        need(declared_json, "declared");
        need(out, "out");
        Json j = liquid::codec::parse(declared_json);
        std::map<std::string, std::set<liquid::UnitId>> declared;
        for (const auto& [label, units] : j.items())
            for (const auto& u : units) declared[label].insert(liquid::UnitId::from_hex(u.get<std::string>()));
        emit(out, liquid::tally::to_json(liquid::tally::preliminary_tally(l->l.state(), declared)));
        return LIQUID_OK;
    });
}

// ---- simulator -------------------------------------------------------------

liquid_status liquid_sim_run(const char* scenario_text, const char* ledger_path, char** out) {
    return guarded([&] {
        need(scenario_text, "scenario");
        need(out, "out");
        auto scenario = liquid::sim::parse_scenario(scenario_text);
        auto result = liquid::sim::run(scenario);
        if (ledger_path) liquid::save(result.ledger, ledger_path);
        emit(out, liquid::sim::report_json(scenario, result));
        return LIQUID_OK;
    });
}

}  // extern "C"

// liquid: command-line front end over the C API in liquid/liquid.h.
//
// Every command prints one JSON document on stdout; diagnostics go to stderr.
// Exit codes: 0 ok, 1 usage or invalid request, 2 validation reject,
// 3 corrupt or unreadable file.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "liquid/liquid.h"

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

enum Exit { kOk = 0, kUsage = 1, kRejected = 2, kCorrupt = 3 };

bool g_pretty = false;

struct Failure {
    int code;
    std::string status;
    std::string message;
};

int exit_for(liquid_status s) {
    switch (s) {
        case LIQUID_OK: return kOk;
        case LIQUID_E_REJECTED: return kRejected;
        case LIQUID_E_CORRUPT:
        case LIQUID_E_DECRYPT: return kCorrupt;
        default: return kUsage;
    }
}

[[noreturn]] void raise(liquid_status s) { throw Failure{exit_for(s), liquid_status_name(s), liquid_last_error()}; }
[[noreturn]] void usage(std::string msg) { throw Failure{kUsage, "usage", std::move(msg)}; }

void check(liquid_status s) {
    if (s != LIQUID_OK) raise(s);
}

/// Owns a string returned by the library.
struct Owned {
    char* p = nullptr;
    ~Owned() { liquid_string_free(p); }
    char** out() { return &p; }
    std::string str() const { return p ? p : ""; }
    Json json() const { return Json::parse(str()); }
};

void print(const Json& j) { std::cout << (g_pretty ? j.dump(2) : j.dump()) << "\n"; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kUsage, "io", "cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) throw Failure{kUsage, "io", "cannot write " + path};
}

/// Reads a JSON document, or JSON Lines when the file holds several values.
Json read_json_values(const std::string& path) {
    std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error&) {
    }
    Json arr = Json::array();
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            arr.push_back(Json::parse(line));
        } catch (const Json::parse_error& e) {
            throw Failure{kCorrupt, "corrupt", path + ": " + e.what()};
        }
    }
    return arr;
}

Json as_array(Json j) { return j.is_array() ? j : Json::array({j}); }

std::string env_or(const std::string& value, const char* var) {
    if (!value.empty()) return value;
    const char* e = std::getenv(var);
    return e ? e : "";
}

std::string required(const std::string& value, const char* var, const char* flag) {
    auto v = env_or(value, var);
    if (v.empty()) usage(std::string(flag) + " is required (or set " + var + ")");
    return v;
}

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
    T** out() { return &p; }
    T* get() const { return p; }
};
using WalletH = Handle<liquid_wallet_t, liquid_wallet_free>;
using LedgerH = Handle<liquid_ledger_t, liquid_ledger_free>;
using OptionH = Handle<liquid_option_t, liquid_option_free>;

/// Advisory exclusive lock held while a ledger file is read, modified and
/// written back.
class LedgerLock {
public:
    explicit LedgerLock(const std::string& ledger) {
        auto path = ledger + ".lock";
        fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0600);
        if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) throw Failure{kUsage, "io", "cannot lock " + path};
    }
    ~LedgerLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }

private:
    int fd_ = -1;
};

struct Options {
    std::string profile = "llv1";
    std::string wallet, ledger, registry, passphrase, out;
    std::string unit, offer, stub, option, option_file, label, announce, scenario, registrations;
    std::vector<std::string> reveals, option_files, declarations;
    std::string mnemonic;
    bool delegation = false, transfer = false, reveal = false;
};

std::string passphrase(const Options& o) { return required(o.passphrase, "LIQUID_PASSPHRASE", "--passphrase"); }
std::string wallet_path(const Options& o) { return required(o.wallet, "LIQUID_WALLET", "--wallet"); }
std::string ledger_path(const Options& o) { return required(o.ledger, "LIQUID_LEDGER", "--ledger"); }
std::string registry_path(const Options& o) { return env_or(o.registry, "LIQUID_REGISTRY"); }

void check_profile(const Options& o) {
    // Ledger headers carry the LLV1 version; the toy profile is simulator-only.
    if (o.profile != "llv1") usage("profile '" + o.profile + "' does not match the LLV1 ledger header");
}

void load_wallet(const Options& o, WalletH& w) { check(liquid_wallet_load(wallet_path(o).c_str(), passphrase(o).c_str(), w.out())); }
void save_wallet(const Options& o, const WalletH& w) {
    check(liquid_wallet_save(w.get(), wallet_path(o).c_str(), passphrase(o).c_str()));
}
void load_ledger(const Options& o, LedgerH& l) {
    check_profile(o);
    check(liquid_ledger_load(ledger_path(o).c_str(), l.out()));
}

// ---- commands ---------------------------------------------------------------

void cmd_keygen(const Options& o) {
    if (o.out.empty()) usage("--out is required");
    if (fs::exists(o.out)) usage("refusing to overwrite " + o.out);
    WalletH w;
    if (!o.mnemonic.empty())
        check(liquid_wallet_from_mnemonic(o.mnemonic.c_str(), w.out()));
    else
        check(liquid_wallet_create(o.profile.c_str(), w.out()));
    check(liquid_wallet_save(w.get(), o.out.c_str(), passphrase(o).c_str()));
    Owned words;
    check(liquid_wallet_mnemonic(w.get(), words.out()));
    print({{"wallet", o.out}, {"mnemonic", words.str()}});
}

void cmd_register(const Options& o) {
    WalletH w;
    load_wallet(o, w);
    Owned reg;
    check(liquid_wallet_register(w.get(), reg.out()));
    save_wallet(o, w);
    print(reg.json());
}

void cmd_genesis(const Options& o) {
    check_profile(o);
    if (o.registrations.empty() || o.out.empty()) usage("--registrations and --out are required");
    Json regs = as_array(read_json_values(o.registrations));
    std::string registry;
    if (auto r = registry_path(o); !r.empty()) registry = read_file(r);
    LedgerH l;
    check(liquid_ledger_genesis(regs.dump().c_str(), registry.empty() ? nullptr : registry.c_str(), l.out()));
    LedgerLock lock(o.out);
    check(liquid_ledger_save(l.get(), o.out.c_str()));
    Owned info;
    check(liquid_ledger_info(l.get(), info.out()));
    print(info.json());
}

void cmd_offer_delegation(const Options& o) {
    WalletH w;
    load_wallet(o, w);
    Owned offer;
    check(liquid_wallet_offer_delegation(w.get(), offer.out()));
    save_wallet(o, w);
    print(offer.json());
}

void cmd_announce(const Options& o) {
    if (o.unit.empty()) usage("--unit is required");
    WalletH w;
    load_wallet(o, w);
    Owned a;
    check(liquid_wallet_announce(w.get(), o.unit.c_str(), a.out()));
    print(a.json());
}

void cmd_offer_transfer(const Options& o) {
    if (o.announce.empty()) usage("--input-announce is required");
    WalletH w;
    load_wallet(o, w);
    Owned offer;
    check(liquid_wallet_offer_transfer(w.get(), read_file(o.announce).c_str(), offer.out()));
    save_wallet(o, w);
    print(offer.json());
}

/// Appends one entry, persisting ledger and wallet only when accepted.
void submit(const Options& o, WalletH& w, LedgerH& l, const std::string& entry) {
    Owned verdicts;
    liquid_status s = liquid_ledger_append(l.get(), entry.c_str(), verdicts.out());
    if (s != LIQUID_OK && s != LIQUID_E_REJECTED) raise(s);
    Json verdict = verdicts.json().at(0);
    if (s == LIQUID_E_REJECTED) {
        print(verdict);
        std::cerr << "rejected: " << verdict.value("reason", "") << "\n";
        std::exit(kRejected);
    }
    check(liquid_ledger_save(l.get(), ledger_path(o).c_str()));
    check(liquid_wallet_sync(w.get(), l.get(), nullptr));
    save_wallet(o, w);
    print(verdict);
}

void cmd_send(const Options& o) {
    if (o.unit.empty() || o.offer.empty()) usage("--unit and --offer are required");
    if (o.delegation && o.transfer) usage("--delegation and --transfer are exclusive");
    std::string offer = read_file(o.offer);
    std::string kind;
    try {
        kind = Json::parse(offer).value("kind", "");
    } catch (const Json::exception& e) {
        usage(std::string("offer is not JSON: ") + e.what());
    }
    if (o.delegation && kind != "delegation_offer") usage("--delegation given but offer is " + kind);
    if (o.transfer && kind != "transfer_offer") usage("--transfer given but offer is " + kind);

    LedgerLock lock(ledger_path(o));
    WalletH w;
    LedgerH l;
    load_wallet(o, w);
    load_ledger(o, l);
    Owned entry;
    liquid_status s = liquid_wallet_send(w.get(), o.unit.c_str(), offer.c_str(), entry.out());
    if (s == LIQUID_E_STATE) {
        // The wallet cannot spend this unit; report the ledger's view of it.
        std::string why = liquid_last_error();
        Owned info;
        check(liquid_ledger_unit(l.get(), o.unit.c_str(), info.out()));
        Json u = info.json();
        Json verdict{{"accepted", false}};
        if (!u.value("known", false))
            verdict["reason"] = "UnknownInput";
        else if (!u.value("live", false))
            verdict["reason"] = "SpentInput";
        else
            throw Failure{kRejected, "rejected", why};
        print(verdict);
        std::cerr << "rejected: " << why << "\n";
        std::exit(kRejected);
    }
    check(s);
    submit(o, w, l, entry.str());
}

void cmd_reverse(const Options& o) {
    if (o.stub.empty()) usage("--stub is required");
    LedgerLock lock(ledger_path(o));
    WalletH w;
    LedgerH l;
    load_wallet(o, w);
    load_ledger(o, l);
    check(liquid_wallet_sync(w.get(), l.get(), nullptr));
    Owned entry;
    liquid_status s = liquid_wallet_reverse(w.get(), o.stub.c_str(), l.get(), entry.out());
    if (s == LIQUID_E_STATE) throw Failure{kRejected, "rejected", liquid_last_error()};
    check(s);
    submit(o, w, l, entry.str());
}

void cmd_sync(const Options& o) {
    WalletH w;
    LedgerH l;
    load_wallet(o, w);
    load_ledger(o, l);
    Owned scan;
    check(liquid_wallet_sync(w.get(), l.get(), scan.out()));
    save_wallet(o, w);
    print(scan.json());
}

void cmd_units(const Options& o) {
    WalletH w;
    load_wallet(o, w);
    LedgerH l;
    if (!env_or(o.ledger, "LIQUID_LEDGER").empty()) load_ledger(o, l);
    Owned units;
    check(liquid_wallet_units(w.get(), l.get(), units.out()));
    print(units.json());
}

void cmd_option_new(const Options& o) {
    if (o.label.empty() || o.out.empty()) usage("--label and --out are required");
    if (fs::exists(o.out)) usage("refusing to overwrite " + o.out);
    OptionH opt;
    check(liquid_option_create(o.label.c_str(), opt.out()));
    check(liquid_option_save(opt.get(), o.out.c_str()));
    Owned pub;
    check(liquid_option_public(opt.get(), pub.out()));
    print(pub.json());
}

void cmd_registry(const Options& o) {
    if (o.option_files.empty() || o.out.empty()) usage("--option-file (repeatable) and --out are required");
    Json pubs = Json::array();
    for (const auto& f : o.option_files) {
        OptionH opt;
        check(liquid_option_load(f.c_str(), opt.out()));
        Owned pub;
        check(liquid_option_public(opt.get(), pub.out()));
        pubs.push_back(pub.json());
    }
    Owned reg;
    check(liquid_registry_build(pubs.dump().c_str(), reg.out()));
    write_file(o.out, reg.json().dump(2) + "\n");
    print(reg.json());
}

void cmd_vote(const Options& o) {
    if (o.option.empty()) usage("--option is required");
    auto reg_path = registry_path(o);
    if (reg_path.empty()) usage("--registry is required (or set LIQUID_REGISTRY)");
    Json registry = Json::parse(read_file(reg_path));
    if (!registry.contains("options") || !registry["options"].contains(o.option))
        usage("option '" + o.option + "' is not in the registry");

    std::string opt_path = o.option_file;
    if (opt_path.empty()) opt_path = (fs::path(reg_path).parent_path() / (o.option + ".option.json")).string();
    OptionH opt;
    check(liquid_option_load(opt_path.c_str(), opt.out()));
    Owned pub;
    check(liquid_option_public(opt.get(), pub.out()));
    if (pub.json().value("public_key", "") != registry["options"][o.option].get<std::string>())
        usage("option file " + opt_path + " does not hold the registered key for '" + o.option + "'");

    LedgerLock lock(ledger_path(o));
    WalletH w;
    LedgerH l;
    load_wallet(o, w);
    load_ledger(o, l);
    check(liquid_wallet_sync(w.get(), l.get(), nullptr));

    std::string unit = o.unit;
    if (unit.empty()) {
        Owned units;
        check(liquid_wallet_units(w.get(), l.get(), units.out()));
        Json listing = units.json();
        for (const auto& u : listing.at("units"))
            if (!u.value("spent", true) && u.value("live", false)) {
                unit = u.at("unit").get<std::string>();
                break;
            }
        if (unit.empty()) throw Failure{kRejected, "rejected", "wallet holds no spendable unit"};
    }

    Owned announce, offer, entry;
    check(liquid_wallet_announce(w.get(), unit.c_str(), announce.out()));
    check(liquid_option_vote_offer(opt.get(), announce.str().c_str(), offer.out()));
    check(liquid_wallet_send(w.get(), unit.c_str(), offer.str().c_str(), entry.out()));
    // Save the option's claim before submitting so the nonce is never lost.
    check(liquid_option_save(opt.get(), opt_path.c_str()));
    submit(o, w, l, entry.str());
}

void cmd_finalize(const Options& o) {
    LedgerLock lock(ledger_path(o));
    LedgerH l;
    load_ledger(o, l);
    check(liquid_ledger_finalize(l.get()));
    check(liquid_ledger_save(l.get(), ledger_path(o).c_str()));
    Owned info;
    check(liquid_ledger_info(l.get(), info.out()));
    print(info.json());
}

void cmd_declare(const Options& o) {
    if (o.option_file.empty()) usage("--option-file is required");
    OptionH opt;
    LedgerH l;
    check(liquid_option_load(o.option_file.c_str(), opt.out()));
    load_ledger(o, l);
    Owned d;
    check(liquid_option_declare(opt.get(), l.get(), d.out()));
    print(d.json());
}

void cmd_reveal(const Options& o) {
    if (!o.reveal) usage("reveal prints plaintext nonces; pass --reveal to confirm");
    if (o.option_file.empty()) usage("--option-file is required");
    OptionH opt;
    LedgerH l;
    check(liquid_option_load(o.option_file.c_str(), opt.out()));
    load_ledger(o, l);
    Owned r;
    check(liquid_option_reveal(opt.get(), l.get(), r.out()));
    if (!o.out.empty()) write_file(o.out, r.str() + "\n");
    print(r.json());
}

void cmd_preliminary(const Options& o) {
    if (o.declarations.empty()) usage("--declaration (repeatable) is required");
    Json declared = Json::object();
    for (const auto& f : o.declarations)
        for (const auto& d : as_array(read_json_values(f))) declared[d.at("option").get<std::string>()] = d.at("units");
    LedgerH l;
    load_ledger(o, l);
    Owned r;
    check(liquid_preliminary_tally(l.get(), declared.dump().c_str(), r.out()));
    print(r.json());
}

void cmd_tally(const Options& o) {
    if (o.reveals.empty()) usage("--reveals (repeatable) is required");
    Json reveals = Json::array();
    for (const auto& f : o.reveals)
        for (const auto& r : as_array(read_json_values(f))) reveals.push_back(r);
    std::string registry;
    if (auto r = registry_path(o); !r.empty()) registry = read_file(r);
    LedgerH l;
    load_ledger(o, l);
    Owned result;
    check(liquid_tally(l.get(), reveals.dump().c_str(), registry.empty() ? nullptr : registry.c_str(), result.out()));
    print(result.json());
}

void cmd_verify(const Options& o) {
    check_profile(o);
    Owned report;
    liquid_status s = liquid_ledger_verify_file(ledger_path(o).c_str(), report.out());
    if (report.p) print(report.json());
    if (s != LIQUID_OK) {
        std::cerr << "verify: " << liquid_last_error() << "\n";
        std::exit(exit_for(s));
    }
}

void cmd_state(const Options& o) {
    LedgerH l;
    load_ledger(o, l);
    Owned st;
    check(liquid_ledger_state(l.get(), st.out()));
    print(st.json());
}

void cmd_lineage(const Options& o) {
    if (o.unit.empty()) usage("--unit is required");
    LedgerH l;
    load_ledger(o, l);
    Json chain = Json::array();
    std::string cur = o.unit;
    for (;;) {
        Owned info;
        check(liquid_ledger_unit(l.get(), cur.c_str(), info.out()));
        Json u = info.json();
        if (!u.value("known", false)) {
            if (chain.empty()) throw Failure{kRejected, "rejected", "unit is not on the ledger"};
            break;
        }
        chain.push_back(u);
        if (!u.contains("parent")) break;
        cur = u["parent"].get<std::string>();
    }
    print({{"unit", o.unit}, {"chain", chain}});
}

void cmd_sim_run(const Options& o) {
    if (o.scenario.empty()) usage("scenario file is required");
    std::string text = read_file(o.scenario);
    Owned report;
    check(liquid_sim_run(text.c_str(), o.ledger.empty() ? nullptr : o.ledger.c_str(), report.out()));
    if (!o.out.empty()) write_file(o.out, report.json().dump(2) + "\n");
    print(report.json());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"liquid: reversible, receiver-hiding vote delegation ledger"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_flag("--pretty", g_pretty, "Indent JSON output");
    app.add_option("--profile", o.profile, "Cryptographic profile")->capture_default_str();
    app.set_version_flag("--version", std::string(liquid_version()));

    auto wallet_opt = [&](CLI::App* c) { c->add_option("--wallet", o.wallet, "Wallet file (env LIQUID_WALLET)"); };
    auto ledger_opt = [&](CLI::App* c) { c->add_option("--ledger", o.ledger, "Ledger file (env LIQUID_LEDGER)"); };
    auto pass_opt = [&](CLI::App* c) {
        c->add_option("--passphrase", o.passphrase, "Wallet passphrase (env LIQUID_PASSPHRASE)");
    };
    auto registry_opt = [&](CLI::App* c) {
        c->add_option("--registry", o.registry, "Option registry file (env LIQUID_REGISTRY)");
    };
    std::vector<std::pair<CLI::App*, void (*)(const Options&)>> commands;
    auto cmd = [&](const char* name, const char* help, void (*fn)(const Options&)) {
        auto* c = app.add_subcommand(name, help);
        commands.push_back({c, fn});
        return c;
    };

    auto* c = cmd("keygen", "Create an encrypted wallet and print its mnemonic once", cmd_keygen);
    c->add_option("--out", o.out, "Wallet file to create")->required();
    c->add_option("--mnemonic", o.mnemonic, "Restore keys from a 24-word mnemonic");
    pass_opt(c);

    c = cmd("register", "Print a genesis registration for a fresh unit", cmd_register);
    wallet_opt(c), pass_opt(c);

    c = cmd("genesis", "Create a ledger from registrations", cmd_genesis);
    c->add_option("--registrations", o.registrations, "JSON array or JSON Lines of registrations")->required();
    c->add_option("--out", o.out, "Ledger file to create")->required();
    registry_opt(c);

    c = cmd("offer-delegation", "Print a delegation offer (receiver side)", cmd_offer_delegation);
    wallet_opt(c), pass_opt(c);

    c = cmd("announce", "Print an input announcement for a transfer (sender side)", cmd_announce);
    c->add_option("--unit", o.unit, "Unit to transfer")->required();
    wallet_opt(c), pass_opt(c);

    c = cmd("offer-transfer", "Print a transfer offer for an announced input (receiver side)", cmd_offer_transfer);
    c->add_option("--input-announce", o.announce, "Announcement file")->required();
    wallet_opt(c), pass_opt(c);

    c = cmd("send", "Spend a unit against an offer and submit it", cmd_send);
    c->add_option("--unit", o.unit, "Unit to spend")->required();
    c->add_option("--offer", o.offer, "Offer file")->required();
    c->add_flag("--delegation", o.delegation, "Require a delegation offer");
    c->add_flag("--transfer", o.transfer, "Require a transfer offer");
    wallet_opt(c), ledger_opt(c), pass_opt(c);

    c = cmd("reverse", "Reclaim a delegated lineage", cmd_reverse);
    c->add_option("--stub", o.stub, "Delegated output unit of the stub")->required();
    wallet_opt(c), ledger_opt(c), pass_opt(c);

    c = cmd("sync", "Detect incoming units", cmd_sync);
    wallet_opt(c), ledger_opt(c), pass_opt(c);

    c = cmd("units", "List owned units and stubs", cmd_units);
    wallet_opt(c), ledger_opt(c), pass_opt(c);

    c = cmd("option-new", "Create a ballot option entity", cmd_option_new);
    c->add_option("--label", o.label, "Option name")->required();
    c->add_option("--out", o.out, "Option file to create")->required();

    c = cmd("registry", "Build the option registry from option files", cmd_registry);
    c->add_option("--option-file", o.option_files, "Option file (repeatable)")->required();
    c->add_option("--out", o.out, "Registry file")->required();

    c = cmd("vote", "Transfer a unit to an option entity and submit", cmd_vote);
    c->add_option("--option", o.option, "Option name")->required();
    c->add_option("--option-file", o.option_file, "Option entity file (default <registry dir>/<name>.option.json)");
    c->add_option("--unit", o.unit, "Unit to vote with (default: first spendable)");
    wallet_opt(c), ledger_opt(c), pass_opt(c), registry_opt(c);

    c = cmd("finalize", "Freeze the ledger for tallying", cmd_finalize);
    ledger_opt(c);

    c = cmd("declare", "Print the units an option claims, without nonces", cmd_declare);
    c->add_option("--option-file", o.option_file, "Option entity file")->required();
    ledger_opt(c);

    c = cmd("reveal", "Print an option's vote reveal, including nonces", cmd_reveal);
    c->add_option("--option-file", o.option_file, "Option entity file")->required();
    c->add_flag("--reveal", o.reveal, "Confirm printing plaintext nonces");
    c->add_option("--out", o.out, "Also write the reveal to this file");
    ledger_opt(c);

    c = cmd("preliminary", "Unverified count from option declarations", cmd_preliminary);
    c->add_option("--declaration", o.declarations, "Declaration file (repeatable)")->required();
    ledger_opt(c);

    c = cmd("tally", "Verify reveals against a finalized ledger", cmd_tally);
    c->add_option("--reveals", o.reveals, "Reveal file (repeatable; JSON, array or JSON Lines)")->required();
    ledger_opt(c), registry_opt(c);

    c = cmd("verify", "Replay the ledger from genesis", cmd_verify);
    ledger_opt(c);

    c = cmd("state", "Print the sorted live set", cmd_state);
    ledger_opt(c);

    c = cmd("lineage", "Print a unit's parent chain back to the genesis placeholder", cmd_lineage);
    c->add_option("--unit", o.unit, "Unit id")->required();
    ledger_opt(c);

    auto* sim = app.add_subcommand("sim", "Deterministic simulator");
    sim->require_subcommand(1);
    sim->fallthrough();
    auto* run = sim->add_subcommand("run", "Run a scenario file");
    run->add_option("scenario", o.scenario, "Scenario (YAML or JSON)")->required();
    run->add_option("--out", o.out, "Write the report here as well");
    run->add_option("--ledger-out", o.ledger, "Save the final ledger");
    commands.push_back({run, cmd_sim_run});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        print({{"error", {{"status", "usage"}, {"message", e.what()}}}});
        return kUsage;
    }

    try {
        for (auto& [sub, fn] : commands)
            if (sub->parsed()) fn(o);
        return kOk;
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        print({{"error", {{"status", f.status}, {"message", f.message}}}});
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        print({{"error", {{"status", "usage"}, {"message", e.what()}}}});
        return kUsage;
    }
}

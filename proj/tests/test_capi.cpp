// Exercises the shared library through liquid.h only.

#include <doctest.h>
#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "liquid/liquid.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

/// Takes ownership of a library string.
Json take(char* s) {
    REQUIRE(s != nullptr);
    Json j = Json::parse(s);
    liquid_string_free(s);
    return j;
}

struct Tmp {
    fs::path dir = fs::temp_directory_path() / ("liquid-capi-" + std::to_string(::getpid()));
    Tmp() {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Tmp() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::string first_unit(liquid_wallet_t* w, liquid_ledger_t* l) {
    char* out = nullptr;
    REQUIRE(liquid_wallet_units(w, l, &out) == LIQUID_OK);
    auto units = take(out);
    for (const auto& u : units["units"])
        if (u["live"].get<bool>() && !u["spent"].get<bool>()) return u["unit"].get<std::string>();
    FAIL("no live unit");
    return {};
}

struct Session {
    liquid_wallet_t* a = nullptr;
    liquid_wallet_t* b = nullptr;
    liquid_option_t* opt = nullptr;
    liquid_ledger_t* ledger = nullptr;

    Session() {
        REQUIRE(liquid_wallet_create(nullptr, &a) == LIQUID_OK);
        REQUIRE(liquid_wallet_create("llv1", &b) == LIQUID_OK);
        REQUIRE(liquid_option_create("yes", &opt) == LIQUID_OK);
        char* s = nullptr;
        Json regs = Json::array();
        REQUIRE(liquid_wallet_register(a, &s) == LIQUID_OK);
        regs.push_back(take(s));
        REQUIRE(liquid_wallet_register(b, &s) == LIQUID_OK);
        regs.push_back(take(s));
        REQUIRE(liquid_option_public(opt, &s) == LIQUID_OK);
        Json pubs = Json::array({take(s)});
        REQUIRE(liquid_registry_build(pubs.dump().c_str(), &s) == LIQUID_OK);
        auto registry = take(s);
        REQUIRE(liquid_ledger_genesis(regs.dump().c_str(), registry.dump().c_str(), &ledger) == LIQUID_OK);
        REQUIRE(liquid_wallet_sync(a, ledger, nullptr) == LIQUID_OK);
        REQUIRE(liquid_wallet_sync(b, ledger, nullptr) == LIQUID_OK);
    }
    ~Session() {
        liquid_wallet_free(a);
        liquid_wallet_free(b);
        liquid_option_free(opt);
        liquid_ledger_free(ledger);
    }

    /// a delegates its unit to b; returns the delegated output.
    std::string delegate() {
        char* s = nullptr;
        REQUIRE(liquid_wallet_offer_delegation(b, &s) == LIQUID_OK);
        auto offer = take(s);
        CHECK(offer["kind"] == "delegation_offer");
        REQUIRE(liquid_wallet_send(a, first_unit(a, ledger).c_str(), offer.dump().c_str(), &s) == LIQUID_OK);
        auto entry = take(s);
        REQUIRE(liquid_ledger_append(ledger, entry.dump().c_str(), &s) == LIQUID_OK);
        CHECK(take(s)[0]["accepted"] == true);
        REQUIRE(liquid_wallet_sync(b, ledger, &s) == LIQUID_OK);
        CHECK(take(s)["received"].size() == 1);
        REQUIRE(liquid_wallet_sync(a, ledger, nullptr) == LIQUID_OK);
        return entry["output_unit"].get<std::string>();
    }
};

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(liquid_version()).size() > 0);
    CHECK(std::string(liquid_status_name(LIQUID_OK)) == "ok");
    CHECK(std::string(liquid_status_name(LIQUID_E_DECRYPT)) == "decryption_failed");
    CHECK(std::string(liquid_status_name(LIQUID_E_CORRUPT)) == "corrupt");
    CHECK(std::string(liquid_status_name(static_cast<liquid_status>(99))) == "unknown");
    liquid_string_free(nullptr);
}

TEST_CASE("null and malformed arguments") {
    liquid_wallet_t* w = nullptr;
    CHECK(liquid_wallet_create("md5", &w) == LIQUID_E_ARGUMENT);
    CHECK(w == nullptr);
    CHECK(std::strlen(liquid_last_error()) > 0);
    CHECK(liquid_wallet_create(nullptr, nullptr) == LIQUID_E_ARGUMENT);
    CHECK(liquid_wallet_from_mnemonic("abandon abandon", &w) == LIQUID_E_ARGUMENT);
    liquid_ledger_t* l = nullptr;
    CHECK(liquid_ledger_genesis("not json", nullptr, &l) == LIQUID_E_ARGUMENT);
    CHECK(liquid_ledger_genesis("{}", nullptr, &l) == LIQUID_E_ARGUMENT);
    CHECK(liquid_ledger_state(nullptr, nullptr) == LIQUID_E_ARGUMENT);
    char* s = nullptr;
    CHECK(liquid_sim_run("voters: [", nullptr, &s) == LIQUID_E_ARGUMENT);
    CHECK(s == nullptr);
}

TEST_CASE("delegate, reverse and inspect") {
    Session ss;
    auto delegated = ss.delegate();
    char* s = nullptr;

    REQUIRE(liquid_ledger_unit(ss.ledger, delegated.c_str(), &s) == LIQUID_OK);
    auto info = take(s);
    CHECK(info["live"] == true);
    CHECK(info["depth"] == 2);

    SUBCASE("receiver cannot reverse without a stub") {
        CHECK(liquid_wallet_reverse(ss.b, delegated.c_str(), ss.ledger, &s) == LIQUID_E_STATE);
    }
    SUBCASE("sender reclaims") {
        REQUIRE(liquid_wallet_reverse(ss.a, delegated.c_str(), ss.ledger, &s) == LIQUID_OK);
        auto rev = take(s);
        CHECK(rev["type"] == "reversal");
        REQUIRE(liquid_ledger_check(ss.ledger, rev.dump().c_str(), &s) == LIQUID_OK);
        CHECK(take(s)["accepted"] == true);
        REQUIRE(liquid_ledger_append(ss.ledger, rev.dump().c_str(), &s) == LIQUID_OK);
        liquid_string_free(s);
        // Replaying the same reversal is rejected.
        CHECK(liquid_ledger_append(ss.ledger, rev.dump().c_str(), &s) == LIQUID_E_REJECTED);
        CHECK(take(s)[0]["reason"] == "DuplicateOutput");
        REQUIRE(liquid_wallet_sync(ss.a, ss.ledger, nullptr) == LIQUID_OK);
        CHECK(first_unit(ss.a, ss.ledger) == rev["new_output"].get<std::string>());
    }
    SUBCASE("spent and unknown units") {
        REQUIRE(liquid_wallet_offer_delegation(ss.b, &s) == LIQUID_OK);
        auto offer = take(s);
        char* e = nullptr;
        CHECK(liquid_wallet_send(ss.a, std::string(64, 'a').c_str(), offer.dump().c_str(), &e) == LIQUID_E_STATE);
        CHECK(liquid_wallet_send(ss.a, "zz", offer.dump().c_str(), &e) == LIQUID_E_ARGUMENT);
        CHECK(liquid_wallet_send(ss.a, delegated.c_str(), "{\"kind\":\"mystery\"}", &e) == LIQUID_E_ARGUMENT);
        CHECK(e == nullptr);
    }
}

TEST_CASE("transfer through the announce round trip") {
    Session ss;
    char* s = nullptr;
    auto unit = first_unit(ss.a, ss.ledger);
    REQUIRE(liquid_wallet_announce(ss.a, unit.c_str(), &s) == LIQUID_OK);
    auto announce = take(s);
    REQUIRE(liquid_wallet_offer_transfer(ss.b, announce.dump().c_str(), &s) == LIQUID_OK);
    auto offer = take(s);
    REQUIRE(liquid_wallet_send(ss.a, unit.c_str(), offer.dump().c_str(), &s) == LIQUID_OK);
    auto entry = take(s);
    CHECK(entry["output_unit"] == offer["output_unit"]);
    REQUIRE(liquid_ledger_append(ss.ledger, entry.dump().c_str(), &s) == LIQUID_OK);
    liquid_string_free(s);
    REQUIRE(liquid_wallet_units(ss.a, ss.ledger, &s) == LIQUID_OK);
    CHECK(take(s)["stubs"].empty());
}

TEST_CASE("vote, freeze and tally") {
    Session ss;
    char* s = nullptr;
    auto unit = first_unit(ss.b, ss.ledger);
    REQUIRE(liquid_wallet_announce(ss.b, unit.c_str(), &s) == LIQUID_OK);
    auto announce = take(s);
    REQUIRE(liquid_option_vote_offer(ss.opt, announce.dump().c_str(), &s) == LIQUID_OK);
    auto offer = take(s);
    REQUIRE(liquid_wallet_send(ss.b, unit.c_str(), offer.dump().c_str(), &s) == LIQUID_OK);
    auto vote = take(s);
    REQUIRE(liquid_ledger_append(ss.ledger, Json::array({vote}).dump().c_str(), &s) == LIQUID_OK);
    liquid_string_free(s);

    REQUIRE(liquid_option_declare(ss.opt, ss.ledger, &s) == LIQUID_OK);
    auto declared = take(s);
    CHECK(declared["units"].size() == 1);
    Json decl{{"yes", declared["units"]}};
    REQUIRE(liquid_preliminary_tally(ss.ledger, decl.dump().c_str(), &s) == LIQUID_OK);
    CHECK(take(s)["counts"]["yes"] == 1);

    REQUIRE(liquid_option_reveal(ss.opt, ss.ledger, &s) == LIQUID_OK);
    auto reveal = take(s);
    Json reveals = Json::array({reveal});
    CHECK(liquid_tally(ss.ledger, reveals.dump().c_str(), nullptr, &s) == LIQUID_E_STATE);

    REQUIRE(liquid_ledger_finalize(ss.ledger) == LIQUID_OK);
    CHECK(liquid_ledger_finalize(ss.ledger) == LIQUID_E_STATE);
    REQUIRE(liquid_tally(ss.ledger, reveals.dump().c_str(), nullptr, &s) == LIQUID_OK);
    auto result = take(s);
    CHECK(result["counts"]["yes"] == 1);
    CHECK(result["unallocated"] == 1);

    // Frozen ledgers reject everything.
    REQUIRE(liquid_wallet_offer_delegation(ss.b, &s) == LIQUID_OK);
    auto offer2 = take(s);
    REQUIRE(liquid_wallet_send(ss.a, first_unit(ss.a, ss.ledger).c_str(), offer2.dump().c_str(), &s) == LIQUID_OK);
    auto late = take(s);
    CHECK(liquid_ledger_check(ss.ledger, late.dump().c_str(), &s) == LIQUID_E_REJECTED);
    CHECK(take(s)["reason"] == "StateFrozen");
}

TEST_CASE("files") {
    Tmp tmp;
    Session ss;
    ss.delegate();
    char* s = nullptr;

    REQUIRE(liquid_ledger_save(ss.ledger, (tmp / "l.jsonl").c_str()) == LIQUID_OK);
    liquid_ledger_t* back = nullptr;
    REQUIRE(liquid_ledger_load((tmp / "l.jsonl").c_str(), &back) == LIQUID_OK);
    REQUIRE(liquid_ledger_state(back, &s) == LIQUID_OK);
    auto st = take(s);
    REQUIRE(liquid_ledger_state(ss.ledger, &s) == LIQUID_OK);
    CHECK(take(s) == st);
    liquid_ledger_free(back);

    REQUIRE(liquid_ledger_verify_file((tmp / "l.jsonl").c_str(), &s) == LIQUID_OK);
    CHECK(take(s)["consistent"] == true);
    CHECK(liquid_ledger_load((tmp / "missing.jsonl").c_str(), &back) == LIQUID_E_IO);
    {
        std::ofstream(tmp / "l.jsonl", std::ios::app) << "{\"t\":7,\"entries\":[]}\n";
    }
    CHECK(liquid_ledger_load((tmp / "l.jsonl").c_str(), &back) == LIQUID_E_CORRUPT);
    REQUIRE(liquid_ledger_verify_file((tmp / "l.jsonl").c_str(), &s) == LIQUID_E_CORRUPT);
    CHECK(take(s)["consistent"] == false);

    REQUIRE(liquid_wallet_save(ss.a, (tmp / "a.wallet").c_str(), "pw") == LIQUID_OK);
    liquid_wallet_t* w = nullptr;
    CHECK(liquid_wallet_load((tmp / "a.wallet").c_str(), "nope", &w) == LIQUID_E_DECRYPT);
    REQUIRE(liquid_wallet_load((tmp / "a.wallet").c_str(), "pw", &w) == LIQUID_OK);
    char* m1 = nullptr;
    char* m2 = nullptr;
    REQUIRE(liquid_wallet_mnemonic(w, &m1) == LIQUID_OK);
    REQUIRE(liquid_wallet_mnemonic(ss.a, &m2) == LIQUID_OK);
    CHECK(std::string(m1) == std::string(m2));
    liquid_wallet_t* restored = nullptr;
    CHECK(liquid_wallet_from_mnemonic(m1, &restored) == LIQUID_OK);
    liquid_string_free(m1);
    liquid_string_free(m2);
    liquid_wallet_free(restored);
    liquid_wallet_free(w);

    liquid_wallet_t* toy = nullptr;
    REQUIRE(liquid_wallet_create("toy", &toy) == LIQUID_OK);
    CHECK(liquid_wallet_save(toy, (tmp / "toy.wallet").c_str(), "pw") == LIQUID_E_STATE);
    liquid_wallet_free(toy);

    REQUIRE(liquid_option_save(ss.opt, (tmp / "yes.option").c_str()) == LIQUID_OK);
    CHECK((fs::status(tmp / "yes.option").permissions() & fs::perms::group_read) == fs::perms::none);
    liquid_option_t* o = nullptr;
    REQUIRE(liquid_option_load((tmp / "yes.option").c_str(), &o) == LIQUID_OK);
    REQUIRE(liquid_option_public(o, &s) == LIQUID_OK);
    CHECK(take(s)["label"] == "yes");
    liquid_option_free(o);
}

TEST_CASE("simulator") {
    Tmp tmp;
    char* s = nullptr;
    const char* scenario = "seed: 3\nvoters: 4\nactions:\n  - delegate: {from: 0, to: 1}\n";
    REQUIRE(liquid_sim_run(scenario, (tmp / "sim.jsonl").c_str(), &s) == LIQUID_OK);
    auto report = take(s);
    CHECK(report["entries"] == 1);
    REQUIRE(liquid_ledger_verify_file((tmp / "sim.jsonl").c_str(), &s) == LIQUID_OK);
    CHECK(take(s)["state_hash"] == report["state_hash"]);
}

TEST_CASE("verify_file agrees with the replay oracle") {
    fs::path dir = fs::path(LIQUID_TEST_DIR) / "fixtures";
    std::ifstream in(dir / "fixtures.json");
    auto expected = Json::parse(in);
    for (const auto& [name, f] : expected.items()) {
        CAPTURE(name);
        char* s = nullptr;
        REQUIRE(liquid_ledger_verify_file((dir / (name + ".jsonl")).c_str(), &s) == LIQUID_OK);
        auto r = take(s);
        CHECK(r["consistent"] == true);
        CHECK(r["entries"] == f["entries"]);
        CHECK(r["slots"] == f["slots"]);
        CHECK(r["state_hash"] == f["snapshot_hash"]);
    }
}

#pragma once

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "liquid/codec.hpp"
#include "liquid/commitment.hpp"
#include "liquid/crypto.hpp"
#include "liquid/errors.hpp"
#include "liquid/ledger.hpp"
#include "liquid/sim.hpp"
#include "liquid/tally.hpp"
#include "liquid/wallet.hpp"

namespace lt {

using namespace liquid;
namespace fs = std::filesystem;

inline std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in, "cannot open " << p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

inline fs::path data_dir() { return fs::path(LIQUID_TEST_DIR); }

inline const codec::Json& goldens() {
    static const codec::Json j = codec::parse(read_text(data_dir() / "oracle" / "goldens.json"));
    return j;
}

inline const codec::Json& fixtures() {
    static const codec::Json j = codec::parse(read_text(data_dir() / "fixtures" / "fixtures.json"));
    return j;
}

template <class T>
T hx(const codec::Json& j) {
    return T::from_hex(j.get<std::string>());
}

/// Fresh empty directory under the system temp dir.
inline fs::path temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    auto dir = fs::temp_directory_path() /
               ("liquid-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

inline UnitId random_unit(crypto::NonceSource& rng) { return UnitId(rng.next_bytes()); }

/// Deterministic population of voter wallets on a ledger, with helpers that
/// submit one entry per slot and resync every wallet.
struct World {
    crypto::NonceSource rng;
    std::vector<wallet::Wallet> wallets;
    std::vector<tally::OptionEntity> options;
    Ledger ledger;

    World(std::size_t voters, std::size_t units = 1, std::uint64_t seed = 1,
          std::vector<std::string> option_labels = {}, const crypto::Profile& profile = crypto::Profile::llv1)
        : rng(crypto::NonceSource::seeded(seed, profile)),
          wallets(make_wallets(rng, voters)),
          options(make_options(rng, option_labels)),
          ledger(bootstrap(wallets, options, units)) {}

    static std::vector<wallet::Wallet> make_wallets(const crypto::NonceSource& rng, std::size_t n) {
        std::vector<wallet::Wallet> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(wallet::Wallet::create(rng.fork("w" + std::to_string(i))));
        return out;
    }
    static std::vector<tally::OptionEntity> make_options(const crypto::NonceSource& rng,
                                                         const std::vector<std::string>& labels) {
        std::vector<tally::OptionEntity> out;
        for (const auto& l : labels) out.push_back(tally::OptionEntity::create(l, rng.fork("opt" + l)));
        return out;
    }
    static Ledger bootstrap(std::vector<wallet::Wallet>& wallets, const std::vector<tally::OptionEntity>& options,
                            std::size_t units) {
        OptionRegistry reg;
        for (const auto& o : options) reg.add(o.label(), o.public_key());
        std::vector<GenesisRegistration> regs;
        for (auto& w : wallets)
            for (std::size_t u = 0; u < units; ++u) regs.push_back(w.make_registration());
        Ledger l = Ledger::genesis(regs, reg);
        for (auto& w : wallets) w.detect_incoming(l);
        return l;
    }

    UnitId unit_of(std::size_t w, std::size_t k = 0) const {
        auto units = wallets[w].spendable_units(ledger.state());
        REQUIRE(units.size() > k);
        return units[k].unit;
    }

    void sync() {
        for (auto& w : wallets) w.detect_incoming(ledger);
    }

    Verdict submit(const Entry& e) {
        auto v = ledger.append_slot({e});
        sync();
        return v.at(0);
    }

    /// Builds (without submitting) a delegation from -> to.
    std::pair<Transition, DelegationStub> delegation(std::size_t from, std::size_t to, std::size_t k = 0) {
        auto offer = wallets[to].make_delegation_offer();
        return wallets[from].accept_delegation_offer(unit_of(from, k), offer);
    }
    Transition transfer(std::size_t from, std::size_t to, std::size_t k = 0) {
        auto unit = unit_of(from, k);
        auto offer = wallets[to].make_transfer_offer(wallets[from].announce(unit));
        return wallets[from].accept_transfer_offer(unit, offer);
    }
    Transition vote(std::size_t from, std::size_t option, std::size_t k = 0) {
        auto unit = unit_of(from, k);
        auto offer = options[option].request_vote_offer(wallets[from].announce(unit));
        return wallets[from].accept_transfer_offer(unit, offer);
    }

    DelegationStub delegate(std::size_t from, std::size_t to, std::size_t k = 0) {
        auto [t, stub] = delegation(from, to, k);
        REQUIRE(submit(t).accepted());
        return stub;
    }
    /// Delegates a specific unit and returns the stub.
    DelegationStub delegate_unit(std::size_t from, std::size_t to, const UnitId& unit) {
        auto offer = wallets[to].make_delegation_offer();
        auto [t, stub] = wallets[from].accept_delegation_offer(unit, offer);
        REQUIRE(submit(t).accepted());
        return stub;
    }
    UnitId give_unit(std::size_t from, std::size_t to, const UnitId& unit) {
        auto offer = wallets[to].make_transfer_offer(wallets[from].announce(unit));
        auto t = wallets[from].accept_transfer_offer(unit, offer);
        REQUIRE(submit(t).accepted());
        return t.output_unit;
    }
    bool owns_live(std::size_t w, const UnitId& unit) const {
        for (const auto& r : wallets[w].spendable_units(ledger.state()))
            if (r.unit == unit) return true;
        return false;
    }
    void give(std::size_t from, std::size_t to, std::size_t k = 0) { REQUIRE(submit(transfer(from, to, k)).accepted()); }
    Verdict reverse(std::size_t by, const DelegationStub& stub) { return submit(wallets[by].reverse(stub, ledger)); }
};

}  // namespace lt

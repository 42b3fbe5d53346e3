#pragma once

// Deterministic multi-party harness. A scenario names a seed, a population,
// ballot options and an ordered action script; running it twice gives a
// bit-identical ledger. Adversary games read only what an eavesdropper on the
// ledger and the peer channel would see, plus harness-held ground truth used
// solely to score them.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liquid/codec.hpp"
#include "liquid/crypto.hpp"
#include "liquid/ledger.hpp"
#include "liquid/tally.hpp"
#include "liquid/wallet.hpp"

namespace liquid::sim {

enum class ActionKind { Delegate, Transfer, Reverse, Vote, Preliminary, Finalize, Tally, Random };

struct RandomMix {
    double delegate = 0.4;
    double transfer = 0.3;
    double reverse = 0.1;
    double vote = 0.2;
};

struct Action {
    ActionKind kind = ActionKind::Delegate;
    std::size_t from = 0;
    std::size_t to = 0;
    std::string option;
    /// Reverse: which of the actor's stubs (default: most recent).
    std::optional<std::size_t> stub;
    /// Random: number of generated actions.
    std::size_t count = 0;
    RandomMix mix;
};

struct GameConfig {
    bool linker = false;
    std::uint64_t linker_budget = 1u << 20;
    std::size_t linker_trials = 16;
    bool linker_leak = false;
    bool mitm = false;
    std::size_t mitm_attempts = 10000;
    bool reversal_rights = false;
    std::size_t reversal_cases = 1000;
};

struct Scenario {
    std::uint64_t seed = 0;
    std::size_t voters = 0;
    std::vector<std::string> options;
    std::size_t units_per_voter = 1;
    std::size_t slot_size = 1;
    const crypto::Profile* profile = &crypto::Profile::llv1;
    bool intercept = false;
    std::vector<Action> actions;
    GameConfig games;

    /// Throws ConfigError for actors or options outside the population.
    void validate() const;
};

/// Accepts YAML or JSON (JSON is parsed as YAML). Throws ConfigError.
Scenario parse_scenario(std::string_view text);

struct Metrics {
    std::size_t slots = 0;
    std::size_t submitted = 0;
    std::size_t accepted = 0;
    std::size_t skipped = 0;
    std::map<std::string, std::size_t> actions;
    std::map<std::string, std::size_t> verdicts;
    std::map<std::uint32_t, std::size_t> live_depths;
    std::uint32_t max_depth = 0;
    std::size_t conservation_checks = 0;
    bool conservation_held = true;
    bool uniqueness_held = true;
    std::optional<tally::PreliminaryTally> preliminary;
    std::optional<tally::TallyResult> tally;
};

struct Intercepted {
    std::vector<wallet::DelegationOffer> delegation_offers;
    std::vector<wallet::TransferOffer> transfer_offers;
    std::vector<wallet::InputAnnounce> announces;
};

/// What a passive eavesdropper holds: the public ledger, every voter's public
/// keys grouped by voter, the option registry, and intercepted wire traffic.
struct AdversaryView {
    const Ledger* ledger = nullptr;
    const crypto::Profile* profile = &crypto::Profile::llv1;
    std::vector<std::vector<PublicKey>> voter_keys;
    OptionRegistry options;
    Intercepted intercepted;
};

/// Harness-side record of who received each accepted voter-to-voter entry.
struct Delivery {
    UnitId input;
    UnitId output;
    std::size_t receiver = 0;
    Nonce nonce;
};

struct GameReport {
    std::string name;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double baseline = 0.0;
    bool passed = false;
    codec::Json detail = codec::Json::object();
};

class Simulation {
public:
    explicit Simulation(Scenario scenario);

    void execute(const Action& action);
    /// Runs the whole script and flushes any queued entries.
    void run_script();
    /// Submits queued entries as one slot.
    void flush();

    const Scenario& scenario() const { return scenario_; }
    const Ledger& ledger() const { return ledger_; }
    Ledger& ledger() { return ledger_; }
    const Metrics& metrics() const;
    std::vector<wallet::Wallet>& wallets() { return wallets_; }
    const std::vector<wallet::Wallet>& wallets() const { return wallets_; }
    std::vector<tally::OptionEntity>& entities() { return entities_; }
    const std::vector<Delivery>& deliveries() const { return deliveries_; }
    const Intercepted& intercepted() const { return intercepted_; }
    crypto::NonceSource& rng() { return rng_; }

    AdversaryView adversary_view() const;

private:
    struct Pending {
        Entry entry;
        std::vector<std::size_t> involved;
        std::optional<std::size_t> receiver;
    };

    std::optional<UnitId> pick_unit(std::size_t voter);
    void submit(Entry entry, std::vector<std::size_t> involved, std::optional<std::size_t> receiver);
    void delegate(std::size_t from, std::size_t to);
    void transfer(std::size_t from, std::size_t to);
    void reverse(std::size_t by, std::optional<std::size_t> stub);
    void vote(std::size_t from, const std::string& option);
    void random_actions(std::size_t count, const RandomMix& mix);
    void check_invariants();

    Scenario scenario_;
    crypto::NonceSource rng_;
    std::vector<wallet::Wallet> wallets_;
    std::vector<tally::OptionEntity> entities_;
    Ledger ledger_;
    std::vector<Pending> queue_;
    std::vector<UnitId> queued_inputs_;
    std::vector<Delivery> deliveries_;
    Intercepted intercepted_;
    mutable Metrics metrics_;
};

/// Linking game: for each sampled voter-to-voter entry the adversary tries at
/// most `budget` (nonce, public key) guesses to rebuild the output id, then
/// falls back to a uniform guess over voters. With `leak` the true nonce is
/// handed over, removing the hiding.
GameReport game_linker(const AdversaryView& view, const std::vector<Delivery>& truth, std::uint64_t budget,
                       std::size_t trials, crypto::NonceSource rng, bool leak = false);

/// Forgery game: `attempts` submissions built from intercepted traffic and
/// public data, without any honest secret key. Counts acceptances.
GameReport game_mitm(Simulation& sim, std::size_t attempts);

/// Reversal rights matrix over `cases` delegation/transfer pairs.
GameReport game_reversal_rights(std::size_t cases, std::uint64_t seed);

struct RunResult {
    Ledger ledger;
    Metrics metrics;
    std::vector<GameReport> games;
};

RunResult run(const Scenario& scenario);

codec::Json to_json(const Metrics& m);
codec::Json to_json(const GameReport& g);
codec::Json report_json(const Scenario& scenario, const RunResult& result);

}  // namespace liquid::sim

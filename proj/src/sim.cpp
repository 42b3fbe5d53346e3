#include "liquid/sim.hpp"

#include <algorithm>
#include <numeric>

#include "liquid/errors.hpp"

namespace liquid::sim {

namespace {

std::string_view action_name(ActionKind k) {
    switch (k) {
        case ActionKind::Delegate: return "delegate";
        case ActionKind::Transfer: return "transfer";
        case ActionKind::Reverse: return "reverse";
        case ActionKind::Vote: return "vote";
        case ActionKind::Preliminary: return "preliminary";
        case ActionKind::Finalize: return "finalize";
        case ActionKind::Tally: return "tally";
        case ActionKind::Random: return "random";
    }
    return "?";
}

std::vector<wallet::Wallet> make_wallets(const Scenario& s, const crypto::NonceSource& rng) {
    std::vector<wallet::Wallet> out;
    out.reserve(s.voters);
    for (std::size_t i = 0; i < s.voters; ++i)
        out.push_back(wallet::Wallet::create(rng.fork("voter-" + std::to_string(i))));
    return out;
}

std::vector<tally::OptionEntity> make_entities(const Scenario& s, const crypto::NonceSource& rng) {
    std::vector<tally::OptionEntity> out;
    for (const auto& label : s.options) out.push_back(tally::OptionEntity::create(label, rng.fork("option-" + label)));
    return out;
}

Ledger bootstrap(const Scenario& s, std::vector<wallet::Wallet>& wallets,
                 const std::vector<tally::OptionEntity>& entities) {
    OptionRegistry registry;
    for (const auto& e : entities) registry.add(e.label(), e.public_key());
    std::vector<GenesisRegistration> regs;
    for (auto& w : wallets)
        for (std::size_t u = 0; u < s.units_per_voter; ++u) regs.push_back(w.make_registration());
    Ledger ledger = Ledger::genesis(regs, std::move(registry));
    for (auto& w : wallets) w.detect_incoming(ledger);
    return ledger;
}

}  // namespace

void Scenario::validate() const {
    if (slot_size == 0) throw ConfigError("slot_size must be positive");
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const Action& a = actions[i];
        auto where = "action " + std::to_string(i) + " (" + std::string(action_name(a.kind)) + ")";
        auto need_voter = [&](std::size_t v, const char* role) {
            if (v >= voters) throw ConfigError(where + ": " + role + " " + std::to_string(v) + " is not a voter");
        };
        switch (a.kind) {
            case ActionKind::Delegate:
            case ActionKind::Transfer:
                need_voter(a.from, "from");
                need_voter(a.to, "to");
                break;
            case ActionKind::Reverse:
                need_voter(a.from, "by");
                break;
            case ActionKind::Vote:
                need_voter(a.from, "from");
                if (std::find(options.begin(), options.end(), a.option) == options.end())
                    throw ConfigError(where + ": unknown option '" + a.option + "'");
                break;
            case ActionKind::Random:
                if (a.count > 0 && voters < 2) throw ConfigError(where + ": random actions need two voters");
                if (a.mix.delegate < 0 || a.mix.transfer < 0 || a.mix.reverse < 0 || a.mix.vote < 0 ||
                    a.mix.delegate + a.mix.transfer + a.mix.reverse + a.mix.vote <= 0)
                    throw ConfigError(where + ": mix weights must be non-negative with a positive sum");
                break;
            default:
                break;
        }
    }
}

Simulation::Simulation(Scenario scenario)
    : scenario_((scenario.validate(), std::move(scenario))),
      rng_(crypto::NonceSource::seeded(scenario_.seed, *scenario_.profile)),
      wallets_(make_wallets(scenario_, rng_)),
      entities_(make_entities(scenario_, rng_)),
      ledger_(bootstrap(scenario_, wallets_, entities_)) {
    rng_ = rng_.fork("actions");
    check_invariants();
}

const Metrics& Simulation::metrics() const {
    metrics_.slots = ledger_.slots().size();
    metrics_.live_depths.clear();
    metrics_.max_depth = 0;
    for (const auto& u : ledger_.state().live) {
        auto d = ledger_.index().depth(u);
        ++metrics_.live_depths[d];
        metrics_.max_depth = std::max(metrics_.max_depth, d);
    }
    return metrics_;
}

AdversaryView Simulation::adversary_view() const {
    AdversaryView view;
    view.ledger = &ledger_;
    view.profile = scenario_.profile;
    for (const auto& w : wallets_) view.voter_keys.push_back(w.public_keys());
    view.options = ledger_.options();
    if (scenario_.intercept) view.intercepted = intercepted_;
    return view;
}

std::optional<UnitId> Simulation::pick_unit(std::size_t voter) {
    // Newest first, so received power is passed on before the voter's own.
    auto units = wallets_[voter].spendable_units(ledger_.state());
    for (auto it = units.rbegin(); it != units.rend(); ++it)
        if (std::find(queued_inputs_.begin(), queued_inputs_.end(), it->unit) == queued_inputs_.end())
            return it->unit;
    return std::nullopt;
}

void Simulation::submit(Entry entry, std::vector<std::size_t> involved, std::optional<std::size_t> receiver) {
    if (const auto* t = std::get_if<Transition>(&entry)) queued_inputs_.push_back(t->input_unit);
    queue_.push_back({std::move(entry), std::move(involved), receiver});
    if (queue_.size() >= scenario_.slot_size) flush();
}

void Simulation::flush() {
    if (queue_.empty()) return;
    std::vector<Entry> entries;
    entries.reserve(queue_.size());
    for (const auto& p : queue_) entries.push_back(p.entry);
    auto verdicts = ledger_.append_slot(entries);

    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        ++metrics_.submitted;
        const auto& v = verdicts[i];
        ++metrics_.verdicts[v.accepted() ? "accepted" : std::string(to_string(*v.reason))];
        if (!v.accepted()) continue;
        ++metrics_.accepted;
        touched.insert(touched.end(), queue_[i].involved.begin(), queue_[i].involved.end());
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    // Reversals can strand units anywhere downstream, so everybody resyncs.
    bool any_reversal = std::any_of(entries.begin(), entries.end(),
                                    [](const Entry& e) { return std::holds_alternative<Reversal>(e); });
    if (any_reversal) {
        touched.resize(wallets_.size());
        std::iota(touched.begin(), touched.end(), std::size_t{0});
    }
    for (auto w : touched) wallets_[w].detect_incoming(ledger_);

    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const auto& p = queue_[i];
        if (!verdicts[i].accepted() || !p.receiver) continue;
        const auto* t = std::get_if<Transition>(&p.entry);
        if (!t) continue;
        for (const auto& rec : wallets_[*p.receiver].records())
            if (rec.unit == t->output_unit) deliveries_.push_back({t->input_unit, t->output_unit, *p.receiver, rec.nonce});
    }

    queue_.clear();
    queued_inputs_.clear();
    check_invariants();
}

void Simulation::check_invariants() {
    ++metrics_.conservation_checks;
    if (ledger_.state().live.size() != ledger_.genesis_count()) metrics_.conservation_held = false;
    // Every accepted entry adds exactly one id; the placeholder is the extra one.
    if (ledger_.index().all_ids.size() != 1 + ledger_.genesis_count() + ledger_.entry_count())
        metrics_.uniqueness_held = false;
}

void Simulation::delegate(std::size_t from, std::size_t to) {
    auto unit = pick_unit(from);
    if (!unit) {
        ++metrics_.skipped;
        return;
    }
    auto offer = wallets_[to].make_delegation_offer();
    intercepted_.delegation_offers.push_back(offer);
    auto [t, stub] = wallets_[from].accept_delegation_offer(*unit, offer);
    submit(t, {from, to}, to);
}

void Simulation::transfer(std::size_t from, std::size_t to) {
    auto unit = pick_unit(from);
    if (!unit) {
        ++metrics_.skipped;
        return;
    }
    auto announce = wallets_[from].announce(*unit);
    intercepted_.announces.push_back(announce);
    auto offer = wallets_[to].make_transfer_offer(announce);
    intercepted_.transfer_offers.push_back(offer);
    submit(wallets_[from].accept_transfer_offer(*unit, offer), {from, to}, to);
}

void Simulation::reverse(std::size_t by, std::optional<std::size_t> stub_pos) {
    const auto& stubs = wallets_[by].stubs();
    if (stubs.empty()) {
        ++metrics_.skipped;
        return;
    }
    std::size_t pos = stub_pos.value_or(stubs.size() - 1);
    if (pos >= stubs.size()) throw ConfigError("voter " + std::to_string(by) + " has no stub " + std::to_string(pos));
    DelegationStub stub = stubs[pos];
    // A reversal does not name the unit it consumes, and its new output
    // commits to the descendant seen at build time. If that descendant moves
    // within the slot, the reclaimed unit is live but unspendable, so build
    // against settled state and reserve the target.
    auto queued = [&](const UnitId& u) {
        return std::find(queued_inputs_.begin(), queued_inputs_.end(), u) != queued_inputs_.end();
    };
    try {
        auto target = live_descendant(ledger_.index(), ledger_.state(), stub.delegated_output);
        if (target && queued(*target)) flush();
        Reversal r = wallets_[by].reverse(stub, ledger_);
        queued_inputs_.push_back(*live_descendant(ledger_.index(), ledger_.state(), stub.delegated_output));
        submit(std::move(r), {by}, std::nullopt);
    } catch (const StateError&) {
        ++metrics_.skipped;
    }
}

void Simulation::vote(std::size_t from, const std::string& option) {
    auto unit = pick_unit(from);
    if (!unit) {
        ++metrics_.skipped;
        return;
    }
    auto it = std::find_if(entities_.begin(), entities_.end(), [&](const auto& e) { return e.label() == option; });
    if (it == entities_.end()) throw ConfigError("unknown option '" + option + "'");
    auto announce = wallets_[from].announce(*unit);
    intercepted_.announces.push_back(announce);
    auto offer = it->request_vote_offer(announce);
    intercepted_.transfer_offers.push_back(offer);
    submit(wallets_[from].accept_transfer_offer(*unit, offer), {from}, std::nullopt);
}

void Simulation::random_actions(std::size_t count, const RandomMix& mix) {
    const double weights[] = {mix.delegate, mix.transfer, mix.reverse, entities_.empty() ? 0.0 : mix.vote};
    const double total = weights[0] + weights[1] + weights[2] + weights[3];
    if (total <= 0) throw ConfigError("random mix has no positive weight");
    const std::size_t n = wallets_.size();

    for (std::size_t k = 0; k < count; ++k) {
        double r = static_cast<double>(rng_.next_u64() >> 11) * 0x1.0p-53 * total;
        std::size_t kind = 0;
        while (kind < 3 && r >= weights[kind]) r -= weights[kind++];

        // Redraw senders that hold nothing spendable, a bounded number of times.
        std::size_t from = rng_.uniform(n);
        for (int tries = 1; tries < 16 && kind != 2 && !pick_unit(from); ++tries) from = rng_.uniform(n);
        std::size_t to = (from + 1 + rng_.uniform(n - 1)) % n;
        switch (kind) {
            case 0:
                ++metrics_.actions["delegate"];
                delegate(from, to);
                break;
            case 1:
                ++metrics_.actions["transfer"];
                transfer(from, to);
                break;
            case 2: {
                ++metrics_.actions["reverse"];
                std::vector<std::size_t> with_stubs;
                for (std::size_t i = 0; i < n; ++i)
                    if (!wallets_[i].stubs().empty()) with_stubs.push_back(i);
                if (with_stubs.empty()) {
                    ++metrics_.skipped;
                    break;
                }
                std::size_t by = with_stubs[rng_.uniform(with_stubs.size())];
                reverse(by, rng_.uniform(wallets_[by].stubs().size()));
                break;
            }
            default:
                ++metrics_.actions["vote"];
                vote(from, entities_[rng_.uniform(entities_.size())].label());
                break;
        }
    }
}

void Simulation::execute(const Action& a) {
    if (a.kind != ActionKind::Random) ++metrics_.actions[std::string(action_name(a.kind))];
    switch (a.kind) {
        case ActionKind::Delegate: delegate(a.from, a.to); break;
        case ActionKind::Transfer: transfer(a.from, a.to); break;
        case ActionKind::Reverse: reverse(a.from, a.stub); break;
        case ActionKind::Vote: vote(a.from, a.option); break;
        case ActionKind::Random: random_actions(a.count, a.mix); break;
        case ActionKind::Preliminary: {
            flush();
            std::map<std::string, std::set<UnitId>> declared;
            for (const auto& e : entities_) declared[e.label()] = e.declare(ledger_.index());
            metrics_.preliminary = tally::preliminary_tally(ledger_.state(), declared);
            break;
        }
        case ActionKind::Finalize:
            flush();
            if (!ledger_.state().frozen) ledger_.finalize();
            break;
        case ActionKind::Tally: {
            flush();
            if (!ledger_.state().frozen) ledger_.finalize();
            std::vector<tally::VoteReveal> reveals;
            for (const auto& e : entities_) reveals.push_back(e.reveal(ledger_.index()));
            metrics_.tally = tally::verify_tally(ledger_, reveals, ledger_.options());
            break;
        }
    }
}

void Simulation::run_script() {
    for (const auto& a : scenario_.actions) execute(a);
    flush();
}

RunResult run(const Scenario& scenario) {
    Simulation sim(scenario);
    sim.run_script();
    std::vector<GameReport> games;
    const auto& g = scenario.games;
    if (g.linker)
        games.push_back(game_linker(sim.adversary_view(), sim.deliveries(), g.linker_budget, g.linker_trials,
                                    sim.rng().fork("linker"), g.linker_leak));
    if (g.mitm) games.push_back(game_mitm(sim, g.mitm_attempts));
    if (g.reversal_rights) games.push_back(game_reversal_rights(g.reversal_cases, scenario.seed));
    Metrics m = sim.metrics();
    return {sim.ledger(), std::move(m), std::move(games)};
}

codec::Json to_json(const Metrics& m) {
    codec::Json actions = codec::Json::object();
    for (const auto& [k, v] : m.actions) actions[k] = v;
    codec::Json verdicts = codec::Json::object();
    for (const auto& [k, v] : m.verdicts) verdicts[k] = v;
    codec::Json depths = codec::Json::object();
    for (const auto& [d, n] : m.live_depths) depths[std::to_string(d)] = n;
    codec::Json j{{"slots", m.slots},
                  {"submitted", m.submitted},
                  {"accepted", m.accepted},
                  {"skipped", m.skipped},
                  {"actions", actions},
                  {"verdicts", verdicts},
                  {"live_depths", depths},
                  {"max_depth", m.max_depth},
                  {"conservation_checks", m.conservation_checks},
                  {"conservation_held", m.conservation_held},
                  {"uniqueness_held", m.uniqueness_held}};
    if (m.preliminary) j["preliminary"] = tally::to_json(*m.preliminary);
    if (m.tally) j["tally"] = tally::to_json(*m.tally);
    return j;
}

codec::Json to_json(const GameReport& g) {
    return {{"game", g.name},     {"trials", g.trials}, {"successes", g.successes},
            {"baseline", g.baseline}, {"passed", g.passed}, {"detail", g.detail}};
}

codec::Json report_json(const Scenario& scenario, const RunResult& result) {
    codec::Json games = codec::Json::array();
    for (const auto& g : result.games) games.push_back(to_json(g));
    return {{"scenario",
             {{"seed", scenario.seed},
              {"voters", scenario.voters},
              {"options", scenario.options},
              {"units_per_voter", scenario.units_per_voter},
              {"profile", std::string(scenario.profile->name)}}},
            {"state_hash", result.ledger.state().snapshot_hash().hex()},
            {"entries", result.ledger.entry_count()},
            {"metrics", to_json(result.metrics)},
            {"games", games}};
}

}  // namespace liquid::sim

// Scenario files (YAML or JSON):
//
//   seed: 42
//   voters: 100
//   options: [alpha, beta, gamma]
//   units_per_voter: 1
//   slot_size: 1
//   profile: llv1            # or toy
//   intercept: true
//   actions:
//     - delegate: {from: 0, to: 1}
//     - transfer: {from: 1, to: 2}
//     - reverse: {by: 0}     # optional stub: <index>
//     - vote: {from: 2, option: alpha}
//     - random: {count: 500, mix: {delegate: 0.4, transfer: 0.3, reverse: 0.1, vote: 0.2}}
//     - preliminary
//     - finalize
//     - tally
//   games:
//     linker: {budget: 1048576, trials: 16, leak: false}
//     mitm: {attempts: 10000}
//     reversal_rights: {cases: 1000}

#include <yaml-cpp/yaml.h>

#include "liquid/errors.hpp"
#include "liquid/sim.hpp"

namespace liquid::sim {

namespace {

template <class T>
T get_or(const YAML::Node& node, const char* key, T fallback) {
    if (!node || !node[key]) return fallback;
    return node[key].as<T>();
}

std::size_t required_index(const YAML::Node& node, const char* key, std::string_view op) {
    if (!node[key]) throw ConfigError(std::string(op) + " action needs '" + key + "'");
    return node[key].as<std::size_t>();
}

Action parse_action(const YAML::Node& node) {
    Action a;
    std::string op;
    YAML::Node args;
    if (node.IsScalar()) {
        op = node.as<std::string>();
    } else if (node.IsMap() && node.size() == 1) {
        op = node.begin()->first.as<std::string>();
        args = node.begin()->second;
    } else {
        throw ConfigError("each action must be a name or a single-key map");
    }

    if (op == "delegate" || op == "transfer") {
        a.kind = op == "delegate" ? ActionKind::Delegate : ActionKind::Transfer;
        a.from = required_index(args, "from", op);
        a.to = required_index(args, "to", op);
    } else if (op == "reverse") {
        a.kind = ActionKind::Reverse;
        a.from = required_index(args, "by", op);
        if (args["stub"]) a.stub = args["stub"].as<std::size_t>();
    } else if (op == "vote") {
        a.kind = ActionKind::Vote;
        a.from = required_index(args, "from", op);
        if (!args["option"]) throw ConfigError("vote action needs 'option'");
        a.option = args["option"].as<std::string>();
    } else if (op == "random") {
        a.kind = ActionKind::Random;
        a.count = required_index(args, "count", op);
        if (auto mix = args["mix"]) {
            a.mix.delegate = get_or(mix, "delegate", 0.0);
            a.mix.transfer = get_or(mix, "transfer", 0.0);
            a.mix.reverse = get_or(mix, "reverse", 0.0);
            a.mix.vote = get_or(mix, "vote", 0.0);
        }
    } else if (op == "preliminary") {
        a.kind = ActionKind::Preliminary;
    } else if (op == "finalize") {
        a.kind = ActionKind::Finalize;
    } else if (op == "tally") {
        a.kind = ActionKind::Tally;
    } else {
        throw ConfigError("unknown action '" + op + "'");
    }
    return a;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    try {
        YAML::Node root = YAML::Load(std::string(text));
        if (!root.IsMap()) throw ConfigError("scenario must be a mapping");
        Scenario s;
        s.seed = get_or<std::uint64_t>(root, "seed", 0);
        s.voters = get_or<std::size_t>(root, "voters", 0);
        s.units_per_voter = get_or<std::size_t>(root, "units_per_voter", 1);
        s.slot_size = get_or<std::size_t>(root, "slot_size", 1);
        s.intercept = get_or(root, "intercept", false);
        s.profile = &crypto::Profile::by_name(get_or<std::string>(root, "profile", "llv1"));

        if (auto opts = root["options"]) {
            if (opts.IsScalar()) {
                auto n = opts.as<std::size_t>();
                for (std::size_t i = 0; i < n; ++i) s.options.push_back("option-" + std::to_string(i));
            } else {
                for (const auto& o : opts) s.options.push_back(o.as<std::string>());
            }
        }
        if (auto actions = root["actions"])
            for (const auto& a : actions) s.actions.push_back(parse_action(a));

        if (auto games = root["games"]) {
            if (auto g = games["linker"]) {
                s.games.linker = true;
                s.games.linker_budget = get_or<std::uint64_t>(g, "budget", s.games.linker_budget);
                s.games.linker_trials = get_or<std::size_t>(g, "trials", s.games.linker_trials);
                s.games.linker_leak = get_or(g, "leak", false);
            }
            if (auto g = games["mitm"]) {
                s.games.mitm = true;
                s.games.mitm_attempts = get_or<std::size_t>(g, "attempts", s.games.mitm_attempts);
            }
            if (auto g = games["reversal_rights"]) {
                s.games.reversal_rights = true;
                s.games.reversal_cases = get_or<std::size_t>(g, "cases", s.games.reversal_cases);
            }
        }
        s.validate();
        return s;
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("scenario parse error: ") + e.what());
    }
}

}  // namespace liquid::sim

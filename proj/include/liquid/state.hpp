#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "liquid/bytes.hpp"

namespace liquid {

/// The live unit set S_t. `frozen` is set once a tally is finalized.
struct State {
    std::unordered_set<UnitId> live;
    bool frozen = false;

    bool is_live(const UnitId& u) const { return live.contains(u); }
    std::vector<UnitId> sorted_live() const;
    /// SHA-256 over the concatenation of the sorted live set.
    Hash256 snapshot_hash() const;

    friend bool operator==(const State&, const State&) = default;
};

/// Public chain-of-identifiers index rebuilt from the ledger.
struct LineageIndex {
    /// child -> predecessor id (genesis units point at the placeholder).
    std::unordered_map<UnitId, UnitId> parent;
    /// predecessor -> the single unit that consumed it.
    std::unordered_map<UnitId, UnitId> child;
    /// unit -> public key of the Transition sender that consumed it. Units
    /// consumed by reversals are not recorded here.
    std::unordered_map<UnitId, PublicKey> consumed_by_pk;
    /// reversal output -> delegated output of the edge that reversal undid.
    std::unordered_map<UnitId, UnitId> reversal_of;
    /// Every id ever seen, including the genesis placeholder.
    std::unordered_set<UnitId> all_ids;
    std::unordered_map<UnitId, std::uint32_t> stage_depth;

    bool contains(const UnitId& u) const { return all_ids.contains(u); }
    std::optional<UnitId> parent_of(const UnitId& u) const;
    std::uint32_t depth(const UnitId& u) const;
    /// True when `child` was produced by a Transition (not genesis, not a reversal).
    bool is_transition_edge(const UnitId& child) const;
};

/// Follows child edges from `unit` to the live leaf of its lineage.
/// Crossing a reversal edge is allowed only when the edge that reversal undid
/// lies on the walked path (at or below `unit`); otherwise `unit` sits inside
/// a lineage already reclaimed from above and there is no live descendant.
/// Throws StateError if `unit` was never seen.
std::optional<UnitId> live_descendant(const LineageIndex& index, const State& state, const UnitId& unit);

/// Option label -> common-knowledge public key. Entries signed by these keys
/// are discarded by validators.
class OptionRegistry {
public:
    OptionRegistry() = default;

    void add(const std::string& label, const PublicKey& pk);
    bool is_option_key(const PublicKey& pk) const { return by_key_.contains(pk); }
    std::optional<PublicKey> key_of(const std::string& label) const;
    const std::map<std::string, PublicKey>& options() const { return options_; }
    bool empty() const { return options_.empty(); }
    std::size_t size() const { return options_.size(); }

    friend bool operator==(const OptionRegistry& a, const OptionRegistry& b) { return a.options_ == b.options_; }

private:
    std::map<std::string, PublicKey> options_;
    std::unordered_set<PublicKey> by_key_;
};

}  // namespace liquid

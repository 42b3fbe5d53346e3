#pragma once

// Append-only bulletin board. Slot 0 holds genesis registrations; later
// slots hold the accepted Transitions and Reversals in submission order.
// Rejected submissions are reported to the caller and never stored.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "liquid/entries.hpp"
#include "liquid/state.hpp"

namespace liquid {

struct Slot {
    std::uint64_t index = 0;
    std::vector<GenesisRegistration> registrations;
    std::vector<Entry> entries;
    /// Tally finalization marker; set on an otherwise empty slot.
    bool finalized = false;

    friend bool operator==(const Slot&, const Slot&) = default;
};

class Ledger {
public:
    /// Builds slot 0. Throws ConstructionError on duplicate or invalid
    /// registrations.
    static Ledger genesis(const std::vector<GenesisRegistration>& registrations, OptionRegistry options = {});

    /// Validates each entry in order against the evolving state. Returns one
    /// verdict per input entry; only accepted ones enter the new slot. When
    /// the state is frozen every entry is rejected with StateFrozen.
    std::vector<Verdict> append_slot(const std::vector<Entry>& entries);

    /// Validation without mutation.
    Verdict check(const Entry& entry) const;

    /// Closes the reversal window. Throws StateError if already frozen.
    void finalize();

    const State& state() const { return state_; }
    const LineageIndex& index() const { return index_; }
    const OptionRegistry& options() const { return options_; }
    const std::vector<Slot>& slots() const { return slots_; }
    std::size_t genesis_count() const { return genesis_count_; }
    std::size_t entry_count() const;

    /// Rebuilds a ledger from stored slots, re-validating every entry.
    /// Throws ReplayError naming the first bad slot/entry.
    static Ledger from_slots(std::size_t genesis_count, OptionRegistry options, const std::vector<Slot>& slots);

private:
    Ledger() = default;

    void apply_genesis(const GenesisRegistration& g);
    void apply(const Entry& e);

    std::size_t genesis_count_ = 0;
    OptionRegistry options_;
    std::vector<Slot> slots_;
    State state_;
    LineageIndex index_;
};

struct Replayed {
    State state;
    LineageIndex index;
};

/// Deterministic re-execution of every stored slot from genesis.
Replayed replay(const Ledger& ledger);

/// JSON Lines: a header line then one slot object per line.
std::string serialize(const Ledger& ledger);
Ledger parse_ledger(std::string_view text);

void save(const Ledger& ledger, const std::filesystem::path& path);
/// Loads and fully replays. Throws FormatError or ReplayError.
Ledger load(const std::filesystem::path& path);

/// Sorted live unit ids, lowercase hex, one per line.
std::string export_state(const State& state);

}  // namespace liquid

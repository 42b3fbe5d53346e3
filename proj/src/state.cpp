#include "liquid/state.hpp"

#include <algorithm>

#include "liquid/crypto.hpp"
#include "liquid/errors.hpp"

namespace liquid {

std::vector<UnitId> State::sorted_live() const {
    std::vector<UnitId> out(live.begin(), live.end());
    std::sort(out.begin(), out.end());
    return out;
}

Hash256 State::snapshot_hash() const {
    Bytes buf;
    buf.reserve(live.size() * 32);
    for (const auto& u : sorted_live()) append(buf, u.view());
    return crypto::hash(buf);
}

std::optional<UnitId> LineageIndex::parent_of(const UnitId& u) const {
    auto it = parent.find(u);
    if (it == parent.end()) return std::nullopt;
    return it->second;
}

std::uint32_t LineageIndex::depth(const UnitId& u) const {
    auto it = stage_depth.find(u);
    return it == stage_depth.end() ? 0 : it->second;
}

bool LineageIndex::is_transition_edge(const UnitId& child_unit) const {
    auto p = parent.find(child_unit);
    if (p == parent.end() || reversal_of.contains(child_unit)) return false;
    return consumed_by_pk.contains(p->second);
}

std::optional<UnitId> live_descendant(const LineageIndex& index, const State& state, const UnitId& unit) {
    if (!index.contains(unit)) throw StateError("unknown unit " + unit.hex());
    std::unordered_set<UnitId> walked{unit};
    UnitId cur = unit;
    while (!state.is_live(cur)) {
        auto next = index.child.find(cur);
        if (next == index.child.end()) return std::nullopt;
        if (auto rev = index.reversal_of.find(next->second); rev != index.reversal_of.end()) {
            if (!walked.contains(rev->second)) return std::nullopt;
        }
        cur = next->second;
        walked.insert(cur);
    }
    return cur;
}

void OptionRegistry::add(const std::string& label, const PublicKey& pk) {
    if (options_.contains(label)) throw ConfigError("duplicate option label: " + label);
    if (by_key_.contains(pk)) throw ConfigError("duplicate option key for " + label);
    options_.emplace(label, pk);
    by_key_.insert(pk);
}

std::optional<PublicKey> OptionRegistry::key_of(const std::string& label) const {
    auto it = options_.find(label);
    if (it == options_.end()) return std::nullopt;
    return it->second;
}

}  // namespace liquid

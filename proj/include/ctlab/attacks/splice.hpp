#pragma once

#include <map>
#include <vector>

#include "../concepts.hpp"

namespace ctlab {

// History-splicing deviation: identical to the original strategy through
// round b-1; from round b on, behaves as the original would if its type were
// `replacement_type` and its first b-1 received messages had been
// `replacement_history`, keeping the real suffix.
struct SpliceSpec {
    int switch_round = 1;  // b
    Tuple replacement_type;
    std::vector<Message> replacement_history;  // length b-1
};

inline Strategy splice_strategy(const Strategy& sigma, const SpliceSpec& spec) {
    if (static_cast<int>(spec.replacement_history.size()) != spec.switch_round - 1)
        throw std::domain_error("replacement history must have length b-1");
    Strategy s;
    s.randomness = sigma.randomness;
    s.name = sigma.name + "+splice@" + std::to_string(spec.switch_round);
    auto rewrite = [spec](const PlayerView& v) {
        if (v.stage < spec.switch_round) return v;
        PlayerView w = v;
        w.type = spec.replacement_type;
        for (size_t r = 0; r < spec.replacement_history.size() && r < w.inbox.size(); ++r)
            w.inbox[r] = spec.replacement_history[r];
        return w;
    };
    s.send = [sigma, rewrite](const PlayerView& v) { return sigma.send ? sigma.send(rewrite(v)) : Message(); };
    s.act = [sigma, rewrite](const PlayerView& v) -> std::optional<Action> {
        return sigma.act ? sigma.act(rewrite(v)) : std::nullopt;
    };
    return s;
}

// Checks the spec invariant by exact enumeration: the replacement history has
// positive probability for the replacement type under the honest profile.
inline bool splice_history_feasible(const GameSpec& game, const MediatorSpec& mediator,
                                    const std::vector<Strategy>& sigma, int player,
                                    const SpliceSpec& spec, size_t node_budget = 1'000'000) {
    if (spec.switch_round == 1) return true;  // empty history is always realizable
    bool found = false;
    enumerate_executions(game, mediator, sigma, spec.switch_round - 1, node_budget,
                         [&](const NatureAssign&, const TypeProfile& t, const Transcript& tr, const Rat& w) {
                             if (w == 0 || found) return;
                             if (t[static_cast<size_t>(player)] != spec.replacement_type) return;
                             if (static_cast<int>(tr.stages.size()) < spec.switch_round - 1) return;
                             for (int r = 0; r < spec.switch_round - 1; ++r)
                                 if (tr.stages[static_cast<size_t>(r)].from_mediator[static_cast<size_t>(player)] !=
                                     spec.replacement_history[static_cast<size_t>(r)])
                                     return;
                             found = true;
                         });
    return found;
}

}  // namespace ctlab

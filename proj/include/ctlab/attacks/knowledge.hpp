#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "../concepts.hpp"

namespace ctlab {

// Per-round expected maximum posterior each player assigns to the secret,
// computed by exact enumeration of the player's information sets (type,
// received-message prefix). Values are not forced to be monotone; increments
// are reported as-is.
struct KnowledgeReport {
    int horizon = 0;
    std::vector<std::vector<Rat>> values;      // [player][round 0..horizon]
    std::vector<std::vector<Rat>> increments;  // [player][round r] = v[r+1]-v[r]

    // First round b' with increment >= threshold for the player.
    std::optional<int> pigeonhole_round(int player, const Rat& threshold) const {
        for (size_t r = 0; r < increments[static_cast<size_t>(player)].size(); ++r)
            if (increments[static_cast<size_t>(player)][r] >= threshold) return static_cast<int>(r);
        return std::nullopt;
    }
    // First round b' where `player` after b'+1 leads some other player after
    // b' by at least the threshold; returns (round, gap).
    std::optional<std::pair<int, Rat>> gap_round(int player, const Rat& threshold) const {
        for (int r = 0; r + 1 <= horizon; ++r) {
            for (size_t j = 0; j < values.size(); ++j) {
                if (static_cast<int>(j) == player) continue;
                Rat gap = values[static_cast<size_t>(player)][static_cast<size_t>(r + 1)] -
                          values[j][static_cast<size_t>(r)];
                if (gap >= threshold) return std::make_pair(r, gap);
            }
        }
        return std::nullopt;
    }
};

inline KnowledgeReport knowledge_curve(const GameSpec& game, const MediatorSpec& mediator,
                                       const std::vector<Strategy>& sigma_ct,
                                       const std::function<int32_t(const NatureAssign&)>& secret_of,
                                       int horizon, size_t node_budget = 50'000'000) {
    if (horizon < 1) throw std::domain_error("horizon must be >= 1");
    // info set -> per-secret weight
    using Key = std::tuple<int, int, Tuple, std::vector<Message>>;
    std::map<Key, std::map<int32_t, Rat>> info;
    enumerate_executions(game, mediator, sigma_ct, horizon, node_budget,
                         [&](const NatureAssign& na, const TypeProfile& t, const Transcript& tr,
                             const Rat& w) {
                             int32_t sec = secret_of(na);
                             for (int i = 0; i < game.n; ++i) {
                                 std::vector<Message> seen;
                                 for (int r = 0; r <= horizon; ++r) {
                                     if (r > 0) {
                                         size_t idx = static_cast<size_t>(r - 1);
                                         // after termination the view stops growing
                                         if (idx < tr.stages.size())
                                             seen.push_back(
                                                 tr.stages[idx].from_mediator[static_cast<size_t>(i)]);
                                     }
                                     info[{i, r, t[static_cast<size_t>(i)], seen}][sec] += w;
                                 }
                             }
                         });
    KnowledgeReport rep;
    rep.horizon = horizon;
    rep.values.assign(static_cast<size_t>(game.n), std::vector<Rat>(static_cast<size_t>(horizon) + 1, Rat(0)));
    for (auto& [key, secw] : info) {
        auto& [player, round, type, seen] = key;
        Rat total = 0, best = 0;
        for (auto& [sec, w] : secw) {
            total += w;
            if (w > best) best = w;
        }
        (void)type;
        (void)seen;
        rep.values[static_cast<size_t>(player)][static_cast<size_t>(round)] += best;
        (void)total;  // sum over info sets of their weight is 1 per round
    }
    rep.increments.assign(static_cast<size_t>(game.n), {});
    for (int i = 0; i < game.n; ++i)
        for (int r = 0; r < horizon; ++r)
            rep.increments[static_cast<size_t>(i)].push_back(
                rep.values[static_cast<size_t>(i)][static_cast<size_t>(r + 1)] -
                rep.values[static_cast<size_t>(i)][static_cast<size_t>(r)]);
    return rep;
}

// The knowledge-gap deviation: follow sigma_ct through round b'-1, withhold
// every round-b' message (and stay silent after), then act at round b'+1 with
// the posterior-maximizing guess given everything seen. The posterior table
// is precomputed by exact enumeration of the withholding profile itself.
inline Strategy gap_deviation(const GameSpec& game, const MediatorSpec& mediator,
                              const std::vector<Strategy>& sigma_ct,
                              const std::function<int32_t(const NatureAssign&)>& secret_of, int b_prime,
                              int player, const std::function<Action(int32_t)>& encode_guess,
                              size_t node_budget = 50'000'000) {
    if (b_prime < 1) throw std::domain_error("b_prime must be >= 1");
    const Strategy& base = sigma_ct[static_cast<size_t>(player)];

    // the withholding skeleton (no action, used both for the posterior table
    // and as the base of the returned strategy)
    Strategy mute;
    mute.randomness = base.randomness;
    mute.send = [base, b_prime](const PlayerView& v) {
        if (v.stage < b_prime) return base.send ? base.send(v) : Message();
        return Message();
    };

    std::vector<Strategy> probe = sigma_ct;
    probe[static_cast<size_t>(player)] = mute;
    using Key = std::pair<Tuple, std::vector<Message>>;
    std::map<Key, std::map<int32_t, Rat>> posterior;
    enumerate_executions(game, mediator, probe, b_prime + 1, node_budget,
                         [&](const NatureAssign& na, const TypeProfile& t, const Transcript& tr,
                             const Rat& w) {
                             std::vector<Message> seen;
                             for (size_t r = 0; r < tr.stages.size() && r < static_cast<size_t>(b_prime + 1);
                                  ++r)
                                 seen.push_back(tr.stages[r].from_mediator[static_cast<size_t>(player)]);
                             posterior[{t[static_cast<size_t>(player)], seen}][secret_of(na)] += w;
                         });
    auto table = std::make_shared<std::map<Key, int32_t>>();
    for (auto& [key, secw] : posterior) {
        int32_t best_sec = 0;
        Rat best = -1;
        for (auto& [sec, w] : secw)
            if (w > best) {
                best = w;
                best_sec = sec;
            }
        (*table)[key] = best_sec;
    }

    Strategy dev = mute;
    dev.name = base.name + "+gap@" + std::to_string(b_prime);
    dev.act = [table, b_prime, encode_guess](const PlayerView& v) -> std::optional<Action> {
        if (v.stage != b_prime + 1) return std::nullopt;
        auto it = table->find({v.type, v.inbox});
        int32_t guess = it != table->end() ? it->second : 0;
        return encode_guess(guess);
    };
    return dev;
}

}  // namespace ctlab

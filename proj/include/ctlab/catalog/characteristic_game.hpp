#pragma once

#include "bundle.hpp"

namespace ctlab {
namespace catalog {

enum class CharacteristicVariant { WbaPunish, Tripartite };

// The characteristic game: every player picks G ("good") or B ("bad") and,
// with G, also outputs a bit (the wba variant adds a PUNISH output). A good
// outcome needs a quorum of G-players on a common bit that respects unanimous
// inputs; the wba variant has a punishment outcome when enough players
// protest (G-PUNISH or B); everything else is bad. Under u^M the bad outcome
// pays B-players 2M and G-players -2nM (u = u^1).
struct CharacteristicParams {
    int n = 5, k = 1, t = 1;
    Rat M = 2;
    CharacteristicVariant variant = CharacteristicVariant::WbaPunish;
};

namespace detail_char {
constexpr int32_t CHAR_G = 0, CHAR_B = 1;
constexpr int32_t OUT_PUNISH = 2;

inline std::vector<std::vector<int>> tripartite_groups(int n) {
    std::vector<std::vector<int>> g(3);
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i % 3)].push_back(i);
    return g;
}
}  // namespace detail_char

inline GameBundle characteristic_bundle(const CharacteristicParams& prm) {
    const int n = prm.n, k = prm.k, t = prm.t;
    const bool wba = prm.variant == CharacteristicVariant::WbaPunish;
    if (!(2 * k + 2 * t < n && n <= 3 * k + 3 * t))
        throw std::domain_error("characteristic game needs 2k+2t < n <= 3k+3t (got n=" + std::to_string(n) +
                                ", k=" + std::to_string(k) + ", t=" + std::to_string(t) + ")");
    if (wba && prm.M < 1) throw std::domain_error("characteristic game needs M >= 1");

    GameBundle b;
    b.id = wba ? "wba-uM" : "tripartite";
    b.description = wba ? "weak-agreement characteristic game with utility scale M"
                        : "tripartite characteristic game (no punishment exists)";
    b.params = {{"n", n}, {"k", k}, {"t", t}};
    if (wba) b.params["M"] = prm.M;
    b.validity_text = "2k+2t < n <= 3k+3t";

    auto groups = detail_char::tripartite_groups(n);
    if (!wba)
        for (auto& g : groups)
            if (static_cast<int>(g.size()) > k + t)
                throw std::domain_error("tripartite groups must have size <= k+t");

    GameSpec& g = b.game;
    g.n = n;
    g.name = b.id;
    if (wba) {
        for (int i = 0; i < n; ++i) g.types.vars.push_back({"v" + std::to_string(i + 1), Alphabet::uniform(0, 1)});
        g.types.to_types = [n](const NatureAssign& na) {
            TypeProfile tp;
            for (int i = 0; i < n; ++i) tp.push_back({na[static_cast<size_t>(i)]});
            return tp;
        };
    } else {
        for (int c = 0; c < 3; ++c) g.types.vars.push_back({"g" + std::to_string(c + 1), Alphabet::uniform(0, 1)});
        g.types.to_types = [groups, n](const NatureAssign& na) {
            TypeProfile tp(static_cast<size_t>(n));
            for (int c = 0; c < 3; ++c)
                for (int i : groups[static_cast<size_t>(c)]) tp[static_cast<size_t>(i)] = {na[static_cast<size_t>(c)]};
            return tp;
        };
    }
    for (int i = 0; i < n; ++i) {
        g.type_spaces.push_back(Space::labeled("v", {"0", "1"}));
        Space a;
        a.add("char", 2, {"G", "B"});
        a.add("out", wba ? 3 : 2, wba ? std::vector<std::string>{"0", "1", "PUNISH"}
                                      : std::vector<std::string>{"0", "1"});
        g.action_spaces.push_back(a);
        g.default_actions.push_back({detail_char::CHAR_B, 0});
    }

    Rat M = prm.M;
    g.utility = [n, k, t, wba, M](const TypeProfile& tp, const ActionProfile& ap) {
        const int quorum = n - (k + t);
        // good outcome: a quorum of G-players on a common bit v, not
        // contradicting unanimously held inputs
        int certified = -1;
        for (int v = 0; v <= 1 && certified < 0; ++v) {
            int m = 0;
            bool all_inputs_opposite = true;
            for (int i = 0; i < n; ++i) {
                if (ap[static_cast<size_t>(i)][0] == detail_char::CHAR_G && ap[static_cast<size_t>(i)][1] == v) {
                    ++m;
                    if (tp[static_cast<size_t>(i)][0] == v) all_inputs_opposite = false;
                }
            }
            if (m >= quorum && !(all_inputs_opposite && m > 0)) certified = v;
        }
        std::vector<Rat> u(static_cast<size_t>(n));
        if (certified >= 0) {
            for (int i = 0; i < n; ++i)
                u[static_cast<size_t>(i)] = (ap[static_cast<size_t>(i)][0] == detail_char::CHAR_G &&
                                             ap[static_cast<size_t>(i)][1] == certified)
                                                ? 1
                                                : 0;
            return u;
        }
        if (wba) {
            int protest = 0;
            for (int i = 0; i < n; ++i) {
                bool is_b = ap[static_cast<size_t>(i)][0] == detail_char::CHAR_B;
                bool is_gp = ap[static_cast<size_t>(i)][0] == detail_char::CHAR_G &&
                             ap[static_cast<size_t>(i)][1] == detail_char::OUT_PUNISH;
                if (is_b || is_gp) ++protest;
            }
            if (protest >= quorum) {
                for (auto& x : u) x = -1;
                return u;
            }
        }
        for (int i = 0; i < n; ++i)
            u[static_cast<size_t>(i)] = ap[static_cast<size_t>(i)][0] == detail_char::CHAR_B
                                            ? (wba ? Rat(2) * M : Rat(16))
                                            : (wba ? Rat(-2 * n) * M : Rat(0));
        return u;
    };

    // mediator: majority of received bits (ties decide 1), protest when too
    // few values arrive (the tripartite variant sends 0 instead)
    b.mediator.name = "majority";
    b.mediator.rule = [n, k, t, wba](const MediatorView& v) {
        std::vector<Message> out(static_cast<size_t>(n));
        if (v.stage != 1) return out;
        int ones = 0, zeros = 0;
        for (auto& m : v.inputs[0]) {
            if (m == "v:1") ++ones;
            if (m == "v:0") ++zeros;
        }
        std::string msg;
        if (ones + zeros < n - (k + t))
            msg = wba ? "PUNISH" : "rec:0";
        else
            msg = ones >= zeros ? "rec:1" : "rec:0";
        for (auto& m : out) m = msg;
        return out;
    };

    for (int i = 0; i < n; ++i) {
        Strategy s;
        s.name = "truthful";
        s.send = [](const PlayerView& v) {
            if (v.stage != 1) return Message();
            return Message("v:" + std::to_string(v.type[0]));
        };
        s.act = [](const PlayerView& v) -> std::optional<Action> {
            if (v.stage != 1) return std::nullopt;
            const Message& m = v.inbox[0];
            if (m == "PUNISH") return Action{detail_char::CHAR_G, 0};
            if (m == "rec:1") return Action{detail_char::CHAR_G, 1};
            return Action{detail_char::CHAR_G, 0};
        };
        b.sigma.push_back(std::move(s));
    }
    if (wba) {
        b.has_rho = true;
        for (int i = 0; i < n; ++i) b.rho.push_back(UStrategy::constant({detail_char::CHAR_B, 0}, "choose-B"));
    }

    // declared family: single-player constant reports and constant plays
    for (int i = 0; i < n; ++i) {
        for (int lie = 0; lie <= 1; ++lie) {
            Deviation d;
            d.K = {i};
            d.name = "p" + std::to_string(i + 1) + ":report" + std::to_string(lie);
            Strategy base = b.sigma[static_cast<size_t>(i)];
            d.make = [i, lie, base](const std::map<int, Tuple>&) {
                Strategy s = base;
                s.send = [lie](const PlayerView& v) {
                    return v.stage == 1 ? Message("v:" + std::to_string(lie)) : Message();
                };
                return std::map<int, Strategy>{{i, s}};
            };
            b.family.push_back(std::move(d));
        }
        for (int32_t ch = 0; ch <= 1; ++ch)
            for (int32_t o = 0; o < (wba ? 3 : 2); ++o) {
                Deviation d;
                d.K = {i};
                d.name = "p" + std::to_string(i + 1) + ":const(" + (ch ? "B" : "G") + "," + std::to_string(o) + ")";
                Strategy base = b.sigma[static_cast<size_t>(i)];
                d.make = [i, ch, o, base](const std::map<int, Tuple>&) {
                    Strategy s = base;
                    s.act = [ch, o](const PlayerView& v) -> std::optional<Action> {
                        if (v.stage != 1) return std::nullopt;
                        return Action{ch, o};
                    };
                    return std::map<int, Strategy>{{i, s}};
                };
                b.family.push_back(std::move(d));
            }
    }

    b.decision_map = [](const Action& a) {
        // reduction mapping: B and PUNISH both decide 0
        if (a[0] == detail_char::CHAR_B || a[1] == detail_char::OUT_PUNISH) return decision::ZERO;
        return a[1] == 1 ? decision::ONE : decision::ZERO;
    };
    return b;
}

}  // namespace catalog
}  // namespace ctlab

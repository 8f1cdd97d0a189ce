#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "engine.hpp"

namespace ctlab {

// Decisions of agreement problems. BOT marks a player that never decided by
// the round cap; truncation counts against the protocol, never for it.
namespace decision {
constexpr int8_t ZERO = 0;
constexpr int8_t ONE = 1;
constexpr int8_t DETECT = 2;
constexpr int8_t PASS = 3;
constexpr int8_t BOT = 4;

inline std::string show(int8_t d) {
    switch (d) {
        case ZERO: return "0";
        case ONE: return "1";
        case DETECT: return "DETECT";
        case PASS: return "PASS";
        default: return "BOT";
    }
}
}  // namespace decision

enum class ProblemVariant { WBA, DetectAgree, PartialBroadcast };

struct ProblemSpec {
    ProblemVariant variant;
    int n = 0;
    int k = 0;  // used by DetectAgree / PartialBroadcast bounds
    int t = 0;
    int leader = 0;  // PartialBroadcast broadcaster

    std::string name() const {
        switch (variant) {
            case ProblemVariant::WBA: return "wba";
            case ProblemVariant::DetectAgree:
                return "detect-agree(k=" + std::to_string(k) + ",t=" + std::to_string(t) + ")";
            default:
                return "partial-broadcast(k=" + std::to_string(k) + ",t=" + std::to_string(t) + ")";
        }
    }
};

struct Outcome {
    std::vector<int8_t> inputs;      // per-player initial bit (leader-only meaningful for PB)
    std::set<int> byzantine;
    std::map<int, int8_t> decisions;  // recorded only for non-Byzantine players
};

struct Classification {
    bool success = true;
    std::string violated;  // agreement | nontriviality | detection-validity | no-disagreement
};

// Evaluates exactly the success conditions of the variant. Illegal decision
// symbols for the variant raise a domain error. An undecided honest player
// (BOT) fails the condition that obliges a decision for that variant.
inline Classification classify(const ProblemSpec& p, const Outcome& o) {
    if (static_cast<int>(o.inputs.size()) != p.n) throw std::domain_error("outcome shape mismatch");
    for (auto& [i, d] : o.decisions) {
        if (o.byzantine.count(i)) throw std::domain_error("decision recorded for a Byzantine player");
        bool legal = d == decision::ZERO || d == decision::ONE || d == decision::BOT ||
                     (d == decision::DETECT && p.variant == ProblemVariant::DetectAgree) ||
                     (d == decision::PASS && p.variant == ProblemVariant::PartialBroadcast);
        if (!legal)
            throw std::domain_error("decision symbol " + decision::show(d) + " illegal for " + p.name());
    }
    int faults = static_cast<int>(o.byzantine.size());
    auto fail = [](const std::string& cond) { return Classification{false, cond}; };

    std::vector<int> honest;
    for (int i = 0; i < p.n; ++i)
        if (!o.byzantine.count(i)) honest.push_back(i);
    auto dec = [&](int i) {
        auto it = o.decisions.find(i);
        return it == o.decisions.end() ? decision::BOT : it->second;
    };

    switch (p.variant) {
        case ProblemVariant::WBA: {
            // I. Agreement: all non-Byzantine decide the same value in {0,1}.
            for (int i : honest)
                if (dec(i) != decision::ZERO && dec(i) != decision::ONE) return fail("agreement");
            for (size_t i = 1; i < honest.size(); ++i)
                if (dec(honest[i]) != dec(honest[0])) return fail("agreement");
            // II. Weak nontriviality: all non-Byzantine and unanimous inputs.
            if (faults == 0) {
                bool same = true;
                for (int i = 1; i < p.n; ++i) same = same && o.inputs[i] == o.inputs[0];
                if (same && !honest.empty() && dec(honest[0]) != o.inputs[0]) return fail("nontriviality");
            }
            return {};
        }
        case ProblemVariant::DetectAgree: {
            // I. Agreement (<= t faults): common value in {0,1}.
            if (faults <= p.t) {
                for (int i : honest)
                    if (dec(i) != decision::ZERO && dec(i) != decision::ONE) return fail("agreement");
                for (size_t i = 1; i < honest.size(); ++i)
                    if (dec(honest[i]) != dec(honest[0])) return fail("agreement");
            }
            // III. Detection validity (> t faults): all DETECT or common value.
            if (faults > p.t && !honest.empty()) {
                bool all_detect = true, all_value = true;
                for (int i : honest) {
                    all_detect = all_detect && dec(i) == decision::DETECT;
                    all_value = all_value && (dec(i) == decision::ZERO || dec(i) == decision::ONE) &&
                                dec(i) == dec(honest[0]);
                }
                if (!all_detect && !all_value) return fail("detection-validity");
            }
            // II. Nontriviality: unanimous honest inputs, nobody detects.
            if (!honest.empty()) {
                bool same = true, none_detect = true;
                for (int i : honest) {
                    same = same && o.inputs[i] == o.inputs[honest[0]];
                    none_detect = none_detect && dec(i) != decision::DETECT;
                }
                if (same && none_detect)
                    for (int i : honest)
                        if (dec(i) != o.inputs[honest[0]]) return fail("nontriviality");
            }
            return {};
        }
        default: {  // PartialBroadcast
            bool leader_honest = !o.byzantine.count(p.leader);
            // I. Agreement: <= t faults and honest leader -> everyone decides
            // the leader's value.
            if (faults <= p.t && leader_honest) {
                for (int i : honest)
                    if (dec(i) != o.inputs[p.leader]) return fail("agreement");
            }
            // II. No disagreement (<= k+t faults): never both 0 and 1; an
            // undecided honest player also counts as a failure here when the
            // agreement clause did not already apply.
            if (faults <= p.k + p.t) {
                bool saw0 = false, saw1 = false, sawbot = false;
                for (int i : honest) {
                    saw0 = saw0 || dec(i) == decision::ZERO;
                    saw1 = saw1 || dec(i) == decision::ONE;
                    sawbot = sawbot || dec(i) == decision::BOT;
                }
                if ((saw0 && saw1) || sawbot) return fail("no-disagreement");
            }
            return {};
        }
    }
}

// --- synchronous point-to-point execution -------------------------------------

using NetMsg = std::string;

struct ProtoView {
    int round = 0;  // 1-based
    int self = 0;
    int n = 0;
    int8_t input = 0;
    // received[r][from] = message delivered in round r+1
    std::vector<std::map<int, NetMsg>> received;
    std::function<int32_t(int)> draw;  // declared randomness of the current round
};

struct Protocol {
    RandomnessDomain randomness;
    std::function<std::map<int, NetMsg>(const ProtoView&)> send;
    std::function<std::optional<int8_t>(const ProtoView&)> decide;  // called after delivery
    std::string name;
};

// Byzantine controller: produces this round's messages from corrupt players
// to honest ones, given everything honest players sent the corrupt set in
// earlier rounds.
struct AdversaryView {
    int round = 0;
    // honest_to_corrupt[r][{from,to}] = payload (rounds before the current one)
    std::vector<std::map<std::pair<int, int>, NetMsg>> honest_to_corrupt;
    RandomModel* rm = nullptr;
};

struct Adversary {
    std::set<int> corrupt;
    std::function<std::map<std::pair<int, int>, NetMsg>(const AdversaryView&)> send;
    std::string name;
};

struct NetResult {
    std::map<int, int8_t> decisions;  // honest players only; BOT when undecided
    int rounds = 0;
};

// Honest players run `protocol`; the adversary (if any) speaks for its set.
// Tapes are keyed by the given participant keys so harnesses can couple or
// inject randomness deliberately.
inline NetResult run_net(const ProblemSpec& problem, const Protocol& protocol,
                         const std::vector<int8_t>& inputs, const Adversary* adversary, RandomModel& rm,
                         int round_cap,
                         const std::function<std::string(int)>& tape_key = nullptr) {
    int n = problem.n;
    std::vector<ProtoView> views(n);
    std::vector<bool> is_corrupt(n, false);
    if (adversary)
        for (int c : adversary->corrupt) is_corrupt[static_cast<size_t>(c)] = true;
    for (int i = 0; i < n; ++i) {
        views[i].self = i;
        views[i].n = n;
        views[i].input = inputs[static_cast<size_t>(i)];
    }
    AdversaryView aview;
    aview.rm = &rm;
    NetResult res;
    for (int i = 0; i < n; ++i)
        if (!is_corrupt[i]) res.decisions[i] = decision::BOT;

    std::map<std::string, size_t> counters;
    std::map<std::tuple<int, int, int>, int32_t> seen;
    auto binder = [&](int i, int round) {
        return [&, i, round](int slot) -> int32_t {
            const auto& slots = protocol.randomness.slots(round);
            if (slot < 0 || static_cast<size_t>(slot) >= slots.size())
                throw std::domain_error("protocol drew an undeclared randomness slot");
            auto key = std::make_tuple(i, round, slot);
            auto it = seen.find(key);
            if (it != seen.end()) return it->second;
            std::string tk = tape_key ? tape_key(i) : ("p" + std::to_string(i));
            int32_t v = rm.tape(tk).draw(counters[tk]++, slots[static_cast<size_t>(slot)]);
            seen.emplace(key, v);
            return v;
        };
    };

    for (int round = 1; round <= round_cap; ++round) {
        // honest sends
        std::map<std::pair<int, int>, NetMsg> outbox;
        for (int i = 0; i < n; ++i) {
            if (is_corrupt[i]) continue;
            views[i].round = round;
            views[i].draw = binder(i, round);
            auto msgs = protocol.send ? protocol.send(views[i]) : std::map<int, NetMsg>{};
            for (auto& [to, m] : msgs)
                if (to >= 0 && to < n && to != i) outbox[{i, to}] = m;
        }
        // adversary sends (sees honest messages of earlier rounds only)
        aview.round = round;
        std::map<std::pair<int, int>, NetMsg> advout;
        if (adversary && adversary->send) advout = adversary->send(aview);

        // deliver
        aview.honest_to_corrupt.push_back({});
        for (int i = 0; i < n; ++i) {
            if (is_corrupt[i]) continue;
            views[i].received.push_back({});
        }
        for (auto& [ft, m] : outbox) {
            auto [from, to] = ft;
            if (is_corrupt[to])
                aview.honest_to_corrupt.back()[{from, to}] = m;
            else
                views[to].received.back()[from] = m;
        }
        for (auto& [ft, m] : advout) {
            auto [from, to] = ft;
            if (from >= 0 && from < n && is_corrupt[from] && !is_corrupt[to])
                views[to].received.back()[from] = m;
        }
        // decisions
        bool all_decided = true;
        for (int i = 0; i < n; ++i) {
            if (is_corrupt[i]) continue;
            if (res.decisions[i] == decision::BOT && protocol.decide) {
                auto d = protocol.decide(views[i]);
                if (d) res.decisions[i] = *d;
            }
            all_decided = all_decided && res.decisions[i] != decision::BOT;
        }
        res.rounds = round;
        if (all_decided) break;
    }
    return res;
}

// --- translations between game strategies and protocols -------------------------

// Maps a game action to an agreement decision; bundle metadata, since every
// reduction maps game outputs differently.
using DecisionMap = std::function<int8_t(const Action&)>;

// Wraps a cheap-talk strategy profile entry as a protocol: the player's type
// is its initial value, point-to-point messages travel as cheap-talk
// envelopes, and the decision is the mapped action.
inline Protocol protocol_from_strategy(const Strategy& s, int player,
                                       const std::function<Tuple(int8_t)>& embed_input,
                                       const DecisionMap& dmap) {
    Protocol p;
    p.randomness = s.randomness;
    p.name = "from-strategy";
    auto to_view = [player, embed_input](const ProtoView& v) {
        PlayerView pv;
        pv.stage = v.round;
        pv.self = player;
        pv.type = embed_input(v.input);
        pv.draw = v.draw;
        for (auto& perround : v.received) {
            std::vector<std::string> lines;
            for (auto& [from, m] : perround) lines.push_back("from:" + std::to_string(from) + "|" + m);
            pv.inbox.push_back(wire::join(lines, '\n'));
        }
        return pv;
    };
    p.send = [s, to_view](const ProtoView& v) {
        // run_net hands the send phase only earlier rounds, matching the
        // engine's cheap-talk phase order, so views line up one-to-one.
        PlayerView pv = to_view(v);
        std::map<int, NetMsg> out;
        if (!s.send) return out;
        for (auto& line : wire::split(s.send(pv), '\n')) {
            if (line.empty()) continue;
            auto bar = line.find('|');
            if (bar == std::string::npos) continue;
            std::string head = line.substr(0, bar), payload = line.substr(bar + 1);
            if (head.rfind("to:", 0) == 0) out[std::stoi(head.substr(3))] = payload;
            if (head == "bcast")
                for (int j = 0; j < v.n; ++j)
                    if (j != v.self) out[j] = payload;
        }
        return out;
    };
    p.decide = [s, dmap, to_view](const ProtoView& v) -> std::optional<int8_t> {
        if (!s.act) return std::nullopt;
        auto a = s.act(to_view(v));
        if (!a) return std::nullopt;
        return dmap(*a);
    };
    return p;
}

// Wraps a protocol as a cheap-talk strategy that plays a fixed characteristic
// action coordinate: messages follow the protocol, and its decision is
// translated to a game action by `encode`.
inline Strategy strategy_from_protocol(const Protocol& p, int n,
                                       const std::function<int8_t(const Tuple&)>& input_of,
                                       const std::function<Action(int8_t)>& encode) {
    Strategy s;
    s.randomness = p.randomness;
    s.name = "from-protocol(" + p.name + ")";
    auto to_proto_view = [input_of, n](const PlayerView& v) {
        ProtoView pv;
        pv.round = v.stage;
        pv.self = v.self;
        pv.n = n;
        pv.input = input_of(v.type);
        pv.draw = v.draw;
        for (auto& m : v.inbox) {
            std::map<int, NetMsg> perround;
            for (auto& d : wire::parse_deliveries(m)) perround[d.from] = d.payload;
            pv.received.push_back(perround);
        }
        return pv;
    };
    s.send = [p, to_proto_view](const PlayerView& v) {
        ProtoView pv = to_proto_view(v);
        std::vector<std::string> lines;
        if (p.send)
            for (auto& [to, m] : p.send(pv)) lines.push_back(wire::envelope(to, m));
        return wire::join(lines, '\n');
    };
    s.act = [p, encode, to_proto_view](const PlayerView& v) -> std::optional<Action> {
        if (!p.decide) return std::nullopt;
        auto d = p.decide(to_proto_view(v));
        if (!d) return std::nullopt;
        return encode(*d);
    };
    return s;
}

}  // namespace ctlab

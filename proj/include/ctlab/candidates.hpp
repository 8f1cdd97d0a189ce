#pragma once

#include <algorithm>

#include "agreement.hpp"
#include "sharing.hpp"

namespace ctlab {

// Candidate protocols: concrete stand-ins for the universally quantified
// "any protocol" that the adversary constructions are run against. They are
// correct under honest play and deliberately ordinary in design.
namespace candidates {

// Fixed-round echo protocol for the bit-agreement problems: round 1 sends the
// own value to everyone, round 2 echoes what was heard, and the decision at
// round 2 is the majority of the round-1 values (own value included); missing
// senders are skipped, ties decide 1.
inline Protocol echo_majority(int n, bool decide_detect_never = true) {
    (void)decide_detect_never;
    Protocol p;
    p.name = "echo-majority";
    p.send = [n](const ProtoView& v) {
        std::map<int, NetMsg> out;
        if (v.round == 1) {
            for (int j = 0; j < n; ++j)
                if (j != v.self) out[j] = "v:" + std::to_string(static_cast<int>(v.input));
        } else if (v.round == 2) {
            std::string echo = "e:";
            for (auto& [from, m] : v.received[0]) echo += std::to_string(from) + "=" + m + ";";
            for (int j = 0; j < n; ++j)
                if (j != v.self) out[j] = echo;
        }
        return out;
    };
    p.decide = [](const ProtoView& v) -> std::optional<int8_t> {
        if (v.round < 2) return std::nullopt;
        int ones = v.input == 1 ? 1 : 0, zeros = v.input == 0 ? 1 : 0;
        for (auto& [from, m] : v.received[0]) {
            if (m == "v:1") ++ones;
            if (m == "v:0") ++zeros;
        }
        return ones >= zeros ? decision::ONE : decision::ZERO;
    };
    return p;
}

// Echo-majority with a per-round random tag bit mixed into the payloads; the
// tag is ignored by receivers. Exists so randomized-candidate properties
// (view coupling across simulation scenarios) are exercised on real tapes.
inline Protocol noisy_echo_majority(int n) {
    Protocol p = echo_majority(n);
    p.name = "noisy-echo-majority";
    p.randomness = RandomnessDomain::every_stage({Alphabet::uniform(0, 1)});
    auto base_send = p.send;
    p.send = [base_send](const ProtoView& v) {
        auto out = base_send(v);
        int32_t tag = v.draw(0);
        for (auto& [to, m] : out) m += "#" + std::to_string(tag);
        return out;
    };
    p.decide = [](const ProtoView& v) -> std::optional<int8_t> {
        if (v.round < 2) return std::nullopt;
        int ones = v.input == 1 ? 1 : 0, zeros = v.input == 0 ? 1 : 0;
        for (auto& [from, m] : v.received[0]) {
            if (m.rfind("v:1", 0) == 0) ++ones;
            if (m.rfind("v:0", 0) == 0) ++zeros;
        }
        return ones >= zeros ? decision::ONE : decision::ZERO;
    };
    return p;
}

// Naive relay for partial broadcast: the leader sends its value in round 1;
// everyone decides at round 2 on whatever the leader said (PASS if nothing
// intelligible arrived). No echoing, no cross-checking.
inline Protocol naive_relay(int n, int leader = 0) {
    Protocol p;
    p.name = "naive-relay";
    p.send = [n, leader](const ProtoView& v) {
        std::map<int, NetMsg> out;
        if (v.round == 1 && v.self == leader)
            for (int j = 0; j < n; ++j)
                if (j != leader) out[j] = "v:" + std::to_string(static_cast<int>(v.input));
        return out;
    };
    p.decide = [leader](const ProtoView& v) -> std::optional<int8_t> {
        if (v.round < 2) return std::nullopt;
        if (v.self == leader) return v.input == 1 ? decision::ONE : decision::ZERO;
        auto it = v.received[0].find(leader);
        if (it == v.received[0].end()) return decision::PASS;
        if (it->second == "v:0") return decision::ZERO;
        if (it->second == "v:1") return decision::ONE;
        return decision::PASS;
    };
    return p;
}

// --- cheap-talk candidates for the catalog games ------------------------------

// Payload helpers for share claims: "sh:<pt>=<val>;<pt>=<val>;..."
inline std::string encode_claims(const std::vector<ShareClaim>& cs) {
    std::string s = "sh:";
    for (auto& c : cs) s += std::to_string(c.index) + "=" + std::to_string(c.value) + ";";
    return s;
}
inline std::vector<ShareClaim> decode_claims(const std::string& payload) {
    std::vector<ShareClaim> out;
    if (payload.rfind("sh:", 0) != 0) return out;
    for (auto& tok : wire::split(payload.substr(3), ';')) {
        if (tok.empty()) continue;
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        out.push_back({static_cast<uint32_t>(std::stoul(tok.substr(0, eq))),
                       static_cast<uint32_t>(std::stoul(tok.substr(eq + 1)))});
    }
    return out;
}

// Two-round bounded cheap-talk candidate for the three-group secret game:
// stage 1 broadcasts the own share claims, stage 2 decides from the claims the
// two peers sent (they pin the polynomial between them; the own share stays
// private input). Clamps to 0 when the reconstructed secret is not a bit.
// Bounded by construction: every execution takes exactly 2 rounds.
inline std::vector<Strategy> secret_exchange_candidate(const GF& field, int degree,
                                                       const std::vector<std::vector<uint32_t>>& blocks) {
    int n = static_cast<int>(blocks.size());
    std::vector<Strategy> prof;
    for (int i = 0; i < n; ++i) {
        Strategy s;
        s.name = "exchange-and-decide";
        auto my_points = blocks[static_cast<size_t>(i)];
        s.send = [n, my_points](const PlayerView& v) {
            if (v.stage != 1) return Message();
            std::vector<ShareClaim> cs;
            for (size_t k = 0; k < my_points.size(); ++k)
                cs.push_back({my_points[k], static_cast<uint32_t>(v.type[k])});
            std::vector<std::string> lines;
            for (int j = 0; j < n; ++j)
                if (j != v.self) lines.push_back(wire::envelope(j, encode_claims(cs)));
            return wire::join(lines, '\n');
        };
        s.act = [field, degree](const PlayerView& v) -> std::optional<Action> {
            if (v.stage != 2) return std::nullopt;
            std::vector<ShareClaim> got;
            for (auto& d : wire::parse_deliveries(v.inbox[0]))
                for (auto& c : decode_claims(d.payload)) got.push_back(c);
            int32_t out = 0;
            if (static_cast<int>(got.size()) >= degree + 1) {
                try {
                    auto poly = interpolate_agreeing(field, got, degree, static_cast<int>(got.size()));
                    if (poly) {
                        uint32_t sec = poly->eval(0);
                        if (sec <= 1) out = static_cast<int32_t>(sec);
                    }
                } catch (const std::domain_error&) {
                }
            }
            return Action{out};
        };
        prof.push_back(std::move(s));
    }
    return prof;
}

// Two-round reveal candidate for the 2-player guess game: stage 1 sends the
// own share and signature to the partner, stage 2 verifies it against the
// held check values, reconstructs the line and plays its secret. A missing
// or failed reveal falls back to guessing 0.
inline std::vector<Strategy> guess_reveal_candidate(const GF& field) {
    std::vector<Strategy> prof;
    for (int i = 0; i < 2; ++i) {
        Strategy s;
        s.name = "two-round-reveal";
        s.send = [](const PlayerView& v) {
            if (v.stage != 1) return Message();
            return wire::envelope(1 - v.self, "rv:" + std::to_string(v.type[0]) + "," +
                                                  std::to_string(v.type[1]));
        };
        s.act = [field](const PlayerView& v) -> std::optional<Action> {
            if (v.stage != 2) return std::nullopt;
            uint32_t own_pt = static_cast<uint32_t>(v.self + 1), peer_pt = 2 - static_cast<uint32_t>(v.self);
            uint32_t b = static_cast<uint32_t>(v.type[2]), c = static_cast<uint32_t>(v.type[3]);
            for (auto& d : wire::parse_deliveries(v.inbox[0])) {
                if (d.payload.rfind("rv:", 0) != 0) continue;
                auto parts = wire::split(d.payload.substr(3), ',');
                if (parts.size() != 2) continue;
                uint32_t share = static_cast<uint32_t>(std::stoul(parts[0]));
                uint32_t y = static_cast<uint32_t>(std::stoul(parts[1]));
                if (!verify_check(field, share, y, b, c)) continue;
                auto f = interpolate(field, {{own_pt, static_cast<uint32_t>(v.type[0])}, {peer_pt, share}});
                return Action{static_cast<int32_t>(f.eval(0))};
            }
            return Action{0};
        };
        prof.push_back(std::move(s));
    }
    return prof;
}

}  // namespace candidates
}  // namespace ctlab

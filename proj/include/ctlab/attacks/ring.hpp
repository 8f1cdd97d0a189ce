#pragma once

#include <map>
#include <set>
#include <vector>

#include "hexagon.hpp"

namespace ctlab {

// The long ring behind the finite-expected-time impossibility: 6cn positions,
// position q hosting replicas of partition set q mod 3, nearest-neighbor
// delivery, inputs 1 on the quarter arcs around position 0 and 0 on the rest
// (so the input flips at the antipodes). Only a window around the positions
// of interest is ever simulated; corruption from outside a window cannot
// reach its center within the simulated horizon.
struct WbaRing {
    const Partition* part;
    int c = 1;
    int n = 0;

    int positions() const { return 6 * c * n; }
    int wrap(int q) const {
        int P = positions();
        return ((q % P) + P) % P;
    }
    int8_t input_at(int position) const {
        int P = positions();
        int q = wrap(position);
        return (q <= P / 4 || q > P - P / 4) ? 1 : 0;
    }
    int recipient_position(int from_pos, int recipient) const {
        int cset = part->set_of(recipient);
        for (int d = -1; d <= 1; ++d)
            if (wrap(from_pos + d) % 3 == cset) return wrap(from_pos + d);
        throw std::logic_error("ring adjacency broken");
    }
};

enum class RingMode { Omniscient, Guessing };

namespace detail_ring {

struct Replica {
    int position;
    int player;
    ProtoView view;
    std::optional<int8_t> decision;
};

// Honest simulation of a set of ring positions. Messages to positions outside
// the set are reported to `emit`; messages from outside must be injected.
struct RingWindowSim {
    const WbaRing* ring;
    const Protocol* proto;
    RandomModel* rm;
    std::string tape_prefix;      // "ridx" keys tapes by player index only
    bool per_index_tapes = true;  // same-index-same-tape coupling

    std::vector<Replica> replicas;
    std::map<std::pair<int, int>, size_t> index;
    std::map<std::string, size_t> counters;
    std::map<std::tuple<int, int, int, int>, int32_t> seen;

    void add_positions(const std::vector<int>& pos_list, int n_players) {
        for (int q : pos_list) {
            int qq = ring->wrap(q);
            if (index.count({qq, -1})) continue;
            index[{qq, -1}] = SIZE_MAX;  // marks the position as present
            for (int p : ring->part->sets[static_cast<size_t>(qq % 3)]) {
                Replica r;
                r.position = qq;
                r.player = p;
                r.view.self = p;
                r.view.n = n_players;
                r.view.input = ring->input_at(qq);
                index[{qq, p}] = replicas.size();
                replicas.push_back(std::move(r));
            }
        }
    }
    bool has_position(int q) const { return index.count({ring->wrap(q), -1}) > 0; }

    void inject(int round, int to_pos, int to_player, int from_player, const NetMsg& m) {
        auto it = index.find({ring->wrap(to_pos), to_player});
        if (it == index.end() || it->second == SIZE_MAX) return;
        auto& view = replicas[it->second].view;
        while (static_cast<int>(view.received.size()) < round) view.received.push_back({});
        view.received[static_cast<size_t>(round - 1)][from_player] = m;
    }

    // Runs one round of sends for every replica; internal messages are
    // delivered, external ones handed to emit(to_pos, to_player, from, msg).
    template <typename Emit>
    void step(int round, Emit&& emit) {
        std::vector<std::tuple<int, int, int, NetMsg>> internal;
        for (auto& rep : replicas) {
            while (static_cast<int>(rep.view.received.size()) < round - 1) rep.view.received.push_back({});
            rep.view.round = round;
            int pos = rep.position, ply = rep.player;
            rep.view.draw = [this, pos, ply, round](int slot) -> int32_t {
                const auto& slots = proto->randomness.slots(round);
                if (slot < 0 || static_cast<size_t>(slot) >= slots.size())
                    throw std::domain_error("replica drew an undeclared slot");
                int tape_dim = per_index_tapes ? 0 : pos;
                auto key = std::make_tuple(tape_dim, ply, round, slot);
                auto it = seen.find(key);
                if (it != seen.end()) return it->second;
                std::string tk = tape_prefix + (per_index_tapes ? "" : ":" + std::to_string(pos)) + ":" +
                                 std::to_string(ply);
                int32_t v = rm->tape(tk).draw(counters[tk]++, slots[static_cast<size_t>(slot)]);
                seen.emplace(key, v);
                return v;
            };
            if (!proto->send) continue;
            for (auto& [to, m] : proto->send(rep.view)) {
                if (to == rep.player) continue;
                int to_pos = ring->recipient_position(rep.position, to);
                if (has_position(to_pos) && index.count({to_pos, to}))
                    internal.push_back({to_pos, to, rep.player, m});
                else
                    emit(to_pos, to, rep.player, m);
            }
        }
        for (auto& [to_pos, to, from, m] : internal) inject(round, to_pos, to, from, m);
        // decisions after delivery
        for (auto& rep : replicas) {
            if (rep.decision || !proto->decide) continue;
            while (static_cast<int>(rep.view.received.size()) < round) rep.view.received.push_back({});
            auto d = proto->decide(rep.view);
            if (d) rep.decision = d;
        }
    }
};

inline std::vector<int> arc(const WbaRing& ring, int lo, int hi) {
    std::vector<int> out;
    for (int q = lo; q <= hi; ++q) out.push_back(ring.wrap(q));
    return out;
}

}  // namespace detail_ring

// The ring adversary for scenario S_lo (honest nodes lo, lo+1): replays the
// complement of the scenario within a light-cone window. Omniscient mode keys
// replica tapes by player index, the same keys the harness hands the real
// players, which realizes the same-index-same-tape coupling directly;
// guessing mode draws fresh tapes, succeeding when they happen to match.
inline Adversary wba_ring_adversary(const Protocol& P, const Partition& part, const WbaRing& ring,
                                    int lo, int n, RingMode mode, int round_cap) {
    Adversary adv;
    adv.name = "wba-ring@" + std::to_string(lo);
    int faulty_set = ring.wrap(lo + 2) % 3;
    for (int p : part.sets[static_cast<size_t>(faulty_set)]) adv.corrupt.insert(p);

    auto sim = std::make_shared<detail_ring::RingWindowSim>();
    sim->ring = &ring;
    sim->proto = &P;
    sim->tape_prefix = mode == RingMode::Omniscient ? "ridx" : "rguess";
    int radius = round_cap + 2;
    sim->add_positions(detail_ring::arc(ring, lo + 2, lo + 2 + radius), n);
    sim->add_positions(detail_ring::arc(ring, lo - 1 - radius, lo - 1), n);

    auto fed = std::make_shared<int>(0);
    adv.send = [sim, fed, &P, part, ring, lo, n](const AdversaryView& av) {
        sim->rm = av.rm;
        while (*fed < static_cast<int>(av.honest_to_corrupt.size())) {
            for (auto& [ft, m] : av.honest_to_corrupt[static_cast<size_t>(*fed)]) {
                auto [from, to] = ft;
                int from_pos = part.set_of(from) == ring.wrap(lo) % 3 ? ring.wrap(lo) : ring.wrap(lo + 1);
                sim->inject(*fed + 1, ring.recipient_position(from_pos, to), to, from, m);
            }
            ++*fed;
        }
        std::map<std::pair<int, int>, NetMsg> out;
        sim->step(av.round, [&](int to_pos, int to, int from, const NetMsg& m) {
            if (to_pos == ring.wrap(lo) || to_pos == ring.wrap(lo + 1)) out[{from, to}] = m;
        });
        return out;
    };
    return adv;
}

struct RingDemoResult {
    long runs = 0;
    long failures = 0;
    long event_hits = 0;  // both antipodal scenarios decide within the horizon
    double failure_rate = 0.0;
    double event_rate = 0.0;
    double halfwidth = 0.0;
};

// Seeded demonstration on the boundary scenario (ring position P/4, where the
// prescribed inputs flip): the real honest pair runs the protocol with random
// inputs while the faulty set replays the ring. Separately, the closed
// all-honest ring is simulated around S_1 and S_{3cn} and the event that both
// decide within `horizon` rounds is counted.
inline RingDemoResult wba_ring_demo(const Protocol& P, const Partition& part, int c, RingMode mode,
                                    long runs, uint64_t seed, int round_cap, int horizon) {
    int n = 0;
    for (auto& s : part.sets) n += static_cast<int>(s.size());
    WbaRing ring{&part, c, n};
    ProblemSpec problem{ProblemVariant::WBA, n, 0, 0, 0};
    int lo = ring.positions() / 4;  // inputs flip between lo and lo+1

    RingDemoResult res;
    res.runs = runs;
    RandomModel master(seed);
    Alphabet bit = Alphabet::uniform(0, 1);
    for (long r = 0; r < runs; ++r) {
        RandomModel rm = master.fork(static_cast<uint64_t>(r));
        std::vector<int8_t> inputs(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            inputs[static_cast<size_t>(i)] = static_cast<int8_t>(rm.tape("inputs").draw(static_cast<size_t>(i), bit));

        Adversary adv = wba_ring_adversary(P, part, ring, lo, n, mode, round_cap);
        // Real players draw from the per-index tapes the omniscient adversary
        // reuses for their far-away replicas.
        auto tape_key = [](int i) { return "ridx:" + std::to_string(i); };
        NetResult nr = run_net(problem, P, inputs, &adv, rm, round_cap, tape_key);
        Outcome o;
        o.inputs = inputs;
        o.byzantine = adv.corrupt;
        o.decisions = nr.decisions;
        if (!classify(problem, o).success) ++res.failures;

        // event E on the closed honest ring
        detail_ring::RingWindowSim sim;
        sim.ring = &ring;
        sim.proto = &P;
        sim.rm = &rm;
        sim.tape_prefix = "ridx";
        int radius = horizon + 2;
        sim.add_positions(detail_ring::arc(ring, 1 - radius, 2 + radius), n);
        int far = ring.positions() / 2;
        sim.add_positions(detail_ring::arc(ring, far - radius, far + 1 + radius), n);
        for (int round = 1; round <= horizon; ++round) sim.step(round, [](int, int, int, const NetMsg&) {});
        bool all = true;
        for (auto& rep : sim.replicas) {
            bool watched = rep.position == 1 || rep.position == 2 || rep.position == ring.wrap(far) ||
                           rep.position == ring.wrap(far + 1);
            if (watched && !rep.decision) all = false;
        }
        if (all) ++res.event_hits;
    }
    res.failure_rate = static_cast<double>(res.failures) / static_cast<double>(runs);
    res.event_rate = static_cast<double>(res.event_hits) / static_cast<double>(runs);
    res.halfwidth = hoeffding_halfwidth(runs);
    return res;
}

}  // namespace ctlab

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "engine.hpp"

namespace ctlab {

// Restriction of the type profile to a player subset: conditioning event for
// expected utilities. Empty = no conditioning.
struct TypeRestriction {
    std::map<int, Tuple> fixed;

    bool matches(const TypeProfile& t) const {
        for (auto& [i, ty] : fixed)
            if (t[static_cast<size_t>(i)] != ty) return false;
        return true;
    }
    bool empty() const { return fixed.empty(); }
    std::string show(const GameSpec& g) const {
        if (fixed.empty()) return "unconditional";
        std::string s;
        for (auto& [i, ty] : fixed) {
            if (!s.empty()) s += ", ";
            s += "t" + std::to_string(i + 1) + "=" + g.type_spaces[static_cast<size_t>(i)].show(ty);
        }
        return s;
    }
    bool operator<(const TypeRestriction& o) const { return fixed < o.fixed; }
};

struct EvalSettings {
    size_t node_budget = 50'000'000;
    int round_cap = 16;
};

namespace detail {

// One exact pass: expected utilities bucketed by the joint type of `who`
// (all-players weights and sums per bucket). The empty subset gives a single
// unconditional bucket.
struct Buckets {
    std::map<TypeRestriction, std::pair<Rat, std::vector<Rat>>> at;  // weight, sum of w*u
};

inline Buckets bucketed_utilities(const GameSpec& game, const MediatorSpec& mediator,
                                  const ProfileBuilder& builder, const std::vector<int>& who,
                                  const EvalSettings& s) {
    Buckets b;
    enumerate_executions_built(game, mediator, builder, s.round_cap, s.node_budget,
                               [&](const NatureAssign&, const TypeProfile& t, const Transcript& tr,
                                   const Rat& w) {
                                   TypeRestriction key;
                                   for (int i : who) key.fixed[i] = t[static_cast<size_t>(i)];
                                   auto& slot = b.at[key];
                                   if (slot.second.empty()) slot.second.assign(game.n, Rat(0));
                                   slot.first += w;
                                   std::vector<Rat> u = game.utility(t, tr.final_actions);
                                   for (int i = 0; i < game.n; ++i) slot.second[i] += w * u[i];
                               });
    return b;
}

}  // namespace detail

// Exact conditional expected utilities of every player under the profile.
// Throws std::domain_error when the conditioning event has zero probability.
inline std::vector<Rat> expected_utilities(const GameSpec& game, const MediatorSpec& mediator,
                                           const ProfileBuilder& builder, const TypeRestriction& cond,
                                           const EvalSettings& s = {}) {
    Rat total = 0;
    std::vector<Rat> acc(game.n, Rat(0));
    enumerate_executions_built(game, mediator, builder, s.round_cap, s.node_budget,
                               [&](const NatureAssign&, const TypeProfile& t, const Transcript& tr,
                                   const Rat& w) {
                                   if (!cond.matches(t)) return;
                                   total += w;
                                   std::vector<Rat> u = game.utility(t, tr.final_actions);
                                   for (int i = 0; i < game.n; ++i) acc[i] += w * u[i];
                               });
    if (total == 0) throw std::domain_error("conditioning event has zero probability");
    for (auto& v : acc) v /= total;
    return acc;
}

inline Rat expected_utility(const GameSpec& game, const MediatorSpec& mediator,
                            const std::vector<Strategy>& profile, int player,
                            const TypeRestriction& cond = {}, const EvalSettings& s = {}) {
    return expected_utilities(game, mediator, fixed_profile(profile), cond, s)[player];
}

// Monte Carlo estimate of per-player expected utilities, with the Hoeffding
// half-width scaled by the utility range observed.
struct UtilityEstimate {
    std::vector<double> mean;
    double halfwidth = 1.0;
    long samples = 0;
};

inline UtilityEstimate estimate_utilities(const GameSpec& game, const MediatorSpec& mediator,
                                          const ProfileBuilder& builder, long samples, uint64_t seed,
                                          int round_cap) {
    if (samples < 1) throw std::domain_error("samples must be >= 1");
    UtilityEstimate est;
    est.samples = samples;
    est.mean.assign(game.n, 0.0);
    double lo = 0, hi = 0;
    bool first = true;
    RandomModel master(seed);
    for (long k = 0; k < samples; ++k) {
        RandomModel rm = master.fork(static_cast<uint64_t>(k));
        TypeProfile types = game.types.sample(rm.tape("nature"));
        std::vector<Strategy> prof = builder(types);
        Transcript tr = run_execution_with_types(game, mediator, prof, types, rm, round_cap);
        std::vector<Rat> u = game.utility(types, tr.final_actions);
        for (int i = 0; i < game.n; ++i) {
            double v = to_double(u[i]);
            est.mean[i] += v;
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        }
    }
    for (auto& m : est.mean) m /= static_cast<double>(samples);
    est.halfwidth = (hi - lo) * hoeffding_halfwidth(samples);
    return est;
}

// --- implementation distance -------------------------------------------------

struct ImplementsReport {
    bool verdict = false;
    Rat max_distance = 0;
    TypeProfile worst_type;
    bool exact = true;
};

// Total-variation distance between two induced maps, maximized over type
// profiles; verdict true iff it stays within tol. Estimates contribute their
// empirical (still rational) frequencies, so the distance is always exact
// arithmetic on whatever the maps contain.
inline ImplementsReport implements(const ActionMap& a, const ActionMap& b, const Rat& tol) {
    ImplementsReport rep;
    rep.exact = a.exact && b.exact;
    std::set<TypeProfile> keys;
    for (auto& [t, _] : a.dist) keys.insert(t);
    for (auto& [t, _] : b.dist) keys.insert(t);
    if (keys.empty()) throw std::domain_error("implements: empty maps");
    for (auto& t : keys) {
        auto ita = a.dist.find(t), itb = b.dist.find(t);
        if (ita == a.dist.end() || itb == b.dist.end())
            throw std::domain_error("implements: maps defined on different type spaces");
        std::set<ActionProfile> acts;
        for (auto& [ap, _] : ita->second) acts.insert(ap);
        for (auto& [ap, _] : itb->second) acts.insert(ap);
        Rat l1 = 0;
        for (auto& ap : acts) {
            Rat pa = a.prob(t, ap), pb = b.prob(t, ap);
            l1 += pa >= pb ? pa - pb : pb - pa;
        }
        Rat tv = l1 / 2;
        if (tv > rep.max_distance) {
            rep.max_distance = tv;
            rep.worst_type = t;
        }
    }
    rep.verdict = rep.max_distance <= tol;
    return rep;
}

// --- deviations ----------------------------------------------------------------

// A coalition deviation: players in K (rational) and T (unknown utility) are
// replaced by strategies that may consult the coalition's joint types; the
// shared-information channel CT(K u T) is modeled by handing the builder the
// joint type restriction directly.
struct Deviation {
    std::vector<int> K;
    std::vector<int> T;
    std::function<std::map<int, Strategy>(const std::map<int, Tuple>&)> make;
    std::string name;
    // When set, evaluation composes the game mediator with CT channels for the
    // deviating set (and with CT(T) for the baseline), per the extension the
    // solution concept quantifies over.
    bool use_ct_channels = false;
};

struct GainRow {
    int player;
    TypeRestriction conditioning;
    Rat baseline;
    Rat deviating;
    Rat gain;  // deviating - baseline
};

struct GainReport {
    std::vector<GainRow> rows;
    bool verdict = false;  // meaning depends on the operation
    std::string note;

    Rat min_gain() const {
        Rat m = rows.empty() ? Rat(0) : rows[0].gain;
        for (auto& r : rows) m = std::min(m, r.gain);
        return m;
    }
    Rat max_gain() const {
        Rat m = rows.empty() ? Rat(0) : rows[0].gain;
        for (auto& r : rows) m = std::max(m, r.gain);
        return m;
    }
};

namespace detail {

inline ProfileBuilder overlay(const std::vector<Strategy>& sigma, const Deviation& dev, bool include_K) {
    return [&sigma, &dev, include_K](const TypeProfile& types) {
        std::map<int, Tuple> joint;
        for (int i : dev.K) joint[i] = types[static_cast<size_t>(i)];
        for (int i : dev.T) joint[i] = types[static_cast<size_t>(i)];
        std::map<int, Strategy> repl = dev.make(joint);
        std::vector<Strategy> prof = sigma;
        for (int i : dev.T) {
            auto it = repl.find(i);
            if (it != repl.end()) prof[static_cast<size_t>(i)] = it->second;
        }
        if (include_K)
            for (int i : dev.K) {
                auto it = repl.find(i);
                if (it != repl.end()) prof[static_cast<size_t>(i)] = it->second;
            }
        return prof;
    };
}

}  // namespace detail

// t-immunity probe: for each player outside T and each positive-probability
// own type, the change in expected utility when T switches to tau. Verdict
// true iff nothing drops (all gains >= 0).
inline GainReport immunity_gain(const GameSpec& game, const MediatorSpec& mediator,
                                const std::vector<Strategy>& sigma, const Deviation& dev,
                                const EvalSettings& s = {}) {
    GainReport rep;
    if (!dev.K.empty()) throw std::domain_error("immunity_gain expects a T-only deviation");
    std::set<int> inT(dev.T.begin(), dev.T.end());
    MediatorSpec med_T = dev.use_ct_channels ? with_coalition_channels(mediator, dev.T) : mediator;
    rep.verdict = true;
    for (int i = 0; i < game.n; ++i) {
        if (inT.count(i)) continue;
        auto honest = detail::bucketed_utilities(game, mediator, fixed_profile(sigma), {i}, s);
        auto devd = detail::bucketed_utilities(game, med_T, detail::overlay(sigma, dev, false), {i}, s);
        for (auto& [cond, slot] : honest.at) {
            if (slot.first == 0) continue;
            Rat base = slot.second[static_cast<size_t>(i)] / slot.first;
            auto& dslot = devd.at.at(cond);
            Rat devu = dslot.second[static_cast<size_t>(i)] / dslot.first;
            rep.rows.push_back({i, cond, base, devu, devu - base});
            if (devu < base) rep.verdict = false;
        }
    }
    return rep;
}

enum class ResilienceMode { Plain, Strong };

struct RobustnessOptions {
    Rat epsilon = 0;
    ResilienceMode mode = ResilienceMode::Plain;
    // Per the solution concept, gains are conditioned on each
    // positive-probability joint type of K u T (baseline on t_i alone). The
    // unconditional mode reports plain expectations instead.
    bool condition_on_joint_types = true;
    EvalSettings eval;
};

// Gains of the coalition K (with T's help) from playing tau against sigma.
// Baseline for i in K is its utility when only T deviates. Verdict true iff
// the deviation "succeeds": some conditioning where all (Plain) / some
// (Strong) members of K gain strictly more than epsilon. Rows report the
// conditioning with the best verdict-relevant gain.
inline GainReport robustness_gain(const GameSpec& game, const MediatorSpec& mediator,
                                  const std::vector<Strategy>& sigma, const Deviation& dev,
                                  const RobustnessOptions& opt = {}) {
    GainReport rep;
    if (dev.K.empty()) throw std::domain_error("robustness_gain expects a nonempty coalition K");

    std::vector<int> kt = dev.K;
    kt.insert(kt.end(), dev.T.begin(), dev.T.end());
    std::vector<int> joint_key = opt.condition_on_joint_types ? kt : std::vector<int>{};
    MediatorSpec med_KT = dev.use_ct_channels ? with_coalition_channels(mediator, kt) : mediator;
    MediatorSpec med_T = dev.use_ct_channels ? with_coalition_channels(mediator, dev.T) : mediator;

    auto devb = detail::bucketed_utilities(game, med_KT, detail::overlay(sigma, dev, true), joint_key,
                                           opt.eval);
    // Baselines bucket by each coalition member's own type.
    std::map<int, detail::Buckets> base;
    for (int i : dev.K) {
        std::vector<int> own = opt.condition_on_joint_types ? std::vector<int>{i} : std::vector<int>{};
        base.emplace(i, detail::bucketed_utilities(game, med_T, detail::overlay(sigma, dev, false),
                                                   own, opt.eval));
    }

    rep.verdict = false;
    std::optional<Rat> best;
    for (auto& [cond, slot] : devb.at) {
        if (slot.first == 0) continue;
        std::vector<GainRow> rows;
        bool all = true, any = false;
        std::optional<Rat> crit;
        for (int i : dev.K) {
            Rat devu = slot.second[static_cast<size_t>(i)] / slot.first;
            TypeRestriction own;
            if (opt.condition_on_joint_types) own.fixed[i] = cond.fixed.at(i);
            auto& bslot = base.at(i).at.at(own);
            Rat baseu = bslot.second[static_cast<size_t>(i)] / bslot.first;
            Rat gain = devu - baseu;
            rows.push_back({i, cond, baseu, devu, gain});
            all = all && gain > opt.epsilon;
            any = any || gain > opt.epsilon;
            if (!crit)
                crit = gain;
            else
                crit = opt.mode == ResilienceMode::Plain ? std::min(*crit, gain) : std::max(*crit, gain);
        }
        if (opt.mode == ResilienceMode::Plain ? all : any) rep.verdict = true;
        if (!best || *crit > *best) {
            best = *crit;
            rep.rows = rows;
        }
    }
    return rep;
}

// --- punishment ------------------------------------------------------------------

// One-shot strategies in the underlying game (no mediator): an action as a
// function of own type and one optional randomness draw.
struct UStrategy {
    Alphabet randomness;  // empty/singleton = deterministic
    std::function<Action(const Tuple& type, int32_t draw)> act;
    std::string name;

    static UStrategy constant(Action a, std::string name = "constant") {
        UStrategy u;
        u.act = [a](const Tuple&, int32_t) { return a; };
        u.name = std::move(name);
        return u;
    }
};

// Coalition plan in the underlying game with shared type information (CT(K)).
using CoalitionPlan = std::function<std::map<int, Action>(const std::map<int, Tuple>&)>;

// One exact pass over nature and punisher randomness: per joint-type-of-K
// bucket, total weight and per-player utility sums.
inline std::map<TypeRestriction, std::pair<Rat, std::vector<Rat>>> underlying_bucketed(
    const GameSpec& game, const std::vector<UStrategy>& rho, const std::vector<int>& K,
    const CoalitionPlan& phi) {
    std::set<int> inK(K.begin(), K.end());
    std::map<TypeRestriction, std::pair<Rat, std::vector<Rat>>> buckets;
    game.types.enumerate([&](const NatureAssign& na, const Rat& wt) {
        if (wt == 0) return true;
        TypeProfile t = game.types.to_types(na);
        TypeRestriction key;
        std::map<int, Tuple> joint;
        for (int i : K) {
            joint[i] = t[static_cast<size_t>(i)];
            key.fixed[i] = t[static_cast<size_t>(i)];
        }
        std::map<int, Action> planned;
        if (!K.empty()) planned = phi(joint);

        std::vector<int> randomized;
        for (int i = 0; i < game.n; ++i)
            if (!inK.count(i) && rho[static_cast<size_t>(i)].randomness.entries.size() > 1)
                randomized.push_back(i);
        std::vector<size_t> idx(randomized.size(), 0);
        auto& slot = buckets[key];
        if (slot.second.empty()) slot.second.assign(game.n, Rat(0));
        while (true) {
            Rat w = wt;
            ActionProfile a(game.n);
            size_t r = 0;
            for (int i = 0; i < game.n; ++i) {
                if (inK.count(i)) {
                    a[static_cast<size_t>(i)] = planned.at(i);
                } else {
                    const auto& rs = rho[static_cast<size_t>(i)];
                    int32_t draw = 0;
                    if (rs.randomness.entries.size() > 1) {
                        auto& e = rs.randomness.entries[idx[r]];
                        draw = e.first;
                        w *= e.second;
                        ++r;
                    } else if (rs.randomness.entries.size() == 1) {
                        draw = rs.randomness.entries[0].first;
                    }
                    a[static_cast<size_t>(i)] = rs.act(t[static_cast<size_t>(i)], draw);
                }
            }
            slot.first += w;
            std::vector<Rat> u = game.utility(t, a);
            for (int i = 0; i < game.n; ++i) slot.second[i] += w * u[i];
            size_t j = randomized.size();
            while (j > 0 &&
                   idx[j - 1] + 1 == rho[static_cast<size_t>(randomized[j - 1])].randomness.entries.size())
                --j;
            if (j == 0) break;
            ++idx[j - 1];
            for (size_t k = j; k < randomized.size(); ++k) idx[k] = 0;
        }
        return true;
    });
    return buckets;
}

struct PunishmentReport {
    bool verdict = false;
    Rat worst_deviant_value = 0;  // max over K members and their joint types
    std::string witness;
};

// rho punishes w.r.t. sigma_value if every coalition member, for every
// positive-probability joint type, ends up strictly below its equilibrium
// value no matter what phi plays. Weak mode uses >=.
inline PunishmentReport punishment_check(const GameSpec& game, const std::vector<Rat>& sigma_value,
                                         const std::vector<UStrategy>& rho, const std::vector<int>& K,
                                         const CoalitionPlan& phi, bool weak = false) {
    PunishmentReport rep;
    rep.verdict = true;
    if (K.empty()) return rep;  // vacuously a punishment
    bool first = true;
    for (auto& [cond, slot] : underlying_bucketed(game, rho, K, phi)) {
        if (slot.first == 0) continue;
        for (int i : K) {
            Rat v = slot.second[static_cast<size_t>(i)] / slot.first;
            if (first || v > rep.worst_deviant_value) {
                rep.worst_deviant_value = v;
                rep.witness = "player " + std::to_string(i + 1) + " | " + cond.show(game);
            }
            first = false;
            bool ok = weak ? sigma_value[static_cast<size_t>(i)] >= v
                           : sigma_value[static_cast<size_t>(i)] > v;
            if (!ok) rep.verdict = false;
        }
    }
    return rep;
}

// Best deviant value against rho over a family of coalition plans.
inline PunishmentReport punishment_check_family(const GameSpec& game, const std::vector<Rat>& sigma_value,
                                                const std::vector<UStrategy>& rho, const std::vector<int>& K,
                                                const std::vector<std::pair<std::string, CoalitionPlan>>& phis,
                                                bool weak = false) {
    PunishmentReport rep;
    rep.verdict = true;
    bool first = true;
    for (auto& [name, phi] : phis) {
        PunishmentReport r = punishment_check(game, sigma_value, rho, K, phi, weak);
        if (!r.verdict) rep.verdict = false;
        if (first || r.worst_deviant_value > rep.worst_deviant_value) {
            rep.worst_deviant_value = r.worst_deviant_value;
            rep.witness = name + " | " + r.witness;
        }
        first = false;
    }
    return rep;
}

// --- falsification ----------------------------------------------------------------

struct FalsifyResult {
    bool found = false;
    size_t index = 0;
    std::string name;
    Rat relevant_gain = 0;
    GainReport report;
    bool warned_empty = false;
};

// Searches a declared finite deviation family for a violation. T-only
// deviations are checked for immunity harm; deviations with a coalition go
// through robustness_gain. Returns the member maximizing the verdict-relevant
// gain; `found` iff that gain exceeds epsilon.
inline FalsifyResult falsify(const GameSpec& game, const MediatorSpec& mediator,
                             const std::vector<Strategy>& sigma, const std::vector<Deviation>& family,
                             const RobustnessOptions& opt = {}) {
    FalsifyResult res;
    if (family.empty()) {
        res.warned_empty = true;
        return res;
    }
    bool first = true;
    for (size_t d = 0; d < family.size(); ++d) {
        const Deviation& dev = family[d];
        Rat relevant;
        GainReport rep;
        if (dev.K.empty()) {
            rep = immunity_gain(game, mediator, sigma, dev, opt.eval);
            relevant = -rep.min_gain();  // harm inflicted on honest players
        } else {
            rep = robustness_gain(game, mediator, sigma, dev, opt);
            relevant = opt.mode == ResilienceMode::Plain ? rep.min_gain() : rep.max_gain();
        }
        if (first || relevant > res.relevant_gain) {
            res.index = d;
            res.name = dev.name;
            res.relevant_gain = relevant;
            res.report = rep;
        }
        first = false;
    }
    res.found = res.relevant_gain > opt.epsilon;
    return res;
}

}  // namespace ctlab

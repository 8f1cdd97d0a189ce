#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "game.hpp"
#include "rng.hpp"

namespace ctlab {

struct ExecutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// What a strategy may look at. `inbox` holds the mediator outputs received so
// far: during the send phase of stage s it has stages 1..s-1, during the act
// phase it includes stage s. `draw(slot)` reads the participant's declared
// randomness for the current stage; draws are positional and memoized, so
// behavior stays a pure function of (type, history, randomness prefix, stage).
struct PlayerView {
    int stage = 0;  // 1-based
    int self = 0;
    Tuple type;
    std::vector<Message> inbox;
    std::function<int32_t(int)> draw;
};

// Per-stage randomness declaration: slot alphabets available to the
// participant at each stage (1-based). Empty means deterministic.
struct RandomnessDomain {
    std::vector<std::vector<Alphabet>> per_stage;
    bool repeat_last = false;  // stages beyond the declaration reuse the last entry

    const std::vector<Alphabet>& slots(int stage) const {
        static const std::vector<Alphabet> none;
        if (per_stage.empty()) return none;
        size_t i = static_cast<size_t>(stage - 1);
        if (i < per_stage.size()) return per_stage[i];
        return repeat_last ? per_stage.back() : none;
    }

    static RandomnessDomain every_stage(std::vector<Alphabet> slots) {
        RandomnessDomain d;
        d.per_stage.push_back(std::move(slots));
        d.repeat_last = true;
        return d;
    }
};

struct Strategy {
    RandomnessDomain randomness;
    std::function<Message(const PlayerView&)> send;               // phase 1
    std::function<std::optional<Action>(const PlayerView&)> act;  // phase 3
    std::string name;

    static Strategy silent(Action a, int act_stage = 1) {
        Strategy s;
        s.act = [a, act_stage](const PlayerView& v) -> std::optional<Action> {
            if (v.stage == act_stage) return a;
            return std::nullopt;
        };
        s.name = "silent";
        return s;
    }
};

struct MediatorView {
    int stage = 0;
    std::vector<std::vector<Message>> inputs;  // inputs[k][i] = player i's stage-(k+1) input
    std::function<int32_t(int)> draw;
};

struct MediatorSpec {
    RandomnessDomain randomness;
    std::function<std::vector<Message>(const MediatorView&)> rule;  // per-player outputs
    bool broadcast_tagging = true;
    std::string name;
};

// The forwarding mediator: each envelope reaches its addressee unchanged the
// same stage; broadcasts go to everyone else, tagged when tagging is on.
inline MediatorSpec cheap_talk_mediator(int n, bool tagging = true) {
    MediatorSpec m;
    m.broadcast_tagging = tagging;
    m.name = "cheap-talk";
    m.rule = [n, tagging](const MediatorView& v) {
        std::vector<std::vector<std::string>> lines(n);
        const auto& ins = v.inputs[v.stage - 1];
        for (int i = 0; i < n; ++i) {
            for (auto& raw : wire::split(ins[i], '\n')) {
                if (raw.empty()) continue;
                auto bar = raw.find('|');
                if (bar == std::string::npos) continue;
                std::string head = raw.substr(0, bar), payload = raw.substr(bar + 1);
                if (head == "bcast") {
                    for (int j = 0; j < n; ++j) {
                        if (j == i) continue;
                        lines[j].push_back("from:" + std::to_string(i) + "|" + (tagging ? "B|" : "") +
                                           payload);
                    }
                } else if (head.rfind("to:", 0) == 0) {
                    int j = std::stoi(head.substr(3));
                    if (j >= 0 && j < n && j != i)
                        lines[j].push_back("from:" + std::to_string(i) + "|" + payload);
                }
            }
        }
        std::vector<Message> out(n);
        for (int j = 0; j < n; ++j) out[j] = wire::join(lines[j], '\n');
        return out;
    };
    return m;
}

// The CT(K) extension: on top of whatever the base mediator does, envelopes
// of the form "ct|to:<j>|<payload>" sent by coalition members are forwarded to
// the addressed member the same stage, as "ctfrom:<i>|<payload>" lines.
// Deviating coalitions get their private channels this way.
inline MediatorSpec with_coalition_channels(MediatorSpec base, std::vector<int> members) {
    auto base_rule = base.rule;
    base.name += "+ct(K)";
    base.rule = [base_rule, members](const MediatorView& v) {
        std::vector<Message> out = base_rule ? base_rule(v) : std::vector<Message>();
        const auto& ins = v.inputs[v.stage - 1];
        if (out.size() < ins.size()) out.resize(ins.size());
        auto in_coalition = [&members](int i) {
            for (int m : members)
                if (m == i) return true;
            return false;
        };
        for (int i = 0; i < static_cast<int>(ins.size()); ++i) {
            if (!in_coalition(i)) continue;
            for (auto& line : wire::split(ins[static_cast<size_t>(i)], '\n')) {
                if (line.rfind("ct|to:", 0) != 0) continue;
                auto bar = line.find('|', 6);
                if (bar == std::string::npos) continue;
                int j = std::stoi(line.substr(6, bar - 6));
                if (!in_coalition(j) || j == i) continue;
                std::string& dst = out[static_cast<size_t>(j)];
                if (!dst.empty()) dst += "\n";
                dst += "ctfrom:" + std::to_string(i) + "|" + line.substr(bar + 1);
            }
        }
        return out;
    };
    return base;
}

struct StageRecord {
    std::vector<Message> to_mediator;
    std::vector<Message> from_mediator;
    std::vector<std::optional<Action>> actions;
};

struct Transcript {
    std::vector<StageRecord> stages;
    int rounds_elapsed = 0;
    bool terminated = false;  // all players acted before hitting the cap
    ActionProfile final_actions;
    uint64_t seed = 0;
};

// Draw provider: the seeded path reads tapes, the exact path enumerates.
class DrawSource {
  public:
    virtual ~DrawSource() = default;
    virtual int32_t draw(const std::string& participant, const Alphabet& a) = 0;
};

class TapeDrawSource : public DrawSource {
  public:
    explicit TapeDrawSource(RandomModel& rm) : rm_(rm) {}
    int32_t draw(const std::string& participant, const Alphabet& a) override {
        auto& counter = next_[participant];
        return rm_.tape(participant).draw(counter++, a);
    }

  private:
    RandomModel& rm_;
    std::map<std::string, size_t> next_;
};

namespace detail {

inline std::string player_key(int i) { return "p" + std::to_string(i); }

// Memoizes (participant, stage, slot) so repeated reads inside one execution
// see one value, and binds the draw callback for a view.
struct DrawCache {
    DrawSource* src = nullptr;
    std::map<std::tuple<std::string, int, int>, int32_t> seen;

    std::function<int32_t(int)> binder(const std::string& participant, int stage,
                                       const RandomnessDomain& domain) {
        return [this, participant, stage, &domain](int slot) -> int32_t {
            const auto& slots = domain.slots(stage);
            if (slot < 0 || static_cast<size_t>(slot) >= slots.size())
                throw ExecutionError(participant + " drew undeclared randomness slot " +
                                     std::to_string(slot) + " at stage " + std::to_string(stage));
            auto key = std::make_tuple(participant, stage, slot);
            auto it = seen.find(key);
            if (it != seen.end()) return it->second;
            int32_t v = src->draw(participant, slots[static_cast<size_t>(slot)]);
            seen.emplace(key, v);
            return v;
        };
    }
};

// Runs one synchronous execution: per stage, players send, the mediator
// replies, players may act. Stops once every player has acted or the cap is
// reached; missing actions are replaced by defaults.
inline Transcript run_with_source(const GameSpec& game, const MediatorSpec& mediator,
                                  const std::vector<Strategy>& profile, const TypeProfile& types,
                                  DrawSource& src, int round_cap, uint64_t seed_tag = 0) {
    int n = game.n;
    if (static_cast<int>(profile.size()) != n)
        throw std::domain_error("profile length must equal player_count");
    if (round_cap < 1) throw std::domain_error("round_cap must be >= 1");

    Transcript tr;
    tr.seed = seed_tag;
    DrawCache cache;
    cache.src = &src;
    std::vector<PlayerView> views(n);
    for (int i = 0; i < n; ++i) {
        views[i].type = types[static_cast<size_t>(i)];
        views[i].self = i;
    }
    MediatorView mview;
    std::vector<std::optional<Action>> acted(n);

    for (int stage = 1; stage <= round_cap; ++stage) {
        StageRecord rec;
        rec.to_mediator.resize(n);
        rec.actions.resize(n);
        for (int i = 0; i < n; ++i) {
            views[i].stage = stage;
            views[i].draw = cache.binder(player_key(i), stage, profile[i].randomness);
        }
        mview.stage = stage;
        mview.draw = cache.binder("mediator", stage, mediator.randomness);

        // phase 1: inputs to the mediator (empty input = empty message)
        for (int i = 0; i < n; ++i)
            rec.to_mediator[i] = profile[i].send ? profile[i].send(views[i]) : Message();
        mview.inputs.push_back(rec.to_mediator);

        // phase 2: mediator outputs
        rec.from_mediator = mediator.rule ? mediator.rule(mview) : std::vector<Message>(n);
        if (static_cast<int>(rec.from_mediator.size()) != n)
            throw ExecutionError("mediator output arity mismatch at stage " + std::to_string(stage));
        for (int i = 0; i < n; ++i) views[i].inbox.push_back(rec.from_mediator[i]);

        // phase 3: actions
        for (int i = 0; i < n; ++i) {
            std::optional<Action> a = profile[i].act ? profile[i].act(views[i]) : std::nullopt;
            if (a) {
                if (acted[i])
                    throw ExecutionError("player " + std::to_string(i) +
                                         " emitted a second action at stage " + std::to_string(stage));
                if (!game.action_spaces[i].contains(*a))
                    throw ExecutionError("player " + std::to_string(i) +
                                         " emitted an action outside its set at stage " +
                                         std::to_string(stage));
                acted[i] = a;
                rec.actions[i] = a;
            }
        }
        tr.stages.push_back(std::move(rec));

        bool all = true;
        for (int i = 0; i < n; ++i) all = all && acted[i].has_value();
        if (all) {
            tr.terminated = true;
            tr.rounds_elapsed = stage;
            break;
        }
    }
    if (!tr.terminated) tr.rounds_elapsed = round_cap;

    tr.final_actions.resize(n);
    for (int i = 0; i < n; ++i) tr.final_actions[i] = acted[i] ? *acted[i] : game.default_actions[i];
    return tr;
}

// Odometer over the draw requests of repeated executions: enumerates every
// branch of the randomness tree in lexicographic order, exactly once.
class EnumDrawSource : public DrawSource {
  public:
    int32_t draw(const std::string&, const Alphabet& a) override {
        if (a.entries.size() == 1) return a.entries[0].first;
        if (cursor_ == path_.size()) path_.push_back(0);
        size_t idx = path_[cursor_];
        sizes_.resize(std::max(sizes_.size(), cursor_ + 1));
        sizes_[cursor_] = a.entries.size();
        weight_ *= a.entries[idx].second;
        ++cursor_;
        ++nodes_;
        return a.entries[idx].first;
    }

    void begin() {
        cursor_ = 0;
        weight_ = 1;
    }
    const Rat& weight() const { return weight_; }
    size_t nodes() const { return nodes_; }

    bool advance() {  // next leaf; false when exhausted
        path_.resize(cursor_);
        sizes_.resize(cursor_);
        while (!path_.empty() && path_.back() + 1 >= sizes_.back()) {
            path_.pop_back();
            sizes_.pop_back();
        }
        if (path_.empty()) return false;
        ++path_.back();
        return true;
    }

  private:
    std::vector<size_t> path_, sizes_;
    size_t cursor_ = 0;
    size_t nodes_ = 0;
    Rat weight_ = 1;
};

}  // namespace detail

inline Transcript run_execution(const GameSpec& game, const MediatorSpec& mediator,
                                const std::vector<Strategy>& profile, RandomModel& rm, int round_cap) {
    TypeProfile types = game.types.sample(rm.tape("nature"));
    TapeDrawSource src(rm);
    return detail::run_with_source(game, mediator, profile, types, src, round_cap, rm.seed());
}

inline Transcript run_execution_with_types(const GameSpec& game, const MediatorSpec& mediator,
                                           const std::vector<Strategy>& profile, const TypeProfile& types,
                                           RandomModel& rm, int round_cap) {
    TapeDrawSource src(rm);
    return detail::run_with_source(game, mediator, profile, types, src, round_cap, rm.seed());
}

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(size_t budget)
        : std::runtime_error("budget exceeded (node budget " + std::to_string(budget) +
                             "); use Monte Carlo mode for this instance") {}
};

// Some deviations consult the coalition's joint types, so the profile may be
// rebuilt per nature assignment.
using ProfileBuilder = std::function<std::vector<Strategy>(const TypeProfile&)>;

inline ProfileBuilder fixed_profile(std::vector<Strategy> profile) {
    return [profile = std::move(profile)](const TypeProfile&) { return profile; };
}

// Exact weighted walk over nature and every randomness branch of the
// execution tree. `visit(nature, types, transcript, weight)` sees each leaf
// once; branch weights within one nature assignment sum to 1.
template <typename F>
inline void enumerate_executions_built(const GameSpec& game, const MediatorSpec& mediator,
                                       const ProfileBuilder& builder, int round_cap, size_t node_budget,
                                       F&& visit) {
    if (node_budget == 0) throw std::domain_error("node_budget must be positive");
    size_t nature_n = game.types.branch_count();
    if (nature_n == SIZE_MAX || nature_n > node_budget) throw BudgetExceeded(node_budget);
    size_t spent = 0;
    game.types.enumerate([&](const NatureAssign& na, const Rat& wt) {
        TypeProfile types = game.types.to_types(na);
        std::vector<Strategy> profile = builder(types);
        detail::EnumDrawSource src;
        while (true) {
            src.begin();
            Transcript tr = detail::run_with_source(game, mediator, profile, types, src, round_cap);
            if (++spent + src.nodes() > node_budget) throw BudgetExceeded(node_budget);
            visit(na, types, tr, wt * src.weight());
            if (!src.advance()) break;
        }
        return true;
    });
}

template <typename F>
inline void enumerate_executions(const GameSpec& game, const MediatorSpec& mediator,
                                 const std::vector<Strategy>& profile, int round_cap, size_t node_budget,
                                 F&& visit) {
    enumerate_executions_built(game, mediator, fixed_profile(profile), round_cap, node_budget,
                               std::forward<F>(visit));
}

// map: type profile -> exact distribution over final action profiles.
struct ActionMap {
    std::map<TypeProfile, Rat> type_weight;
    std::map<TypeProfile, std::map<ActionProfile, Rat>> dist;
    bool exact = true;
    long samples = 0;  // Monte Carlo only

    Rat prob(const TypeProfile& t, const ActionProfile& a) const {
        auto it = dist.find(t);
        if (it == dist.end()) return 0;
        auto jt = it->second.find(a);
        return jt == it->second.end() ? Rat(0) : jt->second;
    }
};

inline ActionMap induced_action_map(const GameSpec& game, const MediatorSpec& mediator,
                                    const std::vector<Strategy>& profile, size_t node_budget,
                                    int round_cap) {
    ActionMap m;
    enumerate_executions(game, mediator, profile, round_cap, node_budget,
                         [&](const NatureAssign&, const TypeProfile& t, const Transcript& tr,
                             const Rat& w) {
                             m.type_weight[t] += w;
                             m.dist[t][tr.final_actions] += w;
                         });
    for (auto& [t, d] : m.dist) {
        const Rat& tw = m.type_weight[t];
        for (auto& [a, w] : d) w /= tw;
    }
    return m;
}

// Hoeffding two-sided 95% bound: deterministic in (seed, samples), no plug-in
// variance. half = sqrt(ln(2/0.05) / (2 N)).
inline double hoeffding_halfwidth(long n) {
    if (n <= 0) return 1.0;
    return std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(n)));
}

struct EstimateMap {
    std::map<TypeProfile, long> type_count;
    std::map<TypeProfile, std::map<ActionProfile, long>> counts;
    long samples = 0;
    uint64_t seed = 0;

    double freq(const TypeProfile& t, const ActionProfile& a) const {
        auto it = counts.find(t);
        if (it == counts.end()) return 0.0;
        auto jt = it->second.find(a);
        long c = jt == it->second.end() ? 0 : jt->second;
        long n = type_count.at(t);
        return n ? static_cast<double>(c) / static_cast<double>(n) : 0.0;
    }
    double halfwidth(const TypeProfile& t) const {
        auto it = type_count.find(t);
        return hoeffding_halfwidth(it == type_count.end() ? 0 : it->second);
    }

    ActionMap as_action_map() const {  // frequencies are exact rationals count/N
        ActionMap m;
        m.exact = false;
        m.samples = samples;
        for (auto& [t, n] : type_count) m.type_weight[t] = Rat(n, samples);
        for (auto& [t, d] : counts)
            for (auto& [a, c] : d) m.dist[t][a] = Rat(c, type_count.at(t));
        return m;
    }
};

inline EstimateMap estimate_action_map(const GameSpec& game, const MediatorSpec& mediator,
                                       const std::vector<Strategy>& profile, long samples, uint64_t seed,
                                       int round_cap) {
    if (samples < 1) throw std::domain_error("samples must be >= 1");
    EstimateMap m;
    m.samples = samples;
    m.seed = seed;
    RandomModel master(seed);
    for (long s = 0; s < samples; ++s) {
        RandomModel rm = master.fork(static_cast<uint64_t>(s));
        TypeProfile types = game.types.sample(rm.tape("nature"));
        Transcript tr = run_execution_with_types(game, mediator, profile, types, rm, round_cap);
        m.type_count[types]++;
        m.counts[types][tr.final_actions]++;
    }
    return m;
}

// Transcript -> documented JSON debug form (stage array, final actions, seed).
inline std::string transcript_to_json(const GameSpec& game, const Transcript& tr) {
    auto esc = [](const std::string& s) {
        std::string o;
        for (char c : s) {
            if (c == '"' || c == '\\') o += '\\';
            if (c == '\n') {
                o += "\\n";
                continue;
            }
            o += c;
        }
        return o;
    };
    std::ostringstream os;
    os << "{\"seed\":" << tr.seed << ",\"rounds_elapsed\":" << tr.rounds_elapsed
       << ",\"terminated\":" << (tr.terminated ? "true" : "false") << ",\"stages\":[";
    for (size_t s = 0; s < tr.stages.size(); ++s) {
        if (s) os << ",";
        const auto& st = tr.stages[s];
        os << "{\"to_mediator\":[";
        for (size_t i = 0; i < st.to_mediator.size(); ++i)
            os << (i ? "," : "") << "\"" << esc(st.to_mediator[i]) << "\"";
        os << "],\"from_mediator\":[";
        for (size_t i = 0; i < st.from_mediator.size(); ++i)
            os << (i ? "," : "") << "\"" << esc(st.from_mediator[i]) << "\"";
        os << "],\"actions\":[";
        for (size_t i = 0; i < st.actions.size(); ++i) {
            os << (i ? "," : "");
            if (st.actions[i])
                os << "\"" << esc(game.action_spaces[i].show(*st.actions[i])) << "\"";
            else
                os << "null";
        }
        os << "]}";
    }
    os << "],\"final_actions\":[";
    for (size_t i = 0; i < tr.final_actions.size(); ++i)
        os << (i ? "," : "") << "\"" << esc(game.action_spaces[i].show(tr.final_actions[i])) << "\"";
    os << "]}";
    return os.str();
}

}  // namespace ctlab

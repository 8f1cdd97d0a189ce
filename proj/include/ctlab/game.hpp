#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rational.hpp"
#include "rng.hpp"

namespace ctlab {

// Types and actions are small integer tuples; spaces carry per-coordinate
// names so tuples can be printed and validated. Product spaces let games with
// huge structured action sets (field-element vectors plus an option symbol)
// stay flat finite sets without ever materializing them.
using Tuple = std::vector<int32_t>;

struct Coord {
    std::string name;
    int32_t size = 0;                 // values are 0..size-1
    std::vector<std::string> labels;  // optional, size() == size when present

    std::string show(int32_t v) const {
        if (v >= 0 && static_cast<size_t>(v) < labels.size()) return labels[v];
        return std::to_string(v);
    }
};

struct Space {
    std::vector<Coord> coords;

    static Space labeled(std::string name, std::vector<std::string> labels) {
        Coord c{std::move(name), static_cast<int32_t>(labels.size()), std::move(labels)};
        return Space{{c}};
    }
    static Space numeric(std::string name, int32_t size) { return Space{{Coord{std::move(name), size, {}}}}; }

    Space& add(std::string name, int32_t size, std::vector<std::string> labels = {}) {
        coords.push_back(Coord{std::move(name), size, std::move(labels)});
        return *this;
    }

    bool contains(const Tuple& t) const {
        if (t.size() != coords.size()) return false;
        for (size_t i = 0; i < t.size(); ++i)
            if (t[i] < 0 || t[i] >= coords[i].size) return false;
        return true;
    }

    std::string show(const Tuple& t) const {
        std::ostringstream os;
        if (t.size() == 1 && coords.size() == 1) return coords[0].show(t[0]);
        os << "(";
        for (size_t i = 0; i < t.size(); ++i) {
            if (i) os << ",";
            os << (i < coords.size() ? coords[i].show(t[i]) : std::to_string(t[i]));
        }
        os << ")";
        return os.str();
    }
};

using TypeProfile = std::vector<Tuple>;
using Action = Tuple;
using ActionProfile = std::vector<Action>;

// Nature's move, factored into independent variables with exact weights.
// Type profiles are the deterministic image of a nature assignment, which
// keeps correlated types (shares of one polynomial, say) exact while the
// factors stay independently enumerable and sampleable.
struct NatureVar {
    std::string name;
    Alphabet alphabet;
};

using NatureAssign = std::vector<int32_t>;

struct TypeModel {
    std::vector<NatureVar> vars;
    std::function<TypeProfile(const NatureAssign&)> to_types;

    static TypeModel single(TypeProfile fixed) {
        TypeModel m;
        m.to_types = [fixed](const NatureAssign&) { return fixed; };
        return m;
    }

    TypeProfile sample(Tape& tape) const {
        NatureAssign a(vars.size());
        for (size_t i = 0; i < vars.size(); ++i) a[i] = tape.draw(i, vars[i].alphabet);
        return to_types(a);
    }

    // Walks the full factor product; `visit(assignment, weight)` returning
    // false aborts early (budget handling lives in the caller).
    template <typename F>
    bool enumerate(F&& visit) const {
        NatureAssign idx(vars.size(), 0);
        while (true) {
            NatureAssign a(vars.size());
            Rat w = 1;
            for (size_t i = 0; i < vars.size(); ++i) {
                a[i] = vars[i].alphabet.entries[idx[i]].first;
                w *= vars[i].alphabet.entries[idx[i]].second;
            }
            if (!visit(a, w)) return false;
            size_t i = vars.size();
            while (i > 0 && idx[i - 1] + 1 == static_cast<int32_t>(vars[i - 1].alphabet.entries.size()))
                --i;
            if (i == 0) return true;
            ++idx[i - 1];
            for (size_t j = i; j < vars.size(); ++j) idx[j] = 0;
        }
    }

    size_t branch_count() const {
        size_t n = 1;
        for (auto& v : vars) {
            n *= v.alphabet.entries.size();
            if (n > (1ull << 62)) return SIZE_MAX;
        }
        return n;
    }
};

// Messages are opaque byte strings; the engine never interprets content.
using Message = std::string;

struct GameSpec {
    int n = 0;  // player count
    std::vector<Space> type_spaces;
    TypeModel types;
    std::vector<Space> action_spaces;
    std::function<std::vector<Rat>(const TypeProfile&, const ActionProfile&)> utility;
    ActionProfile default_actions;
    std::string name;

    void validate() const {
        if (n <= 0) throw std::domain_error("player_count must be positive");
        if (static_cast<int>(action_spaces.size()) != n || static_cast<int>(default_actions.size()) != n)
            throw std::domain_error("per-player vectors must have length n");
        for (int i = 0; i < n; ++i)
            if (!action_spaces[i].contains(default_actions[i]))
                throw std::domain_error("default action of player " + std::to_string(i) +
                                        " outside its action set");
        Rat total = 0;
        bool checkable = true;
        for (auto& v : types.vars) {
            Rat s = v.alphabet.total();
            if (s != 1) throw std::domain_error("nature variable '" + v.name + "' weights must sum to 1");
        }
        (void)total;
        (void)checkable;
    }
};

// Structured encode/decode helpers for message payloads. Payloads are short
// ASCII token strings; the cheap-talk wire format wraps them in envelopes.
namespace wire {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// Player -> cheap-talk mediator: newline-separated envelopes "to:<j>|<payload>"
// or "bcast|<payload>". Payloads must not contain '\n'.
inline std::string envelope(int to, const std::string& payload) {
    return "to:" + std::to_string(to) + "|" + payload;
}
inline std::string broadcast(const std::string& payload) { return "bcast|" + payload; }

struct Delivery {
    int from;
    bool broadcast;
    std::string payload;
};

// Mediator -> player: newline-separated "from:<i>|<payload>" or
// "from:<i>|B|<payload>" for tagged broadcasts.
inline std::vector<Delivery> parse_deliveries(const Message& m) {
    std::vector<Delivery> out;
    if (m.empty()) return out;
    for (auto& line : split(m, '\n')) {
        if (line.empty()) continue;
        auto bar = line.find('|');
        if (bar == std::string::npos || line.rfind("from:", 0) != 0) continue;
        Delivery d;
        d.from = std::stoi(line.substr(5, bar - 5));
        std::string rest = line.substr(bar + 1);
        if (rest.rfind("B|", 0) == 0) {
            d.broadcast = true;
            d.payload = rest.substr(2);
        } else {
            d.broadcast = false;
            d.payload = rest;
        }
        out.push_back(d);
    }
    return out;
}

}  // namespace wire

}  // namespace ctlab

#pragma once

#include "../candidates.hpp"
#include "../sharing.hpp"
#include "bundle.hpp"

namespace ctlab {
namespace catalog {

enum class GuessVariant { TwoPlayer, NPlayer };

// The secret-guessing games: nature deals shares of a uniformly random field
// element with check vectors; players must guess the secret (the n-player
// variant adds a DETECT action). Utilities reward exclusive knowledge with M
// and shave delta off ignorant outcomes.
struct GuessParams {
    int n = 2, k = 1, t = 0;
    uint32_t p = 7;
    Rat M = 3;
    Rat delta = Rat(1, 10);
    GuessVariant variant = GuessVariant::TwoPlayer;
};

namespace detail_guess {

// u^{M,delta} for the two-player game
inline std::vector<Rat> pay2(const Rat& M, const Rat& delta, bool r1, bool r2) {
    auto one = [&](bool me, bool other) -> Rat {
        if (me && !other) return M;
        if (me && other) return 1;
        if (!me && other) return -M + 2 - 2 * delta;
        return 1 - delta;
    };
    return {one(r1, r2), one(r2, r1)};
}

}  // namespace detail_guess

inline GameBundle guess_two_player_bundle(const GuessParams& prm) {
    if (prm.M <= 1 || prm.delta < 0) throw std::domain_error("guess game needs M > 1 and delta >= 0");
    if (!is_prime(prm.p) || prm.p < 7) throw std::domain_error("guess game needs a prime p >= 7");
    GF field(prm.p);
    const int32_t q = static_cast<int32_t>(prm.p);

    GameBundle b;
    b.id = "guess2p";
    b.description = "two-player secret-guessing game with check-vector signed shares";
    b.params = {{"n", 2}, {"k", 1}, {"t", 0}, {"p", q}, {"M", prm.M}, {"delta", prm.delta}};
    b.validity_text = "M > 1, delta >= 0";
    b.secret_support = q;
    b.secret_of = [](const NatureAssign& na) { return na[0]; };

    GameSpec& g = b.game;
    g.n = 2;
    g.name = b.id;
    g.types.vars = {{"secret", Alphabet::uniform(0, q - 1)}, {"slope", Alphabet::uniform(0, q - 1)},
                    {"y1", Alphabet::uniform(0, q - 1)},     {"y2", Alphabet::uniform(0, q - 1)},
                    {"b1", Alphabet::uniform(1, q - 1)},     {"b2", Alphabet::uniform(1, q - 1)}};
    g.types.to_types = [field](const NatureAssign& na) {
        uint32_t s = static_cast<uint32_t>(na[0]), a = static_cast<uint32_t>(na[1]);
        uint32_t y1 = static_cast<uint32_t>(na[2]), y2 = static_cast<uint32_t>(na[3]);
        uint32_t b1 = static_cast<uint32_t>(na[4]), b2 = static_cast<uint32_t>(na[5]);
        uint32_t f1 = field.add(s, a), f2 = field.add(s, field.mul(a, 2));
        uint32_t c1 = field.add(f1, field.mul(y1, b1)), c2 = field.add(f2, field.mul(y2, b2));
        return TypeProfile{{static_cast<int32_t>(f1), static_cast<int32_t>(y1), static_cast<int32_t>(b2),
                            static_cast<int32_t>(c2)},
                           {static_cast<int32_t>(f2), static_cast<int32_t>(y2), static_cast<int32_t>(b1),
                            static_cast<int32_t>(c1)}};
    };
    for (int i = 0; i < 2; ++i) {
        Space sp;
        sp.add("share", q).add("y", q).add("b'", q).add("c'", q);
        g.type_spaces.push_back(sp);
        g.action_spaces.push_back(Space::numeric("guess", q));
        g.default_actions.push_back({0});
    }
    Rat M = prm.M, delta = prm.delta;
    g.utility = [field, M, delta](const TypeProfile& tp, const ActionProfile& ap) {
        // the dealt secret from the two true shares
        uint32_t f1 = static_cast<uint32_t>(tp[0][0]), f2 = static_cast<uint32_t>(tp[1][0]);
        uint32_t s = interpolate(field, {{1, f1}, {2, f2}}).eval(0);
        return detail_guess::pay2(M, delta, static_cast<uint32_t>(ap[0][0]) == s,
                                  static_cast<uint32_t>(ap[1][0]) == s);
    };

    b.mediator.name = "check-and-reveal";
    b.mediator.randomness = RandomnessDomain{{{Alphabet::uniform(0, q - 1), Alphabet::uniform(1, q - 1)}}, false};
    b.mediator.rule = [field, q](const MediatorView& v) {
        std::vector<Message> out(2);
        if (v.stage != 1) return out;
        std::array<std::optional<std::array<uint32_t, 4>>, 2> sub;
        for (int i = 0; i < 2; ++i) {
            const Message& m = v.inputs[0][static_cast<size_t>(i)];
            if (m.rfind("gv:", 0) == 0) {
                auto parts = wire::split(m.substr(3), ',');
                if (parts.size() == 4) {
                    std::array<uint32_t, 4> vals{};
                    bool ok = true;
                    for (int j = 0; j < 4; ++j) {
                        try {
                            vals[static_cast<size_t>(j)] = static_cast<uint32_t>(std::stoul(parts[static_cast<size_t>(j)]));
                        } catch (...) {
                            ok = false;
                        }
                        if (vals[static_cast<size_t>(j)] >= static_cast<uint32_t>(q)) ok = false;
                    }
                    if (ok && vals[2] != 0) sub[static_cast<size_t>(i)] = vals;
                }
            }
        }
        std::string msg;
        if (!sub[0] || !sub[1]) {
            msg = "val:" + std::to_string(v.draw(0));  // a fresh uniform value
        } else {
            auto [a1, y1, b2, c2] = *sub[0];
            auto [a2, y2, b1, c1] = *sub[1];
            uint32_t sec = interpolate(field, {{1, a1}, {2, a2}}).eval(0);
            bool ok1 = field.add(a1, field.mul(y1, b1)) == c1;
            bool ok2 = field.add(a2, field.mul(y2, b2)) == c2;
            if (ok1 && ok2)
                msg = "val:" + std::to_string(sec);
            else
                msg = "val:" + std::to_string((sec + 1 + static_cast<uint32_t>(v.draw(1))) % static_cast<uint32_t>(q));
        }
        out[0] = msg;
        out[1] = msg;
        return out;
    };

    for (int i = 0; i < 2; ++i) {
        Strategy s;
        s.name = "truthful";
        s.send = [](const PlayerView& v) {
            if (v.stage != 1) return Message();
            return Message("gv:" + std::to_string(v.type[0]) + "," + std::to_string(v.type[1]) + "," +
                           std::to_string(v.type[2]) + "," + std::to_string(v.type[3]));
        };
        s.act = [](const PlayerView& v) -> std::optional<Action> {
            if (v.stage != 1) return std::nullopt;
            const Message& m = v.inbox[0];
            if (m.rfind("val:", 0) == 0) return Action{static_cast<int32_t>(std::stol(m.substr(4)))};
            return Action{0};
        };
        b.sigma.push_back(std::move(s));
    }
    b.has_rho = true;
    for (int i = 0; i < 2; ++i) {
        UStrategy u;
        u.randomness = Alphabet::uniform(0, q - 1);
        u.act = [](const Tuple&, int32_t draw) { return Action{draw}; };
        u.name = "uniform-value";
        b.rho.push_back(std::move(u));
    }

    // family: share lies with the self-correcting follow-up, and withholding
    for (int i = 0; i < 2; ++i) {
        // lying by +1 on the share, shifting the signature to have a chance
        Deviation lie;
        lie.K = {i};
        lie.name = "p" + std::to_string(i + 1) + ":lie+1";
        Strategy base = b.sigma[static_cast<size_t>(i)];
        int32_t corr = i == 0 ? 2 : -1;  // Lagrange weight of the own point at 0
        lie.make = [i, base, q, corr](const std::map<int, Tuple>&) {
            Strategy s = base;
            s.send = [q](const PlayerView& v) {
                if (v.stage != 1) return Message();
                return Message("gv:" + std::to_string((v.type[0] + 1) % q) + "," +
                               std::to_string((v.type[1] + 1) % q) + "," + std::to_string(v.type[2]) + "," +
                               std::to_string(v.type[3]));
            };
            s.act = [q, corr](const PlayerView& v) -> std::optional<Action> {
                if (v.stage != 1) return std::nullopt;
                const Message& m = v.inbox[0];
                if (m.rfind("val:", 0) != 0) return Action{0};
                int32_t val = static_cast<int32_t>(std::stol(m.substr(4)));
                // undo the lie's effect on the reconstructed constant term
                return Action{((val - corr) % q + q) % q};
            };
            return std::map<int, Strategy>{{i, s}};
        };
        b.family.push_back(std::move(lie));

        for (int32_t guess = 0; guess < 2; ++guess) {
            Deviation d;
            d.K = {i};
            d.name = "p" + std::to_string(i + 1) + ":withhold:guess" + std::to_string(guess);
            d.make = [i, guess](const std::map<int, Tuple>&) {
                Strategy s;
                s.act = [guess](const PlayerView& v) -> std::optional<Action> {
                    if (v.stage != 1) return std::nullopt;
                    return Action{guess};
                };
                return std::map<int, Strategy>{{i, s}};
            };
            b.family.push_back(std::move(d));
        }
    }
    return b;
}

// --- n-player variant with DETECT ------------------------------------------------

inline GameBundle guess_n_player_bundle(const GuessParams& prm) {
    const int n = prm.n, k = prm.k, t = prm.t, kt = prm.k + prm.t;
    if (!(kt < n && n <= 2 * kt && k >= 1))
        throw std::domain_error("n-player guess game needs k+t < n <= 2(k+t), k >= 1 (got n=" +
                                std::to_string(n) + ", k=" + std::to_string(k) + ", t=" + std::to_string(t) + ")");
    if (!is_prime(prm.p) || prm.p <= static_cast<uint32_t>(n))
        throw std::domain_error("n-player guess game needs a prime p > n");
    GF field(prm.p);
    const int32_t q = static_cast<int32_t>(prm.p);
    const int32_t DETECT = q;

    GameBundle b;
    b.id = "guessN";
    b.description = "(k+t+1)-out-of-n secret-guessing game with per-pair check vectors and DETECT";
    b.params = {{"n", n}, {"k", k}, {"t", t}, {"p", q}, {"M", prm.M}, {"delta", prm.delta}};
    b.validity_text = "k+t < n <= 2(k+t), k >= 1";
    b.secret_support = q;
    b.secret_of = [](const NatureAssign& na) { return na[0]; };

    GameSpec& g = b.game;
    g.n = n;
    g.name = b.id;
    g.types.vars.push_back({"secret", Alphabet::uniform(0, q - 1)});
    for (int d = 1; d <= kt; ++d) g.types.vars.push_back({"coeff" + std::to_string(d), Alphabet::uniform(0, q - 1)});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            g.types.vars.push_back({"y" + std::to_string(i) + "_" + std::to_string(j), Alphabet::uniform(0, q - 1)});
            g.types.vars.push_back({"b" + std::to_string(i) + "_" + std::to_string(j), Alphabet::uniform(1, q - 1)});
        }
    g.types.to_types = [field, n, kt](const NatureAssign& na) {
        std::vector<uint32_t> coeffs(static_cast<size_t>(kt) + 1);
        for (int d = 0; d <= kt; ++d) coeffs[static_cast<size_t>(d)] = static_cast<uint32_t>(na[static_cast<size_t>(d)]);
        Polynomial f{field, coeffs};
        // type of player i: own share, then per pair the dealt y/b/c values
        size_t base = static_cast<size_t>(kt) + 1;
        std::map<std::pair<int, int>, std::pair<uint32_t, uint32_t>> yb;
        size_t s = base;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                yb[{i, j}] = {static_cast<uint32_t>(na[s]), static_cast<uint32_t>(na[s + 1])};
                s += 2;
            }
        TypeProfile tp;
        for (int i = 0; i < n; ++i) {
            Tuple ty{static_cast<int32_t>(f.eval(static_cast<uint32_t>(i + 1)))};
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                ty.push_back(static_cast<int32_t>(yb[{i, j}].first));  // own signature toward j
            }
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                auto [yy, bb] = yb[{j, i}];
                uint32_t cc = field.add(f.eval(static_cast<uint32_t>(j + 1)), field.mul(yy, bb));
                ty.push_back(static_cast<int32_t>(bb));
                ty.push_back(static_cast<int32_t>(cc));
            }
            tp.push_back(ty);
        }
        return tp;
    };
    for (int i = 0; i < n; ++i) {
        Space sp;
        sp.add("share", q);
        for (int j = 0; j < n; ++j)
            if (j != i) sp.add("y->" + std::to_string(j + 1), q);
        for (int j = 0; j < n; ++j)
            if (j != i) sp.add("b<-" + std::to_string(j + 1), q).add("c<-" + std::to_string(j + 1), q);
        g.type_spaces.push_back(sp);
        g.action_spaces.push_back(Space::numeric("guess-or-detect", q + 1));
        g.default_actions.push_back({0});
    }
    Rat M = prm.M, delta = prm.delta;
    g.utility = [field, n, t, kt, M, delta, DETECT](const TypeProfile& tp, const ActionProfile& ap) {
        std::vector<std::pair<uint32_t, uint32_t>> pts;
        for (int i = 0; i <= kt; ++i)
            pts.push_back({static_cast<uint32_t>(i + 1), static_cast<uint32_t>(tp[static_cast<size_t>(i)][0])});
        int32_t secret = static_cast<int32_t>(interpolate(field, pts).eval(0));
        int detects = 0, hits = 0;
        for (auto& a : ap) {
            if (a[0] == DETECT) ++detects;
            else if (a[0] == secret) ++hits;
        }
        std::vector<Rat> u(static_cast<size_t>(n));
        if (detects >= n - t) {
            for (int i = 0; i < n; ++i) u[static_cast<size_t>(i)] = ap[static_cast<size_t>(i)][0] == DETECT ? 1 : 0;
        } else if (hits >= n - kt && hits < n - t) {
            for (int i = 0; i < n; ++i)
                u[static_cast<size_t>(i)] = ap[static_cast<size_t>(i)][0] == secret ? M : -M + 2 - 2 * delta;
        } else {
            for (int i = 0; i < n; ++i)
                u[static_cast<size_t>(i)] = ap[static_cast<size_t>(i)][0] == secret ? Rat(1) : 1 - delta;
        }
        return u;
    };

    b.mediator.name = "check-reveal-detect";
    b.mediator.randomness = RandomnessDomain{{{Alphabet::uniform(0, q - 1), Alphabet::uniform(1, q - 1)}}, false};
    b.mediator.rule = [field, n, t, kt, q](const MediatorView& v) {
        std::vector<Message> out(static_cast<size_t>(n));
        if (v.stage != 1) return out;
        // submissions: "gvN:<share>;y:<j>=<v>;...;bc:<j>=<b>,<c>;..."
        struct Sub {
            uint32_t share = 0;
            std::map<int, uint32_t> y;
            std::map<int, std::pair<uint32_t, uint32_t>> bc;
            bool ok = false;
        };
        std::vector<Sub> subs(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const Message& m = v.inputs[0][static_cast<size_t>(i)];
            if (m.rfind("gvN:", 0) != 0) continue;
            Sub s;
            s.ok = true;
            for (auto& tok : wire::split(m.substr(4), ';')) {
                if (tok.empty()) continue;
                try {
                    if (tok.rfind("y:", 0) == 0) {
                        auto eq = tok.find('=');
                        s.y[std::stoi(tok.substr(2, eq - 2))] = static_cast<uint32_t>(std::stoul(tok.substr(eq + 1)));
                    } else if (tok.rfind("bc:", 0) == 0) {
                        auto eq = tok.find('=');
                        auto comma = tok.find(',', eq);
                        s.bc[std::stoi(tok.substr(3, eq - 3))] = {
                            static_cast<uint32_t>(std::stoul(tok.substr(eq + 1, comma - eq - 1))),
                            static_cast<uint32_t>(std::stoul(tok.substr(comma + 1)))};
                    } else {
                        s.share = static_cast<uint32_t>(std::stoul(tok));
                    }
                } catch (...) {
                    s.ok = false;
                }
            }
            subs[static_cast<size_t>(i)] = s;
        }
        std::vector<ShareClaim> reliable, sent;
        for (int i = 0; i < n; ++i) {
            if (!subs[static_cast<size_t>(i)].ok) continue;
            sent.push_back({static_cast<uint32_t>(i + 1), subs[static_cast<size_t>(i)].share});
            int passes = 0;
            for (int j = 0; j < n; ++j) {
                if (j == i || !subs[static_cast<size_t>(j)].ok) continue;
                auto yit = subs[static_cast<size_t>(i)].y.find(j);
                auto bcit = subs[static_cast<size_t>(j)].bc.find(i);
                if (yit == subs[static_cast<size_t>(i)].y.end() || bcit == subs[static_cast<size_t>(j)].bc.end()) continue;
                auto [bb, cc] = bcit->second;
                if (bb != 0 && field.add(subs[static_cast<size_t>(i)].share, field.mul(yit->second, bb)) == cc)
                    ++passes;
            }
            if (passes >= n - t) reliable.push_back({static_cast<uint32_t>(i + 1), subs[static_cast<size_t>(i)].share});
        }
        std::string msg;
        if (static_cast<int>(reliable.size()) >= n - t) {
            std::optional<Polynomial> f;
            if (static_cast<int>(reliable.size()) >= kt + 1)
                f = interpolate_agreeing(field, reliable, kt, static_cast<int>(reliable.size()));
            msg = f ? "val:" + std::to_string(f->eval(0)) : "DETECT";
        } else {
            std::optional<Polynomial> f;
            if (static_cast<int>(sent.size()) >= kt + 1)
                f = interpolate_agreeing(field, sent, kt, static_cast<int>(sent.size()));
            if (f)
                msg = "val:" + std::to_string((f->eval(0) + 1 + static_cast<uint32_t>(v.draw(1))) %
                                              static_cast<uint32_t>(q));
            else
                msg = "val:" + std::to_string(v.draw(0));
        }
        for (auto& m : out) m = msg;
        return out;
    };

    for (int i = 0; i < n; ++i) {
        Strategy s;
        s.name = "truthful";
        s.send = [n, i](const PlayerView& v) {
            if (v.stage != 1) return Message();
            std::string m = "gvN:" + std::to_string(v.type[0]);
            int idx = 1;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                m += ";y:" + std::to_string(j) + "=" + std::to_string(v.type[static_cast<size_t>(idx)]);
                ++idx;
            }
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                m += ";bc:" + std::to_string(j) + "=" + std::to_string(v.type[static_cast<size_t>(idx)]) + "," +
                     std::to_string(v.type[static_cast<size_t>(idx + 1)]);
                idx += 2;
            }
            return Message(m);
        };
        int32_t det = DETECT;
        s.act = [det](const PlayerView& v) -> std::optional<Action> {
            if (v.stage != 1) return std::nullopt;
            const Message& m = v.inbox[0];
            if (m == "DETECT") return Action{det};
            if (m.rfind("val:", 0) == 0) return Action{static_cast<int32_t>(std::stol(m.substr(4)))};
            return Action{0};
        };
        b.sigma.push_back(std::move(s));
    }
    b.has_rho = true;
    for (int i = 0; i < n; ++i) b.rho.push_back(UStrategy::constant({1}, "always-1"));
    return b;
}

// Reduced copy of the n-player game for underlying-game punishment analysis:
// identical utilities, but types carry only the share (the play of constant
// punishers and guessers never reads the check coordinates, and the full
// nature space is far too large to enumerate).
inline GameSpec guess_n_underlying_reduced(const GuessParams& prm) {
    GuessParams red = prm;
    GameBundle full = guess_n_player_bundle(red);
    GameSpec g = full.game;
    GF field(prm.p);
    const int kt = prm.k + prm.t;
    const int n = prm.n;
    g.types.vars.clear();
    g.types.vars.push_back({"secret", Alphabet::uniform(0, static_cast<int32_t>(prm.p) - 1)});
    for (int d = 1; d <= kt; ++d)
        g.types.vars.push_back({"coeff" + std::to_string(d), Alphabet::uniform(0, static_cast<int32_t>(prm.p) - 1)});
    g.types.to_types = [field, n, kt](const NatureAssign& na) {
        std::vector<uint32_t> coeffs(static_cast<size_t>(kt) + 1);
        for (int d = 0; d <= kt; ++d) coeffs[static_cast<size_t>(d)] = static_cast<uint32_t>(na[static_cast<size_t>(d)]);
        Polynomial f{field, coeffs};
        TypeProfile tp;
        for (int i = 0; i < n; ++i) tp.push_back({static_cast<int32_t>(f.eval(static_cast<uint32_t>(i + 1)))});
        return tp;
    };
    for (auto& sp : g.type_spaces) sp = Space::numeric("share", static_cast<int32_t>(prm.p));
    // the utility reads only the first kt+1 type heads, which stay aligned
    return g;
}

}  // namespace catalog
}  // namespace ctlab

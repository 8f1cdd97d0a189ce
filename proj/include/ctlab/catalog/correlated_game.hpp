#pragma once

#include "../candidates.hpp"
#include "../sharing.hpp"
#include "bundle.hpp"

namespace ctlab {
namespace catalog {

// Payoff table of the base 2x2 game: rows U/D for the first side, columns
// L/R for the second. (U,L)=(3,3), (U,R)=(1,4), (D,L)=(4,1), (D,R)=(0,0).
inline std::pair<Rat, Rat> correlated_payoff(int x, int y) {
    static const int tab[2][2][2] = {{{3, 3}, {1, 4}}, {{4, 1}, {0, 0}}};
    return {tab[x][y][0], tab[x][y][1]};
}

// --- two-player correlated game ------------------------------------------------

inline GameBundle correlated_two_player_bundle() {
    GameBundle b;
    b.id = "corr2p";
    b.description = "two-player correlated game, mediator recommends one of three cells";
    b.validity_text = "none";
    GameSpec& g = b.game;
    g.n = 2;
    g.name = b.id;
    g.types = TypeModel::single({{}, {}});
    g.type_spaces = {Space{{}}, Space{{}}};
    g.action_spaces = {Space::labeled("a", {"U", "D"}), Space::labeled("a", {"L", "R"})};
    g.default_actions = {{1}, {1}};  // the punishment cell (D,R)
    g.utility = [](const TypeProfile&, const ActionProfile& ap) {
        auto [u1, u2] = correlated_payoff(ap[0][0], ap[1][0]);
        return std::vector<Rat>{u1, u2};
    };

    b.mediator.name = "recommender";
    b.mediator.randomness = RandomnessDomain{{{Alphabet::uniform(0, 2)}}, false};
    b.mediator.rule = [](const MediatorView& v) {
        std::vector<Message> out(2);
        if (v.stage != 1) return out;
        int32_t cell = v.draw(0);  // 0=(U,L) 1=(U,R) 2=(D,L)
        out[0] = cell == 2 ? "rec:D" : "rec:U";
        out[1] = cell == 1 ? "rec:R" : "rec:L";
        return out;
    };

    for (int i = 0; i < 2; ++i) {
        Strategy s;
        s.name = "follow";
        s.act = [i](const PlayerView& v) -> std::optional<Action> {
            if (v.stage != 1) return std::nullopt;
            const Message& m = v.inbox[0];
            int32_t second = (m == "rec:D" || m == "rec:R") ? 1 : 0;
            return Action{second};
        };
        b.sigma.push_back(std::move(s));
    }
    b.has_rho = true;
    b.rho = {UStrategy::constant({1}, "play-D"), UStrategy::constant({1}, "play-R")};

    // family: every single-player map from recommendation to action
    for (int i = 0; i < 2; ++i) {
        for (int on0 = 0; on0 <= 1; ++on0)
            for (int on1 = 0; on1 <= 1; ++on1) {
                if (on0 == 0 && on1 == 1) continue;  // that is follow = sigma
                Deviation d;
                d.K = {i};
                d.name = "p" + std::to_string(i + 1) + ":map(" + std::to_string(on0) + "," +
                         std::to_string(on1) + ")";
                d.make = [i, on0, on1](const std::map<int, Tuple>&) {
                    Strategy s;
                    s.name = "remap";
                    s.act = [i, on0, on1](const PlayerView& v) -> std::optional<Action> {
                        if (v.stage != 1) return std::nullopt;
                        const Message& m = v.inbox[0];
                        bool rec_second = m == "rec:D" || m == "rec:R";
                        return Action{rec_second ? on1 : on0};
                    };
                    return std::map<int, Strategy>{{i, s}};
                };
                b.family.push_back(std::move(d));
            }
    }
    return b;
}

// --- group correlated game with check vectors ------------------------------------

// Players are split into A1, A2 (each n-(k+t)) and B (2(k+t)-n). The mediator
// deals shares of f1 (an action bit for A1), f2 (for A2) and g (the joint
// cell), each share signed toward every other player with a check triple.
// Outputs are the full dealt package plus an optional action letter; payoffs
// reconstruct the polynomials from the reliable outputs.
struct GroupParams {
    int n = 3, k = 2, t = 0;
    uint32_t q = 7;
};

struct GroupLayout {
    int n, kt;
    uint32_t q;
    std::vector<int> group;  // 0 = A1, 1 = A2, 2 = B

    static GroupLayout make(const GroupParams& prm) {
        GroupLayout L;
        L.n = prm.n;
        L.kt = prm.k + prm.t;
        L.q = prm.q;
        int a = prm.n - L.kt;
        for (int i = 0; i < prm.n; ++i) L.group.push_back(i < a ? 0 : (i < 2 * a ? 1 : 2));
        return L;
    }

    int shares_of(int i) const { return group[static_cast<size_t>(i)] == 2 ? 3 : 2; }
    uint32_t point(int i) const { return static_cast<uint32_t>(i + 1); }
    int others_before(int i, int j) const { return j < i ? j : j - 1; }  // rank of j among "others of i"

    // coordinate layout of player i's action tuple
    int share_coord(int i, int h) const {
        (void)i;
        return h;
    }
    int block(int i) const { return shares_of(i) == 3 ? 9 : 8; }
    int per_other_base(int i, int j) const { return shares_of(i) + block(i) * others_before(i, j); }
    int y_coord(int i, int h, int j) const { return per_other_base(i, j) + h; }
    int b_coord(int i, int h, int j) const {
        // verification values player i holds for player j's share h
        return per_other_base(i, j) + (shares_of(i) == 3 ? 3 : 2) + h;
    }
    int c_coord(int i, int h, int j) const { return per_other_base(i, j) + (shares_of(i) == 3 ? 6 : 5) + h; }
    int option_coord(int i) const { return shares_of(i) + block(i) * (n - 1); }
    int tuple_size(int i) const { return option_coord(i) + 1; }

    Space action_space(int i) const {
        Space sp;
        int grp = group[static_cast<size_t>(i)];
        for (int h = 0; h < shares_of(i); ++h) sp.add("a" + std::to_string(h + 1), static_cast<int32_t>(q));
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            std::string sj = std::to_string(j + 1);
            for (int h = 0; h < shares_of(i); ++h) sp.add("y" + std::to_string(h + 1) + "_" + sj, static_cast<int32_t>(q));
            for (int h = 0; h < 3; ++h) sp.add("b" + std::to_string(h + 1) + "_" + sj, static_cast<int32_t>(q) - 1);
            for (int h = 0; h < 3; ++h) sp.add("c" + std::to_string(h + 1) + "_" + sj, static_cast<int32_t>(q));
        }
        if (grp == 0)
            sp.add("opt", 3, {"-", "U", "D"});
        else if (grp == 1)
            sp.add("opt", 3, {"-", "L", "R"});
        else
            sp.add("opt", 5, {"-", "U", "D", "L", "R"});
        return sp;
    }

    // option letter -> first/second coordinate value; -1 when not applicable
    int option_as_x(int i, int32_t opt) const {
        int grp = group[static_cast<size_t>(i)];
        if (grp == 0) return opt == 1 ? 0 : opt == 2 ? 1 : -1;
        if (grp == 2) return opt == 1 ? 0 : opt == 2 ? 1 : -1;
        return -1;
    }
    int option_as_y(int i, int32_t opt) const {
        int grp = group[static_cast<size_t>(i)];
        if (grp == 1) return opt == 1 ? 0 : opt == 2 ? 1 : -1;
        if (grp == 2) return opt == 3 ? 0 : opt == 4 ? 1 : -1;
        return -1;
    }
};

namespace detail_group {

inline std::string encode_tuple(const Tuple& t) {
    std::string s = "act:";
    for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
    return s;
}
inline Tuple decode_tuple(const std::string& m) {
    Tuple t;
    if (m.rfind("act:", 0) != 0) return t;
    for (auto& tok : wire::split(m.substr(4), ','))
        if (!tok.empty()) t.push_back(static_cast<int32_t>(std::stol(tok)));
    return t;
}

// unique polynomial of the exact degree bound through all claims, or nothing
inline std::optional<Polynomial> exact_fit(const GF& f, const std::vector<ShareClaim>& claims, int degree) {
    if (static_cast<int>(claims.size()) < degree + 1) return std::nullopt;
    return interpolate_agreeing(f, claims, degree, static_cast<int>(claims.size()));
}

}  // namespace detail_group

inline GameBundle correlated_group_bundle(const GroupParams& prm) {
    const int n = prm.n, k = prm.k, t = prm.t, kt = prm.k + prm.t;
    if (!(k + 2 * t < n && n <= 2 * kt))
        throw std::domain_error("group correlated game needs k+2t < n <= 2(k+t) (got n=" + std::to_string(n) +
                                ", k=" + std::to_string(k) + ", t=" + std::to_string(t) + ")");
    if (!is_prime(prm.q) || prm.q < 7 || prm.q <= static_cast<uint32_t>(n))
        throw std::domain_error("group correlated game needs a prime field of size >= 6 with q > n");
    GF field(prm.q);
    GroupLayout L = GroupLayout::make(prm);

    GameBundle b;
    b.id = "corr-group";
    b.description = "group correlated game: shared shares of the recommended cell, check-vector signed";
    b.params = {{"n", n}, {"k", k}, {"t", t}, {"q", static_cast<int>(prm.q)}};
    b.validity_text = "k+2t < n <= 2(k+t), field size >= 6";

    GameSpec& g = b.game;
    g.n = n;
    g.name = b.id;
    g.types = TypeModel::single(TypeProfile(static_cast<size_t>(n)));
    g.type_spaces.assign(static_cast<size_t>(n), Space{{}});
    for (int i = 0; i < n; ++i) {
        g.action_spaces.push_back(L.action_space(i));
        Tuple def(static_cast<size_t>(L.tuple_size(i)), 0);
        g.default_actions.push_back(def);
    }

    g.utility = [L, field, kt, t, n](const TypeProfile&, const ActionProfile& ap) {
        auto coord = [&](int i, int c) { return static_cast<uint32_t>(ap[static_cast<size_t>(i)][static_cast<size_t>(c)]); };
        // reliability: at least n-1-t other players whose held checks accept
        // every share the player output
        std::vector<bool> reliable(static_cast<size_t>(n), false);
        for (int i = 0; i < n; ++i) {
            int passes = 0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                bool ok = true;
                for (int h = 0; h < L.shares_of(i); ++h) {
                    uint32_t a = coord(i, L.share_coord(i, h));
                    uint32_t y = coord(i, L.y_coord(i, h, j));
                    uint32_t bb = coord(j, L.b_coord(j, h, i)) + 1;  // stored as b-1
                    uint32_t cc = coord(j, L.c_coord(j, h, i));
                    if (field.add(a, field.mul(y, bb)) != cc) {
                        ok = false;
                        break;
                    }
                }
                if (ok) ++passes;
            }
            reliable[static_cast<size_t>(i)] = passes >= n - 1 - t;
        }
        int unreliable = 0;
        for (bool r : reliable)
            if (!r) ++unreliable;

        // common optional values of the two takeover groups
        auto common_option = [&](bool first_axis) -> int {
            int common = -2;  // -2 unset, -1 broken
            for (int i = 0; i < n; ++i) {
                int grp = L.group[static_cast<size_t>(i)];
                if (!(grp == 2 || grp == (first_axis ? 0 : 1))) continue;
                int32_t opt = static_cast<int32_t>(coord(i, L.option_coord(i)));
                int v = first_axis ? L.option_as_x(i, opt) : L.option_as_y(i, opt);
                if (v < 0) return -1;
                if (common == -2)
                    common = v;
                else if (common != v)
                    return -1;
            }
            return common;
        };
        int opt1 = common_option(true), opt2 = common_option(false);

        std::vector<Rat> u(static_cast<size_t>(n), Rat(0));
        if (unreliable > t) return u;                                   // all 0
        if ((opt1 >= 0 || opt2 >= 0) && unreliable > 0) return u;       // all 0

        // reconstructions from reliable outputs
        std::vector<ShareClaim> f1c, f2c, gc;
        for (int i = 0; i < n; ++i) {
            if (!reliable[static_cast<size_t>(i)]) continue;
            int grp = L.group[static_cast<size_t>(i)];
            uint32_t pt = L.point(i);
            if (grp == 0) {
                f1c.push_back({pt, coord(i, 0)});
                gc.push_back({pt, coord(i, 1)});
            } else if (grp == 1) {
                f2c.push_back({pt, coord(i, 0)});
                gc.push_back({pt, coord(i, 1)});
            } else {
                f1c.push_back({pt, coord(i, 0)});
                f2c.push_back({pt, coord(i, 1)});
                gc.push_back({pt, coord(i, 2)});
            }
        }
        auto f1 = detail_group::exact_fit(field, f1c, kt - 1);
        auto f2 = detail_group::exact_fit(field, f2c, kt - 1);
        auto gg = detail_group::exact_fit(field, gc, kt);
        Rat void_pay(8, 3);
        bool voided = false;
        int x = -1, y = -1;
        if (!f1 || f1->eval(0) > 1 || !f2 || f2->eval(0) > 1)
            voided = true;
        else {
            x = static_cast<int>(f1->eval(0));
            y = static_cast<int>(f2->eval(0));
            if (x == 1 && y == 1) voided = true;  // the punishment cell
            else if (!gg || gg->eval(0) != static_cast<uint32_t>(2 * x + y)) voided = true;
        }
        if (voided) {
            for (auto& v : u) v = void_pay;
            return u;
        }
        int o1 = opt1 >= 0 ? opt1 : x;
        int o2 = opt2 >= 0 ? opt2 : y;
        auto [p1, p2] = correlated_payoff(o1, o2);
        for (int i = 0; i < n; ++i) {
            int grp = L.group[static_cast<size_t>(i)];
            if (grp == 0)
                u[static_cast<size_t>(i)] = p1;
            else if (grp == 1)
                u[static_cast<size_t>(i)] = p2;
            else
                u[static_cast<size_t>(i)] = opt1 >= 0 ? p1 : (opt2 >= 0 ? p2 : void_pay);
        }
        return u;
    };

    // Mediator randomness: the cell, the free coefficients of f1, f2
    // (degree kt-1) and g (degree kt), then (y, b) per signed (owner, share,
    // verifier) triple.
    std::vector<Alphabet> slots;
    slots.push_back(Alphabet::uniform(0, 2));  // cell
    int coeff_slots = (kt - 1) + (kt - 1) + kt;
    for (int c = 0; c < coeff_slots; ++c) slots.push_back(Alphabet::uniform(0, static_cast<int32_t>(prm.q) - 1));
    int check_slots = 0;
    for (int i = 0; i < n; ++i) check_slots += L.shares_of(i) * (n - 1) * 2;
    for (int c = 0; c < check_slots; ++c)
        slots.push_back(c % 2 == 0 ? Alphabet::uniform(0, static_cast<int32_t>(prm.q) - 1)
                                   : Alphabet::uniform(1, static_cast<int32_t>(prm.q) - 1));
    b.mediator.randomness = RandomnessDomain{{slots}, false};
    b.mediator.name = "share-dealer";
    b.mediator.rule = [L, field, kt, n, coeff_slots](const MediatorView& v) {
        std::vector<Message> out(static_cast<size_t>(n));
        if (v.stage != 1) return out;
        int32_t cell = v.draw(0);
        int x = cell == 2 ? 1 : 0, y = cell == 1 ? 1 : 0;
        int slot = 1;
        auto poly = [&](uint32_t secret, int degree) {
            std::vector<uint32_t> cs(static_cast<size_t>(degree) + 1);
            cs[0] = secret;
            for (int d = 1; d <= degree; ++d) cs[static_cast<size_t>(d)] = static_cast<uint32_t>(v.draw(slot++));
            return Polynomial{field, cs};
        };
        Polynomial f1 = poly(static_cast<uint32_t>(x), kt - 1);
        Polynomial f2 = poly(static_cast<uint32_t>(y), kt - 1);
        Polynomial gg = poly(static_cast<uint32_t>(2 * x + y), kt);
        slot = 1 + coeff_slots;

        // honest share values per player
        auto shares = [&](int i) {
            std::vector<uint32_t> s;
            int grp = L.group[static_cast<size_t>(i)];
            uint32_t pt = L.point(i);
            if (grp == 0) s = {f1.eval(pt), gg.eval(pt)};
            else if (grp == 1) s = {f2.eval(pt), gg.eval(pt)};
            else s = {f1.eval(pt), f2.eval(pt), gg.eval(pt)};
            return s;
        };
        // deal (y, b, c): y to the owner, (b, c) to the verifier
        std::vector<Tuple> acts(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) acts[static_cast<size_t>(i)].assign(static_cast<size_t>(L.tuple_size(i)), 0);
        for (int i = 0; i < n; ++i) {
            auto sh = shares(i);
            for (int h = 0; h < L.shares_of(i); ++h)
                acts[static_cast<size_t>(i)][static_cast<size_t>(L.share_coord(i, h))] = static_cast<int32_t>(sh[static_cast<size_t>(h)]);
        }
        for (int i = 0; i < n; ++i) {
            auto sh = shares(i);
            for (int h = 0; h < L.shares_of(i); ++h)
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    uint32_t yy = static_cast<uint32_t>(v.draw(slot++));
                    uint32_t bb = static_cast<uint32_t>(v.draw(slot++));
                    uint32_t cc = field.add(sh[static_cast<size_t>(h)], field.mul(yy, bb));
                    acts[static_cast<size_t>(i)][static_cast<size_t>(L.y_coord(i, h, j))] = static_cast<int32_t>(yy);
                    acts[static_cast<size_t>(j)][static_cast<size_t>(L.b_coord(j, h, i))] = static_cast<int32_t>(bb) - 1;
                    acts[static_cast<size_t>(j)][static_cast<size_t>(L.c_coord(j, h, i))] = static_cast<int32_t>(cc);
                }
        }
        for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = detail_group::encode_tuple(acts[static_cast<size_t>(i)]);
        return out;
    };

    for (int i = 0; i < n; ++i) {
        Strategy s;
        s.name = "play-the-package";
        s.act = [](const PlayerView& v) -> std::optional<Action> {
            if (v.stage != 1) return std::nullopt;
            return detail_group::decode_tuple(v.inbox[0]);
        };
        b.sigma.push_back(std::move(s));
    }

    // punishment: output deliberately inconsistent junk (shares 0, y 0, c 1),
    // which fails every check and voids everyone to the all-0 outcome
    b.has_rho = true;
    for (int i = 0; i < n; ++i) {
        Tuple junk(static_cast<size_t>(L.tuple_size(i)), 0);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int h = 0; h < 3; ++h) junk[static_cast<size_t>(L.c_coord(i, h, j))] = 1;
        }
        b.rho.push_back(UStrategy::constant(junk, "junk-output"));
    }

    // takeover: A1 u B pools its packages over the coalition channel, learns
    // its own recommendation x, and when x = U plays optional D while bending
    // its f1 shares (and signatures) toward D, hoping the honest checks pass
    std::vector<int> a1b;
    for (int i = 0; i < n; ++i)
        if (L.group[static_cast<size_t>(i)] != 1) a1b.push_back(i);
    b.takeover_sets.push_back({"A1uB", a1b});
    {
        Deviation d;
        d.K = a1b;
        d.use_ct_channels = true;
        d.name = "takeover:A1uB:D";
        GF f2field = field;
        d.make = [L, f2field, kt, n, a1b](const std::map<int, Tuple>&) {
            std::map<int, Strategy> out;
            for (int self : a1b) {
                Strategy s;
                s.name = "takeover";
                s.send = [self, a1b](const PlayerView& v) {
                    if (v.stage != 2) return Message();
                    // share the dealt package with the coalition
                    std::vector<std::string> lines;
                    for (int j : a1b)
                        if (j != self) lines.push_back("ct|to:" + std::to_string(j) + "|" + v.inbox[0]);
                    return wire::join(lines, '\n');
                };
                s.act = [self, a1b, L, f2field, kt](const PlayerView& v) -> std::optional<Action> {
                    if (v.stage != 3) return std::nullopt;
                    // pooled packages: own from stage 1, peers from stage 2
                    std::map<int, Tuple> pkg;
                    pkg[self] = detail_group::decode_tuple(v.inbox[0]);
                    for (auto& line : wire::split(v.inbox[1], '\n')) {
                        if (line.rfind("ctfrom:", 0) != 0) continue;
                        auto bar = line.find('|');
                        int from = std::stoi(line.substr(7, bar - 7));
                        pkg[from] = detail_group::decode_tuple(line.substr(bar + 1));
                    }
                    Tuple mine = pkg[self];
                    // reconstruct x from the coalition's f1 shares
                    std::vector<std::pair<uint32_t, uint32_t>> f1pts;
                    std::vector<std::pair<uint32_t, uint32_t>> gpts;
                    for (int j : a1b) {
                        int gsh = L.group[static_cast<size_t>(j)] == 2 ? 2 : 1;
                        f1pts.push_back({L.point(j), static_cast<uint32_t>(pkg[j][0])});
                        gpts.push_back({L.point(j), static_cast<uint32_t>(pkg[j][static_cast<size_t>(gsh)])});
                    }
                    uint32_t x = interpolate(f2field, f1pts).eval(0);
                    if (x != 0) return mine;  // already D: play the package honestly
                    // forge f1 -> f1+1 and the own g share toward encode(D,L)=2
                    gpts.push_back({0, 2});
                    Polynomial ghat = interpolate(f2field, gpts);
                    Tuple a = mine;
                    int gcoord = L.group[static_cast<size_t>(self)] == 2 ? 2 : 1;
                    a[0] = static_cast<int32_t>(f2field.add(static_cast<uint32_t>(a[0]), 1));
                    a[static_cast<size_t>(gcoord)] = static_cast<int32_t>(ghat.eval(L.point(self)));
                    bool g_changed = a[static_cast<size_t>(gcoord)] != mine[static_cast<size_t>(gcoord)];
                    for (int j = 0; j < static_cast<int>(L.group.size()); ++j) {
                        if (j == self) continue;
                        // shift signatures on every share whose value moved
                        int yc = L.y_coord(self, 0, j);
                        a[static_cast<size_t>(yc)] =
                            static_cast<int32_t>(f2field.add(static_cast<uint32_t>(a[static_cast<size_t>(yc)]), 1));
                        if (g_changed) {
                            int ycg = L.y_coord(self, gcoord, j);
                            a[static_cast<size_t>(ycg)] = static_cast<int32_t>(
                                f2field.add(static_cast<uint32_t>(a[static_cast<size_t>(ycg)]), 1));
                        }
                    }
                    // coalition members accept each other's forged shares
                    for (int j : a1b) {
                        if (j == self) continue;
                        uint32_t aj = f2field.add(static_cast<uint32_t>(pkg[j][0]), 1);
                        uint32_t yj = f2field.add(
                            static_cast<uint32_t>(pkg[j][static_cast<size_t>(L.y_coord(j, 0, self))]), 1);
                        uint32_t bb = static_cast<uint32_t>(a[static_cast<size_t>(L.b_coord(self, 0, j))]) + 1;
                        a[static_cast<size_t>(L.c_coord(self, 0, j))] =
                            static_cast<int32_t>(f2field.add(aj, f2field.mul(yj, bb)));
                        int gj = L.group[static_cast<size_t>(j)] == 2 ? 2 : 1;
                        std::vector<std::pair<uint32_t, uint32_t>> gp;
                        // rebuild the peer's forged g share the same way it does
                        // (same pooled data, same formula)
                        uint32_t gh = ghat.eval(L.point(j));
                        if (gh != static_cast<uint32_t>(pkg[j][static_cast<size_t>(gj)])) {
                            uint32_t yg = f2field.add(
                                static_cast<uint32_t>(pkg[j][static_cast<size_t>(L.y_coord(j, gj, self))]), 1);
                            uint32_t bg = static_cast<uint32_t>(a[static_cast<size_t>(L.b_coord(self, gj, j))]) + 1;
                            a[static_cast<size_t>(L.c_coord(self, gj, j))] =
                                static_cast<int32_t>(f2field.add(gh, f2field.mul(yg, bg)));
                        }
                        (void)gp;
                    }
                    a[static_cast<size_t>(L.option_coord(self))] = 2;  // optional D
                    return a;
                };
                out[self] = s;
            }
            return out;
        };
        b.family.push_back(std::move(d));
    }
    return b;
}

}  // namespace catalog
}  // namespace ctlab

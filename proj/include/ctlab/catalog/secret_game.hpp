#pragma once

#include "../attacks/splice.hpp"
#include "../candidates.hpp"
#include "../sharing.hpp"
#include "bundle.hpp"

namespace ctlab {
namespace catalog {

enum class SecretVariant { ThreePlayer, NPlayer };

// The secret game family: nature deals a uniformly random bit as the secret
// and a random polynomial over GF(p) whose constant term carries it. Each
// participant wants to output the secret, would rather the others fail, and
// gets paid 1 / -3 / 2 for all-learn / own-miss / exclusive-learn.
//
// The three-player variant groups the evaluation points 1..n into three
// blocks (sizes floor(n/3), the middle rest, ceil(n/3)) and types a player
// with its block's shares; the n-player variant deals one point per player
// and scores the all-learn case by an n-t quorum of correct outputs.
struct SecretGameParams {
    int n = 3, k = 1, t = 0;
    uint32_t p = 7;
    SecretVariant variant = SecretVariant::ThreePlayer;
};

inline std::vector<std::vector<uint32_t>> secret_game_blocks(int n) {
    std::vector<std::vector<uint32_t>> blocks(3);
    int b1 = n / 3, b3 = (n + 2) / 3;
    for (int pt = 1; pt <= n; ++pt) {
        if (pt <= b1)
            blocks[0].push_back(static_cast<uint32_t>(pt));
        else if (pt > n - b3)
            blocks[2].push_back(static_cast<uint32_t>(pt));
        else
            blocks[1].push_back(static_cast<uint32_t>(pt));
    }
    return blocks;
}

namespace detail_secret {

inline Polynomial poly_of(const GF& f, const NatureAssign& na, int degree) {
    std::vector<uint32_t> coeffs(static_cast<size_t>(degree) + 1);
    coeffs[0] = static_cast<uint32_t>(na[0]);
    for (int d = 1; d <= degree; ++d) coeffs[static_cast<size_t>(d)] = static_cast<uint32_t>(na[static_cast<size_t>(d)]);
    return Polynomial{f, coeffs};
}

// quorum reconstruction shared by both variants' mediators
inline MediatorSpec secret_mediator(const GF& field, int n, int degree, int quorum) {
    MediatorSpec med;
    med.name = "share-collector";
    med.rule = [field, n, degree, quorum](const MediatorView& v) {
        std::vector<Message> out(static_cast<size_t>(v.inputs[0].size()));
        if (v.stage != 1) return out;
        std::vector<ShareClaim> claims;
        std::set<uint32_t> seen;
        for (auto& m : v.inputs[0])
            for (auto& c : candidates::decode_claims(m))
                if (c.index >= 1 && c.index <= static_cast<uint32_t>(n) && c.value < field.p() &&
                    seen.insert(c.index).second)
                    claims.push_back(c);
        uint32_t rec = 0;
        if (static_cast<int>(claims.size()) >= quorum) {
            auto poly = interpolate_agreeing(field, claims, degree, quorum);
            if (poly) rec = poly->eval(0);
        }
        for (auto& m : out) m = "rec:" + std::to_string(rec);
        return out;
    };
    return med;
}

inline uint32_t parse_rec(const Message& m) {
    if (m.rfind("rec:", 0) != 0) return 0;
    return static_cast<uint32_t>(std::stoul(m.substr(4)));
}

}  // namespace detail_secret

inline GameBundle secret_sharing_bundle(const SecretGameParams& prm) {
    const int n = prm.n, k = prm.k, t = prm.t;
    if (!(2 * k + 3 * t < n && n <= 3 * k + 3 * t))
        throw std::domain_error("secret game needs 2k+3t < n <= 3k+3t (got n=" + std::to_string(n) +
                                ", k=" + std::to_string(k) + ", t=" + std::to_string(t) + ")");
    if (!is_prime(prm.p) || prm.p <= static_cast<uint32_t>(n))
        throw std::domain_error("secret game needs a prime p > n");
    GF field(prm.p);
    const int degree = k + t;
    const bool three = prm.variant == SecretVariant::ThreePlayer;
    const int players = three ? 3 : n;
    auto blocks = secret_game_blocks(n);
    std::vector<std::vector<uint32_t>> owned(static_cast<size_t>(players));
    if (three)
        for (int i = 0; i < 3; ++i) owned[static_cast<size_t>(i)] = blocks[static_cast<size_t>(i)];
    else
        for (int i = 0; i < n; ++i) owned[static_cast<size_t>(i)] = {static_cast<uint32_t>(i + 1)};

    GameBundle b;
    b.id = three ? "gamma3" : "gammaN";
    b.description = three ? "three-group secret game over GF(" + std::to_string(prm.p) + ")"
                          : "n-player secret game over GF(" + std::to_string(prm.p) + ")";
    b.params = {{"n", n}, {"k", k}, {"t", t}, {"p", static_cast<int>(prm.p)}};
    b.validity_text = "2k+3t < n <= 3k+3t, p prime > n";
    b.secret_support = 2;
    b.secret_of = [](const NatureAssign& na) { return na[0]; };

    GameSpec& g = b.game;
    g.n = players;
    g.name = b.id;
    // nature: a fair secret bit, then uniform higher coefficients
    g.types.vars.push_back({"secret", Alphabet::uniform(0, 1)});
    for (int d = 1; d <= degree; ++d)
        g.types.vars.push_back({"coeff" + std::to_string(d), Alphabet::uniform(0, static_cast<int32_t>(prm.p) - 1)});
    g.types.to_types = [field, owned, degree](const NatureAssign& na) {
        Polynomial f = detail_secret::poly_of(field, na, degree);
        TypeProfile tp;
        for (auto& pts : owned) {
            Tuple ty;
            for (uint32_t pt : pts) ty.push_back(static_cast<int32_t>(f.eval(pt)));
            tp.push_back(ty);
        }
        return tp;
    };
    for (auto& pts : owned) {
        Space sp;
        for (uint32_t pt : pts) sp.add("f(" + std::to_string(pt) + ")", static_cast<int32_t>(prm.p));
        g.type_spaces.push_back(sp);
    }
    for (int i = 0; i < players; ++i) {
        if (three)
            g.action_spaces.push_back(Space::labeled("out", {"0", "1"}));
        else
            g.action_spaces.push_back(Space::numeric("out", static_cast<int32_t>(prm.p)));
        g.default_actions.push_back({0});
    }
    g.utility = [field, degree, n, t, three, players](const TypeProfile& tp, const ActionProfile& ap) {
        // recover the dealt secret from the full share profile
        std::vector<std::pair<uint32_t, uint32_t>> pts;
        {
            uint32_t next_pt = 1;
            for (auto& ty : tp)
                for (int32_t v : ty) pts.push_back({next_pt++, static_cast<uint32_t>(v)});
        }
        std::vector<std::pair<uint32_t, uint32_t>> head(pts.begin(), pts.begin() + degree + 1);
        int32_t secret = static_cast<int32_t>(interpolate(field, head).eval(0));
        int correct = 0;
        for (auto& a : ap)
            if (a[0] == secret) ++correct;
        std::vector<Rat> u(static_cast<size_t>(players));
        bool all_learn = three ? correct == players : correct >= n - t;
        for (int i = 0; i < players; ++i) {
            if (ap[static_cast<size_t>(i)][0] != secret)
                u[static_cast<size_t>(i)] = -3;
            else
                u[static_cast<size_t>(i)] = all_learn ? 1 : 2;
        }
        return u;
    };

    b.mediator = detail_secret::secret_mediator(field, n, degree, n - t);

    // honest: report the type, play the recommendation (clamped to the action set)
    for (int i = 0; i < players; ++i) {
        Strategy s;
        s.name = "truthful";
        auto pts = owned[static_cast<size_t>(i)];
        s.send = [pts](const PlayerView& v) {
            if (v.stage != 1) return Message();
            std::vector<ShareClaim> cs;
            for (size_t j = 0; j < pts.size(); ++j)
                cs.push_back({pts[j], static_cast<uint32_t>(v.type[j])});
            return candidates::encode_claims(cs);
        };
        int32_t amax = three ? 1 : static_cast<int32_t>(prm.p) - 1;
        s.act = [amax](const PlayerView& v) -> std::optional<Action> {
            if (v.stage != 1) return std::nullopt;
            int32_t rec = static_cast<int32_t>(detail_secret::parse_rec(v.inbox[0]));
            if (rec > amax) rec = 0;
            return Action{rec};
        };
        b.sigma.push_back(std::move(s));
    }
    b.has_rho = true;
    for (int i = 0; i < players; ++i) b.rho.push_back(UStrategy::constant({0}, "always-0"));

    // declared single-player deviation family in the mediator game:
    // share misreports and withholding, crossed with follow / constant plays
    for (int i = 0; i < players; ++i) {
        auto pts = owned[static_cast<size_t>(i)];
        for (int shift = 0; shift < static_cast<int>(prm.p); ++shift) {
            for (int play = -1; play <= (three ? 1 : 0); ++play) {  // -1 = follow
                if (shift == 0 && play == -1) continue;             // that is sigma itself
                Deviation d;
                d.K = {i};
                d.name = "p" + std::to_string(i + 1) + (shift ? ":shift+" + std::to_string(shift) : ":truthful") +
                         (play < 0 ? ":follow" : ":play" + std::to_string(play));
                uint32_t pmod = prm.p;
                Strategy base = b.sigma[static_cast<size_t>(i)];
                d.make = [i, pts, shift, play, pmod, base](const std::map<int, Tuple>&) {
                    Strategy s = base;
                    if (shift > 0) {
                        s.send = [pts, shift, pmod](const PlayerView& v) {
                            if (v.stage != 1) return Message();
                            std::vector<ShareClaim> cs;
                            for (size_t j = 0; j < pts.size(); ++j)
                                cs.push_back({pts[j], (static_cast<uint32_t>(v.type[j]) + shift) % pmod});
                            return candidates::encode_claims(cs);
                        };
                    }
                    if (play >= 0)
                        s.act = [play](const PlayerView& v) -> std::optional<Action> {
                            if (v.stage != 1) return std::nullopt;
                            return Action{play};
                        };
                    return std::map<int, Strategy>{{i, s}};
                };
                b.family.push_back(std::move(d));
            }
        }
        // withholding
        for (int play = -1; play <= (three ? 1 : 0); ++play) {
            Deviation d;
            d.K = {i};
            d.name = "p" + std::to_string(i + 1) + ":withhold" + (play < 0 ? ":follow" : ":play" + std::to_string(play));
            Strategy base = b.sigma[static_cast<size_t>(i)];
            d.make = [i, play, base](const std::map<int, Tuple>&) {
                Strategy s = base;
                s.send = [](const PlayerView&) { return Message(); };
                if (play >= 0)
                    s.act = [play](const PlayerView& v) -> std::optional<Action> {
                        if (v.stage != 1) return std::nullopt;
                        return Action{play};
                    };
                return std::map<int, Strategy>{{i, s}};
            };
            b.family.push_back(std::move(d));
        }
    }

    b.decision_map = [](const Action& a) { return a[0] == 1 ? decision::ONE : decision::ZERO; };
    return b;
}

// The splice deviation used against the bounded exchange-and-decide candidate:
// the last group pretends from round 1 on that each of its shares is one
// larger than it really is.
inline Deviation secret_splice_deviation(const SecretGameParams& prm, const std::vector<Strategy>& sigma_ct) {
    const int player = prm.variant == SecretVariant::ThreePlayer ? 2 : prm.n - 1;
    Deviation d;
    d.K = {player};
    d.name = "splice:p" + std::to_string(player + 1) + ":shift+1";
    uint32_t p = prm.p;
    Strategy base = sigma_ct[static_cast<size_t>(player)];
    d.make = [player, p, base](const std::map<int, Tuple>& joint) {
        SpliceSpec spec;
        spec.switch_round = 1;
        for (int32_t v : joint.at(player)) spec.replacement_type.push_back((v + 1) % static_cast<int32_t>(p));
        return std::map<int, Strategy>{{player, splice_strategy(base, spec)}};
    };
    return d;
}

}  // namespace catalog
}  // namespace ctlab

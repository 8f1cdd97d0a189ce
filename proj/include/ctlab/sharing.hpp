#pragma once

#include <optional>
#include <set>
#include <vector>

#include "polynomial.hpp"
#include "rng.hpp"

namespace ctlab {

// One claimed share: a nonzero evaluation point and the value claimed for it.
// The secret lives at 0, so index 0 is rejected.
struct ShareClaim {
    uint32_t index;
    uint32_t value;
};

// Linear authentication triple for a share a: an honestly issued entry
// satisfies a + y*b = c, with y held by the share owner and (b, c) by the
// verifier. b is never 0.
struct CheckEntry {
    uint32_t y;
    uint32_t b;
    uint32_t c;
};

// f with f(0) = secret and the remaining `degree` coefficients uniform.
inline Polynomial sample_polynomial(const GF& f, int degree, uint32_t secret, Tape& tape,
                                    size_t tape_offset = 0) {
    if (secret >= f.p()) throw std::domain_error("secret outside field");
    if (degree < 0 || static_cast<uint32_t>(degree) >= f.p())
        throw std::domain_error("need p > degree");
    std::vector<uint32_t> coeffs(degree + 1, 0);
    coeffs[0] = secret;
    Alphabet uni = Alphabet::uniform(0, static_cast<int32_t>(f.p()) - 1);
    for (int d = 1; d <= degree; ++d)
        coeffs[d] = static_cast<uint32_t>(tape.draw(tape_offset + d - 1, uni));
    return Polynomial{f, coeffs};
}

// The unique polynomial of degree <= `degree` agreeing with at least `quorum`
// of the claims, if exactly one exists. Searches all (degree+1)-subsets, so
// cost is binomial(n, degree+1) interpolations; fine at the scales used here.
inline std::optional<Polynomial> interpolate_agreeing(const GF& f, const std::vector<ShareClaim>& claims,
                                                      int degree, int quorum) {
    if (quorum < degree + 1) throw std::domain_error("quorum must be at least degree+1");
    std::set<uint32_t> seen;
    for (auto& c : claims) {
        if (c.index % f.p() == 0) throw std::domain_error("share index 0 is reserved for the secret");
        if (!seen.insert(c.index).second) throw std::domain_error("duplicate share index");
    }
    int n = static_cast<int>(claims.size());
    int k = degree + 1;
    if (n < quorum) return std::nullopt;

    std::optional<Polynomial> found;
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    auto advance = [&]() {
        int i = k - 1;
        while (i >= 0 && pick[i] == n - k + i) --i;
        if (i < 0) return false;
        ++pick[i];
        for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        return true;
    };
    do {
        std::vector<std::pair<uint32_t, uint32_t>> pts;
        for (int i : pick) pts.push_back({claims[i].index, claims[i].value});
        Polynomial cand = interpolate(f, pts);
        int agree = 0;
        for (auto& c : claims)
            if (cand.eval(c.index) == c.value % f.p()) ++agree;
        if (agree >= quorum) {
            if (found && !(*found == cand)) return std::nullopt;  // two distinct quorum polys
            found = cand;
        }
    } while (advance());
    return found;
}

inline bool verify_check(const GF& f, uint32_t a, uint32_t y, uint32_t b, uint32_t c) {
    if (b % f.p() == 0) throw std::domain_error("check vector b must be nonzero");
    return f.add(a % f.p(), f.mul(y % f.p(), b % f.p())) == c % f.p();
}

// entries[i][j] authenticates player i's share to verifier j (diagonal unused).
// y uniform on F, b uniform on F \ {0}, c forced by the defining equation.
inline std::vector<std::vector<CheckEntry>> issue_checks(const GF& f, const std::vector<uint32_t>& shares,
                                                         Tape& tape, size_t tape_offset = 0) {
    size_t n = shares.size();
    if (n < 2) throw std::domain_error("check vectors need at least 2 players");
    Alphabet uy = Alphabet::uniform(0, static_cast<int32_t>(f.p()) - 1);
    Alphabet ub = Alphabet::uniform(1, static_cast<int32_t>(f.p()) - 1);
    std::vector<std::vector<CheckEntry>> m(n, std::vector<CheckEntry>(n, CheckEntry{0, 1, 0}));
    size_t slot = tape_offset;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            uint32_t y = static_cast<uint32_t>(tape.draw(slot++, uy));
            uint32_t b = static_cast<uint32_t>(tape.draw(slot++, ub));
            uint32_t c = f.add(shares[i] % f.p(), f.mul(y, b));
            m[i][j] = CheckEntry{y, b, c};
        }
    return m;
}

// Players whose claimed share passes at least `per_share_quorum` of the
// verifications held by the other players. `announced_y[i][j]` is the
// signature player i announces toward verifier j (honest players announce the
// issued y; a forger may announce anything).
inline std::set<uint32_t> reliable_players(const GF& f, const std::vector<ShareClaim>& claims,
                                           const std::vector<std::vector<uint32_t>>& announced_y,
                                           const std::vector<std::vector<CheckEntry>>& checks,
                                           int per_share_quorum) {
    size_t n = claims.size();
    if (checks.size() != n || announced_y.size() != n)
        throw std::domain_error("check matrix dimensions must match claims");
    std::set<uint32_t> out;
    for (size_t i = 0; i < n; ++i) {
        int passes = 0;
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (verify_check(f, claims[i].value, announced_y[i][j], checks[i][j].b, checks[i][j].c))
                ++passes;
        }
        if (passes >= per_share_quorum) out.insert(claims[i].index);
    }
    return out;
}

}  // namespace ctlab

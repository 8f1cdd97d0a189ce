#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace ctlab {

// splitmix64: tiny deterministic stream generator. All randomness in the
// project flows through tapes seeded from a single master seed; there are
// no wall-clock or entropy sources anywhere.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t hash_str(const std::string& s) {
    // FNV-1a, stable across platforms
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// A finite weighted alphabet. Weights are exact rationals summing to 1.
struct Alphabet {
    std::vector<std::pair<int32_t, Rat>> entries;  // value -> weight

    static Alphabet uniform(int32_t lo, int32_t hi) {  // inclusive range
        Alphabet a;
        int n = hi - lo + 1;
        for (int32_t v = lo; v <= hi; ++v) a.entries.push_back({v, Rat(1, n)});
        return a;
    }
    static Alphabet singleton(int32_t v) { return Alphabet{{{v, Rat(1)}}}; }

    bool trivial() const { return entries.size() <= 1; }
    Rat total() const {
        Rat s = 0;
        for (auto& [v, w] : entries) s += w;
        return s;
    }
};

// A replayable stream of draws for one participant. Entries realized so far
// can be extracted after an execution and injected into another participant
// (simulation adversaries re-use tapes this way).
class Tape {
  public:
    Tape() = default;
    explicit Tape(uint64_t seed) : state_(seed) {}

    // Draw entry `idx` from `alpha`. Draws are positional: the same index
    // always yields the same value for a given tape, regardless of call order.
    int32_t draw(size_t idx, const Alphabet& alpha) {
        while (realized_.size() <= idx) realized_.push_back(INT32_MIN);
        if (realized_[idx] == INT32_MIN) realized_[idx] = generate(alpha);
        return realized_[idx];
    }

    const std::vector<int32_t>& realized() const { return realized_; }
    void inject(std::vector<int32_t> values) { realized_ = std::move(values); }

  private:
    int32_t generate(const Alphabet& alpha) {
        if (alpha.entries.empty()) throw std::logic_error("draw from empty alphabet");
        if (alpha.entries.size() == 1) return alpha.entries[0].first;
        // Rejection sampling over the common denominator keeps draws exact.
        BigInt den = 1;
        for (auto& [v, w] : alpha.entries) den = lcm(den, denominator(w));
        uint64_t d = den.convert_to<uint64_t>();
        uint64_t lim = UINT64_MAX - (UINT64_MAX % d);
        uint64_t r;
        do {
            r = splitmix64(state_);
        } while (r >= lim);
        BigInt pick = r % d;
        BigInt acc = 0;
        for (auto& [v, w] : alpha.entries) {
            acc += numerator(w) * (den / denominator(w));
            if (pick < acc) return v;
        }
        return alpha.entries.back().first;  // unreachable if weights sum to 1
    }

    uint64_t state_ = 0;
    std::vector<int32_t> realized_;
};

// All tapes for one execution, keyed by participant id ("p0", "p1", ...,
// "mediator", "nature", or synthetic ids for simulated replicas). Identical
// seeds produce identical draws for identical keys.
class RandomModel {
  public:
    explicit RandomModel(uint64_t seed = 0) : seed_(seed) {}

    // Derive the model for sample `index` of a Monte Carlo batch. Streams are
    // independent across samples and independent of evaluation order.
    RandomModel fork(uint64_t index) const {
        uint64_t s = seed_;
        uint64_t a = splitmix64(s);
        return RandomModel(a ^ (index * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull));
    }

    Tape& tape(const std::string& participant) {
        auto it = tapes_.find(participant);
        if (it != tapes_.end()) return it->second;
        uint64_t s = seed_ ^ hash_str(participant);
        splitmix64(s);
        return tapes_.emplace(participant, Tape(s)).first->second;
    }

    void inject(const std::string& participant, std::vector<int32_t> values) {
        tape(participant).inject(std::move(values));
    }

    uint64_t seed() const { return seed_; }

  private:
    uint64_t seed_;
    std::map<std::string, Tape> tapes_;
};

}  // namespace ctlab

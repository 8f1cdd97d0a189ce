#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "../agreement.hpp"
#include "../concepts.hpp"

namespace ctlab {

struct RunSettings {
    uint64_t seed = 42;
    long samples = 100000;
    int round_cap = 16;
    size_t node_budget = 50'000'000;
};

// One measured quantity. Exact rows carry a rational; Monte Carlo rows carry
// a double estimate with a 95% half-width.
struct MeasuredRow {
    std::string label;
    bool is_exact = true;
    Rat exact;
    double estimate = 0.0;
    double halfwidth = 0.0;

    static MeasuredRow exact_row(std::string label, Rat v) {
        MeasuredRow r;
        r.label = std::move(label);
        r.exact = std::move(v);
        return r;
    }
    static MeasuredRow mc_row(std::string label, double v, double hw) {
        MeasuredRow r;
        r.label = std::move(label);
        r.is_exact = false;
        r.estimate = v;
        r.halfwidth = hw;
        return r;
    }
    double as_double() const { return is_exact ? to_double(exact) : estimate; }
};

struct Expectation {
    enum Kind { Equals, AtLeast, AtMost, Greater, Less, IsTrue, IsFalse } kind = Equals;
    Rat value = 0;
    Rat tolerance = 0;

    std::string show() const {
        switch (kind) {
            case Equals:
                return tolerance == 0 ? "== " + to_string(value)
                                      : "== " + to_string(value) + " +/- " + to_string(tolerance);
            case AtLeast: return ">= " + to_string(value);
            case AtMost: return "<= " + to_string(value);
            case Greater: return "> " + to_string(value);
            case Less: return "< " + to_string(value);
            case IsTrue: return "true";
            case IsFalse: return "false";
        }
        return "?";
    }
};

inline Expectation expect_eq(Rat v, Rat tol = 0) { return {Expectation::Equals, std::move(v), std::move(tol)}; }
inline Expectation expect_ge(Rat v) { return {Expectation::AtLeast, std::move(v), 0}; }
inline Expectation expect_le(Rat v) { return {Expectation::AtMost, std::move(v), 0}; }
inline Expectation expect_gt(Rat v) { return {Expectation::Greater, std::move(v), 0}; }
inline Expectation expect_lt(Rat v) { return {Expectation::Less, std::move(v), 0}; }
inline Expectation expect_true() { return {Expectation::IsTrue, 1, 0}; }
inline Expectation expect_false() { return {Expectation::IsFalse, 0, 0}; }

enum class Verdict { Verified, Falsified, Inconclusive };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Verified: return "verified";
        case Verdict::Falsified: return "falsified";
        default: return "inconclusive";
    }
}

// Exact rows compare outright. Monte Carlo rows compare the whole confidence
// interval: a verdict is inconclusive exactly when the interval straddles the
// threshold (or the tolerance band).
inline Verdict judge_row(const MeasuredRow& m, const Expectation& e) {
    auto cmp_exact = [&](const Rat& v) {
        switch (e.kind) {
            case Expectation::Equals: {
                Rat d = v - e.value;
                if (d < 0) d = -d;
                return d <= e.tolerance;
            }
            case Expectation::AtLeast: return v >= e.value;
            case Expectation::AtMost: return v <= e.value;
            case Expectation::Greater: return v > e.value;
            case Expectation::Less: return v < e.value;
            case Expectation::IsTrue: return v != 0;
            case Expectation::IsFalse: return v == 0;
        }
        return false;
    };
    if (m.is_exact) return cmp_exact(m.exact) ? Verdict::Verified : Verdict::Falsified;

    double v = e.kind == Expectation::IsTrue || e.kind == Expectation::IsFalse ? 0.5 : to_double(e.value);
    double lo = m.estimate - m.halfwidth, hi = m.estimate + m.halfwidth;
    switch (e.kind) {
        case Expectation::IsTrue: return m.estimate != 0 ? Verdict::Verified : Verdict::Falsified;
        case Expectation::IsFalse: return m.estimate == 0 ? Verdict::Verified : Verdict::Falsified;
        case Expectation::Equals: {
            double tol = to_double(e.tolerance);
            if (lo >= v - tol && hi <= v + tol) return Verdict::Verified;
            if (hi < v - tol || lo > v + tol) return Verdict::Falsified;
            return Verdict::Inconclusive;
        }
        case Expectation::AtLeast:
        case Expectation::Greater:
            if (lo > v || (e.kind == Expectation::AtLeast && lo >= v)) return Verdict::Verified;
            if (hi < v || (e.kind == Expectation::Greater && hi <= v)) return Verdict::Falsified;
            return Verdict::Inconclusive;
        case Expectation::AtMost:
        case Expectation::Less:
            if (hi < v || (e.kind == Expectation::AtMost && hi <= v)) return Verdict::Verified;
            if (lo > v || (e.kind == Expectation::Less && lo >= v)) return Verdict::Falsified;
            return Verdict::Inconclusive;
    }
    return Verdict::Inconclusive;
}

struct ClaimRowSpec {
    std::string label;
    Expectation expect;
};

struct ClaimResult {
    std::vector<MeasuredRow> rows;
    Verdict verdict = Verdict::Inconclusive;
    std::string reason;  // set when inconclusive for a structural cause (budget, ...)
};

struct ClaimCard {
    std::string id;         // "<bundle>.<claim>"
    std::string operation;  // which operation the claim exercises
    std::string arguments;  // display form of the arguments
    std::string note;       // short provenance / discrepancy note
    bool exact_mode = true;
    std::vector<ClaimRowSpec> rows;
    std::function<std::vector<MeasuredRow>(const RunSettings&)> run;

    ClaimResult evaluate(const RunSettings& rs) const {
        ClaimResult res;
        try {
            res.rows = run(rs);
        } catch (const BudgetExceeded& e) {
            res.verdict = Verdict::Inconclusive;
            res.reason = e.what();
            return res;
        }
        if (res.rows.size() != rows.size()) {
            res.verdict = Verdict::Inconclusive;
            res.reason = "row count mismatch";
            return res;
        }
        res.verdict = Verdict::Verified;
        for (size_t i = 0; i < rows.size(); ++i) {
            Verdict v = judge_row(res.rows[i], rows[i].expect);
            if (v == Verdict::Falsified) {
                res.verdict = Verdict::Falsified;
                return res;
            }
            if (v == Verdict::Inconclusive) res.verdict = Verdict::Inconclusive;
        }
        if (res.verdict == Verdict::Inconclusive && res.reason.empty())
            res.reason = "confidence interval straddles the threshold";
        return res;
    }
};

// One catalog entry: the game, its mediator, the honest profile, the optional
// punishment profile, parameters with their validity predicate, declared
// deviation families, and machine-checkable claim cards.
struct GameBundle {
    std::string id;
    std::string description;
    GameSpec game;
    MediatorSpec mediator;
    std::vector<Strategy> sigma;
    std::vector<UStrategy> rho;
    bool has_rho = false;
    std::map<std::string, Rat> params;
    std::string validity_text;
    std::vector<Deviation> family;  // declared deviation family for the falsifier
    std::vector<ClaimCard> claims;
    // optional hooks
    std::function<int32_t(const NatureAssign&)> secret_of;  // secret value of a nature draw
    int secret_support = 0;
    DecisionMap decision_map;  // game action -> agreement decision, for reductions
    std::vector<std::pair<std::string, std::vector<int>>> takeover_sets;
};

}  // namespace ctlab

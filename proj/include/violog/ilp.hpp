#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "violog/common.hpp"
#include "violog/kb.hpp"

namespace violog {

class PredicateMismatch : public Error { public: using Error::Error; };
class SchemaMismatch : public Error { public: using Error::Error; };

// ---------------------------------------------------------------------------
// Hypothesis language
// ---------------------------------------------------------------------------

struct Literal {
    std::string predicate;
    std::vector<Term> args;

    auto operator<=>(const Literal&) const = default;
};

// Horn clause: one head literal, conjunctive body of positive literals. The
// body may introduce variables the head does not mention.
struct Clause {
    Literal head;
    std::vector<Literal> body;

    bool operator==(const Clause&) const = default;
};

inline std::string render_literal(const Literal& l) {
    std::string out = l.predicate + "(";
    for (std::size_t i = 0; i < l.args.size(); ++i) {
        if (i) out += ", ";
        out += render_term(l.args[i]);
    }
    out += ")";
    return out;
}

inline std::string render_clause(const Clause& c) {
    std::string out = render_literal(c.head);
    if (!c.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < c.body.size(); ++i) {
            if (i) out += ", ";
            out += render_literal(c.body[i]);
        }
    }
    out += ".";
    return out;
}

// Body order is conjunction order; for equality-of-hypotheses checks we
// compare with bodies sorted.
inline Clause canonical_clause(Clause c) {
    std::sort(c.body.begin(), c.body.end());
    return c;
}

// ---------------------------------------------------------------------------
// Fact index
// ---------------------------------------------------------------------------

// Immutable view over a sealed knowledge base with predicate and
// first-argument indexes for conjunctive matching.
class FactIndex {
public:
    explicit FactIndex(const KnowledgeBase& kb) : kb_(&kb) {
        for (const auto& f : kb.facts()) {
            auto key = std::make_pair(f.predicate, f.args.size());
            by_predicate_[key].push_back(&f);
            if (!f.args.empty()) by_first_[{f.predicate, f.args.size(), f.args[0]}].push_back(&f);
            for (std::size_t pos = 0; pos < f.args.size(); ++pos)
                constants_[{f.predicate, f.args.size(), pos}].insert(f.args[pos]);
        }
    }

    const KnowledgeBase& kb() const { return *kb_; }

    const std::vector<const Fact*>* facts_for(const std::string& pred, std::size_t arity) const {
        auto it = by_predicate_.find({pred, arity});
        return it == by_predicate_.end() ? nullptr : &it->second;
    }

    const std::vector<const Fact*>* facts_for_first(const std::string& pred, std::size_t arity,
                                                    const Term& first) const {
        auto it = by_first_.find({pred, arity, first});
        return it == by_first_.end() ? nullptr : &it->second;
    }

    // Constants observed at an argument position, ascending.
    std::vector<Term> constants_at(const std::string& pred, std::size_t arity,
                                   std::size_t pos) const {
        auto it = constants_.find({pred, arity, pos});
        if (it == constants_.end()) return {};
        return {it->second.begin(), it->second.end()};
    }

    std::vector<Term> all_constants() const {
        std::set<Term> out;
        for (const auto& f : kb_->facts())
            for (const auto& a : f.args) out.insert(a);
        return {out.begin(), out.end()};
    }

private:
    const KnowledgeBase* kb_;
    std::map<std::pair<std::string, std::size_t>, std::vector<const Fact*>> by_predicate_;
    std::map<std::tuple<std::string, std::size_t, Term>, std::vector<const Fact*>> by_first_;
    std::map<std::tuple<std::string, std::size_t, std::size_t>, std::set<Term>> constants_;
};

// ---------------------------------------------------------------------------
// Coverage
// ---------------------------------------------------------------------------

using Substitution = std::map<std::string, Term>;

namespace detail {

inline bool match_term(const Term& pattern, const Term& value, Substitution& subst) {
    if (pattern.is_constant()) return pattern == value;
    auto it = subst.find(pattern.text);
    if (it != subst.end()) return it->second == value;
    subst.emplace(pattern.text, value);
    return true;
}

inline bool solve_body(const std::vector<Literal>& body, std::size_t i, Substitution& subst,
                       const FactIndex& index) {
    if (i == body.size()) return true;
    const Literal& lit = body[i];

    const std::vector<const Fact*>* candidates = nullptr;
    if (!lit.args.empty()) {
        const Term& first = lit.args[0];
        Term bound = first;
        if (first.is_variable()) {
            auto it = subst.find(first.text);
            if (it != subst.end()) bound = it->second;
        }
        if (bound.is_constant())
            candidates = index.facts_for_first(lit.predicate, lit.args.size(), bound);
        else
            candidates = index.facts_for(lit.predicate, lit.args.size());
    } else {
        candidates = index.facts_for(lit.predicate, lit.args.size());
    }
    if (!candidates) return false;

    for (const Fact* fact : *candidates) {
        Substitution attempt = subst;
        bool ok = true;
        for (std::size_t a = 0; a < lit.args.size(); ++a) {
            if (!match_term(lit.args[a], fact->args[a], attempt)) {
                ok = false;
                break;
            }
        }
        if (ok && solve_body(body, i + 1, attempt, index)) {
            subst = std::move(attempt);
            return true;
        }
    }
    return false;
}

} // namespace detail

// True iff some substitution grounds the head to `example` and every body
// literal to a knowledge-base fact. Left-to-right with backtracking;
// exhaustive over KB constants (the language is function-free, so the
// search space is finite). Returns the witness substitution on success.
inline std::optional<Substitution> covers(const Clause& clause, const Fact& example,
                                          const FactIndex& index) {
    if (clause.head.predicate != example.predicate ||
        clause.head.args.size() != example.args.size())
        throw PredicateMismatch("example predicate " + example.predicate + "/" +
                                std::to_string(example.args.size()) +
                                " does not match clause head " + clause.head.predicate + "/" +
                                std::to_string(clause.head.args.size()));
    Substitution subst;
    for (std::size_t i = 0; i < clause.head.args.size(); ++i)
        if (!detail::match_term(clause.head.args[i], example.args[i], subst)) return std::nullopt;
    if (!detail::solve_body(clause.body, 0, subst, index)) return std::nullopt;
    return subst;
}

struct CoverageResult {
    std::vector<std::size_t> covered; // indices into the example list
    std::vector<Substitution> witnesses;
};

inline CoverageResult coverage(const Clause& clause, const std::vector<Fact>& examples,
                               const FactIndex& index) {
    CoverageResult result;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        auto w = covers(clause, examples[i], index);
        if (w) {
            result.covered.push_back(i);
            result.witnesses.push_back(std::move(*w));
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Search control
// ---------------------------------------------------------------------------

enum class ModeKind { BindExisting, IntroduceNew, GroundConstant };

struct ArgMode {
    ModeKind kind = ModeKind::BindExisting;
    ArgType type = ArgType::Event;
};

struct ModeDeclaration {
    std::string predicate;
    std::vector<ArgMode> arg_modes;
};

struct LearnConfig {
    std::size_t max_body_literals = 6;
    std::size_t min_coverage = 2;
    double min_precision = 0.9;
    std::size_t beam_width = 1;
    std::size_t constant_pool_limit = 0; // 0 = all observed constants
};

// Modes for learning over event-argument background predicates: bind the
// event variable, enumerate ground constants at the value position.
inline std::vector<ModeDeclaration> default_event_modes(const Schema& schema) {
    static const char* predicates[] = {
        "driver_characteristics", "event_period_of_year", "event_previous_occurrence",
        "event_time",             "event_type",           "location_context",
        "main_road",              "vehicle_year",
    };
    std::vector<ModeDeclaration> modes;
    for (const char* name : predicates) {
        const Predicate* p = schema.find(name, 2);
        if (!p) continue;
        modes.push_back({name,
                         {ArgMode{ModeKind::BindExisting, ArgType::Event},
                          ArgMode{ModeKind::GroundConstant, p->arg_types.size() > 1
                                                                ? p->arg_types[1]
                                                                : ArgType::Band}}});
    }
    return modes;
}

namespace detail {

// Variable type assignment: a variable's type is the schema tag of the
// position where it first occurs (head first, then body left to right).
inline std::map<std::string, ArgType> variable_types(const Clause& clause, const Schema& schema) {
    std::map<std::string, ArgType> types;
    auto absorb = [&](const Literal& lit) {
        const Predicate* p = schema.find(lit.predicate, lit.args.size());
        for (std::size_t i = 0; i < lit.args.size(); ++i) {
            if (!lit.args[i].is_variable()) continue;
            ArgType t = p && i < p->arg_types.size() ? p->arg_types[i] : ArgType::Event;
            types.emplace(lit.args[i].text, t);
        }
    };
    absorb(clause.head);
    for (const auto& lit : clause.body) absorb(lit);
    return types;
}

inline std::string fresh_variable(const std::set<std::string>& taken, std::size_t& counter) {
    while (true) {
        std::string name = "V" + std::to_string(counter++);
        if (!taken.count(name)) return name;
    }
}

} // namespace detail

// All literals buildable from the mode declarations against the partial
// clause: + positions take existing variables of the matching type, -
// positions a fresh variable, # positions each constant observed at that
// argument position. Ordered by predicate name then argument tuple;
// duplicates and literals already present in the body are excluded.
inline std::vector<Literal> candidate_literals(const Clause& partial,
                                               const std::vector<ModeDeclaration>& modes,
                                               const FactIndex& index,
                                               const LearnConfig& config = {}) {
    const Schema& schema = index.kb().schema();
    auto var_types = detail::variable_types(partial, schema);
    std::set<std::string> taken;
    for (const auto& [name, type] : var_types) taken.insert(name);

    std::set<Literal> body_set(partial.body.begin(), partial.body.end());
    std::set<Literal> out;

    for (const auto& mode : modes) {
        std::size_t arity = mode.arg_modes.size();
        if (mode.predicate == partial.head.predicate && arity == partial.head.args.size())
            continue; // no recursion in the hypothesis language

        std::vector<std::vector<Term>> choices(arity);
        bool feasible = true;
        std::size_t fresh_counter = taken.size() + 1;
        for (std::size_t i = 0; i < arity && feasible; ++i) {
            const ArgMode& am = mode.arg_modes[i];
            switch (am.kind) {
                case ModeKind::BindExisting: {
                    for (const auto& [name, type] : var_types)
                        if (type == am.type) choices[i].push_back(Term::variable(name));
                    if (choices[i].empty()) feasible = false;
                    break;
                }
                case ModeKind::IntroduceNew: {
                    choices[i].push_back(
                        Term::variable(detail::fresh_variable(taken, fresh_counter)));
                    break;
                }
                case ModeKind::GroundConstant: {
                    auto pool = index.constants_at(mode.predicate, arity, i);
                    if (config.constant_pool_limit && pool.size() > config.constant_pool_limit)
                        pool.resize(config.constant_pool_limit);
                    choices[i] = std::move(pool);
                    if (choices[i].empty()) feasible = false;
                    break;
                }
            }
        }
        if (!feasible) continue;

        std::vector<std::size_t> pick(arity, 0);
        while (true) {
            Literal lit;
            lit.predicate = mode.predicate;
            for (std::size_t i = 0; i < arity; ++i) lit.args.push_back(choices[i][pick[i]]);
            if (!body_set.count(lit)) out.insert(std::move(lit));
            std::size_t i = arity;
            while (i > 0) {
                --i;
                if (++pick[i] < choices[i].size()) break;
                pick[i] = 0;
                if (i == 0) goto next_mode;
            }
            if (arity == 0) break;
        }
    next_mode:;
    }
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// FOIL gain
// ---------------------------------------------------------------------------

// gain = p1 * (log2(p1/(p1+n1)) - log2(p0/(p0+n0))); zero when the literal
// leaves no positives covered. Counts examples, not bindings.
inline double foil_gain_counts(std::size_t p0, std::size_t n0, std::size_t p1, std::size_t n1) {
    if (p1 == 0) return 0.0;
    auto info = [](std::size_t p, std::size_t n) {
        return std::log2(static_cast<double>(p) / static_cast<double>(p + n));
    };
    return static_cast<double>(p1) * (info(p1, n1) - info(p0, n0));
}

inline double foil_gain(const Clause& partial, const Literal& literal,
                        const std::vector<Fact>& pos, const std::vector<Fact>& neg,
                        const FactIndex& index) {
    CoverageResult before_pos = coverage(partial, pos, index);
    CoverageResult before_neg = coverage(partial, neg, index);
    Clause extended = partial;
    extended.body.push_back(literal);
    CoverageResult after_pos = coverage(extended, pos, index);
    CoverageResult after_neg = coverage(extended, neg, index);
    return foil_gain_counts(before_pos.covered.size(), before_neg.covered.size(),
                            after_pos.covered.size(), after_neg.covered.size());
}

// ---------------------------------------------------------------------------
// Clause and rule-set learning
// ---------------------------------------------------------------------------

struct ClauseStats {
    std::size_t pos_covered = 0;
    std::size_t neg_covered = 0;
    double precision = 0;
};

struct LearnedClause {
    Clause clause;
    ClauseStats stats;
};

struct LearnedRuleSet {
    std::vector<LearnedClause> clauses;
    std::string target_predicate;
    std::size_t target_arity = 1;
    LearnConfig config;
    std::string kb_digest;

    bool no_rules_learned() const { return clauses.empty(); }
};

namespace detail {

struct SearchState {
    Clause clause;
    std::vector<std::size_t> pos_covered; // indices into pos
    std::vector<std::size_t> neg_covered; // indices into neg

    double precision() const {
        std::size_t denom = pos_covered.size() + neg_covered.size();
        return denom ? static_cast<double>(pos_covered.size()) / static_cast<double>(denom) : 0.0;
    }
};

inline bool stop_condition(const SearchState& s, const LearnConfig& config) {
    if (s.neg_covered.empty()) return true;
    if (s.precision() >= config.min_precision) return true;
    if (s.clause.body.size() >= config.max_body_literals) return true;
    return false;
}

// Re-filter a covered-index set after extending the clause; coverage is
// anti-monotone, so only previously covered examples need re-checking.
inline std::vector<std::size_t> refilter(const Clause& clause, const std::vector<Fact>& examples,
                                         const std::vector<std::size_t>& covered,
                                         const FactIndex& index) {
    std::vector<std::size_t> out;
    for (std::size_t i : covered)
        if (covers(clause, examples[i], index)) out.push_back(i);
    return out;
}

} // namespace detail

inline Literal make_head(const std::string& predicate, std::size_t arity) {
    static const char* names[] = {"X", "Y", "Z"};
    Literal head;
    head.predicate = predicate;
    for (std::size_t i = 0; i < arity; ++i)
        head.args.push_back(
            Term::variable(i < 3 ? names[i] : "V" + std::to_string(i + 1)));
    return head;
}

// Greedy FOIL-style clause construction (beam search when beam_width > 1).
// Starts from the bare head, repeatedly appends the candidate literal with
// maximum gain (ties resolved by candidate order), and stops once the clause
// covers no negatives, meets min_precision, reaches the body-length cap, or
// no candidate has positive gain. Returns nothing when the final clause
// misses min_coverage or min_precision.
inline std::optional<LearnedClause> learn_clause(const std::vector<Fact>& pos,
                                                 const std::vector<Fact>& neg,
                                                 const FactIndex& index,
                                                 const std::vector<ModeDeclaration>& modes,
                                                 const LearnConfig& config = {}) {
    if (pos.empty()) return std::nullopt;

    detail::SearchState root;
    root.clause.head = make_head(pos.front().predicate, pos.front().args.size());
    for (std::size_t i = 0; i < pos.size(); ++i) root.pos_covered.push_back(i);
    for (std::size_t i = 0; i < neg.size(); ++i) root.neg_covered.push_back(i);

    std::vector<detail::SearchState> beam{root};
    std::vector<detail::SearchState> finished;

    while (!beam.empty()) {
        struct Extension {
            double gain;
            std::size_t parent;
            std::size_t order; // candidate order within the parent
            detail::SearchState state;
        };
        std::vector<Extension> extensions;

        for (std::size_t b = 0; b < beam.size(); ++b) {
            detail::SearchState& s = beam[b];
            if (detail::stop_condition(s, config)) {
                finished.push_back(s);
                continue;
            }
            std::size_t p0 = s.pos_covered.size(), n0 = s.neg_covered.size();
            auto candidates = candidate_literals(s.clause, modes, index, config);
            bool any = false;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                Clause extended = s.clause;
                extended.body.push_back(candidates[c]);
                auto new_pos = detail::refilter(extended, pos, s.pos_covered, index);
                if (new_pos.empty()) continue;
                auto new_neg = detail::refilter(extended, neg, s.neg_covered, index);
                double gain =
                    foil_gain_counts(p0, n0, new_pos.size(), new_neg.size());
                if (gain <= 0) continue;
                any = true;
                extensions.push_back(
                    {gain, b, c,
                     detail::SearchState{std::move(extended), std::move(new_pos),
                                         std::move(new_neg)}});
            }
            if (!any) finished.push_back(s); // dead end: no gainful candidate
        }

        std::stable_sort(extensions.begin(), extensions.end(),
                         [](const Extension& a, const Extension& b) {
                             if (a.gain != b.gain) return a.gain > b.gain;
                             if (a.parent != b.parent) return a.parent < b.parent;
                             return a.order < b.order;
                         });
        beam.clear();
        for (auto& e : extensions) {
            if (beam.size() >= std::max<std::size_t>(1, config.beam_width)) break;
            beam.push_back(std::move(e.state));
        }
    }

    // Best finished clause: fewest negatives covered, then most positives,
    // then shortest body, then construction order.
    const detail::SearchState* best = nullptr;
    for (const auto& s : finished) {
        if (s.pos_covered.size() < config.min_coverage) continue;
        if (s.precision() < config.min_precision) continue;
        if (!best) {
            best = &s;
            continue;
        }
        if (s.neg_covered.size() != best->neg_covered.size()) {
            if (s.neg_covered.size() < best->neg_covered.size()) best = &s;
        } else if (s.pos_covered.size() != best->pos_covered.size()) {
            if (s.pos_covered.size() > best->pos_covered.size()) best = &s;
        } else if (s.clause.body.size() < best->clause.body.size()) {
            best = &s;
        }
    }
    if (!best) return std::nullopt;
    return LearnedClause{best->clause,
                         ClauseStats{best->pos_covered.size(), best->neg_covered.size(),
                                     best->precision()}};
}

// Sequential covering: learn a clause, drop the positives it covers, repeat
// until positives are exhausted, fewer than min_coverage remain, or no
// acceptable clause exists. Reported stats are measured against the original
// example sets.
inline LearnedRuleSet learn_ruleset(const std::vector<Fact>& pos, const std::vector<Fact>& neg,
                                    const FactIndex& index,
                                    const std::vector<ModeDeclaration>& modes,
                                    const LearnConfig& config = {}) {
    LearnedRuleSet result;
    result.config = config;
    if (!pos.empty()) {
        result.target_predicate = pos.front().predicate;
        result.target_arity = pos.front().args.size();
    }
    result.kb_digest = hex64(fnv1a64(emit_facts_string(index.kb())));

    std::vector<Fact> remaining = pos;
    while (remaining.size() >= std::max<std::size_t>(1, config.min_coverage)) {
        auto learned = learn_clause(remaining, neg, index, modes, config);
        if (!learned) break;

        CoverageResult on_remaining = coverage(learned->clause, remaining, index);
        if (on_remaining.covered.empty()) break;

        CoverageResult orig_pos = coverage(learned->clause, pos, index);
        CoverageResult orig_neg = coverage(learned->clause, neg, index);
        std::size_t denom = orig_pos.covered.size() + orig_neg.covered.size();
        result.clauses.push_back(
            {learned->clause,
             ClauseStats{orig_pos.covered.size(), orig_neg.covered.size(),
                         denom ? static_cast<double>(orig_pos.covered.size()) /
                                     static_cast<double>(denom)
                               : 0.0}});

        std::vector<Fact> next;
        std::set<std::size_t> drop(on_remaining.covered.begin(), on_remaining.covered.end());
        for (std::size_t i = 0; i < remaining.size(); ++i)
            if (!drop.count(i)) next.push_back(remaining[i]);
        remaining = std::move(next);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Rule-set evaluation
// ---------------------------------------------------------------------------

struct RuleSetMetrics {
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    std::size_t true_negatives = 0;
    double coverage = 0; // fraction of all examples predicted positive
    std::optional<double> precision;
    std::optional<double> recall;
    std::vector<ClauseStats> per_clause;
};

// An example is predicted positive iff any clause covers it. Undefined
// ratios (zero denominators) stay unset rather than collapsing to 0.
inline RuleSetMetrics evaluate_ruleset(const std::vector<Clause>& rules,
                                       const std::vector<Fact>& pos, const std::vector<Fact>& neg,
                                       const FactIndex& index) {
    const Schema& schema = index.kb().schema();
    for (const auto& rule : rules) {
        auto check = [&](const Literal& lit) {
            if (!schema.contains(lit.predicate, lit.args.size()))
                throw SchemaMismatch("rule references unknown predicate " + lit.predicate + "/" +
                                     std::to_string(lit.args.size()));
        };
        check(rule.head);
        for (const auto& lit : rule.body) check(lit);
    }

    RuleSetMetrics m;
    auto predicted = [&](const Fact& example) {
        for (const auto& rule : rules) {
            if (rule.head.predicate != example.predicate ||
                rule.head.args.size() != example.args.size())
                continue;
            if (covers(rule, example, index)) return true;
        }
        return false;
    };
    for (const auto& e : pos) {
        if (predicted(e)) ++m.true_positives;
        else ++m.false_negatives;
    }
    for (const auto& e : neg) {
        if (predicted(e)) ++m.false_positives;
        else ++m.true_negatives;
    }
    std::size_t total = pos.size() + neg.size();
    m.coverage = total ? static_cast<double>(m.true_positives + m.false_positives) /
                             static_cast<double>(total)
                       : 0.0;
    if (m.true_positives + m.false_positives)
        m.precision = static_cast<double>(m.true_positives) /
                      static_cast<double>(m.true_positives + m.false_positives);
    if (m.true_positives + m.false_negatives)
        m.recall = static_cast<double>(m.true_positives) /
                   static_cast<double>(m.true_positives + m.false_negatives);

    for (const auto& rule : rules) {
        ClauseStats stats;
        auto matches_head = [&](const Fact& e) {
            return rule.head.predicate == e.predicate && rule.head.args.size() == e.args.size();
        };
        for (const auto& e : pos)
            if (matches_head(e) && covers(rule, e, index)) ++stats.pos_covered;
        for (const auto& e : neg)
            if (matches_head(e) && covers(rule, e, index)) ++stats.neg_covered;
        std::size_t denom = stats.pos_covered + stats.neg_covered;
        stats.precision =
            denom ? static_cast<double>(stats.pos_covered) / static_cast<double>(denom) : 0.0;
        m.per_clause.push_back(stats);
    }
    return m;
}

// ---------------------------------------------------------------------------
// The four shipped rules
// ---------------------------------------------------------------------------

// Rule 1: an event at 8 pm in November close to the athletic centre, at a
//         location with more than 10 prior events, vehicle newer than 2009,
//         driver belted -> Bethesda.
// Rule 2: event on I-270, more than 20 prior events, driver unbelted
//         -> Gaithersburg.
// Rule 3: rarely-hit community-area location in Bethesda with night
//         statistics on file -> safe location.
// Rule 4: demographic analogy: highly educated, high-income, low-poverty,
//         low-density city with ~3% past event probability.
inline std::vector<Clause> builtin_paper_rules() {
    auto sym = [](const char* s) { return Term::symbol(s); };
    auto var = [](const char* v) { return Term::variable(v); };

    Clause rule1{{"is_event_inbethesda", {var("X")}},
                 {{"event_time", {var("X"), sym("h20")}},
                  {"event_period_of_year", {var("X"), sym("november")}},
                  {"location_context", {var("X"), sym("athletic_center")}},
                  {"event_previous_occurrence", {var("X"), sym("gt_10")}},
                  {"vehicle_year", {var("X"), sym("gt_2009")}},
                  {"driver_characteristics", {var("X"), sym("belt_yes")}}}};

    Clause rule2{{"is_event_ingaithersburg", {var("X")}},
                 {{"main_road", {var("X"), sym("i270")}},
                  {"event_previous_occurrence", {var("X"), sym("gt_20")}},
                  {"driver_characteristics", {var("X"), sym("belt_no")}}}};

    // night_hours(Y, .) is read as "some night_hours fact exists for Y";
    // the remaining argument positions are wildcard variables.
    Clause rule3{{"safe_location", {var("Y"), sym("bethesda")}},
                 {{"event_previous_occurrence", {var("Y"), sym("lt_5")}},
                  {"location_context", {sym("bethesda"), var("Y"), sym("community_areas")}},
                  {"event_type", {var("X"), var("Y")}},
                  {"night_hours", {var("Y"), var("A"), var("B"), var("C"), var("D")}}}};

    Clause rule4{{"event_happen", {var("X"), var("Y")}},
                 {{"education", {var("Y"), sym("gt_80pct")}},
                  {"median_income", {var("Y"), sym("gt_150000")}},
                  {"poverty", {var("Y"), sym("lt_3pct")}},
                  {"density", {var("Y"), sym("lt_2000")}},
                  {"past_event_probability", {var("X"), sym("band_3pct")}}}};

    return {rule1, rule2, rule3, rule4};
}

// ---------------------------------------------------------------------------
// Rule file grammar (fact grammar extended with ':-' and variables)
// ---------------------------------------------------------------------------

inline std::string render_ruleset(const std::vector<Clause>& rules) {
    std::string out;
    for (const auto& r : rules) {
        out += render_clause(r);
        out += '\n';
    }
    return out;
}

inline std::vector<Clause> parse_rules(std::string_view text) {
    factparse::Cursor cur{text};
    std::vector<Clause> rules;
    while (true) {
        cur.skip_ws_and_comments();
        if (cur.eof()) break;
        auto [head_name, head_args] = factparse::read_atom(cur);
        Clause clause;
        clause.head = Literal{std::move(head_name), std::move(head_args)};
        cur.skip_ws_and_comments();
        if (!cur.eof() && cur.peek() == ':') {
            cur.advance();
            factparse::expect(cur, '-', "'-' after ':'");
            while (true) {
                cur.skip_ws_and_comments();
                auto [name, args] = factparse::read_atom(cur);
                clause.body.push_back(Literal{std::move(name), std::move(args)});
                cur.skip_ws_and_comments();
                if (!cur.eof() && cur.peek() == ',') {
                    cur.advance();
                    continue;
                }
                break;
            }
        }
        factparse::expect(cur, '.', "'.' after clause");
        rules.push_back(std::move(clause));
    }
    return rules;
}

} // namespace violog

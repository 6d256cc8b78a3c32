#include <catch2/catch.hpp>

#include <random>

#include "support/oracles.hpp"
#include "violog/ilp.hpp"

using namespace violog;

namespace {

Term sym(const char* s) { return Term::symbol(s); }
Term var(const char* v) { return Term::variable(v); }

Fact target(const char* e) { return Fact{"t", {sym(e)}}; }

KnowledgeBase kb_from(std::initializer_list<Fact> facts) {
    KnowledgeBase kb{Schema{}};
    for (const auto& f : facts) kb.add_auto(f);
    return kb;
}

} // namespace

TEST_CASE("covers: single-step matching") {
    KnowledgeBase kb = kb_from({
        {"main_road", {sym("e1"), sym("i270")}},
        {"driver_characteristics", {sym("e1"), sym("belt_no")}},
        {"main_road", {sym("e2"), sym("i495")}},
        {"driver_characteristics", {sym("e2"), sym("belt_no")}},
    });
    FactIndex index(kb);
    Clause clause{{"t", {var("X")}},
                  {{"main_road", {var("X"), sym("i270")}},
                   {"driver_characteristics", {var("X"), sym("belt_no")}}}};

    auto w1 = covers(clause, target("e1"), index);
    REQUIRE(w1.has_value());
    CHECK(w1->at("X") == sym("e1"));
    CHECK_FALSE(covers(clause, target("e2"), index).has_value());

    CHECK_THROWS_AS(covers(clause, Fact{"other", {sym("e1")}}, index), PredicateMismatch);
}

TEST_CASE("covers: join through a shared variable") {
    KnowledgeBase kb = kb_from({
        {"loc", {sym("e1"), sym("l1")}},
        {"ctx", {sym("l1"), sym("shop")}},
        {"loc", {sym("e2"), sym("l2")}},
        {"ctx", {sym("l2"), sym("park")}},
    });
    FactIndex index(kb);
    Clause chain{{"t", {var("X")}},
                 {{"loc", {var("X"), var("L")}}, {"ctx", {var("L"), sym("shop")}}}};

    CHECK(covers(chain, target("e1"), index).has_value());
    CHECK_FALSE(covers(chain, target("e2"), index).has_value());

    // agree with brute-force substitution enumeration
    CHECK(oracle::covers_by_enumeration(chain, target("e1"), kb));
    CHECK_FALSE(oracle::covers_by_enumeration(chain, target("e2"), kb));

    // witness substitution grounds every body literal to a kb fact
    auto w = covers(chain, target("e1"), index);
    REQUIRE(w.has_value());
    for (const auto& lit : chain.body) {
        Fact grounded{lit.predicate, {}};
        for (const auto& a : lit.args)
            grounded.args.push_back(a.is_variable() ? w->at(a.text) : a);
        CHECK(kb.contains(grounded));
    }
}

namespace {

struct LogicCase {
    KnowledgeBase kb;
    Clause clause;
    Fact example;
};

LogicCase random_logic_case(std::mt19937& rng) {
    LogicCase out;
    std::size_t n_constants = 2 + rng() % 10; // <= 20 constants incl. symbols below
    std::vector<Term> constants;
    for (std::size_t i = 0; i < n_constants; ++i)
        constants.push_back(Term::symbol("c" + std::to_string(i)));

    struct Pred {
        const char* name;
        std::size_t arity;
    };
    static const Pred preds[] = {{"p", 1}, {"q", 2}, {"r", 2}, {"s", 3}};

    KnowledgeBase kb{Schema{}};
    std::size_t n_facts = rng() % 30;
    for (std::size_t i = 0; i < n_facts; ++i) {
        const Pred& pred = preds[rng() % 4];
        Fact f{pred.name, {}};
        for (std::size_t a = 0; a < pred.arity; ++a)
            f.args.push_back(constants[rng() % constants.size()]);
        kb.add_auto(std::move(f));
    }
    out.kb = std::move(kb);

    std::size_t head_arity = 1 + rng() % 2;
    static const char* vars[] = {"X", "Y", "Z"};
    Clause clause;
    clause.head.predicate = "t";
    for (std::size_t i = 0; i < head_arity; ++i) clause.head.args.push_back(var(vars[i]));
    std::size_t body_len = rng() % 4;
    for (std::size_t b = 0; b < body_len; ++b) {
        const Pred& pred = preds[rng() % 4];
        Literal lit{pred.name, {}};
        for (std::size_t a = 0; a < pred.arity; ++a) {
            if (rng() % 2) lit.args.push_back(var(vars[rng() % 3]));
            else lit.args.push_back(constants[rng() % constants.size()]);
        }
        clause.body.push_back(std::move(lit));
    }
    out.clause = std::move(clause);

    out.example = Fact{"t", {}};
    for (std::size_t i = 0; i < head_arity; ++i)
        out.example.args.push_back(constants[rng() % constants.size()]);
    return out;
}

} // namespace

TEST_CASE("covers agrees with exhaustive enumeration on random cases") {
    std::mt19937 rng(47);
    for (int iter = 0; iter < 300; ++iter) {
        LogicCase c = random_logic_case(rng);
        FactIndex index(c.kb);
        bool got = covers(c.clause, c.example, index).has_value();
        bool expected = oracle::covers_by_enumeration(c.clause, c.example, c.kb);
        CHECK(got == expected);
    }
}

TEST_CASE("coverage is anti-monotone under specialization") {
    std::mt19937 rng(53);
    for (int iter = 0; iter < 60; ++iter) {
        LogicCase c = random_logic_case(rng);
        FactIndex index(c.kb);

        std::vector<Fact> examples;
        for (int i = 0; i < 12; ++i) {
            Fact e{"t", {}};
            for (std::size_t a = 0; a < c.clause.head.args.size(); ++a)
                e.args.push_back(Term::symbol("c" + std::to_string(rng() % 10)));
            examples.push_back(std::move(e));
        }

        Clause base{c.clause.head, {}};
        Clause current = base;
        for (const auto& lit : c.clause.body) {
            Clause extended = current;
            extended.body.push_back(lit);
            auto cov_before = coverage(current, examples, index).covered;
            auto cov_after = coverage(extended, examples, index).covered;
            CHECK(std::includes(cov_before.begin(), cov_before.end(), cov_after.begin(),
                                cov_after.end()));
            current = std::move(extended);
        }
    }
}

TEST_CASE("candidate_literals enumerates mode-legal literals in order") {
    KnowledgeBase kb = kb_from({
        {"main_road", {sym("e1"), sym("i270")}},
        {"main_road", {sym("e2"), sym("i495")}},
    });
    // t/1 takes an event argument
    kb.schema().add({"t", 1, {ArgType::Event}});
    FactIndex index(kb);
    Clause partial{{"t", {var("X")}}, {}};
    std::vector<ModeDeclaration> modes = {
        {"main_road",
         {ArgMode{ModeKind::BindExisting, ArgType::Event},
          ArgMode{ModeKind::GroundConstant, ArgType::Road}}}};

    auto candidates = candidate_literals(partial, modes, index);
    REQUIRE(candidates.size() == 2);
    CHECK(candidates[0] == Literal{"main_road", {var("X"), sym("i270")}});
    CHECK(candidates[1] == Literal{"main_road", {var("X"), sym("i495")}});

    CHECK(candidate_literals(partial, {}, index).empty());

    Clause with_body = partial;
    with_body.body.push_back(candidates[0]);
    auto remaining = candidate_literals(with_body, modes, index);
    REQUIRE(remaining.size() == 1);
    CHECK(remaining[0] == Literal{"main_road", {var("X"), sym("i495")}});
}

TEST_CASE("candidate_literals introduces fresh variables for minus modes") {
    KnowledgeBase kb = kb_from({{"loc", {sym("e1"), sym("l1")}}});
    kb.schema().add({"t", 1, {ArgType::Event}});
    FactIndex index(kb);
    Clause partial{{"t", {var("X")}}, {}};
    std::vector<ModeDeclaration> modes = {
        {"loc",
         {ArgMode{ModeKind::BindExisting, ArgType::Event},
          ArgMode{ModeKind::IntroduceNew, ArgType::Context}}}};
    auto candidates = candidate_literals(partial, modes, index);
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].predicate == "loc");
    CHECK(candidates[0].args[0] == var("X"));
    CHECK(candidates[0].args[1].is_variable());
    CHECK(candidates[0].args[1].text != "X");
}

TEST_CASE("foil_gain hand-evaluated cases") {
    // 5 pos, 5 neg; literal keeps 4 pos and 0 neg: gain = 4 * (0 - (-1)) = 4
    KnowledgeBase kb{Schema{}};
    for (int i = 1; i <= 4; ++i)
        kb.add_auto(Fact{"q", {sym(("p" + std::to_string(i)).c_str()), sym("a")}});
    for (int i = 1; i <= 5; ++i) {
        kb.add_auto(Fact{"r", {sym(("p" + std::to_string(i)).c_str()), sym("b")}});
        kb.add_auto(Fact{"r", {sym(("n" + std::to_string(i)).c_str()), sym("b")}});
    }
    FactIndex index(kb);

    std::vector<Fact> pos, neg;
    for (int i = 1; i <= 5; ++i) {
        pos.push_back(Fact{"t", {sym(("p" + std::to_string(i)).c_str())}});
        neg.push_back(Fact{"t", {sym(("n" + std::to_string(i)).c_str())}});
    }
    Clause bare{{"t", {var("X")}}, {}};

    CHECK(foil_gain(bare, Literal{"q", {var("X"), sym("a")}}, pos, neg, index) == Approx(4.0));
    // literal that covers everything changes nothing
    CHECK(foil_gain(bare, Literal{"r", {var("X"), sym("b")}}, pos, neg, index) == 0.0);
    // literal with no matching facts covers no positives
    CHECK(foil_gain(bare, Literal{"q", {var("X"), sym("zzz")}}, pos, neg, index) == 0.0);
}

namespace {

struct PlantedFixture {
    KnowledgeBase kb;
    std::vector<Fact> pos, neg;
    std::vector<ModeDeclaration> modes;
};

// 4 pos with main_road i270, 4 neg with i495; belts split evenly as a decoy.
PlantedFixture depth1_fixture() {
    PlantedFixture f;
    f.kb = KnowledgeBase{Schema{}};
    for (int i = 1; i <= 4; ++i) {
        std::string pe = "p" + std::to_string(i), ne = "n" + std::to_string(i);
        f.kb.add_auto(Fact{"main_road", {Term::symbol(pe), Term::symbol("i270")}});
        f.kb.add_auto(Fact{"main_road", {Term::symbol(ne), Term::symbol("i495")}});
        f.kb.add_auto(Fact{"driver_characteristics",
                           {Term::symbol(pe), Term::symbol(i % 2 ? "belt_yes" : "belt_no")}});
        f.kb.add_auto(Fact{"driver_characteristics",
                           {Term::symbol(ne), Term::symbol(i % 2 ? "belt_yes" : "belt_no")}});
        f.pos.push_back(Fact{"t", {Term::symbol(pe)}});
        f.neg.push_back(Fact{"t", {Term::symbol(ne)}});
    }
    f.kb.schema().add({"t", 1, {ArgType::Event}});
    f.modes = {
        {"driver_characteristics",
         {ArgMode{ModeKind::BindExisting, ArgType::Event},
          ArgMode{ModeKind::GroundConstant, ArgType::BooleanAttr}}},
        {"main_road",
         {ArgMode{ModeKind::BindExisting, ArgType::Event},
          ArgMode{ModeKind::GroundConstant, ArgType::Road}}},
    };
    return f;
}

} // namespace

TEST_CASE("learn_clause recovers a planted single literal") {
    PlantedFixture f = depth1_fixture();
    FactIndex index(f.kb);
    auto learned = learn_clause(f.pos, f.neg, index, f.modes);
    REQUIRE(learned.has_value());
    CHECK(learned->clause.body ==
          std::vector<Literal>{Literal{"main_road", {var("X"), sym("i270")}}});
    CHECK(learned->stats.pos_covered == 4);
    CHECK(learned->stats.neg_covered == 0);
    CHECK(learned->stats.precision == 1.0);
}

TEST_CASE("learn_clause needs two literals when one cannot separate") {
    KnowledgeBase kb{Schema{}};
    auto add = [&](const std::string& e, const char* road, const char* belt) {
        kb.add_auto(Fact{"main_road", {Term::symbol(e), Term::symbol(road)}});
        kb.add_auto(Fact{"driver_characteristics", {Term::symbol(e), Term::symbol(belt)}});
    };
    std::vector<Fact> pos, neg;
    for (int i = 1; i <= 4; ++i) {
        std::string e = "p" + std::to_string(i);
        add(e, "i270", "belt_no");
        pos.push_back(Fact{"t", {Term::symbol(e)}});
    }
    for (int i = 1; i <= 2; ++i) { // match the road but not the belt
        std::string e = "na" + std::to_string(i);
        add(e, "i270", "belt_yes");
        neg.push_back(Fact{"t", {Term::symbol(e)}});
    }
    for (int i = 1; i <= 2; ++i) { // match the belt but not the road
        std::string e = "nb" + std::to_string(i);
        add(e, "i495", "belt_no");
        neg.push_back(Fact{"t", {Term::symbol(e)}});
    }
    kb.schema().add({"t", 1, {ArgType::Event}});
    FactIndex index(kb);
    std::vector<ModeDeclaration> modes = depth1_fixture().modes;

    auto learned = learn_clause(pos, neg, index, modes, {});
    REQUIRE(learned.has_value());
    Clause expected{{"t", {var("X")}},
                    {{"driver_characteristics", {var("X"), sym("belt_no")}},
                     {"main_road", {var("X"), sym("i270")}}}};
    CHECK(canonical_clause(learned->clause) == canonical_clause(expected));
    CHECK(learned->stats.neg_covered == 0);
    CHECK(learned->stats.pos_covered == 4);
}

TEST_CASE("learn_clause returns nothing for indistinguishable examples") {
    KnowledgeBase kb{Schema{}};
    std::vector<Fact> pos, neg;
    for (int i = 1; i <= 3; ++i) {
        std::string pe = "p" + std::to_string(i), ne = "n" + std::to_string(i);
        kb.add_auto(Fact{"main_road", {Term::symbol(pe), Term::symbol("i270")}});
        kb.add_auto(Fact{"main_road", {Term::symbol(ne), Term::symbol("i270")}});
        pos.push_back(Fact{"t", {Term::symbol(pe)}});
        neg.push_back(Fact{"t", {Term::symbol(ne)}});
    }
    kb.schema().add({"t", 1, {ArgType::Event}});
    FactIndex index(kb);
    auto learned = learn_clause(pos, neg, index, depth1_fixture().modes, {});
    CHECK_FALSE(learned.has_value());
}

TEST_CASE("learn_ruleset covers disjoint subpopulations with two clauses") {
    KnowledgeBase kb{Schema{}};
    std::vector<Fact> pos, neg;
    for (int i = 1; i <= 4; ++i) {
        std::string e = "pa" + std::to_string(i);
        kb.add_auto(Fact{"event_time", {Term::symbol(e), Term::symbol("h8")}});
        pos.push_back(Fact{"t", {Term::symbol(e)}});
    }
    for (int i = 1; i <= 4; ++i) {
        std::string e = "pb" + std::to_string(i);
        kb.add_auto(Fact{"event_time", {Term::symbol(e), Term::symbol("h22")}});
        pos.push_back(Fact{"t", {Term::symbol(e)}});
    }
    for (int i = 1; i <= 4; ++i) {
        std::string e = "n" + std::to_string(i);
        kb.add_auto(Fact{"event_time", {Term::symbol(e), Term::symbol("h13")}});
        neg.push_back(Fact{"t", {Term::symbol(e)}});
    }
    kb.schema().add({"t", 1, {ArgType::Event}});
    FactIndex index(kb);
    std::vector<ModeDeclaration> modes = {
        {"event_time",
         {ArgMode{ModeKind::BindExisting, ArgType::Event},
          ArgMode{ModeKind::GroundConstant, ArgType::Band}}}};

    auto rules = learn_ruleset(pos, neg, index, modes, {});
    REQUIRE(rules.clauses.size() == 2);
    CHECK(rules.clauses[0].stats.pos_covered + rules.clauses[1].stats.pos_covered == 8);
    CHECK(rules.clauses[0].stats.neg_covered == 0);
    CHECK(rules.clauses[1].stats.neg_covered == 0);

    // every positive is covered by some clause
    std::vector<Clause> clauses;
    for (const auto& c : rules.clauses) clauses.push_back(c.clause);
    auto metrics = evaluate_ruleset(clauses, pos, neg, index);
    CHECK(metrics.recall == 1.0);
    CHECK(metrics.precision == 1.0);
}

TEST_CASE("learn_ruleset on a single planted rule and on hopeless input") {
    PlantedFixture f = depth1_fixture();
    FactIndex index(f.kb);
    auto rules = learn_ruleset(f.pos, f.neg, index, f.modes, {});
    REQUIRE(rules.clauses.size() == 1);
    CHECK_FALSE(rules.no_rules_learned());
    CHECK(rules.target_predicate == "t");

    // identical pos/neg profiles -> nothing learnable
    KnowledgeBase kb{Schema{}};
    kb.add_auto(Fact{"event_time", {sym("e1"), sym("h8")}});
    kb.add_auto(Fact{"event_time", {sym("e2"), sym("h8")}});
    kb.schema().add({"t", 1, {ArgType::Event}});
    FactIndex index2(kb);
    auto none = learn_ruleset({Fact{"t", {sym("e1")}}, Fact{"t", {sym("e1")}}},
                              {Fact{"t", {sym("e2")}}}, index2,
                              {{"event_time",
                                {ArgMode{ModeKind::BindExisting, ArgType::Event},
                                 ArgMode{ModeKind::GroundConstant, ArgType::Band}}}},
                              {});
    CHECK(none.no_rules_learned());
}

TEST_CASE("learn_ruleset is deterministic") {
    PlantedFixture f = depth1_fixture();
    FactIndex index(f.kb);
    auto a = learn_ruleset(f.pos, f.neg, index, f.modes, {});
    auto b = learn_ruleset(f.pos, f.neg, index, f.modes, {});
    REQUIRE(a.clauses.size() == b.clauses.size());
    std::vector<Clause> ca, cb;
    for (const auto& c : a.clauses) ca.push_back(c.clause);
    for (const auto& c : b.clauses) cb.push_back(c.clause);
    CHECK(render_ruleset(ca) == render_ruleset(cb));
    CHECK(a.kb_digest == b.kb_digest);
}

TEST_CASE("learned clause stats hold when re-evaluated through covers") {
    PlantedFixture f = depth1_fixture();
    FactIndex index(f.kb);
    auto rules = learn_ruleset(f.pos, f.neg, index, f.modes, {});
    for (const auto& lc : rules.clauses) {
        auto pos_cov = coverage(lc.clause, f.pos, index);
        auto neg_cov = coverage(lc.clause, f.neg, index);
        CHECK(pos_cov.covered.size() == lc.stats.pos_covered);
        CHECK(neg_cov.covered.size() == lc.stats.neg_covered);
        CHECK(lc.stats.pos_covered >= LearnConfig{}.min_coverage);
        CHECK(lc.stats.precision >= LearnConfig{}.min_precision);
    }
}

namespace {

// Six events, three labeled Gaithersburg (positives); two of them satisfy
// the whole Rule 2 body.
struct Rule2Fixture {
    KnowledgeBase kb;
    std::vector<Fact> pos, neg;
};

Rule2Fixture rule2_fixture() {
    Rule2Fixture f;
    f.kb = KnowledgeBase(default_schema());
    auto event = [&](const char* e, const char* road, const char* band, const char* belt) {
        f.kb.add(Fact{"main_road", {sym(e), sym(road)}});
        f.kb.add(Fact{"event_previous_occurrence", {sym(e), sym(band)}});
        f.kb.add(Fact{"driver_characteristics", {sym(e), sym(belt)}});
    };
    event("e1", "i270", "gt_20", "belt_no");
    event("e2", "i270", "gt_20", "belt_no");
    event("e3", "i270", "gt_10", "belt_no"); // not enough prior events
    event("e4", "i495", "lt_5", "belt_yes");
    event("e5", "i495", "gt_20", "belt_yes");
    event("e6", "i495", "band_5_10", "belt_no");
    for (const char* e : {"e1", "e2", "e3"}) {
        f.kb.add(Fact{"is_event_ingaithersburg", {sym(e)}});
        f.pos.push_back(Fact{"is_event_ingaithersburg", {sym(e)}});
    }
    for (const char* e : {"e4", "e5", "e6"}) {
        f.kb.add(Fact{"is_event_inbethesda", {sym(e)}});
        f.neg.push_back(Fact{"is_event_ingaithersburg", {sym(e)}});
    }
    return f;
}

} // namespace

TEST_CASE("evaluate_ruleset on the Rule 2 fixture") {
    Rule2Fixture f = rule2_fixture();
    FactIndex index(f.kb);
    auto metrics = evaluate_ruleset(builtin_paper_rules(), f.pos, f.neg, index);
    CHECK(metrics.true_positives == 2);
    CHECK(metrics.false_negatives == 1);
    CHECK(metrics.false_positives == 0);
    CHECK(metrics.true_negatives == 3);
    REQUIRE(metrics.precision.has_value());
    CHECK(*metrics.precision == 1.0);
    REQUIRE(metrics.recall.has_value());
    CHECK(*metrics.recall == Approx(2.0 / 3.0));
}

TEST_CASE("evaluate_ruleset edge cases") {
    Rule2Fixture f = rule2_fixture();
    FactIndex index(f.kb);

    // rule set covering exactly the positives
    std::vector<Clause> exact{{{"is_event_ingaithersburg", {var("X")}},
                               {{"main_road", {var("X"), sym("i270")}}}}};
    auto m = evaluate_ruleset(exact, f.pos, f.neg, index);
    CHECK(*m.precision == 1.0);
    CHECK(*m.recall == 1.0);

    // empty rule set: recall 0, precision undefined
    auto empty = evaluate_ruleset({}, f.pos, f.neg, index);
    CHECK_FALSE(empty.precision.has_value());
    REQUIRE(empty.recall.has_value());
    CHECK(*empty.recall == 0.0);
    CHECK(empty.coverage == 0.0);

    std::vector<Clause> bad{{{"is_event_ingaithersburg", {var("X")}},
                             {{"unknown_pred", {var("X"), sym("a")}}}}};
    CHECK_THROWS_AS(evaluate_ruleset(bad, f.pos, f.neg, index), SchemaMismatch);
}

TEST_CASE("builtin rules encode the published hypotheses") {
    auto rules = builtin_paper_rules();
    REQUIRE(rules.size() == 4);
    CHECK(rules[0].head == Literal{"is_event_inbethesda", {var("X")}});
    CHECK(rules[0].body.size() == 6);
    CHECK(std::find(rules[1].body.begin(), rules[1].body.end(),
                    Literal{"main_road", {var("X"), sym("i270")}}) != rules[1].body.end());
    CHECK(rules[2].head.predicate == "safe_location");
    CHECK(rules[3].head == Literal{"event_happen", {var("X"), var("Y")}});

    // every predicate the rules mention is registered in the default schema
    Schema schema = default_schema();
    for (const auto& r : rules) {
        CHECK(schema.contains(r.head.predicate, r.head.args.size()));
        for (const auto& lit : r.body) CHECK(schema.contains(lit.predicate, lit.args.size()));
    }
}

TEST_CASE("rule text round trip is byte-identical") {
    auto rules = builtin_paper_rules();
    std::string text = render_ruleset(rules);
    auto parsed = parse_rules(text);
    REQUIRE(parsed.size() == rules.size());
    CHECK(render_ruleset(parsed) == text);
    for (std::size_t i = 0; i < rules.size(); ++i) CHECK(parsed[i] == rules[i]);

    std::mt19937 rng(59);
    for (int iter = 0; iter < 50; ++iter) {
        auto random_rules = oracle::random_ruleset(rng);
        std::string first = render_ruleset(random_rules);
        auto back = parse_rules(first);
        CHECK(render_ruleset(back) == first);
    }
}

TEST_CASE("rule 1 covers exactly the events meeting all six conditions") {
    KnowledgeBase kb(default_schema());
    struct Spec {
        const char* e;
        const char* time;
        const char* month;
        const char* ctx;
        const char* occ;
        const char* year;
        const char* belt;
    };
    // e1 and e8 satisfy everything; e2..e7 each break one condition.
    Spec specs[] = {
        {"e1", "h20", "november", "athletic_center", "gt_10", "gt_2009", "belt_yes"},
        {"e2", "h9", "november", "athletic_center", "gt_10", "gt_2009", "belt_yes"},
        {"e3", "h20", "march", "athletic_center", "gt_10", "gt_2009", "belt_yes"},
        {"e4", "h20", "november", "main_road", "gt_10", "gt_2009", "belt_yes"},
        {"e5", "h20", "november", "athletic_center", "lt_5", "gt_2009", "belt_yes"},
        {"e6", "h20", "november", "athletic_center", "gt_10", "lt_2009", "belt_yes"},
        {"e7", "h20", "november", "athletic_center", "gt_10", "gt_2009", "belt_no"},
        {"e8", "h20", "november", "athletic_center", "gt_10", "gt_2009", "belt_yes"},
    };
    for (const auto& s : specs) {
        kb.add(Fact{"event_time", {sym(s.e), sym(s.time)}});
        kb.add(Fact{"event_period_of_year", {sym(s.e), sym(s.month)}});
        kb.add(Fact{"location_context", {sym(s.e), sym(s.ctx)}});
        kb.add(Fact{"event_previous_occurrence", {sym(s.e), sym(s.occ)}});
        kb.add(Fact{"vehicle_year", {sym(s.e), sym(s.year)}});
        kb.add(Fact{"driver_characteristics", {sym(s.e), sym(s.belt)}});
    }
    FactIndex index(kb);
    Clause rule1 = builtin_paper_rules()[0];
    std::set<std::string> covered;
    for (const auto& s : specs) {
        if (covers(rule1, Fact{"is_event_inbethesda", {sym(s.e)}}, index)) covered.insert(s.e);
    }
    CHECK(covered == std::set<std::string>{"e1", "e8"});
}

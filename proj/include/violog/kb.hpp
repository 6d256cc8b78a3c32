#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "violog/common.hpp"

namespace violog {

class SyntaxError : public Error { public: using Error::Error; };
class ArityMismatch : public Error { public: using Error::Error; };
class UnknownPredicate : public Error { public: using Error::Error; };
class IoFailure : public Error { public: using Error::Error; };
class MissingAnnotationData : public Error { public: using Error::Error; };

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

// Fixed-point decimal digits/10^scale, normalized so the fractional part has
// no trailing zeros; scale 0 renders as a plain integer. Numbers in the fact
// language are exactly these.
struct Number {
    std::int64_t digits = 0;
    int scale = 0;

    static Number normalized(std::int64_t digits, int scale) {
        while (scale > 0 && digits % 10 == 0) {
            digits /= 10;
            --scale;
        }
        return Number{digits, scale};
    }

    static Number from_int(std::int64_t v) { return Number{v, 0}; }

    // Rounds half away from zero at `decimals` places.
    static Number from_double(double v, int decimals) {
        double p = std::pow(10.0, decimals);
        return normalized(std::llround(v * p), decimals);
    }

    std::string render() const {
        bool neg = digits < 0;
        std::uint64_t mag = neg ? static_cast<std::uint64_t>(-digits)
                                : static_cast<std::uint64_t>(digits);
        std::string s = std::to_string(mag);
        if (scale > 0) {
            while (s.size() <= static_cast<std::size_t>(scale)) s.insert(s.begin(), '0');
            s.insert(s.size() - static_cast<std::size_t>(scale), ".");
        }
        return neg ? "-" + s : s;
    }

    auto operator<=>(const Number&) const = default;
};

enum class TermKind { Symbol, String, Numeric, Variable };

// A term is a constant (lowercase symbol, quoted string, or number) or a
// variable (uppercase-initial token). Constants and variables are disjoint
// lexical classes; equality is structural.
struct Term {
    TermKind kind = TermKind::Symbol;
    std::string text; // symbol name, string content, or variable name
    Number num;       // meaningful when kind == Numeric

    static Term symbol(std::string name) { return Term{TermKind::Symbol, std::move(name), {}}; }
    static Term string(std::string value) { return Term{TermKind::String, std::move(value), {}}; }
    static Term number(Number n) { return Term{TermKind::Numeric, {}, n}; }
    static Term integer(std::int64_t v) { return Term{TermKind::Numeric, {}, Number::from_int(v)}; }
    static Term variable(std::string name) { return Term{TermKind::Variable, std::move(name), {}}; }

    bool is_variable() const { return kind == TermKind::Variable; }
    bool is_constant() const { return kind != TermKind::Variable; }

    auto operator<=>(const Term&) const = default;
};

inline bool valid_symbol(std::string_view s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

inline bool valid_variable(std::string_view s) {
    if (s.empty() || s[0] < 'A' || s[0] > 'Z') return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_'))
            return false;
    return true;
}

// Canonical text form used by the fact/rule grammar.
inline std::string render_term(const Term& t) {
    switch (t.kind) {
        case TermKind::Symbol:
        case TermKind::Variable: return t.text;
        case TermKind::Numeric: return t.num.render();
        case TermKind::String: {
            std::string out = "\"";
            for (char c : t.text) {
                if (c == '"' || c == '\\') out.push_back('\\');
                out.push_back(c);
            }
            out += "\"";
            return out;
        }
    }
    return "";
}

// Folds an arbitrary source string into a symbol constant: lowercase,
// whitespace runs become single underscores, other punctuation is dropped
// ("I-270" -> i270, "Silver Spring" -> silver_spring). Yields "x" for inputs
// with no usable characters; prefixes "c" when the result would start with a
// digit.
inline std::string fold_symbol(std::string_view raw) {
    std::string out;
    bool pending = false;
    for (char ch : raw) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            if (pending && !out.empty()) out.push_back('_');
            pending = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        } else if (std::isspace(c)) {
            pending = true;
        }
    }
    if (out.empty()) return "x";
    if (out[0] >= '0' && out[0] <= '9') out.insert(out.begin(), 'c');
    return out;
}

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

enum class ArgType { City, Event, EventType, Road, Band, NumberArg, Context, BooleanAttr };

struct Predicate {
    std::string name;
    std::size_t arity = 0;
    std::vector<ArgType> arg_types; // search metadata; not enforced on facts

    auto operator<=>(const Predicate&) const = default;
};

class Schema {
public:
    void add(Predicate p) {
        predicates_.emplace(std::make_pair(p.name, p.arity), std::move(p));
    }

    bool contains(const std::string& name, std::size_t arity) const {
        return predicates_.count({name, arity}) > 0;
    }

    const Predicate* find(const std::string& name, std::size_t arity) const {
        auto it = predicates_.find({name, arity});
        return it == predicates_.end() ? nullptr : &it->second;
    }

    const std::map<std::pair<std::string, std::size_t>, Predicate>& all() const {
        return predicates_;
    }

private:
    std::map<std::pair<std::string, std::size_t>, Predicate> predicates_;
};

// Every predicate used by the compiled knowledge base and the shipped rules.
inline Schema default_schema() {
    using T = ArgType;
    Schema s;
    s.add({"night_hours", 5, {T::City, T::NumberArg, T::NumberArg, T::NumberArg, T::NumberArg}});
    s.add({"location_distribution", 4, {T::City, T::NumberArg, T::NumberArg, T::NumberArg}});
    s.add({"location_context", 2, {T::Event, T::Context}});
    s.add({"location_context", 3, {T::City, T::Event, T::Context}});
    s.add({"event_previous_occurrence", 2, {T::Event, T::Band}});
    s.add({"driver_characteristics", 2, {T::Event, T::BooleanAttr}});
    s.add({"vehicle_year", 2, {T::Event, T::Band}});
    s.add({"main_road", 2, {T::Event, T::Road}});
    s.add({"population_density", 2, {T::City, T::NumberArg}});
    s.add({"median_income", 2, {T::City, T::Band}});
    s.add({"education", 2, {T::City, T::Band}});
    s.add({"poverty", 2, {T::City, T::Band}});
    s.add({"density", 2, {T::City, T::Band}});
    s.add({"event_time", 2, {T::Event, T::Band}});
    s.add({"event_period_of_year", 2, {T::Event, T::Band}});
    s.add({"event_type", 2, {T::Event, T::EventType}});
    s.add({"past_event_probability", 2, {T::Event, T::Band}});
    s.add({"safe_location", 2, {T::Event, T::City}});
    s.add({"event_happen", 2, {T::Event, T::City}});
    s.add({"is_event_inbethesda", 1, {T::Event}});
    s.add({"is_event_ingaithersburg", 1, {T::Event}});
    return s;
}

inline std::string city_label_predicate(std::string_view city) {
    return "is_event_in" + fold_symbol(city);
}

// ---------------------------------------------------------------------------
// Facts and the knowledge base
// ---------------------------------------------------------------------------

struct Fact {
    std::string predicate;
    std::vector<Term> args; // all ground

    auto operator<=>(const Fact&) const = default;
};

inline std::string render_fact(const Fact& f) {
    std::string out = f.predicate + "(";
    for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i) out += ", ";
        out += render_term(f.args[i]);
    }
    out += ").";
    return out;
}

class KnowledgeBase {
public:
    explicit KnowledgeBase(Schema schema = default_schema()) : schema_(std::move(schema)) {}

    Schema& schema() { return schema_; }
    const Schema& schema() const { return schema_; }

    // Set semantics: duplicates collapse. Grounds and schema membership are
    // checked; argument type tags are metadata only.
    void add(Fact fact, std::string provenance = {}) {
        for (const auto& t : fact.args)
            if (t.is_variable())
                throw Error("fact " + fact.predicate + " must be ground");
        if (!schema_.contains(fact.predicate, fact.args.size()))
            throw UnknownPredicate("predicate " + fact.predicate + "/" +
                                   std::to_string(fact.args.size()) + " not in schema");
        auto [it, inserted] = facts_.insert(std::move(fact));
        if (inserted && !provenance.empty()) provenance_.emplace(*it, std::move(provenance));
    }

    // Registers (name, arity) on first use, then adds. Used by compilation
    // for per-city label predicates and by the lenient fact parser.
    void add_auto(Fact fact, std::string provenance = {}) {
        if (!schema_.contains(fact.predicate, fact.args.size()))
            schema_.add({fact.predicate, fact.args.size(),
                         std::vector<ArgType>(fact.args.size(), ArgType::Event)});
        add(std::move(fact), std::move(provenance));
    }

    bool contains(const Fact& f) const { return facts_.count(f) > 0; }
    const std::set<Fact>& facts() const { return facts_; }
    std::size_t size() const { return facts_.size(); }

    const std::string* provenance(const Fact& f) const {
        auto it = provenance_.find(f);
        return it == provenance_.end() ? nullptr : &it->second;
    }

private:
    Schema schema_;
    std::set<Fact> facts_;
    std::map<Fact, std::string> provenance_;
};

// ---------------------------------------------------------------------------
// Discretization
// ---------------------------------------------------------------------------

// Ascending cut points and cuts+1 band names. A value on a cut belongs to
// the upper band.
struct DiscretizationSpec {
    std::string quantity;
    std::vector<double> cut_points;
    std::vector<std::string> band_names;

    void validate() const {
        if (band_names.size() != cut_points.size() + 1)
            throw Error("discretization '" + quantity + "': need cuts+1 band names");
        for (std::size_t i = 1; i < cut_points.size(); ++i)
            if (!(cut_points[i - 1] < cut_points[i]))
                throw Error("discretization '" + quantity + "': cuts must be strictly ascending");
        std::set<std::string> distinct(band_names.begin(), band_names.end());
        if (distinct.size() != band_names.size())
            throw Error("discretization '" + quantity + "': band names must be distinct");
    }
};

inline std::size_t discretize_index(double value, const DiscretizationSpec& spec) {
    std::size_t idx = 0;
    for (double cut : spec.cut_points)
        if (value >= cut) ++idx;
    return idx;
}

inline std::string discretize(double value, const DiscretizationSpec& spec) {
    return spec.band_names[discretize_index(value, spec)];
}

// Default band vocabularies, named the way the shipped rules spell them.
struct DiscretizationDefaults {
    DiscretizationSpec occurrence{"occurrence", {5, 10, 20}, {"lt_5", "band_5_10", "gt_10", "gt_20"}};
    DiscretizationSpec income{"income", {75000, 150000}, {"lt_75000", "band_75000_150000", "gt_150000"}};
    DiscretizationSpec education{"education", {50, 80}, {"lt_50pct", "band_50_80pct", "gt_80pct"}};
    DiscretizationSpec poverty{"poverty", {3}, {"lt_3pct", "gt_3pct"}};
    DiscretizationSpec density{"density", {2000}, {"lt_2000", "gt_2000"}};
    DiscretizationSpec vehicle_year{"vehicle_year", {2009}, {"lt_2009", "gt_2009"}};
    DiscretizationSpec event_probability{"event_probability", {3}, {"lt_3pct", "band_3pct"}};

    void validate() const {
        occurrence.validate();
        income.validate();
        education.validate();
        poverty.validate();
        density.validate();
        vehicle_year.validate();
        event_probability.validate();
    }
};

// ---------------------------------------------------------------------------
// Fact file emission and parsing
// ---------------------------------------------------------------------------

// One fact per line, `name(arg, arg).`, lines sorted lexicographically,
// UTF-8, LF endings. Returns the byte count written.
inline std::size_t emit_facts(const KnowledgeBase& kb, std::ostream& out) {
    std::vector<std::string> lines;
    lines.reserve(kb.size());
    for (const auto& f : kb.facts()) lines.push_back(render_fact(f));
    std::sort(lines.begin(), lines.end());
    std::size_t bytes = 0;
    for (const auto& line : lines) {
        out << line << '\n';
        bytes += line.size() + 1;
    }
    if (!out) throw IoFailure("emit_facts: write failed");
    return bytes;
}

inline std::string emit_facts_string(const KnowledgeBase& kb) {
    std::ostringstream out;
    emit_facts(kb, out);
    return out.str();
}

namespace factparse {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line = 1;
    std::size_t col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    char advance() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": " + what);
    }

    void skip_ws_and_comments() {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '%') {
                while (!eof() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }
};

inline bool symbol_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

inline std::string read_token(Cursor& cur) {
    std::string out;
    while (!cur.eof() && symbol_char(cur.peek())) out.push_back(cur.advance());
    return out;
}

// symbol | Variable | number | quoted string
inline Term read_term(Cursor& cur) {
    if (cur.eof()) cur.fail("expected a term");
    char c = cur.peek();
    if (c == '"') {
        cur.advance();
        std::string value;
        while (true) {
            if (cur.eof()) cur.fail("unterminated string");
            char ch = cur.advance();
            if (ch == '\\') {
                if (cur.eof()) cur.fail("dangling escape");
                value.push_back(cur.advance());
            } else if (ch == '"') {
                break;
            } else {
                value.push_back(ch);
            }
        }
        return Term::string(std::move(value));
    }
    if (c == '-' || (c >= '0' && c <= '9')) {
        bool neg = c == '-';
        if (neg) cur.advance();
        if (cur.eof() || !(cur.peek() >= '0' && cur.peek() <= '9')) cur.fail("malformed number");
        std::int64_t digits = 0;
        int scale = 0;
        int digit_count = 0;
        bool fractional = false;
        while (!cur.eof()) {
            char d = cur.peek();
            if (d >= '0' && d <= '9') {
                if (++digit_count > 18) cur.fail("number has too many digits");
                digits = digits * 10 + (d - '0');
                if (fractional) ++scale;
                cur.advance();
            } else if (d == '.' && !fractional && cur.pos + 1 < cur.text.size() &&
                       cur.text[cur.pos + 1] >= '0' && cur.text[cur.pos + 1] <= '9') {
                fractional = true;
                cur.advance();
            } else {
                break;
            }
        }
        if (neg) digits = -digits;
        return Term::number(Number::normalized(digits, scale));
    }
    if (c >= 'a' && c <= 'z') {
        std::string name = read_token(cur);
        if (!valid_symbol(name)) cur.fail("malformed symbol '" + name + "'");
        return Term::symbol(std::move(name));
    }
    if (c >= 'A' && c <= 'Z') {
        std::string name = read_token(cur);
        return Term::variable(std::move(name));
    }
    cur.fail(std::string("unexpected character '") + c + "'");
}

inline void expect(Cursor& cur, char c, const char* what) {
    if (cur.eof() || cur.peek() != c) cur.fail(std::string("expected ") + what);
    cur.advance();
}

// name '(' term (',' term)* ')'
inline std::pair<std::string, std::vector<Term>> read_atom(Cursor& cur) {
    if (cur.eof() || !(cur.peek() >= 'a' && cur.peek() <= 'z'))
        cur.fail("expected a predicate name");
    std::string name = read_token(cur);
    if (!valid_symbol(name)) cur.fail("malformed predicate name '" + name + "'");
    expect(cur, '(', "'('");
    std::vector<Term> args;
    cur.skip_ws_and_comments();
    if (cur.eof()) cur.fail("unterminated argument list");
    args.push_back(read_term(cur));
    cur.skip_ws_and_comments();
    while (!cur.eof() && cur.peek() == ',') {
        cur.advance();
        cur.skip_ws_and_comments();
        args.push_back(read_term(cur));
        cur.skip_ws_and_comments();
    }
    expect(cur, ')', "')'");
    return {std::move(name), std::move(args)};
}

} // namespace factparse

// Parses the emit_facts grammar. With enforce_schema, predicates absent from
// `schema` raise UnknownPredicate; otherwise they are registered on the fly.
inline KnowledgeBase parse_facts(std::string_view text, Schema schema = default_schema(),
                                 bool enforce_schema = false) {
    factparse::Cursor cur{text};
    KnowledgeBase kb(std::move(schema));
    while (true) {
        cur.skip_ws_and_comments();
        if (cur.eof()) break;
        auto [name, args] = factparse::read_atom(cur);
        factparse::expect(cur, '.', "'.' after fact");
        for (const auto& a : args)
            if (a.is_variable()) cur.fail("facts must be ground");
        if (kb.schema().contains(name, args.size())) {
            kb.add(Fact{std::move(name), std::move(args)});
        } else if (enforce_schema) {
            bool same_name_other_arity = false;
            for (const auto& [key, pred] : kb.schema().all())
                if (key.first == name) same_name_other_arity = true;
            if (same_name_other_arity)
                throw ArityMismatch("predicate " + name + " used with arity " +
                                    std::to_string(args.size()));
            throw UnknownPredicate("predicate " + name + "/" + std::to_string(args.size()) +
                                   " not in schema");
        } else {
            kb.add_auto(Fact{std::move(name), std::move(args)});
        }
    }
    return kb;
}

} // namespace violog

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "violog/analytics.hpp"
#include "violog/compile.hpp"
#include "violog/ilp.hpp"
#include "violog/ingest.hpp"
#include "violog/kb.hpp"
#include "violog/report.hpp"

namespace violog {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct PipelineConfig {
    std::string violations_path;
    std::string weather_path;
    std::string census_path;
    std::string annotations_path;
    std::string out_dir = "out";

    int analysis_year = 2017;
    int coordinate_precision = 4;
    long long hotspot_threshold = 10;
    NightWindow night;
    Scope scope;
    std::vector<std::string> target_cities = {"bethesda", "gaithersburg"};
    LearnConfig learn;
    DiscretizationDefaults bands;
    double min_prominence = 0.5;
    std::size_t top_k = 10;
    bool strict = false;

    std::string target_predicate;         // learn/eval target; empty = one per target city
    std::string rules_source = "builtin"; // "builtin" or a rule-file path
    std::string negatives_path;           // optional explicit negatives fact file
    std::string facts_path;               // overrides <out>/kb/facts.kb for learn/eval

    ColumnMapping mapping = ColumnMapping::defaults();
};

// "latitude=Geo Lat" remaps one logical violations field to a header name.
inline void apply_column_override(ColumnMapping& mapping, std::string_view text) {
    auto eq = text.find('=');
    if (eq == std::string_view::npos)
        throw Error("malformed column override '" + std::string(text) + "' (logical=Header)");
    std::string logical = fold_key(text.substr(0, eq));
    if (!mapping.columns.count(logical))
        throw Error("unknown logical field '" + logical + "' in column override");
    mapping.columns[logical] = std::string(trim(text.substr(eq + 1)));
}

inline Scope parse_scope(std::string_view text) {
    std::string s = fold_key(text);
    if (s.empty() || s == "all") return {Scope::Kind::All, ""};
    if (s == "category1") return {Scope::Kind::Category1, ""};
    if (s == "category2") return {Scope::Kind::Category2, ""};
    if (s.rfind("event:", 0) == 0)
        return {Scope::Kind::SingleEvent, normalize_text(s.substr(6))};
    throw Error("unknown scope '" + std::string(text) + "' (all|category1|category2|event:<description>)");
}

// "20:00-06:00" -> fallback night window
inline NightWindow parse_night_window(std::string_view text) {
    auto parts = split(text, '-');
    NightWindow w;
    if (parts.size() != 2 || !parse_time(parts[0], w.fallback_start) ||
        !parse_time(parts[1], w.fallback_end))
        throw Error("malformed night window '" + std::string(text) + "' (expect HH:MM-HH:MM)");
    return w;
}

// "occurrence=5,10,20:lt_5,band_5_10,gt_10,gt_20" (names optional)
inline void apply_band_override(DiscretizationDefaults& bands, std::string_view text) {
    auto eq = text.find('=');
    if (eq == std::string_view::npos) throw Error("malformed band override '" + std::string(text) + "'");
    std::string quantity = fold_key(text.substr(0, eq));
    std::string_view rest = text.substr(eq + 1);
    auto colon = rest.find(':');
    DiscretizationSpec spec;
    spec.quantity = quantity;
    for (const auto& c : split(colon == std::string_view::npos ? rest : rest.substr(0, colon), ',')) {
        double v;
        if (!parse_double(c, v)) throw Error("malformed cut point '" + c + "'");
        spec.cut_points.push_back(v);
    }
    if (colon != std::string_view::npos) {
        for (const auto& n : split(rest.substr(colon + 1), ','))
            spec.band_names.push_back(std::string(trim(n)));
    } else {
        auto cut_name = [](double v) {
            std::string s = format_double(v);
            for (auto& ch : s)
                if (ch == '.' || ch == '-') ch = '_';
            return s;
        };
        spec.band_names.push_back("lt_" + cut_name(spec.cut_points.front()));
        for (std::size_t i = 1; i < spec.cut_points.size(); ++i)
            spec.band_names.push_back("band_" + cut_name(spec.cut_points[i - 1]) + "_" +
                                      cut_name(spec.cut_points[i]));
        spec.band_names.push_back("gt_" + cut_name(spec.cut_points.back()));
    }
    spec.validate();
    DiscretizationSpec* slot = nullptr;
    if (quantity == "occurrence") slot = &bands.occurrence;
    else if (quantity == "income") slot = &bands.income;
    else if (quantity == "education") slot = &bands.education;
    else if (quantity == "poverty") slot = &bands.poverty;
    else if (quantity == "density") slot = &bands.density;
    else if (quantity == "vehicle_year") slot = &bands.vehicle_year;
    else if (quantity == "event_probability") slot = &bands.event_probability;
    else throw Error("unknown band quantity '" + quantity + "'");
    *slot = std::move(spec);
}

// ---------------------------------------------------------------------------
// Atomic output
// ---------------------------------------------------------------------------

inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoFailure("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct AnalyzeResult {
    FrequencyTable top_violations;
    CrossTab consequences;
    std::map<std::string, FrequencyTable> breakdowns;
    std::map<std::string, Histogram> histograms;
    std::map<std::string, std::vector<std::size_t>> peaks;
    HotspotResult hotspots;
    NightSeries night_counts;
    std::array<double, 12> night_duration{};
    bool night_duration_complete = false;
    std::optional<double> night_correlation;
    std::vector<CityProfile> profiles;
    std::map<std::string, std::vector<HotspotCell>> city_hotspots;
    std::map<std::string, double> per_capita;
    std::vector<std::string> warnings;
};

class Pipeline {
public:
    explicit Pipeline(PipelineConfig config) : config_(std::move(config)) {}

    const PipelineConfig& config() const { return config_; }
    const Dataset& dataset() {
        ensure_loaded();
        return data_;
    }

    // Parse every configured input; violations are required, the rest are
    // optional. Idempotent.
    void ensure_loaded() {
        if (loaded_) return;
        if (config_.violations_path.empty())
            throw Error("no violations file configured (--violations)");
        {
            std::ifstream in(config_.violations_path, std::ios::binary);
            if (!in) throw Error("cannot open " + config_.violations_path);
            auto parsed = parse_violations_csv(in, config_.mapping, config_.strict,
                                               AnalysisWindow{config_.analysis_year});
            data_.violations = std::move(parsed.records);
            data_.parse_report["violations"] = std::move(parsed.report);
        }
        if (!config_.weather_path.empty()) {
            std::ifstream in(config_.weather_path, std::ios::binary);
            if (!in) throw Error("cannot open " + config_.weather_path);
            auto parsed = parse_weather_csv(in);
            data_.weather = std::move(parsed.days);
            data_.parse_report["weather"] = std::move(parsed.report);
        }
        if (!config_.census_path.empty()) {
            std::ifstream in(config_.census_path, std::ios::binary);
            if (!in) throw Error("cannot open " + config_.census_path);
            auto parsed = parse_census_csv(in);
            data_.census = std::move(parsed.cities);
            data_.parse_report["census"] = std::move(parsed.report);
        }
        if (!config_.annotations_path.empty()) {
            std::ifstream in(config_.annotations_path, std::ios::binary);
            if (!in) throw Error("cannot open " + config_.annotations_path);
            auto parsed = parse_context_annotations(in, config_.coordinate_precision);
            data_.annotations = std::move(parsed.annotations);
            data_.parse_report["annotations"] = std::move(parsed.report);
        }
        scoped_ = apply_scope(data_.violations, config_.scope);
        loaded_ = true;
    }

    AnalyzeResult compute_analytics() {
        ensure_loaded();
        AnalyzeResult r;
        r.top_violations = rank_violations(scoped_, config_.top_k);
        r.consequences = crosstab(
            scoped_, {"property_damage", "contributed_to_accident", "personal_injury"});
        for (const char* dim : {"gender", "race", "vehicle_type", "violation_type"})
            r.breakdowns[dim] = dimension_breakdown(scoped_, dim);
        for (auto axis : {HistogramAxis::Hour, HistogramAxis::Weekday, HistogramAxis::Month}) {
            static const char* names[] = {"hour", "weekday", "month"};
            Histogram h = temporal_histogram(scoped_, axis);
            r.peaks[names[static_cast<int>(axis)]] = detect_peaks(h, config_.min_prominence);
            r.histograms[names[static_cast<int>(axis)]] = std::move(h);
        }
        r.hotspots = hotspot_detect(scoped_, config_.hotspot_threshold,
                                    config_.coordinate_precision, data_.annotations);
        r.night_counts = night_series(scoped_, data_.weather, std::nullopt, config_.night);

        try {
            r.night_duration = night_duration_series(data_.weather, config_.analysis_year);
            r.night_duration_complete = true;
        } catch (const IncompleteMonth&) {
            r.night_duration =
                night_duration_series(data_.weather, config_.analysis_year, false);
            r.warnings.push_back("weather table incomplete; night durations averaged over "
                                 "available days only");
        }
        if (r.night_duration_complete) {
            // The published correlation leaves out June and July.
            std::vector<double> counts(r.night_counts.counts.begin(),
                                       r.night_counts.counts.end());
            std::vector<double> hours(r.night_duration.begin(), r.night_duration.end());
            try {
                r.night_correlation = pearson_correlation(counts, hours, {5, 6});
            } catch (const DegenerateInput&) {
                r.warnings.push_back("night correlation undefined (degenerate series)");
            }
        }

        CityProfileConfig pcfg{config_.analysis_year, config_.coordinate_precision,
                               config_.night};
        for (const auto& city : config_.target_cities) {
            std::string key = fold_key(city);
            try {
                Dataset scoped_view;
                scoped_view.violations = scoped_;
                scoped_view.weather = data_.weather;
                scoped_view.census = data_.census;
                scoped_view.annotations = data_.annotations;
                CityProfile p = city_profile(scoped_view, key, pcfg);
                std::vector<ViolationRecord> in_city;
                for (const auto& rec : scoped_)
                    if (rec.city == key) in_city.push_back(rec);
                r.city_hotspots[key] =
                    hotspot_detect(in_city, config_.hotspot_threshold,
                                   config_.coordinate_precision, data_.annotations)
                        .cells;
                r.per_capita[key] = per_capita_ratio(p.violation_count, p.census.population);
                r.profiles.push_back(std::move(p));
            } catch (const Error& e) {
                r.warnings.push_back("skipping city '" + key + "': " + e.what());
            }
        }
        return r;
    }

    KnowledgeBase compute_kb(const AnalyzeResult& analysis) {
        ensure_loaded();
        KnowledgeBase kb(default_schema());
        compile_city_facts(analysis.profiles, analysis.city_hotspots, kb, config_.bands);
        compile_event_facts(scoped_, data_.annotations, data_.census, kb,
                            EventFactOptions{config_.coordinate_precision, config_.bands});
        return kb;
    }

    // ------------------------------------------------------------------
    // Subcommands: each writes its artifacts under out_dir.
    // ------------------------------------------------------------------

    void run_ingest() {
        ensure_loaded();
        std::ostringstream snapshot;
        write_violations_csv(snapshot, data_.violations);
        write_file_atomic(out() / "dataset" / "violations_validated.csv", snapshot.str());
        write_file_atomic(out() / "parse_report.json", report::dump_json(parse_reports_json()));
    }

    void run_analyze() {
        AnalyzeResult r = compute_analytics();
        emit_warnings(r.warnings);
        write_file_atomic(out() / "tables" / "top_violations.csv",
                          report::frequency_csv(r.top_violations, "description"));
        write_file_atomic(out() / "tables" / "top_violations.json",
                          report::dump_json(report::frequency_json(r.top_violations, "description")));
        write_file_atomic(out() / "tables" / "consequences.csv",
                          report::crosstab_csv(r.consequences));
        write_file_atomic(out() / "tables" / "consequences.json",
                          report::dump_json(report::crosstab_json(r.consequences)));
        for (const auto& [dim, table] : r.breakdowns) {
            write_file_atomic(out() / "tables" / ("breakdown_" + dim + ".csv"),
                              report::frequency_csv(table, dim));
            write_file_atomic(out() / "tables" / ("breakdown_" + dim + ".json"),
                              report::dump_json(report::frequency_json(table, dim)));
        }
        write_file_atomic(out() / "tables" / "hotspots.csv", report::hotspots_csv(r.hotspots));
        write_file_atomic(out() / "tables" / "hotspots.json",
                          report::dump_json(report::hotspots_json(r.hotspots)));
        for (const auto& [name, hist] : r.histograms)
            write_file_atomic(out() / "series" / ("hist_" + name + ".csv"),
                              report::histogram_csv(hist));
        write_file_atomic(out() / "series" / "peaks.json", report::dump_json(peaks_json(r)));
        write_file_atomic(out() / "series" / "night_counts.csv",
                          report::night_counts_csv(r.night_counts));
        write_file_atomic(out() / "series" / "night_duration.csv",
                          report::night_duration_csv(r.night_duration));
        write_file_atomic(out() / "series" / "night_correlation.json",
                          report::dump_json(correlation_json(r)));
        for (const auto& p : r.profiles) {
            write_file_atomic(out() / "cities" / (p.city + ".json"),
                              report::dump_json(report::city_profile_json(p)));
            write_file_atomic(out() / "cities" / (p.city + "_locations.csv"),
                              report::location_counts_csv(location_counts(
                                  scoped_, p.city, config_.coordinate_precision)));
        }
        if (!r.profiles.empty())
            write_file_atomic(out() / "cities" / "comparison.csv",
                              report::city_comparison_csv(r.profiles));
        if (!r.per_capita.empty()) {
            report::json pc;
            for (const auto& [city, ratio] : r.per_capita) pc[city] = ratio;
            write_file_atomic(out() / "cities" / "per_capita.json", report::dump_json(pc));
        }
    }

    void run_compile_facts() {
        AnalyzeResult r = compute_analytics();
        emit_warnings(r.warnings);
        KnowledgeBase kb = compute_kb(r);
        write_file_atomic(out() / "kb" / "facts.kb", emit_facts_string(kb));
    }

    void run_learn() {
        KnowledgeBase kb = load_facts();
        for (const auto& target : learn_targets(kb)) {
            auto [pos, neg] = example_sets(kb, target);
            if (pos.empty()) {
                std::cerr << "warning: no positive examples for target '" << target << "'\n";
                continue;
            }
            FactIndex index(kb);
            auto modes = default_event_modes(kb.schema());
            LearnedRuleSet rules = learn_ruleset(pos, neg, index, modes, config_.learn);
            if (rules.no_rules_learned())
                std::cerr << "warning: no rules learned for target '" << target << "'\n";
            std::vector<Clause> clauses;
            for (const auto& c : rules.clauses) clauses.push_back(c.clause);
            write_file_atomic(out() / "rules" / (target + ".rules"), render_ruleset(clauses));
            write_file_atomic(out() / "rules" / (target + "_stats.json"),
                              report::dump_json(report::clause_stats_json(rules)));
        }
    }

    void run_eval() {
        KnowledgeBase kb = load_facts();
        std::vector<Clause> rules = load_rules();
        FactIndex index(kb);

        std::vector<std::string> targets;
        if (!config_.target_predicate.empty()) {
            targets.push_back(config_.target_predicate);
        } else {
            std::set<std::string> heads;
            for (const auto& r : rules)
                if (heads.insert(r.head.predicate).second) targets.push_back(r.head.predicate);
        }

        report::json all = report::json::object();
        for (const auto& target : targets) {
            std::vector<Clause> scoped_rules;
            for (const auto& r : rules)
                if (r.head.predicate == target) scoped_rules.push_back(r);
            auto [pos, neg] = example_sets(kb, target);
            if (pos.empty()) {
                all[target] = {{"skipped", "no examples for target"}};
                continue;
            }
            RuleSetMetrics m = evaluate_ruleset(scoped_rules, pos, neg, index);
            all[target] = report::metrics_json(m);
        }
        write_file_atomic(out() / "eval" / "metrics.json", report::dump_json(all));
    }

    void run_report() {
        AnalyzeResult r = compute_analytics();
        emit_warnings(r.warnings);
        KnowledgeBase kb = compute_kb(r);
        std::string facts_text = emit_facts_string(kb);

        report::json doc;
        doc["artifact"] = "violog";
        doc["config"] = config_json();
        doc["parse_reports"] = parse_reports_json();
        doc["tables"] = {
            {"top_violations", report::frequency_json(r.top_violations, "description")},
            {"consequences", report::crosstab_json(r.consequences)},
            {"hotspots", report::hotspots_json(r.hotspots)}};
        for (const auto& [dim, table] : r.breakdowns)
            doc["tables"]["breakdown_" + dim] = report::frequency_json(table, dim);
        doc["series"] = report::json::object();
        for (const auto& [name, hist] : r.histograms)
            doc["series"][name] = report::histogram_json(hist);
        doc["series"]["peaks"] = peaks_json(r);
        {
            report::json nights = report::json::array();
            for (std::size_t m = 0; m < 12; ++m)
                nights.push_back({{"month", month_name(static_cast<int>(m) + 1)},
                                  {"count", r.night_counts.counts[m]},
                                  {"mean_night_hours", r.night_duration[m]}});
            doc["series"]["night"] = nights;
            doc["series"]["night_correlation"] = correlation_json(r);
        }
        doc["cities"] = report::json::object();
        for (const auto& p : r.profiles) doc["cities"][p.city] = report::city_profile_json(p);
        doc["per_capita"] = report::json::object();
        for (const auto& [city, ratio] : r.per_capita) doc["per_capita"][city] = ratio;
        doc["kb"] = {{"fact_count", kb.size()},
                     {"digest", hex64(fnv1a64(facts_text))}};

        doc["rules"] = report::json::object();
        for (const auto& target : learn_targets(kb)) {
            auto [pos, neg] = example_sets(kb, target);
            if (pos.empty()) continue;
            FactIndex index(kb);
            LearnedRuleSet rules =
                learn_ruleset(pos, neg, index, default_event_modes(kb.schema()), config_.learn);
            report::json lines = report::json::array();
            for (const auto& c : rules.clauses) lines.push_back(render_clause(c.clause));
            doc["rules"][target] = {{"clauses", lines},
                                    {"stats", report::clause_stats_json(rules)}};
        }
        write_file_atomic(out() / "report.json", report::dump_json(doc));
    }

    void run_all() {
        run_ingest();
        run_analyze();
        run_compile_facts();
        run_learn();
        run_eval();
        run_report();
    }

    void run(const std::string& subcommand) {
        if (subcommand == "ingest") run_ingest();
        else if (subcommand == "analyze") run_analyze();
        else if (subcommand == "compile-facts") run_compile_facts();
        else if (subcommand == "learn") run_learn();
        else if (subcommand == "eval") run_eval();
        else if (subcommand == "report") run_report();
        else if (subcommand == "all") run_all();
        else throw Error("unknown subcommand '" + subcommand + "'");
    }

private:
    std::filesystem::path out() const { return config_.out_dir; }

    void emit_warnings(const std::vector<std::string>& warnings) {
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    }

    report::json parse_reports_json() {
        report::json all = report::json::object();
        for (const auto& [name, rep] : data_.parse_report)
            all[name] = report::parse_report_json(rep);
        return all;
    }

    report::json peaks_json(const AnalyzeResult& r) {
        report::json peaks = report::json::object();
        for (const auto& [axis, indices] : r.peaks) {
            report::json arr = report::json::array();
            for (std::size_t i : indices) arr.push_back(i);
            peaks[axis] = arr;
        }
        peaks["min_prominence"] = config_.min_prominence;
        return peaks;
    }

    report::json correlation_json(const AnalyzeResult& r) {
        report::json j;
        j["excluded_months"] = {"june", "july"};
        j["r"] = r.night_correlation ? report::json(*r.night_correlation)
                                     : report::json(nullptr);
        j["weather_complete"] = r.night_duration_complete;
        return j;
    }

    report::json config_json() const {
        const char* scope_names[] = {"all", "category1", "category2", "event"};
        report::json j = {{"analysis_year", config_.analysis_year},
                          {"coordinate_precision", config_.coordinate_precision},
                          {"hotspot_threshold", config_.hotspot_threshold},
                          {"scope", scope_names[static_cast<int>(config_.scope.kind)]},
                          {"target_cities", config_.target_cities},
                          {"top_k", config_.top_k},
                          {"min_prominence", config_.min_prominence},
                          {"learn",
                           {{"max_body_literals", config_.learn.max_body_literals},
                            {"min_coverage", config_.learn.min_coverage},
                            {"min_precision", config_.learn.min_precision},
                            {"beam_width", config_.learn.beam_width}}}};
        if (config_.scope.kind == Scope::Kind::SingleEvent) j["scope_event"] = config_.scope.event;
        return j;
    }

    // Facts for learn/eval: explicit override, else what compile-facts wrote.
    KnowledgeBase load_facts() {
        std::filesystem::path path = config_.facts_path.empty()
                                         ? out() / "kb" / "facts.kb"
                                         : std::filesystem::path(config_.facts_path);
        if (!std::filesystem::exists(path))
            throw Error("fact file " + path.string() +
                        " not found (run compile-facts first or pass --facts)");
        return parse_facts(read_file(path));
    }

    std::vector<Clause> load_rules() {
        if (config_.rules_source == "builtin") return builtin_paper_rules();
        return parse_rules(read_file(config_.rules_source));
    }

    std::vector<std::string> learn_targets(const KnowledgeBase& kb) {
        if (!config_.target_predicate.empty()) return {config_.target_predicate};
        std::vector<std::string> targets;
        for (const auto& city : config_.target_cities) {
            std::string pred = city_label_predicate(city);
            bool has_examples = false;
            for (const auto& f : kb.facts())
                if (f.predicate == pred) {
                    has_examples = true;
                    break;
                }
            if (has_examples) targets.push_back(pred);
        }
        return targets;
    }

    // Positive examples: the target-predicate facts. Negatives: closed-world
    // pairwise contrast over the other is_event_in* label predicates, unless
    // an explicit negatives file is configured.
    std::pair<std::vector<Fact>, std::vector<Fact>> example_sets(const KnowledgeBase& kb,
                                                                 const std::string& target) {
        std::vector<Fact> pos, neg;
        std::set<std::vector<Term>> pos_args;
        for (const auto& f : kb.facts())
            if (f.predicate == target) {
                pos.push_back(f);
                pos_args.insert(f.args);
            }
        if (!config_.negatives_path.empty()) {
            KnowledgeBase nkb = parse_facts(read_file(config_.negatives_path));
            for (const auto& f : nkb.facts()) {
                if (f.predicate != target)
                    throw Error("negatives file must contain only " + target + " atoms");
                if (!pos_args.count(f.args)) neg.push_back(Fact{target, f.args});
            }
            return {pos, neg};
        }
        std::set<std::vector<Term>> neg_args;
        for (const auto& f : kb.facts()) {
            if (f.predicate == target || f.predicate.rfind("is_event_in", 0) != 0) continue;
            if (f.args.size() != 1 || pos_args.count(f.args)) continue;
            neg_args.insert(f.args);
        }
        for (const auto& args : neg_args) neg.push_back(Fact{target, args});
        return {pos, neg};
    }

    PipelineConfig config_;
    Dataset data_;
    std::vector<ViolationRecord> scoped_;
    bool loaded_ = false;
};

} // namespace violog

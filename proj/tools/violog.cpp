#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "violog/pipeline.hpp"

using namespace violog;

int main(int argc, char** argv) {
    CLI::App app{"violog: traffic-violation analytics, fact compilation, and rule induction"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value configuration file (flags take precedence)");

    PipelineConfig config;
    std::string scope_text = "all";
    std::string night_text;
    std::vector<std::string> band_overrides;
    std::vector<std::string> cities;

    app.add_option("--violations", config.violations_path, "violations CSV path");
    app.add_option("--weather", config.weather_path, "weather CSV path");
    app.add_option("--census", config.census_path, "census CSV path");
    app.add_option("--annotations", config.annotations_path, "location annotations CSV path");
    app.add_option("--out", config.out_dir, "output directory")->capture_default_str();
    app.add_option("--year", config.analysis_year, "analysis year")->capture_default_str();
    app.add_option("--precision", config.coordinate_precision,
                   "coordinate rounding precision (decimal places)")
        ->capture_default_str();
    app.add_option("--hotspot-threshold", config.hotspot_threshold,
                   "minimum events at a location, exclusive")
        ->capture_default_str();
    app.add_option("--scope", scope_text, "all|category1|category2|event:<description>")
        ->capture_default_str();
    app.add_option("--cities", cities, "target cities for profiles and label predicates");
    app.add_option("--target", config.target_predicate,
                   "target predicate for learn/eval (e.g. is_event_ingaithersburg)");
    app.add_option("--rules", config.rules_source, "rule file path or 'builtin'")
        ->capture_default_str();
    app.add_option("--negatives", config.negatives_path,
                   "fact file naming explicit negative examples");
    app.add_option("--facts", config.facts_path,
                   "fact file for learn/eval (default <out>/kb/facts.kb)");
    app.add_flag("--strict", config.strict, "abort on the first malformed violations row");
    app.add_option("--night-fallback", night_text,
                   "fallback night window HH:MM-HH:MM for dates without weather");
    app.add_option("--min-prominence", config.min_prominence,
                   "peak detection prominence fraction")
        ->capture_default_str();
    app.add_option("--top-k", config.top_k, "rows in the violation ranking")
        ->capture_default_str();
    app.add_option("--max-body-literals", config.learn.max_body_literals,
                   "clause body length cap")
        ->capture_default_str();
    app.add_option("--min-coverage", config.learn.min_coverage,
                   "minimum positives a clause must cover")
        ->capture_default_str();
    app.add_option("--min-precision", config.learn.min_precision,
                   "minimum training precision per clause")
        ->capture_default_str();
    app.add_option("--beam-width", config.learn.beam_width, "clause search beam (1 = greedy)")
        ->capture_default_str();
    app.add_option("--constant-pool-limit", config.learn.constant_pool_limit,
                   "cap on enumerated constants per argument position (0 = all)")
        ->capture_default_str();
    app.add_option("--band", band_overrides,
                   "discretization override, quantity=cut,..[:name,..] (repeatable)");
    std::vector<std::string> column_overrides;
    app.add_option("--map", column_overrides,
                   "violations column remap, logical=Header Name (repeatable)");

    for (const char* name : {"ingest", "analyze", "compile-facts", "learn", "eval", "report",
                             "all"}) {
        app.add_subcommand(name, "");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // usage problems are input errors
    }

    try {
        config.scope = parse_scope(scope_text);
        if (!night_text.empty()) config.night = parse_night_window(night_text);
        if (!cities.empty()) {
            config.target_cities.clear();
            for (const auto& c : cities) config.target_cities.push_back(fold_key(c));
        }
        for (const auto& b : band_overrides) apply_band_override(config.bands, b);
        for (const auto& m : column_overrides) apply_column_override(config.mapping, m);

        Pipeline pipeline(std::move(config));
        pipeline.run(app.get_subcommands().front()->get_name());
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}

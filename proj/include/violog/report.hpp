#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "violog/analytics.hpp"
#include "violog/csv.hpp"
#include "violog/ilp.hpp"
#include "violog/ingest.hpp"

// Serialization of analytics artifacts with stable column names and key
// order. Everything here must be byte-deterministic for identical inputs.

namespace violog::report {

using json = nlohmann::json;

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Frequency tables
// ---------------------------------------------------------------------------

inline std::string frequency_csv(const FrequencyTable& t, const std::string& key_column) {
    std::ostringstream out;
    write_csv_row(out, {"rank", key_column, "count", "percent"});
    std::size_t rank = 1;
    for (const auto& r : t.rows)
        write_csv_row(out, {std::to_string(rank++), r.key, std::to_string(r.count),
                            format_double(r.percent)});
    return out.str();
}

inline json frequency_json(const FrequencyTable& t, const std::string& key_column) {
    json rows = json::array();
    std::size_t rank = 1;
    for (const auto& r : t.rows)
        rows.push_back({{"rank", rank++}, {key_column, r.key}, {"count", r.count},
                        {"percent", r.percent}});
    return {{"rows", rows}, {"total", t.total}};
}

// ---------------------------------------------------------------------------
// Cross tabulation
// ---------------------------------------------------------------------------

inline std::string crosstab_csv(const CrossTab& t) {
    std::ostringstream out;
    std::vector<std::string> header = t.dimensions;
    header.push_back("count");
    write_csv_row(out, header);
    for (const auto& [key, count] : t.cells) {
        std::vector<std::string> row;
        for (bool b : key) row.push_back(b ? "yes" : "no");
        row.push_back(std::to_string(count));
        write_csv_row(out, row);
    }
    return out.str();
}

inline json crosstab_json(const CrossTab& t) {
    json cells = json::array();
    for (const auto& [key, count] : t.cells) {
        json cell;
        for (std::size_t i = 0; i < t.dimensions.size(); ++i) cell[t.dimensions[i]] = key[i];
        cell["count"] = count;
        cells.push_back(cell);
    }
    return {{"dimensions", t.dimensions}, {"cells", cells}, {"total", t.total}};
}

// ---------------------------------------------------------------------------
// Histograms and series (plot-ready long format: axis,bin,count)
// ---------------------------------------------------------------------------

inline std::string histogram_csv(const Histogram& h) {
    static const char* axis_names[] = {"hour", "weekday", "month"};
    std::ostringstream out;
    write_csv_row(out, {"axis", "bin", "count"});
    for (std::size_t i = 0; i < h.bins.size(); ++i)
        write_csv_row(out, {axis_names[static_cast<int>(h.axis)], axis_bin_label(h.axis, i),
                            std::to_string(h.bins[i])});
    return out.str();
}

inline json histogram_json(const Histogram& h) {
    static const char* axis_names[] = {"hour", "weekday", "month"};
    json bins = json::array();
    for (std::size_t i = 0; i < h.bins.size(); ++i)
        bins.push_back({{"bin", axis_bin_label(h.axis, i)}, {"count", h.bins[i]}});
    return {{"axis", axis_names[static_cast<int>(h.axis)]}, {"bins", bins}};
}

inline std::string night_counts_csv(const NightSeries& s) {
    std::ostringstream out;
    write_csv_row(out, {"axis", "bin", "count"});
    for (std::size_t m = 0; m < 12; ++m)
        write_csv_row(out, {"month", month_name(static_cast<int>(m) + 1),
                            std::to_string(s.counts[m])});
    return out.str();
}

inline std::string night_duration_csv(const std::array<double, 12>& hours) {
    std::ostringstream out;
    write_csv_row(out, {"month", "mean_night_hours"});
    for (std::size_t m = 0; m < 12; ++m)
        write_csv_row(out, {month_name(static_cast<int>(m) + 1), format_double(hours[m])});
    return out.str();
}

// ---------------------------------------------------------------------------
// Hotspots
// ---------------------------------------------------------------------------

inline std::string hotspots_csv(const HotspotResult& r) {
    std::ostringstream out;
    write_csv_row(out, {"latitude", "longitude", "count", "context"});
    for (const auto& cell : r.cells)
        write_csv_row(out, {format_fixed(cell.location.lat_fp, cell.location.scale),
                            format_fixed(cell.location.lon_fp, cell.location.scale),
                            std::to_string(cell.count),
                            cell.context ? to_string(*cell.context) : ""});
    return out.str();
}

inline std::string location_counts_csv(
    const std::vector<std::pair<LocationKey, long long>>& counts) {
    std::ostringstream out;
    write_csv_row(out, {"latitude", "longitude", "count"});
    for (const auto& [key, count] : counts)
        write_csv_row(out, {format_fixed(key.lat_fp, key.scale),
                            format_fixed(key.lon_fp, key.scale), std::to_string(count)});
    return out.str();
}

inline json hotspots_json(const HotspotResult& r) {
    json cells = json::array();
    for (const auto& cell : r.cells) {
        json c = {{"latitude", format_fixed(cell.location.lat_fp, cell.location.scale)},
                  {"longitude", format_fixed(cell.location.lon_fp, cell.location.scale)},
                  {"count", cell.count}};
        if (cell.context) c["context"] = to_string(*cell.context);
        cells.push_back(c);
    }
    return {{"cells", cells}, {"records_without_location", r.skipped_no_location}};
}

// ---------------------------------------------------------------------------
// Summary stats and city profiles
// ---------------------------------------------------------------------------

inline json stats_json(const SummaryStats& s) {
    return {{"mean", s.mean}, {"median", s.median}, {"variance", s.variance},
            {"std", s.std_dev}};
}

inline json city_profile_json(const CityProfile& p) {
    return {{"city", p.city},
            {"violation_count", p.violation_count},
            {"violation_share_pct", p.violation_share},
            {"top_event", p.top_event},
            {"second_event", p.second_event},
            {"night_stats", stats_json(p.night_stats)},
            {"location_stats", stats_json(p.location_stats)},
            {"light_truck_pct", p.light_truck_pct},
            {"cars_under_10y_pct", p.cars_under_10y_pct},
            {"injury_count", p.injury_count},
            {"accident_count", p.accident_count},
            {"belt_count", p.belt_count},
            {"census",
             {{"population", p.census.population},
              {"density", p.census.density},
              {"education_pct", p.census.education_pct},
              {"median_income", p.census.median_income},
              {"poverty_pct", p.census.poverty_pct},
              {"age_band_pct", p.census.age_band_pct},
              {"land_area", p.census.land_area},
              {"water_area", p.census.water_area},
              {"schools", p.census.schools},
              {"hospitals", p.census.hospitals},
              {"main_road", p.census.main_road}}}};
}

// One column per city, one row per comparison property.
inline std::string city_comparison_csv(const std::vector<CityProfile>& profiles) {
    std::ostringstream out;
    std::vector<std::string> header = {"property"};
    for (const auto& p : profiles) header.push_back(p.city);
    write_csv_row(out, header);
    auto row = [&](const std::string& name, auto getter) {
        std::vector<std::string> cells = {name};
        for (const auto& p : profiles) cells.push_back(getter(p));
        write_csv_row(out, cells);
    };
    auto d1 = [](double v) {
        return format_double(std::round(v * 10) / 10); // display at one decimal
    };
    row("traffic_violations", [](const CityProfile& p) { return std::to_string(p.violation_count); });
    row("violation_share_pct", [&](const CityProfile& p) { return d1(p.violation_share); });
    row("top_event", [](const CityProfile& p) { return p.top_event; });
    row("second_event", [](const CityProfile& p) { return p.second_event; });
    row("night_mean", [&](const CityProfile& p) { return d1(p.night_stats.mean); });
    row("night_median", [&](const CityProfile& p) { return d1(p.night_stats.median); });
    row("night_variance", [&](const CityProfile& p) { return d1(p.night_stats.variance); });
    row("night_std", [&](const CityProfile& p) { return d1(p.night_stats.std_dev); });
    row("light_truck_pct", [&](const CityProfile& p) { return d1(p.light_truck_pct); });
    row("cars_under_10y_pct", [&](const CityProfile& p) { return d1(p.cars_under_10y_pct); });
    row("location_mean", [&](const CityProfile& p) { return d1(p.location_stats.mean); });
    row("location_variance", [&](const CityProfile& p) { return d1(p.location_stats.variance); });
    row("location_std", [&](const CityProfile& p) { return d1(p.location_stats.std_dev); });
    row("population", [](const CityProfile& p) { return std::to_string(p.census.population); });
    row("density", [&](const CityProfile& p) { return format_double(p.census.density); });
    row("education_pct", [&](const CityProfile& p) { return format_double(p.census.education_pct); });
    row("median_income", [&](const CityProfile& p) { return format_double(p.census.median_income); });
    row("poverty_pct", [&](const CityProfile& p) { return format_double(p.census.poverty_pct); });
    row("age_18_65_pct", [&](const CityProfile& p) { return format_double(p.census.age_band_pct); });
    row("personal_injury", [](const CityProfile& p) { return std::to_string(p.injury_count); });
    row("contributed_to_accident",
        [](const CityProfile& p) { return std::to_string(p.accident_count); });
    row("belt", [](const CityProfile& p) { return std::to_string(p.belt_count); });
    row("land_area", [&](const CityProfile& p) { return format_double(p.census.land_area); });
    row("water_area", [&](const CityProfile& p) { return format_double(p.census.water_area); });
    row("schools", [](const CityProfile& p) { return std::to_string(p.census.schools); });
    row("hospitals", [](const CityProfile& p) { return std::to_string(p.census.hospitals); });
    row("main_road", [](const CityProfile& p) { return p.census.main_road; });
    return out.str();
}

// ---------------------------------------------------------------------------
// Parse reports, rule stats, metrics
// ---------------------------------------------------------------------------

inline json parse_report_json(const ParseReport& r) {
    json rejections = json::array();
    for (const auto& rej : r.rejections)
        rejections.push_back({{"line", rej.line}, {"reason", rej.reason}});
    return {{"accepted", r.accepted}, {"rejected", r.rejected}, {"warnings", r.warnings},
            {"rejections", rejections}};
}

inline json clause_stats_json(const LearnedRuleSet& rules) {
    json stats = json::array();
    for (std::size_t i = 0; i < rules.clauses.size(); ++i) {
        const auto& c = rules.clauses[i];
        stats.push_back({{"clause_index", i},
                         {"pos_covered", c.stats.pos_covered},
                         {"neg_covered", c.stats.neg_covered},
                         {"precision", c.stats.precision}});
    }
    return {{"target", rules.target_predicate},
            {"kb_digest", rules.kb_digest},
            {"clauses", stats}};
}

inline json metrics_json(const RuleSetMetrics& m) {
    json per_clause = json::array();
    for (std::size_t i = 0; i < m.per_clause.size(); ++i)
        per_clause.push_back({{"clause_index", i},
                              {"pos_covered", m.per_clause[i].pos_covered},
                              {"neg_covered", m.per_clause[i].neg_covered},
                              {"precision", m.per_clause[i].precision}});
    json out = {{"true_positives", m.true_positives},
                {"false_positives", m.false_positives},
                {"false_negatives", m.false_negatives},
                {"true_negatives", m.true_negatives},
                {"coverage", m.coverage},
                {"per_clause", per_clause}};
    out["precision"] = m.precision ? json(*m.precision) : json(nullptr);
    out["recall"] = m.recall ? json(*m.recall) : json(nullptr);
    return out;
}

} // namespace violog::report

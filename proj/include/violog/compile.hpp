#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "violog/analytics.hpp"
#include "violog/geo.hpp"
#include "violog/ingest.hpp"
#include "violog/kb.hpp"

namespace violog {

// ---------------------------------------------------------------------------
// City-level background facts
// ---------------------------------------------------------------------------

namespace detail {

inline Term stat_term(double v) {
    // Statistics are reported at one decimal place, trailing zeros stripped.
    return Term::number(Number::from_double(v, 1));
}

// Dominant annotation label among a city's hotspot cells (ties broken by
// label name ascending).
inline std::optional<ContextLabel> dominant_context(const std::vector<HotspotCell>& hotspots) {
    std::map<std::string, std::pair<long long, ContextLabel>> tally;
    for (const auto& cell : hotspots) {
        if (!cell.context) continue;
        auto& entry = tally[to_string(*cell.context)];
        entry.first += cell.count;
        entry.second = *cell.context;
    }
    std::optional<ContextLabel> best;
    long long best_count = 0;
    for (const auto& [name, entry] : tally) {
        if (entry.first > best_count) {
            best_count = entry.first;
            best = entry.second;
        }
    }
    return best;
}

} // namespace detail

struct CityFactWarnings {
    std::vector<std::string> missing_annotation_data; // cities without context facts
};

// Emits, per city profile: night_hours/5, location_distribution/4,
// location_context/2 and /3, population_density/2, and the banded
// demographic predicates. `city_hotspots` supplies the annotated hotspot
// cells each city contributed.
inline CityFactWarnings compile_city_facts(
    const std::vector<CityProfile>& profiles,
    const std::map<std::string, std::vector<HotspotCell>>& city_hotspots, KnowledgeBase& kb,
    const DiscretizationDefaults& specs = {}) {
    specs.validate();
    CityFactWarnings warnings;
    for (const auto& p : profiles) {
        Term city = Term::symbol(fold_symbol(p.city));
        const char* src = "compile_city_facts";

        kb.add(Fact{"night_hours",
                    {city, detail::stat_term(p.night_stats.mean),
                     detail::stat_term(p.night_stats.median),
                     detail::stat_term(p.night_stats.variance),
                     detail::stat_term(p.night_stats.std_dev)}},
               src);
        kb.add(Fact{"location_distribution",
                    {city, detail::stat_term(p.location_stats.mean),
                     detail::stat_term(p.location_stats.variance),
                     detail::stat_term(p.location_stats.std_dev)}},
               src);

        auto hotspots = city_hotspots.find(p.city);
        std::optional<ContextLabel> dominant;
        if (hotspots != city_hotspots.end()) {
            dominant = detail::dominant_context(hotspots->second);
            for (const auto& cell : hotspots->second) {
                if (!cell.context) continue;
                kb.add(Fact{"location_context",
                            {city, Term::symbol(location_symbol(cell.location)),
                             Term::symbol(to_string(*cell.context))}},
                       src);
            }
        }
        if (dominant) {
            kb.add(Fact{"location_context", {city, Term::symbol(to_string(*dominant))}}, src);
        } else {
            warnings.missing_annotation_data.push_back(p.city);
        }

        kb.add(Fact{"population_density",
                    {city, Term::number(Number::from_double(p.census.density, 1))}},
               src);
        kb.add(Fact{"median_income",
                    {city, Term::symbol(discretize(p.census.median_income, specs.income))}},
               src);
        kb.add(Fact{"education",
                    {city, Term::symbol(discretize(p.census.education_pct, specs.education))}},
               src);
        kb.add(Fact{"poverty",
                    {city, Term::symbol(discretize(p.census.poverty_pct, specs.poverty))}},
               src);
        kb.add(Fact{"density", {city, Term::symbol(discretize(p.census.density, specs.density))}},
               src);
        if (!p.census.main_road.empty())
            kb.add(Fact{"main_road", {city, Term::symbol(fold_symbol(p.census.main_road))}}, src);
    }
    return warnings;
}

// ---------------------------------------------------------------------------
// Event-level facts and labeled examples
// ---------------------------------------------------------------------------

struct EventFactOptions {
    int coordinate_precision = 4;
    DiscretizationDefaults specs;
};

// Per record: event_type, event_time (clock-hour constant), month constant,
// belt attribute, banded vehicle year, context/road facts when the rounded
// location is annotated, banded prior-occurrence count, and the city label
// fact is_event_in<city> used as the training example predicate.
//
// Event constants are e1, e2, ... in record order. Prior occurrences count
// events at the same rounded location with strictly earlier timestamps
// (ties broken by record order).
inline void compile_event_facts(const std::vector<ViolationRecord>& records,
                                const std::map<LocationKey, ContextAnnotation>& annotations,
                                const std::map<std::string, CityCensus>& census,
                                KnowledgeBase& kb, const EventFactOptions& options = {}) {
    options.specs.validate();
    const char* src = "compile_event_facts";

    // Prior-occurrence ranks: per rounded location, order events by
    // timestamp (record order on ties) and count the strictly earlier ones.
    std::map<LocationKey, std::vector<std::size_t>> by_location;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.has_location())
            by_location[make_location_key(*r.latitude, *r.longitude,
                                          options.coordinate_precision)]
                .push_back(i);
    }
    std::vector<long long> prior_count(records.size(), 0);
    for (auto& [key, indices] : by_location) {
        std::stable_sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
            return records[a].timestamp < records[b].timestamp;
        });
        for (std::size_t rank = 0; rank < indices.size(); ++rank)
            prior_count[indices[rank]] = static_cast<long long>(rank);
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        Term ev = Term::symbol("e" + std::to_string(i + 1));

        if (!r.description.empty())
            kb.add(Fact{"event_type", {ev, Term::string(normalize_text(r.description))}}, src);
        kb.add(Fact{"event_time",
                    {ev, Term::symbol("h" + std::to_string(r.timestamp.time.hour()))}},
               src);
        kb.add(Fact{"event_period_of_year",
                    {ev, Term::symbol(month_name(r.timestamp.date.month))}},
               src);
        kb.add(Fact{"driver_characteristics",
                    {ev, Term::symbol(r.belts ? "belt_no" : "belt_yes")}},
               src);
        if (r.vehicle_year)
            kb.add(Fact{"vehicle_year",
                        {ev, Term::symbol(discretize(static_cast<double>(*r.vehicle_year),
                                                     options.specs.vehicle_year))}},
                   src);

        if (r.has_location()) {
            LocationKey key =
                make_location_key(*r.latitude, *r.longitude, options.coordinate_precision);
            auto ann = annotations.find(key);
            if (ann != annotations.end()) {
                kb.add(Fact{"location_context",
                            {ev, Term::symbol(to_string(ann->second.label))}},
                       src);
                if (ann->second.label == ContextLabel::MainRoad) {
                    // Road identity: annotation detail when given, else the
                    // record city's census main road.
                    std::string road = ann->second.detail;
                    if (road.empty()) {
                        auto c = census.find(r.city);
                        if (c != census.end()) road = c->second.main_road;
                    }
                    if (!road.empty())
                        kb.add(Fact{"main_road", {ev, Term::symbol(fold_symbol(road))}}, src);
                }
            }
            kb.add(Fact{"event_previous_occurrence",
                        {ev, Term::symbol(discretize(static_cast<double>(prior_count[i]),
                                                     options.specs.occurrence))}},
                   src);
        }

        if (!r.city.empty())
            kb.add_auto(Fact{city_label_predicate(r.city), {ev}}, src);
    }
}

} // namespace violog

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "violog/common.hpp"
#include "violog/geo.hpp"
#include "violog/ingest.hpp"
#include "violog/time.hpp"

namespace violog {

class UnknownFlag : public Error { public: using Error::Error; };
class UnknownDimension : public Error { public: using Error::Error; };
class UnknownCity : public Error { public: using Error::Error; };
class MissingCensus : public Error { public: using Error::Error; };
class DegenerateInput : public Error { public: using Error::Error; };
class ZeroPopulation : public Error { public: using Error::Error; };
class IncompleteMonth : public Error { public: using Error::Error; };

// ---------------------------------------------------------------------------
// Summary statistics
// ---------------------------------------------------------------------------

struct SummaryStats {
    double mean = 0;
    double median = 0;
    double variance = 0; // population (divide by n)
    double std_dev = 0;
    std::string quantity;
};

inline SummaryStats summary_stats(std::vector<double> values, std::string quantity = "") {
    if (values.empty()) throw EmptyInput("summary_stats: empty input");
    SummaryStats s;
    s.quantity = std::move(quantity);
    const double n = static_cast<double>(values.size());
    double sum = 0;
    for (double v : values) sum += v;
    s.mean = sum / n;
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / n;
    s.std_dev = std::sqrt(s.variance);
    std::sort(values.begin(), values.end());
    std::size_t m = values.size() / 2;
    s.median = values.size() % 2 ? values[m] : (values[m - 1] + values[m]) / 2.0;
    return s;
}

// ---------------------------------------------------------------------------
// Frequency tables
// ---------------------------------------------------------------------------

struct FrequencyRow {
    std::string key;
    long long count = 0;
    double percent = 0; // of the in-scope record count, exact
};

// Rows ordered by count non-increasing, ties by key ascending.
struct FrequencyTable {
    std::vector<FrequencyRow> rows;
    long long total = 0;
};

namespace detail {

inline FrequencyTable count_keys(const std::map<std::string, long long>& counts, long long total,
                                 std::size_t top_k) {
    FrequencyTable table;
    table.total = total;
    for (const auto& [key, count] : counts) table.rows.push_back({key, count, 0});
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const FrequencyRow& a, const FrequencyRow& b) {
                         if (a.count != b.count) return a.count > b.count;
                         return a.key < b.key;
                     });
    if (table.rows.size() > top_k) table.rows.resize(top_k);
    for (auto& r : table.rows)
        r.percent = total > 0 ? 100.0 * static_cast<double>(r.count) / static_cast<double>(total) : 0;
    return table;
}

} // namespace detail

inline FrequencyTable rank_violations(const std::vector<ViolationRecord>& records,
                                      std::size_t top_k) {
    if (top_k < 1) throw Error("rank_violations: top_k must be >= 1");
    std::map<std::string, long long> counts;
    for (const auto& r : records) ++counts[normalize_text(r.description)];
    return detail::count_keys(counts, static_cast<long long>(records.size()), top_k);
}

// ---------------------------------------------------------------------------
// Category partition of the top violation descriptions
// ---------------------------------------------------------------------------

enum class ViolationCategory { Category1, Category2, Uncategorized };

// Category 1 = road-rule disrespect; category 2 = missing equipment or
// documents. Defaults cover the county's ten most frequent events.
struct CategoryMap {
    std::set<std::string> category1;
    std::set<std::string> category2;

    static const CategoryMap& defaults() {
        static const CategoryMap map = [] {
            CategoryMap m;
            m.category1 = {
                "driver failure to obey properly placed traffic control device instructions",
                "driver using hands to use handheld telephone while motor vehicle is in motion",
                "driver failure to stop at stop sign line",
                "failure to obey stop light signal",
                "exceeding the posted speed limit of 40 mph",
            };
            m.category2 = {
                "failure to display registration card upon demand by police officer",
                "displaying expired registration plate issued by any state",
                "failure of individual driving on highway to display license to uniformed police "
                "on demand",
                "driving vehicle on highway with suspended registration",
                "driving vehicle on highway without current registration plates and validation "
                "tabs",
            };
            return m;
        }();
        return map;
    }
};

inline ViolationCategory categorize_violation(std::string_view description,
                                              const CategoryMap& map = CategoryMap::defaults()) {
    std::string key = normalize_text(description);
    if (map.category1.count(key)) return ViolationCategory::Category1;
    if (map.category2.count(key)) return ViolationCategory::Category2;
    return ViolationCategory::Uncategorized;
}

// ---------------------------------------------------------------------------
// Boolean cross-tabulation
// ---------------------------------------------------------------------------

inline bool violation_flag(const ViolationRecord& r, std::string_view flag) {
    std::string f = fold_key(flag);
    if (f == "belts") return r.belts;
    if (f == "personal_injury") return r.personal_injury;
    if (f == "property_damage") return r.property_damage;
    if (f == "contributed_to_accident" || f == "accident") return r.contributed_to_accident;
    if (f == "alcohol") return r.alcohol;
    if (f == "commercial_vehicle") return r.commercial_vehicle;
    if (f == "work_zone") return r.work_zone;
    throw UnknownFlag("unknown boolean flag '" + std::string(flag) + "'");
}

struct CrossTab {
    std::vector<std::string> dimensions;
    std::map<std::vector<bool>, long long> cells; // observed combinations only
    long long total = 0;
};

inline CrossTab crosstab(const std::vector<ViolationRecord>& records,
                         const std::vector<std::string>& flags) {
    CrossTab t;
    t.dimensions = flags;
    for (const auto& f : flags) violation_flag(ViolationRecord{}, f); // validate names up front
    for (const auto& r : records) {
        std::vector<bool> key;
        key.reserve(flags.size());
        for (const auto& f : flags) key.push_back(violation_flag(r, f));
        ++t.cells[key];
        ++t.total;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Dimension breakdowns
// ---------------------------------------------------------------------------

inline std::string dimension_value(const ViolationRecord& r, std::string_view dimension) {
    std::string d = fold_key(dimension);
    if (d == "gender") return to_string(r.gender);
    if (d == "race") return to_string(r.race);
    if (d == "vehicle_type") return r.vehicle_type;
    if (d == "make") return r.make;
    if (d == "color") return r.color;
    if (d == "violation_type") return to_string(r.violation_type);
    throw UnknownDimension("unknown dimension '" + std::string(dimension) + "'");
}

inline FrequencyTable dimension_breakdown(const std::vector<ViolationRecord>& records,
                                          std::string_view dimension) {
    dimension_value(ViolationRecord{}, dimension);
    std::map<std::string, long long> counts;
    for (const auto& r : records) ++counts[dimension_value(r, dimension)];
    return detail::count_keys(counts, static_cast<long long>(records.size()),
                              counts.size() ? counts.size() : 1);
}

// ---------------------------------------------------------------------------
// Temporal histograms and peaks
// ---------------------------------------------------------------------------

enum class HistogramAxis { Hour, Weekday, Month };

inline std::size_t axis_bins(HistogramAxis axis) {
    switch (axis) {
        case HistogramAxis::Hour: return 24;
        case HistogramAxis::Weekday: return 7;
        case HistogramAxis::Month: return 12;
    }
    return 0;
}

inline std::string axis_bin_label(HistogramAxis axis, std::size_t bin) {
    switch (axis) {
        case HistogramAxis::Hour: return std::to_string(bin);
        case HistogramAxis::Weekday: return weekday_name(static_cast<int>(bin));
        case HistogramAxis::Month: return month_name(static_cast<int>(bin) + 1);
    }
    return "";
}

struct Histogram {
    HistogramAxis axis = HistogramAxis::Hour;
    std::vector<long long> bins;
};

inline Histogram temporal_histogram(const std::vector<ViolationRecord>& records,
                                    HistogramAxis axis) {
    Histogram h;
    h.axis = axis;
    h.bins.assign(axis_bins(axis), 0);
    for (const auto& r : records) {
        std::size_t bin = 0;
        switch (axis) {
            case HistogramAxis::Hour: bin = static_cast<std::size_t>(r.timestamp.time.hour()); break;
            case HistogramAxis::Weekday:
                bin = static_cast<std::size_t>(weekday_mon0(r.timestamp.date));
                break;
            case HistogramAxis::Month:
                bin = static_cast<std::size_t>(r.timestamp.date.month - 1);
                break;
        }
        ++h.bins[bin];
    }
    return h;
}

// A bin is a peak when strictly greater than both neighbours (cyclic when
// `cyclic`) and at least min_prominence of the tallest bin. Linear-axis
// endpoints only compete with their single neighbour.
inline std::vector<std::size_t> detect_peaks(const std::vector<long long>& bins, bool cyclic,
                                             double min_prominence) {
    std::vector<std::size_t> peaks;
    if (bins.empty()) return peaks;
    long long max_bin = *std::max_element(bins.begin(), bins.end());
    double floor = min_prominence * static_cast<double>(max_bin);
    const std::size_t n = bins.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<double>(bins[i]) <= floor) continue;
        bool left_ok, right_ok;
        if (cyclic) {
            left_ok = bins[i] > bins[(i + n - 1) % n];
            right_ok = bins[i] > bins[(i + 1) % n];
        } else {
            left_ok = i == 0 || bins[i] > bins[i - 1];
            right_ok = i + 1 == n || bins[i] > bins[i + 1];
        }
        if (left_ok && right_ok) peaks.push_back(i);
    }
    return peaks;
}

inline std::vector<std::size_t> detect_peaks(const Histogram& h, double min_prominence) {
    return detect_peaks(h.bins, h.axis == HistogramAxis::Hour, min_prominence);
}

// ---------------------------------------------------------------------------
// Spatial hotspots
// ---------------------------------------------------------------------------

struct HotspotCell {
    LocationKey location;
    long long count = 0;
    std::optional<ContextLabel> context;
};

struct HotspotResult {
    std::vector<HotspotCell> cells; // count descending, then key ascending
    std::size_t skipped_no_location = 0;
};

inline HotspotResult hotspot_detect(const std::vector<ViolationRecord>& records,
                                    long long threshold, int precision,
                                    const std::map<LocationKey, ContextAnnotation>& annotations) {
    HotspotResult result;
    std::map<LocationKey, long long> counts;
    for (const auto& r : records) {
        if (!r.has_location()) {
            ++result.skipped_no_location;
            continue;
        }
        ++counts[make_location_key(*r.latitude, *r.longitude, precision)];
    }
    for (const auto& [key, count] : counts) {
        if (count <= threshold) continue; // strictly greater than threshold
        HotspotCell cell{key, count, std::nullopt};
        auto ann = annotations.find(key);
        if (ann != annotations.end()) cell.context = ann->second.label;
        result.cells.push_back(cell);
    }
    std::stable_sort(result.cells.begin(), result.cells.end(),
                     [](const HotspotCell& a, const HotspotCell& b) {
                         if (a.count != b.count) return a.count > b.count;
                         return a.location < b.location;
                     });
    return result;
}

// Per-location event counts inside one city, count descending then key
// ascending; the per-city events-per-location distribution.
inline std::vector<std::pair<LocationKey, long long>> location_counts(
    const std::vector<ViolationRecord>& records, std::string_view city, int precision) {
    std::string key = fold_key(city);
    std::map<LocationKey, long long> counts;
    bool seen = false;
    for (const auto& r : records) {
        if (r.city != key) continue;
        seen = true;
        if (!r.has_location()) continue;
        ++counts[make_location_key(*r.latitude, *r.longitude, precision)];
    }
    if (!seen) throw UnknownCity("no records for city '" + key + "'");
    std::vector<std::pair<LocationKey, long long>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

// Summary statistics over the multiset of per-location event counts inside
// one city.
inline SummaryStats location_distribution_stats(const std::vector<ViolationRecord>& records,
                                                std::string_view city, int precision) {
    std::string key = fold_key(city);
    std::vector<double> values;
    for (const auto& [loc, c] : location_counts(records, key, precision))
        values.push_back(static_cast<double>(c));
    return summary_stats(std::move(values), "events per location in " + key);
}

// ---------------------------------------------------------------------------
// Night classification
// ---------------------------------------------------------------------------

struct NightWindow {
    MinuteOfDay fallback_start{20 * 60};
    MinuteOfDay fallback_end{6 * 60};
};

// Night = strictly after that date's sunset or strictly before its sunrise.
// Dates missing from the weather table use the fallback window and are
// tallied separately.
inline bool is_night(const DateTime& ts, const std::map<Date, WeatherDay>& weather,
                     const NightWindow& window, bool* covered = nullptr) {
    auto it = weather.find(ts.date);
    if (it != weather.end()) {
        if (covered) *covered = true;
        return ts.time > it->second.sunset || ts.time < it->second.sunrise;
    }
    if (covered) *covered = false;
    return ts.time > window.fallback_start || ts.time < window.fallback_end;
}

struct NightSeries {
    std::array<long long, 12> counts{};
    std::size_t uncovered_dates = 0;
};

inline NightSeries night_series(const std::vector<ViolationRecord>& records,
                                const std::map<Date, WeatherDay>& weather,
                                std::optional<std::string> city = std::nullopt,
                                NightWindow window = {}) {
    NightSeries series;
    std::string key = city ? fold_key(*city) : std::string();
    for (const auto& r : records) {
        if (city && r.city != key) continue;
        bool covered = true;
        bool night = is_night(r.timestamp, weather, window, &covered);
        if (!covered) ++series.uncovered_dates;
        if (night) ++series.counts[static_cast<std::size_t>(r.timestamp.date.month - 1)];
    }
    return series;
}

// Mean night length (hours) per month: 24h minus daylight per day, averaged.
// With require_complete (the default), any month of `year` not fully covered
// by the weather table raises IncompleteMonth; otherwise months average over
// the days present (months with no data yield 0 counts of days -> excluded
// as NaN-free zero via guard below).
inline std::array<double, 12> night_duration_series(const std::map<Date, WeatherDay>& weather,
                                                    int year, bool require_complete = true) {
    std::array<double, 12> hours{};
    std::array<int, 12> days{};
    for (const auto& [date, day] : weather) {
        if (date.year != year) continue;
        std::size_t m = static_cast<std::size_t>(date.month - 1);
        hours[m] += 24.0 - static_cast<double>(day.daylight_minutes()) / 60.0;
        ++days[m];
    }
    for (int m = 0; m < 12; ++m) {
        if (require_complete && days[static_cast<std::size_t>(m)] != days_in_month(year, m + 1))
            throw IncompleteMonth("weather table does not cover every day of " +
                                  std::string(month_name(m + 1)) + " " + std::to_string(year));
        auto idx = static_cast<std::size_t>(m);
        hours[idx] = days[idx] ? hours[idx] / days[idx] : 0.0;
    }
    return hours;
}

// ---------------------------------------------------------------------------
// Correlation and ratios
// ---------------------------------------------------------------------------

inline double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys,
                                  const std::set<std::size_t>& exclude = {}) {
    if (xs.size() != ys.size()) throw DegenerateInput("pearson: series lengths differ");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (exclude.count(i)) continue;
        x.push_back(xs[i]);
        y.push_back(ys[i]);
    }
    if (x.size() < 3) throw DegenerateInput("pearson: fewer than 3 points after exclusion");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) throw DegenerateInput("pearson: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

inline double per_capita_ratio(long long event_count, long long population) {
    if (population <= 0) throw ZeroPopulation("per_capita_ratio: population must be positive");
    return 100.0 * static_cast<double>(event_count) / static_cast<double>(population);
}

// ---------------------------------------------------------------------------
// City profiles
// ---------------------------------------------------------------------------

struct CityProfile {
    std::string city;
    long long violation_count = 0;
    double violation_share = 0; // percent of all in-scope records
    std::string top_event;
    std::string second_event;
    SummaryStats night_stats;    // over the 12 monthly night counts
    SummaryStats location_stats; // over per-location counts
    double light_truck_pct = 0;
    double cars_under_10y_pct = 0;
    long long injury_count = 0;
    long long accident_count = 0;
    long long belt_count = 0;
    CityCensus census;
};

struct CityProfileConfig {
    int analysis_year = 2017;
    int coordinate_precision = 4;
    NightWindow night;
};

inline bool is_light_truck(std::string_view vehicle_type) {
    return icontains(vehicle_type, "light") && icontains(vehicle_type, "truck");
}

inline CityProfile city_profile(const Dataset& data, std::string_view city,
                                const CityProfileConfig& config = {}) {
    CityProfile p;
    p.city = fold_key(city);
    auto census_it = data.census.find(p.city);
    if (census_it == data.census.end())
        throw MissingCensus("no census entry for city '" + p.city + "'");
    p.census = census_it->second;

    std::vector<ViolationRecord> in_city;
    for (const auto& r : data.violations)
        if (r.city == p.city) in_city.push_back(r);
    if (in_city.empty()) throw UnknownCity("no violation records for city '" + p.city + "'");

    p.violation_count = static_cast<long long>(in_city.size());
    p.violation_share = data.violations.empty()
                            ? 0
                            : 100.0 * static_cast<double>(in_city.size()) /
                                  static_cast<double>(data.violations.size());

    FrequencyTable top = rank_violations(in_city, 2);
    p.top_event = top.rows.empty() ? "" : top.rows[0].key;
    p.second_event = top.rows.size() > 1 ? top.rows[1].key : "";

    NightSeries nights = night_series(data.violations, data.weather, p.city, config.night);
    std::vector<double> monthly(nights.counts.begin(), nights.counts.end());
    p.night_stats = summary_stats(std::move(monthly), "monthly night events in " + p.city);
    p.location_stats =
        location_distribution_stats(data.violations, p.city, config.coordinate_precision);

    long long light_trucks = 0, with_year = 0, young_cars = 0;
    for (const auto& r : in_city) {
        if (is_light_truck(r.vehicle_type)) ++light_trucks;
        if (r.vehicle_year) {
            ++with_year;
            if (*r.vehicle_year > config.analysis_year - 10) ++young_cars;
        }
        if (r.personal_injury) ++p.injury_count;
        if (r.contributed_to_accident) ++p.accident_count;
        if (r.belts) ++p.belt_count;
    }
    p.light_truck_pct = 100.0 * static_cast<double>(light_trucks) / static_cast<double>(in_city.size());
    p.cars_under_10y_pct =
        with_year ? 100.0 * static_cast<double>(young_cars) / static_cast<double>(with_year) : 0;
    return p;
}

// Scope filters shared by the analytics pipeline: everything, one of the
// two violation categories, or a single normalized event description.
struct Scope {
    enum class Kind { All, Category1, Category2, SingleEvent } kind = Kind::All;
    std::string event; // normalized description when kind == SingleEvent

    bool matches(const ViolationRecord& r, const CategoryMap& map = CategoryMap::defaults()) const {
        switch (kind) {
            case Kind::All: return true;
            case Kind::Category1:
                return categorize_violation(r.description, map) == ViolationCategory::Category1;
            case Kind::Category2:
                return categorize_violation(r.description, map) == ViolationCategory::Category2;
            case Kind::SingleEvent: return normalize_text(r.description) == event;
        }
        return false;
    }
};

inline std::vector<ViolationRecord> apply_scope(const std::vector<ViolationRecord>& records,
                                                const Scope& scope,
                                                const CategoryMap& map = CategoryMap::defaults()) {
    std::vector<ViolationRecord> out;
    for (const auto& r : records)
        if (scope.matches(r, map)) out.push_back(r);
    return out;
}

} // namespace violog

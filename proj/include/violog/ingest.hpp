#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "violog/common.hpp"
#include "violog/csv.hpp"
#include "violog/geo.hpp"
#include "violog/time.hpp"

namespace violog {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class EmptyInput : public Error { public: using Error::Error; };
class MissingColumn : public Error { public: using Error::Error; };
class ParseAbort : public Error { public: using Error::Error; };
class DuplicateDate : public Error { public: using Error::Error; };
class MalformedTime : public Error { public: using Error::Error; };
class DuplicateCity : public Error { public: using Error::Error; };
class NegativePopulation : public Error { public: using Error::Error; };
class PercentOutOfRange : public Error { public: using Error::Error; };
class UnknownLabel : public Error { public: using Error::Error; };
class MalformedCoordinate : public Error { public: using Error::Error; };

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class ViolationType { Citation, Warning, Esero };
enum class Gender { F, M, U };
enum class Race { White, Black, Hispanic, Asian, NativeAmerican, Other };

inline const char* to_string(ViolationType t) {
    switch (t) {
        case ViolationType::Citation: return "Citation";
        case ViolationType::Warning: return "Warning";
        case ViolationType::Esero: return "ESERO";
    }
    return "";
}

inline const char* to_string(Gender g) {
    switch (g) {
        case Gender::F: return "F";
        case Gender::M: return "M";
        case Gender::U: return "U";
    }
    return "";
}

inline const char* to_string(Race r) {
    switch (r) {
        case Race::White: return "White";
        case Race::Black: return "Black";
        case Race::Hispanic: return "Hispanic";
        case Race::Asian: return "Asian";
        case Race::NativeAmerican: return "Native American";
        case Race::Other: return "Other";
    }
    return "";
}

// One parsed traffic-violation event. `belts == true` means the driver was
// NOT wearing a belt (the source column flags the violation, see the
// ingest design notes in the README).
struct ViolationRecord {
    std::string record_id;
    DateTime timestamp;
    std::string city;
    std::optional<double> latitude;
    std::optional<double> longitude;
    std::string description; // normalized (lowercase, single-spaced)
    ViolationType violation_type = ViolationType::Citation;
    std::string charge;
    bool belts = false;
    bool personal_injury = false;
    bool property_damage = false;
    bool contributed_to_accident = false;
    bool alcohol = false;
    bool commercial_vehicle = false;
    bool work_zone = false;
    Gender gender = Gender::U;
    Race race = Race::Other;
    std::string vehicle_type;
    std::optional<int> vehicle_year;
    std::string make;
    std::string color;

    bool has_location() const { return latitude.has_value(); }

    bool operator==(const ViolationRecord&) const = default;
};

struct WeatherDay {
    Date date;
    MinuteOfDay sunrise;
    MinuteOfDay sunset;
    std::optional<double> mean_temp;
    std::optional<double> precipitation;

    int daylight_minutes() const { return sunset.minutes - sunrise.minutes; }
};

struct CityCensus {
    std::string city; // case-folded key
    long long population = 0;
    double density = 0;
    double education_pct = 0;
    double median_income = 0;
    double poverty_pct = 0;
    double age_band_pct = 0;
    double land_area = 0;
    double water_area = 0;
    long long schools = 0;
    long long hospitals = 0;
    std::string main_road;
};

enum class ContextLabel {
    Intersection,
    CommunityArea,
    GreenArea,
    MainRoad,
    AthleticCenter,
    ShoppingArea,
    OtherContext
};

inline const char* to_string(ContextLabel l) {
    switch (l) {
        case ContextLabel::Intersection: return "intersection";
        case ContextLabel::CommunityArea: return "community_area";
        case ContextLabel::GreenArea: return "green_area";
        case ContextLabel::MainRoad: return "main_road";
        case ContextLabel::AthleticCenter: return "athletic_center";
        case ContextLabel::ShoppingArea: return "shopping_area";
        case ContextLabel::OtherContext: return "other";
    }
    return "";
}

inline std::optional<ContextLabel> context_label_from_string(std::string_view s) {
    std::string k = fold_key(s);
    if (k == "intersection") return ContextLabel::Intersection;
    if (k == "community_area") return ContextLabel::CommunityArea;
    if (k == "green_area") return ContextLabel::GreenArea;
    if (k == "main_road") return ContextLabel::MainRoad;
    if (k == "athletic_center") return ContextLabel::AthleticCenter;
    if (k == "shopping_area") return ContextLabel::ShoppingArea;
    if (k == "other") return ContextLabel::OtherContext;
    return std::nullopt;
}

struct ContextAnnotation {
    LocationKey location;
    ContextLabel label = ContextLabel::OtherContext;
    // Optional free-form detail from the annotations file; for main_road
    // labels this is the road identifier (e.g. "I-270").
    std::string detail;
};

struct RowRejection {
    std::size_t line = 0;
    std::string reason;
};

struct ParseReport {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t warnings = 0;
    std::vector<RowRejection> rejections;

    void reject(std::size_t line, std::string reason) {
        ++rejected;
        rejections.push_back({line, std::move(reason)});
    }
};

struct Dataset {
    std::vector<ViolationRecord> violations;
    std::map<Date, WeatherDay> weather;
    std::map<std::string, CityCensus> census;
    std::map<LocationKey, ContextAnnotation> annotations;
    std::map<std::string, ParseReport> parse_report; // keyed by input family
};

// ---------------------------------------------------------------------------
// Column mapping
// ---------------------------------------------------------------------------

// Logical field -> CSV header name for the violations file. Defaults follow
// the Montgomery County open-data schema.
struct ColumnMapping {
    std::map<std::string, std::string> columns;

    static ColumnMapping defaults() {
        ColumnMapping m;
        m.columns = {
            {"date", "Date Of Stop"},
            {"time", "Time Of Stop"},
            {"description", "Description"},
            {"type", "Violation Type"},
            {"charge", "Charge"},
            {"latitude", "Latitude"},
            {"longitude", "Longitude"},
            {"belts", "Belts"},
            {"personal_injury", "Personal Injury"},
            {"property_damage", "Property Damage"},
            {"accident", "Contributed To Accident"},
            {"alcohol", "Alcohol"},
            {"commercial_vehicle", "Commercial Vehicle"},
            {"work_zone", "Work Zone"},
            {"gender", "Gender"},
            {"race", "Race"},
            {"vehicle_type", "VehicleType"},
            {"year", "Year"},
            {"make", "Make"},
            {"color", "Color"},
            {"city", "Driver City"},
        };
        return m;
    }

    const std::string& header_for(const std::string& logical) const {
        auto it = columns.find(logical);
        if (it == columns.end())
            throw MissingColumn("no mapping for logical field '" + logical + "'");
        return it->second;
    }
};

// Fields that must be resolvable in the header for parsing to proceed.
inline const std::vector<std::string>& required_violation_fields() {
    static const std::vector<std::string> fields = {
        "date", "time", "description", "type", "latitude", "longitude", "belts", "city"};
    return fields;
}

// ---------------------------------------------------------------------------
// Parsers
// ---------------------------------------------------------------------------

namespace detail {

inline bool parse_yes_no(std::string_view s, bool& out) {
    std::string k = fold_key(s);
    if (k == "yes" || k == "y" || k == "true") { out = true; return true; }
    if (k == "no" || k == "n" || k == "false" || k.empty()) { out = false; return true; }
    return false;
}

inline std::optional<ViolationType> violation_type_from(std::string_view s) {
    std::string k = fold_key(s);
    if (k == "citation") return ViolationType::Citation;
    if (k == "warning") return ViolationType::Warning;
    if (k == "esero") return ViolationType::Esero;
    return std::nullopt;
}

inline Gender gender_from(std::string_view s) {
    std::string k = fold_key(s);
    if (k == "f" || k == "female") return Gender::F;
    if (k == "m" || k == "male") return Gender::M;
    return Gender::U;
}

inline Race race_from(std::string_view s) {
    std::string k = fold_key(s);
    if (k == "white") return Race::White;
    if (k == "black") return Race::Black;
    if (k == "hispanic") return Race::Hispanic;
    if (k == "asian") return Race::Asian;
    if (k == "native american" || k == "nativeamerican") return Race::NativeAmerican;
    return Race::Other;
}

} // namespace detail

struct ViolationParseResult {
    std::vector<ViolationRecord> records;
    ParseReport report;
};

struct AnalysisWindow {
    int year = 2017;

    bool contains(const Date& d) const { return d.year == year; }
};

inline ViolationParseResult parse_violations_csv(std::istream& in,
                                                 const ColumnMapping& mapping,
                                                 bool strict = false,
                                                 AnalysisWindow window = {}) {
    CsvReader reader(in);
    std::vector<std::string> row;
    std::size_t line = 0;
    if (!reader.next(row, line)) throw EmptyInput("violations CSV has no header row");
    CsvHeader header(row);

    std::map<std::string, std::size_t> col;
    for (const auto& [logical, name] : mapping.columns) {
        auto idx = header.find(name);
        if (idx) col[logical] = *idx;
    }
    for (const auto& logical : required_violation_fields()) {
        if (!col.count(logical))
            throw MissingColumn("violations CSV header lacks required column '" +
                                mapping.header_for(logical) + "' (" + logical + ")");
    }

    ViolationParseResult result;
    std::size_t row_index = 0;

    auto cell = [&](const std::string& logical) -> std::string_view {
        auto it = col.find(logical);
        if (it == col.end() || it->second >= row.size()) return {};
        return row[it->second];
    };

    while (reader.next(row, line)) {
        ++row_index;
        std::string reason;
        ViolationRecord rec;
        rec.record_id = "r" + std::to_string(row_index);

        auto fail = [&](std::string why) { reason = std::move(why); };

        Date d;
        MinuteOfDay t;
        if (!parse_date(cell("date"), d)) fail("malformed date");
        else if (!parse_time(cell("time"), t)) fail("malformed time");
        else if (!window.contains(d)) fail("timestamp outside analysis window");
        else rec.timestamp = DateTime{d, t};

        if (reason.empty()) {
            std::string_view lat_s = trim(cell("latitude"));
            std::string_view lon_s = trim(cell("longitude"));
            if (lat_s.empty() != lon_s.empty()) {
                fail("latitude and longitude must both be present or both absent");
            } else if (!lat_s.empty()) {
                double lat, lon;
                if (!parse_double(lat_s, lat) || !parse_double(lon_s, lon))
                    fail("malformed coordinate");
                else if (lat < -90.0 || lat > 90.0) fail("latitude out of range");
                else if (lon < -180.0 || lon > 180.0) fail("longitude out of range");
                else { rec.latitude = lat; rec.longitude = lon; }
            }
        }

        if (reason.empty()) {
            auto vt = detail::violation_type_from(cell("type"));
            if (!vt) fail("unknown violation type");
            else rec.violation_type = *vt;
        }

        if (reason.empty()) {
            struct BoolField { const char* logical; bool ViolationRecord::* member; };
            static const BoolField bool_fields[] = {
                {"belts", &ViolationRecord::belts},
                {"personal_injury", &ViolationRecord::personal_injury},
                {"property_damage", &ViolationRecord::property_damage},
                {"accident", &ViolationRecord::contributed_to_accident},
                {"alcohol", &ViolationRecord::alcohol},
                {"commercial_vehicle", &ViolationRecord::commercial_vehicle},
                {"work_zone", &ViolationRecord::work_zone},
            };
            for (const auto& f : bool_fields) {
                bool v = false;
                if (!detail::parse_yes_no(cell(f.logical), v)) {
                    fail(std::string("malformed boolean in '") + f.logical + "'");
                    break;
                }
                rec.*(f.member) = v;
            }
        }

        if (reason.empty()) {
            rec.description = normalize_text(cell("description"));
            rec.charge = std::string(trim(cell("charge")));
            rec.city = fold_key(cell("city"));
            rec.gender = detail::gender_from(cell("gender"));
            rec.race = detail::race_from(cell("race"));
            rec.vehicle_type = std::string(trim(cell("vehicle_type")));
            rec.make = std::string(trim(cell("make")));
            rec.color = std::string(trim(cell("color")));
            std::string_view year_s = trim(cell("year"));
            if (!year_s.empty()) {
                long long y;
                if (parse_long(year_s, y) && y >= 1900 && y <= 2100)
                    rec.vehicle_year = static_cast<int>(y);
                // Implausible years are treated as absent, not as row errors.
            }
        }

        if (!reason.empty()) {
            if (strict)
                throw ParseAbort("violations line " + std::to_string(line) + ": " + reason);
            result.report.reject(line, reason);
            continue;
        }
        result.records.push_back(std::move(rec));
        ++result.report.accepted;
    }
    return result;
}

// Serializes records back under the same mapping; re-parsing the output
// yields an identical record list.
inline void write_violations_csv(std::ostream& out, const std::vector<ViolationRecord>& records,
                                 const ColumnMapping& mapping = ColumnMapping::defaults()) {
    static const char* logical_order[] = {
        "date", "time", "description", "type", "charge", "latitude", "longitude",
        "belts", "personal_injury", "property_damage", "accident", "alcohol",
        "commercial_vehicle", "work_zone", "gender", "race", "vehicle_type",
        "year", "make", "color", "city"};
    std::vector<std::string> row;
    for (const char* logical : logical_order) row.push_back(mapping.header_for(logical));
    write_csv_row(out, row);
    for (const auto& r : records) {
        row.clear();
        auto yn = [](bool b) { return std::string(b ? "Yes" : "No"); };
        row.push_back(format_date(r.timestamp.date));
        row.push_back(format_time(r.timestamp.time));
        row.push_back(r.description);
        row.push_back(to_string(r.violation_type));
        row.push_back(r.charge);
        row.push_back(r.latitude ? format_double(*r.latitude) : "");
        row.push_back(r.longitude ? format_double(*r.longitude) : "");
        row.push_back(yn(r.belts));
        row.push_back(yn(r.personal_injury));
        row.push_back(yn(r.property_damage));
        row.push_back(yn(r.contributed_to_accident));
        row.push_back(yn(r.alcohol));
        row.push_back(yn(r.commercial_vehicle));
        row.push_back(yn(r.work_zone));
        row.push_back(to_string(r.gender));
        row.push_back(to_string(r.race));
        row.push_back(r.vehicle_type);
        row.push_back(r.vehicle_year ? std::to_string(*r.vehicle_year) : "");
        row.push_back(r.make);
        row.push_back(r.color);
        row.push_back(r.city);
        write_csv_row(out, row);
    }
}

struct WeatherParseResult {
    std::map<Date, WeatherDay> days;
    ParseReport report;
};

inline WeatherParseResult parse_weather_csv(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> row;
    std::size_t line = 0;
    if (!reader.next(row, line)) throw EmptyInput("weather CSV has no header row");
    CsvHeader header(row);

    auto need = [&](const char* name) {
        auto idx = header.find(name);
        if (!idx) throw MissingColumn(std::string("weather CSV lacks column '") + name + "'");
        return *idx;
    };
    std::size_t c_date = need("date"), c_rise = need("sunrise"), c_set = need("sunset");
    auto c_temp = header.find("mean_temp");
    auto c_prec = header.find("precipitation");

    WeatherParseResult result;
    while (reader.next(row, line)) {
        auto get = [&](std::size_t i) -> std::string_view {
            return i < row.size() ? std::string_view(row[i]) : std::string_view{};
        };
        WeatherDay day;
        if (!parse_date(get(c_date), day.date)) {
            result.report.reject(line, "malformed date");
            continue;
        }
        if (!parse_time(get(c_rise), day.sunrise) || !parse_time(get(c_set), day.sunset))
            throw MalformedTime("weather line " + std::to_string(line) + ": malformed time");
        if (!(day.sunrise < day.sunset)) {
            result.report.reject(line, "sunrise must precede sunset");
            continue;
        }
        if (c_temp) {
            double v;
            if (parse_double(get(*c_temp), v)) day.mean_temp = v;
        }
        if (c_prec) {
            double v;
            if (parse_double(get(*c_prec), v)) day.precipitation = v;
        }
        if (result.days.count(day.date))
            throw DuplicateDate("duplicate weather date " + format_date(day.date));
        result.days.emplace(day.date, day);
        ++result.report.accepted;
    }
    return result;
}

struct CensusParseResult {
    std::map<std::string, CityCensus> cities;
    ParseReport report;
};

inline CensusParseResult parse_census_csv(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> row;
    std::size_t line = 0;
    if (!reader.next(row, line)) throw EmptyInput("census CSV has no header row");
    CsvHeader header(row);

    auto need = [&](const char* name) {
        auto idx = header.find(name);
        if (!idx) throw MissingColumn(std::string("census CSV lacks column '") + name + "'");
        return *idx;
    };
    std::size_t c_city = need("city"), c_pop = need("population"), c_den = need("density"),
                c_edu = need("education_pct"), c_inc = need("median_income"),
                c_pov = need("poverty_pct"), c_age = need("age_band_pct"),
                c_land = need("land_area"), c_water = need("water_area"),
                c_sch = need("schools"), c_hosp = need("hospitals"), c_road = need("main_road");

    CensusParseResult result;
    while (reader.next(row, line)) {
        auto get = [&](std::size_t i) -> std::string_view {
            return i < row.size() ? std::string_view(row[i]) : std::string_view{};
        };
        CityCensus c;
        c.city = fold_key(get(c_city));
        auto where = [&] { return "census line " + std::to_string(line); };
        long long ll;
        double dv;
        if (!parse_long(get(c_pop), ll) || ll <= 0)
            throw NegativePopulation(where() + ": population must be positive");
        c.population = ll;
        if (!parse_double(get(c_den), dv) || dv < 0)
            throw Error(where() + ": malformed density");
        c.density = dv;
        auto pct = [&](std::size_t i, const char* name) {
            double v;
            if (!parse_double(get(i), v) || v < 0 || v > 100)
                throw PercentOutOfRange(where() + ": " + name + " must be within [0, 100]");
            return v;
        };
        c.education_pct = pct(c_edu, "education_pct");
        c.poverty_pct = pct(c_pov, "poverty_pct");
        c.age_band_pct = pct(c_age, "age_band_pct");
        if (!parse_double(get(c_inc), dv)) throw Error(where() + ": malformed median_income");
        c.median_income = dv;
        auto area = [&](std::size_t i, const char* name) {
            double v;
            if (!parse_double(get(i), v) || v < 0)
                throw Error(where() + ": " + name + " must be nonnegative");
            return v;
        };
        c.land_area = area(c_land, "land_area");
        c.water_area = area(c_water, "water_area");
        if (!parse_long(get(c_sch), ll) || ll < 0) throw Error(where() + ": malformed schools");
        c.schools = ll;
        if (!parse_long(get(c_hosp), ll) || ll < 0) throw Error(where() + ": malformed hospitals");
        c.hospitals = ll;
        c.main_road = std::string(trim(get(c_road)));
        if (result.cities.count(c.city))
            throw DuplicateCity("duplicate census city '" + c.city + "'");
        result.cities.emplace(c.city, c);
        ++result.report.accepted;
    }
    return result;
}

struct AnnotationParseResult {
    std::map<LocationKey, ContextAnnotation> annotations;
    ParseReport report;
};

// CSV of latitude,longitude,label with an optional trailing `detail` column
// (road identifier for main_road labels). Duplicate keys keep the first.
inline AnnotationParseResult parse_context_annotations(std::istream& in, int precision) {
    CsvReader reader(in);
    std::vector<std::string> row;
    std::size_t line = 0;
    if (!reader.next(row, line)) throw EmptyInput("annotations CSV has no header row");
    CsvHeader header(row);
    auto need = [&](const char* name) {
        auto idx = header.find(name);
        if (!idx) throw MissingColumn(std::string("annotations CSV lacks column '") + name + "'");
        return *idx;
    };
    std::size_t c_lat = need("latitude"), c_lon = need("longitude"), c_label = need("label");
    auto c_detail = header.find("detail");

    AnnotationParseResult result;
    while (reader.next(row, line)) {
        auto get = [&](std::size_t i) -> std::string_view {
            return i < row.size() ? std::string_view(row[i]) : std::string_view{};
        };
        double lat, lon;
        if (!parse_double(get(c_lat), lat) || !parse_double(get(c_lon), lon) ||
            lat < -90 || lat > 90 || lon < -180 || lon > 180)
            throw MalformedCoordinate("annotations line " + std::to_string(line) +
                                      ": malformed coordinate");
        auto label = context_label_from_string(get(c_label));
        if (!label)
            throw UnknownLabel("annotations line " + std::to_string(line) + ": unknown label '" +
                               std::string(trim(get(c_label))) + "'");
        ContextAnnotation ann;
        ann.location = make_location_key(lat, lon, precision);
        ann.label = *label;
        if (c_detail) ann.detail = std::string(trim(get(*c_detail)));
        auto [it, inserted] = result.annotations.emplace(ann.location, ann);
        (void)it;
        if (!inserted) {
            ++result.report.warnings;
            continue;
        }
        ++result.report.accepted;
    }
    return result;
}

} // namespace violog

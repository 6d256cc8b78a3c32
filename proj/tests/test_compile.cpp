#include <catch2/catch.hpp>

#include <sstream>

#include "support/oracles.hpp"
#include "violog/compile.hpp"

using namespace violog;
using oracle::make_record;

namespace {

CityProfile reference_profile_bethesda() {
    CityProfile p;
    p.city = "bethesda";
    p.night_stats = {4.9, 5.5, 6.4, 2.5, "night"};
    p.location_stats = {2.6, 0, 25.0, 5.0, "loc"};
    p.census = CityCensus{"bethesda", 60858, 1624, 83.7, 154559, 2.8, 64.8, 13.1, 0.1, 18, 3,
                          "I-495"};
    return p;
}

CityProfile reference_profile_gaithersburg() {
    CityProfile p;
    p.city = "gaithersburg";
    p.night_stats = {6.5, 6.5, 13.0, 3.6, "night"};
    p.location_stats = {3.8, 0, 122.0, 11.045, "loc"};
    p.census = CityCensus{"gaithersburg", 59933, 2571, 53.3, 85773, 9.5, 58.3, 26.72, 0.3, 25, 0,
                          "I-270"};
    return p;
}

} // namespace

TEST_CASE("compile_city_facts reproduces the published fact lines") {
    KnowledgeBase kb;
    std::map<std::string, std::vector<HotspotCell>> hotspots;
    hotspots["bethesda"] = {
        {make_location_key(38.9845, -77.0943, 4), 14, ContextLabel::Intersection}};
    auto warnings = compile_city_facts({reference_profile_bethesda(), reference_profile_gaithersburg()},
                                       hotspots, kb);

    std::string text = emit_facts_string(kb);
    CHECK(text.find("night_hours(bethesda, 4.9, 5.5, 6.4, 2.5).") != std::string::npos);
    CHECK(text.find("night_hours(gaithersburg, 6.5, 6.5, 13, 3.6).") != std::string::npos);
    CHECK(text.find("location_distribution(bethesda, 2.6, 25, 5).") != std::string::npos);
    CHECK(text.find("location_distribution(gaithersburg, 3.8, 122, 11).") != std::string::npos);
    CHECK(text.find("education(bethesda, gt_80pct).") != std::string::npos);
    CHECK(text.find("education(gaithersburg, band_50_80pct).") != std::string::npos);
    CHECK(text.find("median_income(bethesda, gt_150000).") != std::string::npos);
    CHECK(text.find("median_income(gaithersburg, band_75000_150000).") != std::string::npos);
    CHECK(text.find("poverty(bethesda, lt_3pct).") != std::string::npos);
    CHECK(text.find("poverty(gaithersburg, gt_3pct).") != std::string::npos);
    CHECK(text.find("density(bethesda, lt_2000).") != std::string::npos);
    CHECK(text.find("density(gaithersburg, gt_2000).") != std::string::npos);
    CHECK(text.find("population_density(bethesda, 1624).") != std::string::npos);
    CHECK(text.find("population_density(gaithersburg, 2571).") != std::string::npos);
    CHECK(text.find("main_road(bethesda, i495).") != std::string::npos);
    CHECK(text.find("main_road(gaithersburg, i270).") != std::string::npos);
    CHECK(text.find("location_context(bethesda, intersection).") != std::string::npos);
    CHECK(text.find("location_context(bethesda, loc_389845_m770943, intersection).") !=
          std::string::npos);

    // Gaithersburg had no annotated hotspots -> context fact omitted, warned.
    CHECK(text.find("location_context(gaithersburg,") == std::string::npos);
    REQUIRE(warnings.missing_annotation_data.size() == 1);
    CHECK(warnings.missing_annotation_data[0] == "gaithersburg");
}

TEST_CASE("compile_city_facts matches a brute-force re-derivation") {
    auto profiles = {reference_profile_bethesda(), reference_profile_gaithersburg()};
    KnowledgeBase kb;
    compile_city_facts(profiles, {}, kb);

    // Independent re-derivation straight from the profile fields.
    std::set<std::string> expected;
    for (const auto& p : profiles) {
        auto r1 = [](double v) {
            double r = std::round(v * 10) / 10;
            std::ostringstream os;
            os << r;
            return os.str();
        };
        expected.insert("night_hours(" + p.city + ", " + r1(p.night_stats.mean) + ", " +
                        r1(p.night_stats.median) + ", " + r1(p.night_stats.variance) + ", " +
                        r1(p.night_stats.std_dev) + ").");
        expected.insert("location_distribution(" + p.city + ", " + r1(p.location_stats.mean) +
                        ", " + r1(p.location_stats.variance) + ", " +
                        r1(p.location_stats.std_dev) + ").");
        expected.insert("population_density(" + p.city + ", " + r1(p.census.density) + ").");
        std::string income = p.census.median_income >= 150000 ? "gt_150000"
                             : p.census.median_income >= 75000 ? "band_75000_150000"
                                                               : "lt_75000";
        expected.insert("median_income(" + p.city + ", " + income + ").");
        std::string edu = p.census.education_pct >= 80   ? "gt_80pct"
                          : p.census.education_pct >= 50 ? "band_50_80pct"
                                                         : "lt_50pct";
        expected.insert("education(" + p.city + ", " + edu + ").");
        expected.insert("poverty(" + p.city + ", " +
                        (p.census.poverty_pct >= 3 ? std::string("gt_3pct") : "lt_3pct") + ").");
        expected.insert("density(" + p.city + ", " +
                        (p.census.density >= 2000 ? std::string("gt_2000") : "lt_2000") + ").");
        std::string road;
        for (char c : p.census.main_road)
            if (std::isalnum(static_cast<unsigned char>(c)))
                road.push_back(static_cast<char>(std::tolower(c)));
        expected.insert("main_road(" + p.city + ", " + road + ").");
    }

    std::set<std::string> got;
    for (const auto& f : kb.facts()) got.insert(render_fact(f));
    CHECK(got == expected);
}

TEST_CASE("compile_event_facts per-event output") {
    std::vector<ViolationRecord> records;

    // e1: 20:05 in November, belts worn, 2012 vehicle, at annotated main road
    auto r1 = make_record(Date{2017, 11, 3}, 20 * 60 + 5, "bethesda", "speeding");
    r1.latitude = 39.1;
    r1.longitude = -77.2;
    r1.vehicle_year = 2012;
    records.push_back(r1);

    // e2: not wearing a belt, no coordinates
    auto r2 = make_record(Date{2017, 2, 1}, 9 * 60, "gaithersburg", "phone use");
    r2.belts = true;
    records.push_back(r2);

    std::map<LocationKey, ContextAnnotation> annotations;
    LocationKey road_key = make_location_key(39.1, -77.2, 4);
    annotations[road_key] = ContextAnnotation{road_key, ContextLabel::MainRoad, "I-270"};

    std::map<std::string, CityCensus> census;

    KnowledgeBase kb;
    compile_event_facts(records, annotations, census, kb);
    std::string text = emit_facts_string(kb);

    CHECK(text.find("event_time(e1, h20).") != std::string::npos);
    CHECK(text.find("event_period_of_year(e1, november).") != std::string::npos);
    CHECK(text.find("driver_characteristics(e1, belt_yes).") != std::string::npos);
    CHECK(text.find("vehicle_year(e1, gt_2009).") != std::string::npos);
    CHECK(text.find("location_context(e1, main_road).") != std::string::npos);
    CHECK(text.find("main_road(e1, i270).") != std::string::npos);
    CHECK(text.find("event_previous_occurrence(e1, lt_5).") != std::string::npos);
    CHECK(text.find("event_type(e1, \"speeding\").") != std::string::npos);
    CHECK(text.find("is_event_inbethesda(e1).") != std::string::npos);

    CHECK(text.find("driver_characteristics(e2, belt_no).") != std::string::npos);
    CHECK(text.find("event_time(e2, h9).") != std::string::npos);
    CHECK(text.find("is_event_ingaithersburg(e2).") != std::string::npos);
    // no coordinates -> no location facts for e2
    CHECK(text.find("event_previous_occurrence(e2") == std::string::npos);
}

TEST_CASE("compile_event_facts prior occurrence bands") {
    std::vector<ViolationRecord> records;
    for (int i = 0; i < 26; ++i) {
        auto r = make_record(Date{2017, 1, 1 + i}, 600, "bethesda", "x");
        r.latitude = 39.0;
        r.longitude = -77.0;
        records.push_back(r);
    }
    KnowledgeBase kb;
    compile_event_facts(records, {}, {}, kb);
    std::string text = emit_facts_string(kb);
    // The 26th event at the cell has 25 prior events -> gt_20.
    CHECK(text.find("event_previous_occurrence(e26, gt_20).") != std::string::npos);
    CHECK(text.find("event_previous_occurrence(e1, lt_5).") != std::string::npos);
    CHECK(text.find("event_previous_occurrence(e11, gt_10).") != std::string::npos);
    CHECK(text.find("event_previous_occurrence(e6, band_5_10).") != std::string::npos);

    // Prior counts follow timestamps, not record order.
    std::vector<ViolationRecord> reversed(records.rbegin(), records.rend());
    KnowledgeBase kb2;
    compile_event_facts(reversed, {}, {}, kb2);
    std::string text2 = emit_facts_string(kb2);
    // The first record in `reversed` is the latest timestamp -> 25 priors.
    CHECK(text2.find("event_previous_occurrence(e1, gt_20).") != std::string::npos);
    CHECK(text2.find("event_previous_occurrence(e26, lt_5).") != std::string::npos);
}

TEST_CASE("compile_event_facts road falls back to the city census") {
    auto r = make_record(Date{2017, 5, 5}, 600, "gaithersburg", "x");
    r.latitude = 39.15;
    r.longitude = -77.21;
    LocationKey key = make_location_key(39.15, -77.21, 4);
    std::map<LocationKey, ContextAnnotation> annotations{
        {key, ContextAnnotation{key, ContextLabel::MainRoad, ""}}};
    std::map<std::string, CityCensus> census;
    census["gaithersburg"] = CityCensus{"gaithersburg", 59933, 2571, 53.3, 85773, 9.5, 58.3,
                                        26.72, 0.3, 25, 0, "I-270"};
    KnowledgeBase kb;
    compile_event_facts({r}, annotations, census, kb);
    CHECK(emit_facts_string(kb).find("main_road(e1, i270).") != std::string::npos);
}

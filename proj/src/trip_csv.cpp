#include "transit_ads/trip_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <string_view>

namespace transit_ads {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

[[noreturn]] void fail(std::size_t line_no, std::string_view field, const std::string& what) {
    throw InputError("line " + std::to_string(line_no) + ": field '" + std::string(field) +
                     "': " + what);
}

std::uint32_t parse_id(std::string_view text, std::size_t line_no, std::string_view field) {
    std::uint32_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end)
        fail(line_no, field, "expected a non-negative integer, got '" + std::string(text) + "'");
    return value;
}

Timestamp parse_time(std::string_view text, std::size_t line_no, std::string_view field) {
    const auto t = parse_iso(text);
    if (!t) fail(line_no, field, "expected YYYY-MM-DDTHH:MM, got '" + std::string(text) + "'");
    return *t;
}

int parse_clock(std::string_view text, std::size_t line_no, std::string_view field) {
    int h = 0, m = 0;
    if (text.size() != 5 || text[2] != ':' ||
        std::from_chars(text.data(), text.data() + 2, h).ptr != text.data() + 2 ||
        std::from_chars(text.data() + 3, text.data() + 5, m).ptr != text.data() + 5 || h < 0 ||
        h > 23 || m < 0 || m > 59)
        fail(line_no, field, "expected HH:MM, got '" + std::string(text) + "'");
    return h * 60 + m;
}

StationId checked_station(std::string_view text, std::size_t line_no, std::string_view field,
                          const World* world) {
    const StationId id(parse_id(text, line_no, field));
    if (world && !world->index_of(id))
        fail(line_no, field, "unknown station id " + std::to_string(id.value));
    return id;
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

std::string format_clock(int minute_of_day) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%02d:%02d", minute_of_day / 60, minute_of_day % 60);
    return buf;
}

void write_trip_csv(std::ostream& out, const TripLog& log) {
    out << kTripCsvHeader << '\n';
    for (const auto& e : log.events)
        out << e.person.value << ',' << e.check_in_station.value << ','
            << format_iso(e.check_in_time) << ',' << e.check_out_station.value << ','
            << format_iso(e.check_out_time) << '\n';
}

TripLog read_trip_csv(std::istream& in, const World* world) {
    TripLog log;
    std::string line;
    std::size_t line_no = 0;
    if (!next_line(in, line)) return log;
    ++line_no;
    if (line != kTripCsvHeader)
        throw InputError("line 1: expected header '" + std::string(kTripCsvHeader) + "'");
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 5)
            throw InputError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                             std::to_string(f.size()));
        TripEvent e;
        e.person = PersonId(parse_id(f[0], line_no, "card_id"));
        e.check_in_station = checked_station(f[1], line_no, "in_station", world);
        e.check_in_time = parse_time(f[2], line_no, "in_time");
        e.check_out_station = checked_station(f[3], line_no, "out_station", world);
        e.check_out_time = parse_time(f[4], line_no, "out_time");
        if (!(e.check_out_time > e.check_in_time))
            fail(line_no, "out_time", "check-out is not after check-in");
        if (e.check_in_station == e.check_out_station)
            fail(line_no, "out_station", "same as in_station");
        log.events.push_back(e);
    }
    sort_events(log.events);
    if (!log.events.empty()) {
        const auto first = log.events.front().check_in_time.day;
        const auto last = log.events.back().check_in_time.day;
        log.first_day = first;
        log.day_count = last - first + 1;
    }
    return log;
}

void write_population_csv(std::ostream& out, const Population& population) {
    out << kPersonCsvHeader << '\n';
    for (const auto& p : population.persons)
        out << p.id.value << ',' << p.category.name << ',' << p.home_station.value << ','
            << p.work_station.value << ',' << format_clock(p.outbound_minute) << ','
            << format_clock(p.return_minute) << '\n';
}

Population read_population_csv(std::istream& in, const World* world,
                               const std::vector<AudienceCategory>& categories) {
    Population pop;
    std::string line;
    std::size_t line_no = 0;
    if (!next_line(in, line)) return pop;
    ++line_no;
    if (line != kPersonCsvHeader)
        throw InputError("line 1: expected header '" + std::string(kPersonCsvHeader) + "'");
    std::set<PersonId> seen;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 6)
            throw InputError("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                             std::to_string(f.size()));
        Person p;
        p.id = PersonId(parse_id(f[0], line_no, "person_id"));
        if (!seen.insert(p.id).second) fail(line_no, "person_id", "duplicate id");
        p.category.name = std::string(f[1]);
        if (p.category.name.empty()) fail(line_no, "category", "empty");
        if (!categories.empty() &&
            std::find(categories.begin(), categories.end(), p.category) == categories.end())
            fail(line_no, "category", "'" + p.category.name + "' is not in the category table");
        p.home_station = checked_station(f[2], line_no, "home_station", world);
        p.work_station = checked_station(f[3], line_no, "work_station", world);
        p.outbound_minute = parse_clock(f[4], line_no, "outbound");
        p.return_minute = parse_clock(f[5], line_no, "return");
        pop.persons.push_back(std::move(p));
    }
    return pop;
}

}  // namespace transit_ads

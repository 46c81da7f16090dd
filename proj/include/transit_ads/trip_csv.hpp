#pragma once

// CSV forms of trip logs and populations.
//
// trips:   card_id,in_station,in_time,out_station,out_time
//          times are "YYYY-MM-DDTHH:MM", stations are numeric ids
// persons: person_id,category,home_station,work_station,outbound,return
//          outbound/return are "HH:MM"

#include <iosfwd>
#include <string>
#include <vector>

#include "transit_ads/ridership.hpp"

namespace transit_ads {

inline constexpr const char* kTripCsvHeader = "card_id,in_station,in_time,out_station,out_time";
inline constexpr const char* kPersonCsvHeader =
    "person_id,category,home_station,work_station,outbound,return";

void write_trip_csv(std::ostream& out, const TripLog& log);

/// Parses and validates a trip CSV; the result is sorted. When `world` is
/// given, station ids are checked against it. Errors name the 1-based line and
/// the offending field. An empty stream yields an empty log.
TripLog read_trip_csv(std::istream& in, const World* world = nullptr);

void write_population_csv(std::ostream& out, const Population& population);

/// When `categories` is non-empty, every person's category must be listed in it.
Population read_population_csv(std::istream& in, const World* world = nullptr,
                               const std::vector<AudienceCategory>& categories = {});

std::string format_clock(int minute_of_day);

}  // namespace transit_ads

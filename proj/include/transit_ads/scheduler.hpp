#pragma once

// Screen-slot ad selection and time-on-screen allocation.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "transit_ads/patterns.hpp"

namespace transit_ads {

struct Ad {
    AdId id;
    BrandId brand;
    AudienceCategory category;
    double weight = 1.0;  // selection weight within a category, lowered by negative feedback

    friend bool operator==(const Ad&, const Ad&) = default;
};

/// Placeholder shown when a station has no ads at all.
inline constexpr AdId kHouseAd{0};

enum class PolicyId { MaxAudience, AudienceRatio, NearestBuildings, BuildingRatio };

std::string_view to_string(PolicyId policy);
PolicyId parse_policy(std::string_view text);

/// Which rule produced a schedule.
enum class ScheduleSource { MaxAudience, AudienceRatio, NearestBuildings, BuildingRatio, Fallback };

std::string_view to_string(ScheduleSource source);

struct ScheduleEntry {
    AdId ad;
    std::int64_t tos_seconds = 0;

    friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct AdSchedule {
    StationId station;
    TimeBand band = TimeBand::T1Peak;
    std::int64_t slot_seconds = 0;
    std::vector<ScheduleEntry> entries;
    ScheduleSource source = ScheduleSource::Fallback;

    std::int64_t allocated() const;
    /// Entry with the largest time on screen, ties to the lower AdId.
    std::optional<ScheduleEntry> top() const;

    friend bool operator==(const AdSchedule&, const AdSchedule&) = default;
};

enum class Polarity { Positive, Silent, Negative };

std::string_view to_string(Polarity polarity);
Polarity parse_polarity(std::string_view text);

struct FeedbackEvent {
    PersonId person;
    AdId ad;
    Polarity polarity = Polarity::Silent;
    Timestamp time;

    friend bool operator==(const FeedbackEvent&, const FeedbackEvent&) = default;
};

struct ScheduleParams {
    std::int64_t slot_seconds = 300;
    /// Predicted viewers at or above which a band is scheduled by audience.
    std::int64_t density_threshold = 10;
    double feedback_decay = 0.5;
    double weight_floor = 1e-6;

    friend bool operator==(const ScheduleParams&, const ScheduleParams&) = default;
};

/// Best ad of a category: highest weight, ties to the lowest AdId.
std::optional<Ad> pick_ad(const AudienceCategory& category, std::span<const Ad> ads);

/// Integer time-on-screen split of `slot_seconds` proportional to `counts`.
/// Largest-remainder rounding with ties to the lower index, then repaired so
/// that a larger count always receives strictly more seconds whenever the slot
/// is long enough to allow it (see `strict_order_feasible`). Equal counts stay
/// within one second of each other and the shares always sum to the slot.
std::vector<std::int64_t> proportional_tos(std::span<const std::int64_t> counts,
                                           std::int64_t slot_seconds);

/// True when `slot_seconds` can separate every distinct count level, i.e. it
/// is at least the sum over entries of the number of distinct smaller counts.
bool strict_order_feasible(std::span<const std::int64_t> counts, std::int64_t slot_seconds);

/// Screen goes to the best ad of the most-viewed category that has an ad.
AdSchedule policy_max_audience(const AudienceHistogram& hist, std::span<const Ad> ads,
                               std::int64_t slot_seconds);

/// Screen time shared in proportion to the counts of categories that have ads.
AdSchedule policy_audience_ratio(const AudienceHistogram& hist, std::span<const Ad> ads,
                                 std::int64_t slot_seconds);

/// Screen goes to the densest building active in `band` that has a matching ad.
AdSchedule policy_nearest_buildings(const Station& station, TimeBand band,
                                    std::span<const Ad> ads, std::int64_t slot_seconds);

/// Screen time shared in proportion to per-building visitor counts. Buildings
/// that resolve to the same ad pool their visitors.
AdSchedule policy_building_ratio(const Station& station, TimeBand band,
                                 const std::map<std::size_t, std::int64_t>& visitor_counts,
                                 std::span<const Ad> ads, std::int64_t slot_seconds);

/// Even split over all ads in AdId order; the `rotation` offset picks which
/// ads receive the leftover seconds. With no ads the house ad fills the slot.
AdSchedule fallback_schedule(StationId station, TimeBand band, std::span<const Ad> ads,
                             std::int64_t slot_seconds, std::int64_t rotation = 0);

/// Negative events multiply the ad's weight by `decay`, never going below
/// `floor`; positive and silent events leave it alone.
std::vector<Ad> apply_feedback(std::vector<Ad> ads, std::span<const FeedbackEvent> events,
                               double decay = 0.5, double floor = 1e-6);

/// One ad per brand, with AdId equal to the brand id and weight 1.
std::vector<Ad> ads_from_brands(const World& world);

std::vector<Ad> ads_at_station(std::span<const Ad> ads, const World& world, StationId station);

using DaySchedule = std::map<std::pair<StationId, TimeBand>, AdSchedule>;

/// A schedule for every station and band. Bands whose predicted audience
/// reaches the density threshold use the audience-based member of the
/// policy's family, the rest use the building-based member. Families pair the
/// single-winner policies (max_audience, nearest_buildings) and the ratio
/// policies (audience_ratio, building_ratio).
DaySchedule build_day_schedule(const World& world, const AudienceModel& audience,
                               std::span<const Ad> ads, PolicyId policy, std::int32_t day,
                               const ScheduleParams& params);

/// station,band,ad_id,tos_seconds
void write_schedule_csv(std::ostream& out, const DaySchedule& schedule);

void to_json(json& j, const Ad& a);
void from_json(const json& j, Ad& a);
void to_json(json& j, const AdSchedule& s);
void from_json(const json& j, AdSchedule& s);
void to_json(json& j, const ScheduleParams& p);
void from_json(const json& j, ScheduleParams& p);
void to_json(json& j, const FeedbackEvent& e);
void from_json(const json& j, FeedbackEvent& e);

json schedule_to_json(const DaySchedule& schedule);
DaySchedule schedule_from_json(const json& j);

/// person_id,ad_id,polarity,time
void write_feedback_csv(std::ostream& out, std::span<const FeedbackEvent> events);
std::vector<FeedbackEvent> read_feedback_csv(std::istream& in);

}  // namespace transit_ads

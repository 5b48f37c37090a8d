#pragma once

#include <istream>
#include <string>
#include <vector>

#include "mlfpp/seasonal.hpp"

namespace mlfpp {

// A calendar instant, kept as hours since the Unix epoch plus the calendar
// fields needed downstream. Day-of-year is on the 365-day scale with
// February 29 mapped onto day 59.
struct Instant {
    double hours_since_epoch = 0.0;
    int year = 0;
    int day_of_year = 0;  // 1..365
};

// Parses "YYYY-MM-DD HH:MM[:SS]" or ISO-8601 "YYYY-MM-DDTHH:MM[:SS][Z]" (UTC).
Instant parse_instant(const std::string& iso);

struct ObservationSeries {
    std::vector<Instant> timestamps;  // strictly increasing
    std::vector<double> values;

    static ObservationSeries make(std::vector<Instant> timestamps,
                                  std::vector<double> values);
};

// Reads a CSV with header "timestamp,value".
ObservationSeries read_observation_csv(std::istream& in);

struct ExceedanceRecord {
    std::vector<Instant> event_times;
    double threshold = 0.0;
    double quantile_level = 0.0;
};

// Peaks over threshold: the threshold is the ceil(level*n)-th order statistic
// of the values; events are the observations strictly above it.
ExceedanceRecord extract_exceedances(const ObservationSeries& s, double level);

// Return times W_m = T_{m+1} - T_m in hours; start day is the calendar day
// of the event opening the interval.
ReturnTimeSeries to_return_times(const ExceedanceRecord& e);

// As above but grouped by the calendar year of the opening event, for the
// permutation test.
std::map<int, ReturnTimeSeries> to_return_times_by_year(const ExceedanceRecord& e);

}  // namespace mlfpp

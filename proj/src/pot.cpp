#include "mlfpp/pot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mlfpp/errors.hpp"

namespace mlfpp {
namespace {

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

// Days since 1970-01-01 (Howard Hinnant's civil-date algorithm).
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    long era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

const int kMonthOffset[] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};

}  // namespace

Instant parse_instant(const std::string& iso) {
    int y, mo, d, h, mi;
    int sec = 0;
    char sep;
    int n = std::sscanf(iso.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &sec);
    if (n < 6 || (sep != 'T' && sep != ' '))
        throw std::invalid_argument("parse_instant: cannot parse '" + iso + "'");
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
        sec < 0 || sec > 60)
        throw std::invalid_argument("parse_instant: field out of range in '" + iso + "'");
    Instant out;
    out.year = y;
    out.hours_since_epoch = days_from_civil(y, mo, d) * 24.0 + h + mi / 60.0 + sec / 3600.0;
    int doy = kMonthOffset[mo - 1] + d;  // non-leap day-of-year
    if (is_leap(y) && mo > 2) doy += 1;
    // 365-day scale: Feb 29 shares day 59 with Feb 28.
    if (is_leap(y) && doy >= 60) doy -= 1;
    out.day_of_year = doy;
    return out;
}

ObservationSeries ObservationSeries::make(std::vector<Instant> timestamps,
                                          std::vector<double> values) {
    if (timestamps.size() != values.size())
        throw std::invalid_argument("ObservationSeries: length mismatch");
    if (timestamps.empty())
        throw std::invalid_argument("ObservationSeries: empty series");
    for (std::size_t i = 1; i < timestamps.size(); ++i)
        if (!(timestamps[i].hours_since_epoch > timestamps[i - 1].hours_since_epoch))
            throw std::invalid_argument(
                "ObservationSeries: timestamps must be strictly increasing");
    ObservationSeries s;
    s.timestamps = std::move(timestamps);
    s.values = std::move(values);
    return s;
}

ObservationSeries read_observation_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("read_observation_csv: empty input");
    std::vector<Instant> ts;
    std::vector<double> vals;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("read_observation_csv: line " +
                                        std::to_string(lineno) + ": missing comma");
        try {
            ts.push_back(parse_instant(line.substr(0, comma)));
            vals.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception& e) {
            throw std::invalid_argument("read_observation_csv: line " +
                                        std::to_string(lineno) + ": " + e.what());
        }
    }
    return ObservationSeries::make(std::move(ts), std::move(vals));
}

ExceedanceRecord extract_exceedances(const ObservationSeries& s, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::domain_error("extract_exceedances: level must be in (0,1)");
    std::vector<double> sorted_vals = s.values;
    std::sort(sorted_vals.begin(), sorted_vals.end());
    std::size_t n = sorted_vals.size();
    if (sorted_vals.front() == sorted_vals.back())
        throw EstimationError("extract_exceedances: constant series");
    std::size_t k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(n)));
    k = std::min(std::max<std::size_t>(k, 1), n);
    ExceedanceRecord e;
    e.threshold = sorted_vals[k - 1];
    e.quantile_level = level;
    for (std::size_t i = 0; i < n; ++i)
        if (s.values[i] > e.threshold) e.event_times.push_back(s.timestamps[i]);
    return e;
}

ReturnTimeSeries to_return_times(const ExceedanceRecord& e) {
    if (e.event_times.size() < 2)
        throw EstimationError("to_return_times: need at least 2 events");
    std::vector<double> w;
    std::vector<int> days;
    for (std::size_t i = 0; i + 1 < e.event_times.size(); ++i) {
        w.push_back(e.event_times[i + 1].hours_since_epoch -
                    e.event_times[i].hours_since_epoch);
        days.push_back(e.event_times[i].day_of_year);
    }
    return ReturnTimeSeries::make(std::move(w), std::move(days));
}

std::map<int, ReturnTimeSeries> to_return_times_by_year(const ExceedanceRecord& e) {
    if (e.event_times.size() < 2)
        throw EstimationError("to_return_times_by_year: need at least 2 events");
    std::map<int, ReturnTimeSeries> out;
    for (std::size_t i = 0; i + 1 < e.event_times.size(); ++i) {
        const Instant& open = e.event_times[i];
        ReturnTimeSeries& frag = out[open.year];
        frag.return_times.push_back(e.event_times[i + 1].hours_since_epoch -
                                    open.hours_since_epoch);
        frag.start_days.push_back(open.day_of_year);
    }
    return out;
}

}  // namespace mlfpp

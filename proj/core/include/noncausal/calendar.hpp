#pragma once

#include <compare>
#include <string>

namespace noncausal {

// Monthly calendar point. Series in this library are strictly monthly, so a
// day of month is never stored; ingestion drops it.
struct MonthDate {
    int year = 0;
    int month = 1;  // 1..12

    friend auto operator<=>(const MonthDate&, const MonthDate&) = default;
};

// Linear month index (months since 0000-01); the basis for date arithmetic.
int month_index(MonthDate d);
MonthDate month_from_index(int index);
MonthDate add_months(MonthDate d, int n);
int months_between(MonthDate from, MonthDate to);  // to minus from

std::string to_string(MonthDate d);  // "YYYY-MM"

// Accepts "YYYY-MM" or "YYYY-MM-DD"; the day part is ignored.
MonthDate parse_month(const std::string& text);
bool try_parse_month(const std::string& text, MonthDate& out);

}  // namespace noncausal

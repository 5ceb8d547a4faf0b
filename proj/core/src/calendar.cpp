#include "noncausal/calendar.hpp"

#include <cctype>

#include "noncausal/errors.hpp"

namespace noncausal {

int month_index(MonthDate d) { return d.year * 12 + (d.month - 1); }

MonthDate month_from_index(int index) {
    MonthDate d;
    d.year = index / 12;
    d.month = index % 12 + 1;
    if (d.month <= 0) {  // negative indices round toward zero
        d.year -= 1;
        d.month += 12;
    }
    return d;
}

MonthDate add_months(MonthDate d, int n) { return month_from_index(month_index(d) + n); }

int months_between(MonthDate from, MonthDate to) { return month_index(to) - month_index(from); }

std::string to_string(MonthDate d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", d.year, d.month);
    return buf;
}

static bool all_digits(const std::string& s, size_t from, size_t to) {
    for (size_t i = from; i < to; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

bool try_parse_month(const std::string& text, MonthDate& out) {
    // "YYYY-MM" (7 chars) or "YYYY-MM-DD" (10 chars, day ignored).
    if (text.size() != 7 && text.size() != 10) return false;
    if (text[4] != '-') return false;
    if (!all_digits(text, 0, 4) || !all_digits(text, 5, 7)) return false;
    if (text.size() == 10) {
        if (text[7] != '-' || !all_digits(text, 8, 10)) return false;
    }
    int year = std::stoi(text.substr(0, 4));
    int month = std::stoi(text.substr(5, 2));
    if (month < 1 || month > 12) return false;
    out = MonthDate{year, month};
    return true;
}

MonthDate parse_month(const std::string& text) {
    MonthDate d;
    if (!try_parse_month(text, d)) {
        throw InputError("malformed date '" + text + "', expected YYYY-MM");
    }
    return d;
}

}  // namespace noncausal

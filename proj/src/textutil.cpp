#include "botwatch/textutil.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace botwatch {

namespace {

bool is_space_or_ctrl(unsigned char c) { return c <= 0x20 || c == 0x7f; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space_or_ctrl(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && is_space_or_ctrl(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string normalize_domain(std::string_view raw) {
    std::string out = lowercase(trim(raw));
    // strip the FQDN root dot; trailing dot/whitespace mixes go entirely,
    // normalization must be idempotent on arbitrary input
    while (!out.empty() &&
           (out.back() == '.' || is_space_or_ctrl(static_cast<unsigned char>(out.back())))) {
        out.pop_back();
    }
    return out;
}

std::string normalize_url(std::string_view raw) { return lowercase(trim(raw)); }

bool is_clean_text(std::string_view text) {
    if (text.empty()) return false;
    for (const char c : text) {
        const auto uc = static_cast<unsigned char>(c);
        if (is_space_or_ctrl(uc)) return false;
        if (std::isupper(uc)) return false;
    }
    return true;
}

bool is_valid_domain(std::string_view domain) {
    if (domain.empty()) return false;
    std::size_t label_len = 0;
    for (const char c : domain) {
        if (c == '.') {
            if (label_len == 0 || label_len > 63) return false;
            label_len = 0;
            continue;
        }
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                        c == '-' || c == '_';
        if (!ok) return false;
        ++label_len;
    }
    return label_len > 0 && label_len <= 63;
}

bool is_valid_label(std::string_view label) {
    if (label.empty() || label.size() > 63) return false;
    if (label.front() == '-' || label.back() == '-') return false;
    for (const char c : label) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
        if (!ok) return false;
    }
    return true;
}

std::vector<std::string> split_labels(std::string_view domain) {
    std::vector<std::string> labels;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= domain.size(); ++i) {
        if (i == domain.size() || domain[i] == '.') {
            labels.emplace_back(domain.substr(start, i - start));
            start = i + 1;
        }
    }
    return labels;
}

std::string registered_domain(std::string_view qname) {
    if (!qname.empty() && qname.back() == '.') qname.remove_suffix(1);
    const auto last = qname.rfind('.');
    if (last == std::string_view::npos) return std::string(qname);
    const auto prev = qname.rfind('.', last - 1);
    if (prev == std::string_view::npos) return std::string(qname);
    return std::string(qname.substr(prev + 1));
}

std::pair<std::string, std::string> split_sld_tld(std::string_view domain) {
    const auto last = domain.rfind('.');
    if (last == std::string_view::npos) return {std::string(domain), std::string()};
    return {std::string(domain.substr(0, last)), std::string(domain.substr(last + 1))};
}

double shannon_entropy(std::string_view text) {
    if (text.empty()) return 0.0;
    std::array<std::size_t, 256> counts{};
    for (const char c : text) ++counts[static_cast<unsigned char>(c)];
    const double n = static_cast<double>(text.size());
    double entropy = 0.0;
    for (const std::size_t count : counts) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / n;
        entropy -= p * std::log2(p);
    }
    return entropy;
}

bool is_consonant(char c) {
    if (c < 'a' || c > 'z') return false;
    return c != 'a' && c != 'e' && c != 'i' && c != 'o' && c != 'u';
}

const std::vector<std::string>& common_tlds() {
    static const std::vector<std::string> tlds = {
        "com", "net",  "org", "info", "biz", "co", "io", "me", "us", "uk",
        "de",  "fr",   "it",  "nl",   "ru",  "cn", "jp", "in", "br", "au",
        "ca",  "es",   "ch",  "se",   "no",  "pl", "eu", "tv", "cc", "xyz"};
    return tlds;
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<std::uint64_t>(y - era * 400);
    const auto doy = static_cast<std::uint64_t>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const std::uint64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_int(std::string_view s, int& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::optional<std::int64_t> parse_rfc3339(std::string_view text) {
    text = trim(text);
    // Minimum shape: YYYY-MM-DDThh:mm:ssZ
    if (text.size() < 20) return std::nullopt;
    if (text[4] != '-' || text[7] != '-') return std::nullopt;
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') return std::nullopt;
    if (text[13] != ':' || text[16] != ':') return std::nullopt;

    int year, month, day, hour, minute, second;
    if (!parse_int(text.substr(0, 4), year) || !parse_int(text.substr(5, 2), month) ||
        !parse_int(text.substr(8, 2), day) || !parse_int(text.substr(11, 2), hour) ||
        !parse_int(text.substr(14, 2), minute) || !parse_int(text.substr(17, 2), second)) {
        return std::nullopt;
    }
    if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    if (pos >= text.size()) return std::nullopt;

    std::int64_t offset = 0;
    const char tz = text[pos];
    if (tz == 'Z' || tz == 'z') {
        if (pos + 1 != text.size()) return std::nullopt;
    } else if (tz == '+' || tz == '-') {
        if (pos + 6 != text.size() || text[pos + 3] != ':') return std::nullopt;
        int oh, om;
        if (!parse_int(text.substr(pos + 1, 2), oh) || !parse_int(text.substr(pos + 4, 2), om)) {
            return std::nullopt;
        }
        offset = static_cast<std::int64_t>(oh) * 3600 + om * 60;
        if (tz == '-') offset = -offset;
    } else {
        return std::nullopt;
    }

    const std::int64_t days = days_from_civil(year, month, day);
    return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

}  // namespace botwatch

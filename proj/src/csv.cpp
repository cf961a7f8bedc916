#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "oimp/errors.hpp"
#include "oimp/harness.hpp"

namespace oimp {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void emit_csv(std::span<const RoundRecord> records, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const RoundRecord& r : records) {
        out << r.run << ',' << r.round << ',' << r.policy << ',';
        for (std::size_t i = 0; i < r.influencers.size(); ++i) out << (i ? "+" : "") << r.influencers[i];
        out << ',' << r.spread_size << ',' << r.new_activations << ',' << r.cumulative << '\n';
    }
}

void emit_csv(std::span<const RoundRecord> records, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    emit_csv(records, out);
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        parts.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

template <class T>
T parse_number(std::string_view field, std::size_t line) {
    T value{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw ParseError("invalid number '" + std::string(field) + "'", line);
    return value;
}

}  // namespace

std::vector<RoundRecord> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("missing or unexpected header", 1);
    std::vector<RoundRecord> records;
    for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 7) throw ParseError("expected 7 fields", line_no);
        RoundRecord r;
        r.run = parse_number<std::size_t>(fields[0], line_no);
        r.round = parse_number<std::size_t>(fields[1], line_no);
        r.policy = std::string(fields[2]);
        if (!fields[3].empty())
            for (std::string_view id : split(fields[3], '+')) r.influencers.push_back(parse_number<InfluencerId>(id, line_no));
        r.spread_size = parse_number<std::size_t>(fields[4], line_no);
        r.new_activations = parse_number<std::size_t>(fields[5], line_no);
        r.cumulative = parse_number<std::size_t>(fields[6], line_no);
        records.push_back(std::move(r));
    }
    return records;
}

void emit_waiting_time_csv(std::span<const WaitingTimeRow> rows, std::ostream& out) {
    out << "run,alpha,t_ucb,t_oracle,tau_star,bound,satisfied\n";
    for (const WaitingTimeRow& r : rows) {
        out << r.run << ',' << format_double(r.alpha) << ',';
        if (r.t_ucb) out << *r.t_ucb;
        out << ',' << r.t_oracle << ',';
        if (r.tau_star) out << *r.tau_star;
        out << ',';
        if (r.bound) out << format_double(*r.bound);
        out << ',';
        if (r.satisfied) out << (*r.satisfied ? 1 : 0);
        out << '\n';
    }
}

void emit_estimator_csv(std::span<const EstimatorRow> rows, std::ostream& out) {
    out << "run,pull,true_remaining,good_turing,bayesian\n";
    for (const EstimatorRow& r : rows)
        out << r.run << ',' << r.pull << ',' << format_double(r.true_remaining) << ',' << format_double(r.good_turing)
            << ',' << format_double(r.bayesian) << '\n';
}

}  // namespace oimp

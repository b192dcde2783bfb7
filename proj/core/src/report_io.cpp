#include <protnum/report_io.hpp>

#include <array>
#include <sstream>

#include <json.hpp>

#include <protnum/errors.hpp>

namespace protnum
{

namespace
{

using json = nlohmann::ordered_json;

bigfloat read_float(const std::string &text, int precision)
{
    return bigfloat::parse(text, working_bits(precision));
}

} // namespace

std::string to_json(const protection_report &report)
{
    json j;
    j["family"] = report.family;
    j["mode"] = to_string(report.mode);
    j["precision"] = report.precision;
    j["k_max"] = report.k_max;
    j["mean"] = report.mean.repr();
    j["variance"] = report.variance.repr();
    j["tail_bound"] = report.tail_bound.repr();
    j["variance_tail_bound"] = report.variance_tail_bound.repr();
    auto probs = json::array();
    for (const auto &p : report.probabilities) {
        probs.push_back(p.repr());
    }
    j["probabilities"] = std::move(probs);
    return j.dump(2);
}

protection_report report_from_json(std::string_view text)
{
    try {
        const auto j = json::parse(text);
        protection_report r;
        r.family = j.at("family").get<std::string>();
        r.mode = parse_mode(j.at("mode").get<std::string>());
        r.precision = j.at("precision").get<int>();
        r.k_max = j.at("k_max").get<int>();
        r.mean = read_float(j.at("mean").get<std::string>(), r.precision);
        r.variance = read_float(j.at("variance").get<std::string>(), r.precision);
        r.tail_bound = read_float(j.at("tail_bound").get<std::string>(), r.precision);
        r.variance_tail_bound = read_float(j.at("variance_tail_bound").get<std::string>(), r.precision);
        for (const auto &p : j.at("probabilities")) {
            r.probabilities.push_back(read_float(p.get<std::string>(), r.precision));
        }
        return r;
    } catch (const json::exception &e) {
        throw error(std::string("malformed report JSON: ") + e.what());
    }
}

std::string to_csv(const protection_report &report)
{
    std::ostringstream out;
    const auto prefix = report.family + "," + to_string(report.mode) + ",";
    out << "family,mode,k,value\n";
    for (std::size_t k = 0; k < report.probabilities.size(); ++k) {
        out << prefix << k + 1 << ',' << report.probabilities[k].repr() << '\n';
    }
    out << prefix << "mean," << report.mean.repr() << '\n';
    out << prefix << "variance," << report.variance.repr() << '\n';
    out << prefix << "tail_bound," << report.tail_bound.repr() << '\n';
    out << prefix << "variance_tail_bound," << report.variance_tail_bound.repr() << '\n';
    out << prefix << "k_max," << report.k_max << '\n';
    out << prefix << "precision," << report.precision << '\n';
    return out.str();
}

protection_report report_from_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    std::getline(in, line);
    if (line != "family,mode,k,value") {
        throw error("unexpected CSV header '" + line + "'");
    }
    std::vector<std::array<std::string, 4>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::array<std::string, 4> cells;
        std::istringstream fields(line);
        for (auto &c : cells) {
            if (!std::getline(fields, c, ',')) {
                throw error("short CSV row '" + line + "'");
            }
        }
        rows.push_back(std::move(cells));
    }
    protection_report r;
    for (const auto &row : rows) {
        if (row[2] == "precision") {
            r.precision = std::stoi(row[3]);
        }
    }
    for (const auto &row : rows) {
        r.family = row[0];
        r.mode = parse_mode(row[1]);
        const auto &key = row[2];
        if (key == "mean") {
            r.mean = read_float(row[3], r.precision);
        } else if (key == "variance") {
            r.variance = read_float(row[3], r.precision);
        } else if (key == "tail_bound") {
            r.tail_bound = read_float(row[3], r.precision);
        } else if (key == "variance_tail_bound") {
            r.variance_tail_bound = read_float(row[3], r.precision);
        } else if (key == "k_max") {
            r.k_max = std::stoi(row[3]);
        } else if (key != "precision") {
            r.probabilities.push_back(read_float(row[3], r.precision));
        }
    }
    return r;
}

template <series_scalar S>
std::string series_to_json(const truncated_series<S> &f)
{
    return json(coefficient_strings(f)).dump();
}

template std::string series_to_json(const rational_series &);
template std::string series_to_json(const float_series &);

rational_series rational_series_from_json(std::string_view text)
{
    std::vector<rational> coeffs;
    for (const auto &c : json::parse(text)) {
        rational q(c.get<std::string>());
        q.canonicalize();
        coeffs.push_back(std::move(q));
    }
    return rational_series(std::move(coeffs));
}

bool same_report(const protection_report &a, const protection_report &b)
{
    return a.family == b.family && a.mode == b.mode && a.precision == b.precision && a.k_max == b.k_max
           && a.mean == b.mean && a.variance == b.variance && a.tail_bound == b.tail_bound
           && a.variance_tail_bound == b.variance_tail_bound && a.probabilities == b.probabilities;
}

} // namespace protnum

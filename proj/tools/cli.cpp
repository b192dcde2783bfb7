#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <protnum/enumeration.hpp>
#include <protnum/errors.hpp>
#include <protnum/protection.hpp>
#include <protnum/report_io.hpp>
#include <protnum/sampling.hpp>

#include "checks.hpp"

namespace protnum::cli
{

namespace
{

using json = nlohmann::ordered_json;

struct request {
    std::string family = "plane";
    std::string mode = "root";
    std::optional<int> k;
    std::optional<int> kmax;
    std::optional<int> n;
    std::size_t trunc = default_truncation;
    int precision = default_digits;
    std::uint64_t seed = 0;
    long trials = 1000;
    unsigned threads = 1;
    std::string format = "text";
    std::string series = "tk";
    int criterion = 0;
};

int precision_from_env()
{
    const char *text = std::getenv("PROTNUM_PRECISION");
    if (text == nullptr || *text == '\0') {
        return default_digits;
    }
    char *end = nullptr;
    const long value = std::strtol(text, &end, 10);
    if (*end != '\0' || value < 5 || value > 5000) {
        throw validation_error(std::string("PROTNUM_PRECISION must be an integer in [5, 5000], got ") + text);
    }
    return static_cast<int>(value);
}

std::vector<family_spec> families_for(const std::string &name)
{
    std::vector<family_spec> out;
    if (name == "all") {
        for (const auto &builtin : builtin_family_names()) {
            out.push_back(make_family(builtin));
        }
    } else {
        out.push_back(make_family(name));
    }
    return out;
}

std::string csv_join(const std::vector<std::string> &cells, const char *sep = ",")
{
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            line += sep;
        }
        line += cells[i];
    }
    return line + "\n";
}

// Reports for several families at once, one thread each, in input order.
std::vector<protection_report> reports_for(const std::vector<family_spec> &families, protection_mode mode,
                                           const protection_options &options)
{
    std::vector<std::future<protection_report>> jobs;
    for (const auto &family : families) {
        jobs.push_back(std::async(std::launch::async, [family, mode, options] {
            return mode == protection_mode::root ? root_limits(family, options) : vertex_limits(family, options);
        }));
    }
    std::vector<protection_report> out;
    for (auto &job : jobs) {
        out.push_back(job.get());
    }
    return out;
}

protection_options options_of(const request &r)
{
    return {r.precision, r.trunc, protection_options{}.k_cap};
}

int cmd_limits(const request &r, std::ostream &out)
{
    const auto reports = reports_for(families_for(r.family), parse_mode(r.mode), options_of(r));
    if (r.format == "json") {
        if (reports.size() == 1) {
            out << to_json(reports.front()) << "\n";
        } else {
            json all = json::array();
            for (const auto &report : reports) {
                all.push_back(json::parse(to_json(report)));
            }
            out << all.dump(2) << "\n";
        }
        return ok;
    }
    if (r.format == "csv") {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            std::string body = to_csv(reports[i]);
            if (i > 0) {
                body.erase(0, body.find('\n') + 1);
            }
            out << body;
        }
        return ok;
    }
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto &report = reports[i];
        const int digits = report.precision;
        if (i > 0) {
            out << "\n";
        }
        out << "family    " << report.family << "\n";
        out << "mode      " << to_string(report.mode) << "\n";
        out << "precision " << digits << "\n";
        out << "mean      " << report.mean.str(digits) << "\n";
        out << "variance  " << report.variance.str(digits) << "\n";
        out << "tail      " << report.tail_bound.str(3) << " (mean), " << report.variance_tail_bound.str(3)
            << " (variance)\n";
        out << "k_max     " << report.k_max << "\n";
        const int shown = std::min(report.k_max, r.kmax.value_or(report.k_max));
        for (int k = 1; k <= shown; ++k) {
            out << "P(>=" << k << ")" << std::string(k < 10 ? 4 : 3, ' ')
                << report.probabilities[static_cast<std::size_t>(k - 1)].str(digits) << "\n";
        }
    }
    return ok;
}

std::vector<int> k_values(const request &r)
{
    if (r.k) {
        if (*r.k < 0) {
            throw validation_error("--k must be nonnegative");
        }
        return {*r.k};
    }
    std::vector<int> ks;
    for (int k = 1; k <= r.kmax.value_or(10); ++k) {
        ks.push_back(k);
    }
    return ks;
}

int cmd_probs(const request &r, std::ostream &out)
{
    const auto families = families_for(r.family);
    const auto mode = parse_mode(r.mode);
    const auto ks = k_values(r);

    struct row {
        std::string family;
        int k;
        std::string exact; // finite n only
        std::string value;
    };
    std::vector<row> rows;
    for (const auto &family : families) {
        if (r.n) {
            for (int k : ks) {
                const auto p = finite_probabilities(family, *r.n, k);
                const rational q = mode == protection_mode::root ? p.root : p.vertex;
                const bigfloat decimal(q, working_bits(r.precision));
                rows.push_back({family.name, k, q.get_str(), decimal.str(r.precision)});
            }
        } else {
            limit_model model(family, options_of(r));
            for (int k : ks) {
                if (k == 0) {
                    rows.push_back({family.name, k, "", bigfloat(1, model.bits()).str(r.precision)});
                    continue;
                }
                const auto &p = mode == protection_mode::root ? model.root_probability(k) : model.vertex_probability(k);
                rows.push_back({family.name, k, "", p.str(r.precision)});
            }
        }
    }

    const std::string n_text = r.n ? std::to_string(*r.n) : "";
    if (r.format == "json") {
        json all = json::array();
        for (const auto &x : rows) {
            json j;
            j["family"] = x.family;
            j["mode"] = r.mode;
            if (r.n) {
                j["n"] = *r.n;
            }
            j["k"] = x.k;
            if (r.n) {
                j["exact"] = x.exact;
            }
            j["value"] = x.value;
            all.push_back(j);
        }
        out << all.dump(2) << "\n";
        return ok;
    }
    if (r.format == "csv") {
        out << "family,mode,n,k,value\n";
        for (const auto &x : rows) {
            out << csv_join({x.family, r.mode, n_text, std::to_string(x.k), r.n ? x.exact : x.value});
        }
        return ok;
    }
    if (rows.size() == 1) {
        out << (r.n ? rows.front().exact : rows.front().value) << "\n";
        return ok;
    }
    for (const auto &x : rows) {
        if (families.size() > 1) {
            out << x.family << " ";
        }
        out << x.k << " ";
        if (r.n) {
            out << x.exact << " ";
        }
        out << x.value << "\n";
    }
    return ok;
}

int cmd_coeffs(const request &r, std::ostream &out)
{
    if (r.series != "tk" && r.series != "sk") {
        throw validation_error("--series must be tk or sk");
    }
    const int k = r.k.value_or(1);
    const int n = r.n.value_or(20);
    if (k < 0 || n < 0) {
        throw validation_error("--k and --n must be nonnegative");
    }
    const auto families = families_for(r.family);
    std::vector<std::pair<std::string, rational_series>> all;
    for (const auto &family : families) {
        const auto order = static_cast<std::size_t>(n);
        all.emplace_back(family.name,
                         r.series == "tk" ? tk_coefficients(family, k, order) : sk_series(family, k, order));
    }
    if (r.format == "json") {
        json arr = json::array();
        for (const auto &[name, series] : all) {
            json j;
            j["family"] = name;
            j["series"] = r.series;
            j["k"] = k;
            j["coefficients"] = json::parse(series_to_json(series));
            arr.push_back(j);
        }
        out << (arr.size() == 1 ? arr[0] : arr).dump(2) << "\n";
        return ok;
    }
    if (r.format == "csv") {
        out << "family,series,k,n,coefficient\n";
    }
    for (const auto &[name, series] : all) {
        const auto coeffs = coefficient_strings(series);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (r.format == "csv") {
                out << csv_join({name, r.series, std::to_string(k), std::to_string(i), coeffs[i]});
            } else {
                if (families.size() > 1) {
                    out << name << " ";
                }
                out << i << " " << coeffs[i] << "\n";
            }
        }
    }
    return ok;
}

int cmd_verify(const request &r, std::ostream &out, std::ostream &err)
{
    const auto &all = checks::acceptance();
    if (r.criterion < 0 || r.criterion > static_cast<int>(all.size())) {
        throw validation_error("no criterion " + std::to_string(r.criterion));
    }
    std::vector<const checks::criterion *> chosen;
    for (const auto &c : all) {
        if (r.criterion == 0 || r.criterion == c.id) {
            chosen.push_back(&c);
        }
    }
    std::vector<std::future<checks::outcome>> jobs;
    for (const auto *c : chosen) {
        jobs.push_back(std::async(std::launch::async, [c] { return checks::run_guarded(*c); }));
    }
    std::vector<checks::outcome> results;
    for (auto &job : jobs) {
        results.push_back(job.get());
    }

    const checks::criterion *first_failure = nullptr;
    const checks::outcome *failure_outcome = nullptr;
    json arr = json::array();
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        const auto &result = results[i];
        if (!result.pass && first_failure == nullptr) {
            first_failure = chosen[i];
            failure_outcome = &result;
        }
        if (r.format == "json") {
            json j;
            j["criterion"] = chosen[i]->id;
            j["name"] = chosen[i]->name;
            j["pass"] = result.pass;
            j["notes"] = result.notes;
            arr.push_back(j);
        } else if (r.format == "csv") {
            if (i == 0) {
                out << "criterion,name,result\n";
            }
            out << csv_join({std::to_string(chosen[i]->id), chosen[i]->name, result.pass ? "pass" : "fail"});
        } else {
            out << (result.pass ? "PASS" : "FAIL") << "  criterion " << chosen[i]->id << ": " << chosen[i]->name
                << "\n";
            for (const auto &note : result.notes) {
                out << "      " << note << "\n";
            }
        }
    }
    if (r.format == "json") {
        out << arr.dump(2) << "\n";
    }
    if (first_failure != nullptr) {
        err << "verify: first failing check: criterion " << first_failure->id << " (" << first_failure->name << ")";
        if (!failure_outcome->notes.empty()) {
            err << ": " << failure_outcome->notes.front();
        }
        err << "\n";
        return check_failed;
    }
    return ok;
}

int cmd_sample(const request &r, std::ostream &out)
{
    if (r.family == "all") {
        throw validation_error("sample needs a single family");
    }
    if (r.trials < 1) {
        throw validation_error("--trials must be at least 1");
    }
    const int n = r.n.value_or(100);
    if (n < 1) {
        throw validation_error("--n must be at least 1");
    }
    const auto summary = empirical_protection({make_family(r.family).name, n, r.trials, r.seed, r.threads});
    if (r.format == "json") {
        out << to_json(summary) << "\n";
        return ok;
    }
    auto num = [](double x) {
        if (std::isnan(x)) {
            return std::string("nan");
        }
        std::ostringstream s;
        s << std::setprecision(10) << x;
        return s.str();
    };
    if (r.format == "csv") {
        out << "family,n,trials,seed,root_mean,root_se,vertex_mean,vertex_se\n";
        out << csv_join({summary.family, std::to_string(summary.n), std::to_string(summary.trials),
                         std::to_string(summary.seed), num(summary.root_mean), num(summary.root_se),
                         num(summary.vertex_mean), num(summary.vertex_se)});
        return ok;
    }
    out << "family      " << summary.family << "\n";
    out << "n           " << summary.n << "\n";
    out << "trials      " << summary.trials << "\n";
    out << "seed        " << summary.seed << "\n";
    out << "root mean   " << num(summary.root_mean) << " (se " << num(summary.root_se) << ")\n";
    out << "vertex mean " << num(summary.vertex_mean) << " (se " << num(summary.vertex_se) << ")\n";
    if (!summary.variance_defined) {
        out << "standard errors undefined for a single trial\n";
    }
    for (std::size_t k = 0; k < summary.per_k_frequencies.size(); ++k) {
        out << "P(root >= " << k + 1 << ") " << num(summary.per_k_frequencies[k]) << "\n";
    }
    return ok;
}

// Printed reference values. The vertex table has E Y and V Y for the simply
// generated families; the means table has E X and E Y for every family.
struct table_row {
    const char *table;
    const char *family;
    const char *model;
    const char *first;
    const char *second;
};

const table_row reference_rows[] = {
    {"vertex", "plane", "Plane trees", "0.7276492769137261", "0.8168993794836289"},
    {"vertex", "motzkin", "Motzkin trees", "1.307604625963334", "1.730614214799486"},
    {"vertex", "incomplete-binary", "Incomplete binary trees", "1.991819588602741", "3.638259051495130"},
    {"vertex", "cayley", "Cayley trees", "1.186522661652180", "1.632206223956926"},
    {"vertex", "complete-binary", "Complete binary trees", "1.265686036087572", "0.226591112528581"},
    {"means", "plane", "Plane trees", "1.62297", "0.72765"},
    {"means", "motzkin", "Motzkin trees", "2.54638", "1.30760"},
    {"means", "incomplete-binary", "Incomplete binary trees", "3.53647", "1.99182"},
    {"means", "cayley", "Cayley trees", "2.28620", "1.18652"},
    {"means", "complete-binary", "Complete binary trees", "1.56298", "1.26568"},
    {"means", "polya", "Polya trees", "2.15489", "0.99532"},
    {"means", "non-plane-binary", "Non-plane binary trees", "1.70760", "1.31241"},
};

std::string short_diff(const bigfloat &x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1e", x.to_double());
    return buf;
}

int cmd_table(const request &r, std::ostream &out)
{
    const auto families = families_for(r.family);
    const auto options = options_of(r);
    std::vector<protection_report> roots;
    std::vector<protection_report> vertices;
    {
        std::vector<std::future<protection_report>> jobs;
        for (const auto &family : families) {
            for (auto mode : {protection_mode::root, protection_mode::vertex}) {
                jobs.push_back(std::async(std::launch::async, [family, mode, options] {
                    return mode == protection_mode::root ? root_limits(family, options)
                                                         : vertex_limits(family, options);
                }));
            }
        }
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            (i % 2 == 0 ? roots : vertices).push_back(jobs[i].get());
        }
    }
    auto index_of = [&](const std::string &name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < families.size(); ++i) {
            if (families[i].name == name) {
                return i;
            }
        }
        return std::nullopt;
    };

    struct line {
        const table_row *ref;
        bigfloat first;
        bigfloat second;
    };
    std::vector<line> lines;
    for (const auto &ref : reference_rows) {
        const auto i = index_of(ref.family);
        if (!i) {
            continue;
        }
        if (std::string(ref.table) == "vertex") {
            lines.push_back({&ref, vertices[*i].mean, vertices[*i].variance});
        } else {
            lines.push_back({&ref, roots[*i].mean, vertices[*i].mean});
        }
    }
    auto gap = [](const bigfloat &x, const char *printed) { return abs(x - bigfloat::parse(printed, x.bits())); };

    if (r.format == "json") {
        json arr = json::array();
        for (const auto &l : lines) {
            json j;
            j["table"] = l.ref->table;
            j["model"] = l.ref->model;
            j["family"] = l.ref->family;
            j["columns"] = std::string(l.ref->table) == "vertex" ? json::array({"vertex_mean", "vertex_variance"})
                                             : json::array({"root_mean", "vertex_mean"});
            j["computed"] = json::array({l.first.repr(), l.second.repr()});
            j["printed"] = json::array({l.ref->first, l.ref->second});
            j["difference"] = json::array({gap(l.first, l.ref->first).repr(), gap(l.second, l.ref->second).repr()});
            arr.push_back(j);
        }
        out << arr.dump(2) << "\n";
        return ok;
    }
    if (r.format == "csv") {
        out << "table, model, first, second, printed_first, printed_second, diff_first, diff_second\n";
        for (const auto &l : lines) {
            out << csv_join({l.ref->table, l.ref->model, display_like(l.first, l.ref->first),
                             display_like(l.second, l.ref->second), l.ref->first, l.ref->second,
                             short_diff(gap(l.first, l.ref->first)), short_diff(gap(l.second, l.ref->second))},
                            ", ");
        }
        return ok;
    }
    std::string current;
    for (const auto &l : lines) {
        if (l.ref->table != current) {
            if (!current.empty()) {
                out << "\n";
            }
            current = l.ref->table;
            out << (current == "vertex" ? "Random vertex, simply generated families (E Y, V Y)\n"
                                        : "Mean protection numbers (E X, E Y)\n");
            out << std::left << std::setw(25) << "model" << std::setw(20) << "computed" << std::setw(20) << "printed"
                << std::setw(10) << "|diff|" << std::setw(20) << "computed" << std::setw(20) << "printed"
                << "|diff|\n";
        }
        out << std::left << std::setw(25) << l.ref->model << std::setw(20) << display_like(l.first, l.ref->first)
            << std::setw(20) << l.ref->first << std::setw(10) << short_diff(gap(l.first, l.ref->first))
            << std::setw(20) << display_like(l.second, l.ref->second) << std::setw(20) << l.ref->second
            << short_diff(gap(l.second, l.ref->second)) << "\n";
    }
    return ok;
}

std::string fixed_decimals(const bigfloat &x, int decimals, mpfr_rnd_t rnd)
{
    bigfloat scaled = x * pow(bigfloat(10, x.bits()), static_cast<unsigned long>(decimals));
    mpfr_rint(scaled.get(), scaled.get(), rnd);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), scaled.get(), MPFR_RNDN);
    const bool negative = sgn(z) < 0;
    std::string digits = mpz_class(abs(z)).get_str();
    if (digits.size() <= static_cast<std::size_t>(decimals)) {
        digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    }
    if (decimals > 0) {
        digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
    }
    return (negative ? "-" : "") + digits;
}

} // namespace

std::string display_like(const bigfloat &x, const std::string &printed)
{
    const auto dot = printed.find('.');
    const int decimals = dot == std::string::npos ? 0 : static_cast<int>(printed.size() - dot - 1);
    for (auto rnd : {MPFR_RNDD, MPFR_RNDU}) {
        const auto candidate = fixed_decimals(x, decimals, rnd);
        if (candidate == printed) {
            return candidate;
        }
    }
    return fixed_decimals(x, decimals, MPFR_RNDN);
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    request r;
    try {
        r.precision = precision_from_env();
    } catch (const error &e) {
        err << "protnum: " << e.what() << "\n";
        return usage_error;
    }

    CLI::App app{"Protection numbers of random trees: exact series, limits, sampling.", "protnum"};
    app.require_subcommand(1);

    const std::vector<std::string> formats = {"text", "json", "csv"};
    auto format_opt = [&](CLI::App *sub) {
        sub->add_option("--format", r.format, "text, json or csv")
            ->check(CLI::IsMember(formats))
            ->capture_default_str();
    };
    auto precision_opts = [&](CLI::App *sub) {
        sub->add_option("--precision", r.precision, "decimal digits (default from PROTNUM_PRECISION, else 64)")
            ->check(CLI::Range(5, 5000))
            ->capture_default_str();
        sub->add_option("--trunc", r.trunc, "series truncation order")
            ->check(CLI::Range(8, 100000))
            ->capture_default_str();
    };
    auto mode_opt = [&](CLI::App *sub) {
        sub->add_option("--mode", r.mode, "root or vertex")
            ->check(CLI::IsMember({"root", "vertex"}))
            ->capture_default_str();
    };

    auto *limits = app.add_subcommand("limits", "limiting mean, variance and P(>=k)");
    limits->add_option("--family", r.family, "built-in name, a weight list \"phi0,phi1,...\", or all")
        ->capture_default_str();
    mode_opt(limits);
    precision_opts(limits);
    limits->add_option("--kmax", r.kmax, "print P(>=k) up to this k");
    format_opt(limits);

    auto *probs = app.add_subcommand("probs", "limiting, or with --n exact finite-n, probabilities P(>=k)");
    probs->add_option("--family", r.family, "built-in name, weight list, or all")->capture_default_str();
    mode_opt(probs);
    probs->add_option("--k", r.k, "a single k");
    probs->add_option("--kmax", r.kmax, "k = 1..kmax (default 10)");
    probs->add_option("--n", r.n, "tree size for exact finite-n probabilities");
    precision_opts(probs);
    format_opt(probs);

    auto *coeffs = app.add_subcommand("coeffs", "exact coefficients of T_k or S_k");
    coeffs->add_option("--family", r.family, "built-in name, weight list, or all")->capture_default_str();
    coeffs->add_option("--series", r.series, "tk or sk")->check(CLI::IsMember({"tk", "sk"}))->capture_default_str();
    coeffs->add_option("--k", r.k, "protection level (default 1)");
    coeffs->add_option("--n", r.n, "last coefficient index (default 20)");
    format_opt(coeffs);

    auto *verify = app.add_subcommand("verify", "run the acceptance checks");
    verify->add_option("--criterion", r.criterion, "run a single criterion (1-9)");
    format_opt(verify);

    auto *sample = app.add_subcommand("sample", "empirical protection from exact-size random trees");
    sample->add_option("--family", r.family, "built-in name or weight list")->capture_default_str();
    sample->add_option("--n", r.n, "tree size (default 100)");
    sample->add_option("--trials", r.trials, "number of trees")->capture_default_str();
    sample->add_option("--seed", r.seed, "64-bit seed")->capture_default_str();
    sample->add_option("--threads", r.threads, "worker threads; results do not depend on it")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    format_opt(sample);

    auto *table = app.add_subcommand("table", "computed constants next to the published tables");
    table->add_option("--family", r.family, "restrict to one family (default all)");
    precision_opts(table);
    format_opt(table);
    // The table covers every family unless told otherwise.
    table->preparse_callback([&](std::size_t) { r.family = "all"; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return usage_error;
    }

    try {
        if (*limits) {
            return cmd_limits(r, out);
        }
        if (*probs) {
            return cmd_probs(r, out);
        }
        if (*coeffs) {
            return cmd_coeffs(r, out);
        }
        if (*verify) {
            return cmd_verify(r, out, err);
        }
        if (*sample) {
            return cmd_sample(r, out);
        }
        return cmd_table(r, out);
    } catch (const precision_error &e) {
        err << "protnum: precision: " << e.what() << "\n";
        return precision_failure;
    } catch (const validation_error &e) {
        err << "protnum: " << e.what() << "\n";
        return usage_error;
    } catch (const resource_error &e) {
        err << "protnum: " << e.what() << "\n";
        return usage_error;
    } catch (const impossible_size_error &e) {
        err << "protnum: " << e.what() << "\n";
        return usage_error;
    } catch (const undefined_probability_error &e) {
        err << "protnum: " << e.what() << "\n";
        return usage_error;
    } catch (const unsupported_oracle_error &e) {
        err << "protnum: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception &e) {
        err << "protnum: " << e.what() << "\n";
        return check_failed;
    }
}

} // namespace protnum::cli

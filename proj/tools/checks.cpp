#include "checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include <protnum/enumeration.hpp>
#include <protnum/protection.hpp>
#include <protnum/sampling.hpp>
#include <protnum/tree.hpp>

namespace protnum::checks
{

namespace
{

constexpr int precision = 30;
constexpr double constant_tolerance = 1e-12;
constexpr double coarse_tolerance = 1e-9; // constants printed with 10-11 digits
constexpr int singularity_digits = 20;
constexpr int polya_forms_exponent = 25;
constexpr double standard_errors = 4.0;

std::string show(const bigfloat &x)
{
    return x.str(17);
}

bigfloat diff(const bigfloat &x, const char *printed)
{
    return abs(x - bigfloat::parse(printed, x.bits()));
}

struct constant_row {
    const char *family;
    const char *mean;
    const char *variance;
    double tolerance;
};

outcome check_constants(protection_mode mode, const std::vector<constant_row> &rows)
{
    outcome out;
    for (const auto &row : rows) {
        const auto family = make_family(row.family);
        const auto report = mode == protection_mode::root ? root_limits(family, {precision})
                                                          : vertex_limits(family, {precision});
        const bigfloat dm = diff(report.mean, row.mean);
        const bigfloat dv = diff(report.variance, row.variance);
        std::ostringstream note;
        note << row.family << ": mean " << show(report.mean) << " vs " << row.mean << ", variance "
             << show(report.variance) << " vs " << row.variance;
        out.require(dm.to_double() <= row.tolerance && dv.to_double() <= row.tolerance, note.str());
    }
    return out;
}

outcome criterion_1()
{
    return check_constants(protection_mode::root,
                           {
                               {"plane", "1.622971384715353", "0.7156950717833327", constant_tolerance},
                               {"motzkin", "2.546378248338912", "1.679348871220563", constant_tolerance},
                               {"incomplete-binary", "3.536472483525321", "3.763883442795153", constant_tolerance},
                               {"cayley", "2.286198316708012", "1.598472890455086", constant_tolerance},
                               {"complete-binary", "1.562988296151161", "0.372985688954940", constant_tolerance},
                               {"non-plane-binary", "1.707603060723366", "0.431102549825064", constant_tolerance},
                               {"polya", "2.154889671973873", "1.369993017502652", constant_tolerance},
                           });
}

outcome criterion_2()
{
    return check_constants(protection_mode::vertex,
                           {
                               {"plane", "0.7276492769137261", "0.8168993794836289", constant_tolerance},
                               {"motzkin", "1.307604625963334", "1.730614214799486", constant_tolerance},
                               {"incomplete-binary", "1.991819588602741", "3.638259051495130", constant_tolerance},
                               {"cayley", "1.186522661652180", "1.632206223956926", constant_tolerance},
                               {"complete-binary", "1.265686036087572", "0.226591112528581", constant_tolerance},
                               {"polya", "0.9953254987", "1.3818769746", coarse_tolerance},
                               {"non-plane-binary", "1.3124128299", "0.2676338724", coarse_tolerance},
                           });
}

outcome criterion_3()
{
    outcome out;
    auto digits = [](const bigfloat &x, const char *printed) {
        const bigfloat rel = diff(x, printed) / abs(x);
        return rel.is_zero() ? 1000.0 : -std::log10(rel.to_double());
    };
    const auto polya = find_singularity(make_family("polya"), precision);
    const auto npb = find_singularity(make_family("non-plane-binary"), precision);
    const struct {
        const char *name;
        const bigfloat &value;
        const char *printed;
    } rows[] = {
        {"polya rho", polya.rho, "0.3383218568992076951961126"},
        {"polya b", polya.puiseux1, "1.55949002037464088554226"},
        {"non-plane-binary rho", npb.rho, "0.4026975036714412909690453"},
        {"non-plane-binary a", npb.puiseux1, "2.8061602222420538943722824"},
    };
    for (const auto &row : rows) {
        const double d = digits(row.value, row.printed);
        std::ostringstream note;
        note << row.name << ": " << row.value.str(27) << " agrees to " << static_cast<int>(d) << " digits";
        out.require(d >= singularity_digits, note.str());
    }
    return out;
}

rational pow2(long e)
{
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(std::abs(e)));
    return e >= 0 ? rational(p) : rational(1) / rational(p);
}

outcome criterion_4()
{
    outcome out;
    const auto plane = exact_root_values(make_family("plane"), 20);
    mpz_class four(1);
    for (int i = 1; i <= 20; ++i) {
        four *= 4;
        out.require(plane[static_cast<std::size_t>(i)] == rational(3) / (rational(2) * (rational(four) + 2)),
                    "plane T_" + std::to_string(i));
    }
    const auto cb_family = make_family("complete-binary");
    const auto cb = exact_root_values(cb_family, 5);
    for (long k = 1; k <= 5; ++k) {
        out.require(cb[static_cast<std::size_t>(k)] == pow2(2 - (1L << k)),
                    "complete-binary T_" + std::to_string(k));
        out.require(exact_root_limit_probability(cb_family, static_cast<int>(k)) == pow2(k + 1 - (1L << k)),
                    "complete-binary P(X >= " + std::to_string(k) + ")");
    }
    return out;
}

outcome criterion_5()
{
    outcome out;
    const struct {
        const char *name;
        int n_max;
    } families[] = {{"plane", 10},           {"motzkin", 10}, {"incomplete-binary", 10},
                    {"complete-binary", 10}, {"polya", 12},   {"non-plane-binary", 12}};
    for (const auto &entry : families) {
        const auto family = make_family(entry.name);
        const auto order = static_cast<std::size_t>(entry.n_max);
        const auto tks = tk_sequence(family, 6, order + 1);
        std::vector<rational_series> sks;
        for (std::size_t k = 0; k <= 6; ++k) {
            sks.push_back(sk_from(family, tks[0], tks[k], order));
        }
        const int n_min = counts_internal_vertices(family) ? 0 : 1;
        for (int n = n_min; n <= entry.n_max; ++n) {
            const auto table = brute_force_stats(family, n, 6, entry.n_max);
            for (const auto &row : table.rows) {
                const auto k = static_cast<std::size_t>(row.k);
                const auto i = static_cast<std::size_t>(n);
                out.require(row.trees_ge_k == tks[k][i] && row.protected_total == sks[k][i],
                            std::string(entry.name) + " n=" + std::to_string(n) + " k=" + std::to_string(row.k));
            }
        }
    }
    const tree example = parse_tree("(()((())(()()))(()()))");
    out.require(protection_number(example) == 1, "labelled example tree root protection");
    out.require(protected_count(example, 1) == 5, "labelled example tree 1-protected count");
    out.require(protected_count(example, 2) == 1, "labelled example tree 2-protected count");
    return out;
}

outcome criterion_6()
{
    outcome out;
    const std::size_t order = 256;
    for (const auto &name : builtin_family_names()) {
        const auto family = make_family(name);
        const auto t = tree_series(family, order);
        out.require(defining_rhs(family, t) == t, name + " defining equation");
    }
    const auto polya = make_family("polya");
    const auto tks = tk_sequence(polya, 3, order + 1);
    const auto t = tks[0].with_order(order);
    for (int k = 1; k <= 3; ++k) {
        const auto s = sk_series(polya, k, order);
        rational_series sum = s;
        for (std::size_t i = 2; i <= order; ++i) {
            sum += substitute_power(s, i);
        }
        const auto residual = t * sum - s + tks[static_cast<std::size_t>(k)].with_order(order);
        out.require(residual == rational_series::zero(order), "polya S_" + std::to_string(k) + " equation");
    }
    return out;
}

outcome criterion_7()
{
    outcome out;
    limit_model model(make_family("polya"), {precision});
    const auto report = model.report(protection_mode::root);
    const bigfloat other = polya_alternative_mean(model);
    const bigfloat gap = abs(report.mean - other);
    out.require(gap <= ten_to_minus(polya_forms_exponent, model.bits()),
                "conditional-product " + show(report.mean) + " vs rho-product " + show(other));
    return out;
}

outcome criterion_8()
{
    outcome out;
    const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    const auto plane = empirical_protection({"plane", 1000, 10000, 20240601, threads});
    const double plane_z = (plane.root_mean - 1.622971384715353) / plane.root_se;
    std::ostringstream a;
    a << "plane root mean " << plane.root_mean << " (se " << plane.root_se << ", z " << plane_z << ")";
    out.require(std::abs(plane_z) <= standard_errors, a.str());

    const auto polya = empirical_protection({"polya", 500, 10000, 20240602, threads});
    const double polya_z = (polya.vertex_mean - 0.9953254987) / polya.vertex_se;
    std::ostringstream b;
    b << "polya vertex mean " << polya.vertex_mean << " (se " << polya.vertex_se << ", z " << polya_z << ")";
    out.require(std::abs(polya_z) <= standard_errors, b.str());
    return out;
}

outcome criterion_9()
{
    outcome out;
    for (const auto &name : builtin_family_names()) {
        const auto family = make_family(name);
        limit_model model(family, {precision});
        const bigfloat eps = ten_to_minus(precision - 2, model.bits());
        for (int k = 1; k <= 3; ++k) {
            const auto p40 = finite_probabilities(family, 40, k);
            const auto p80 = finite_probabilities(family, 80, k);
            const bigfloat root = model.root_probability(k);
            const bigfloat vertex = model.vertex_probability(k);
            // Equal to the limit at every n (a root is never a leaf) counts as
            // converged.
            const auto closer = [&](const rational &near, const rational &far, const bigfloat &limit) {
                const bigfloat a = abs(bigfloat(near, model.bits()) - limit);
                const bigfloat b = abs(bigfloat(far, model.bits()) - limit);
                return a < b || (a < eps && b < eps);
            };
            out.require(closer(p80.root, p40.root, root),
                        name + " root k=" + std::to_string(k) + " does not improve from n=40 to n=80");
            out.require(closer(p80.vertex, p40.vertex, vertex),
                        name + " vertex k=" + std::to_string(k) + " does not improve from n=40 to n=80");
        }
    }
    return out;
}

} // namespace

const std::vector<criterion> &acceptance()
{
    static const std::vector<criterion> all = {
        {1, "root-limit constants", criterion_1},
        {2, "random-vertex constants", criterion_2},
        {3, "singularity constants", criterion_3},
        {4, "closed-form identities", criterion_4},
        {5, "oracle equivalence", criterion_5},
        {6, "functional-equation residuals", criterion_6},
        {7, "polya mean cross-check", criterion_7},
        {8, "sampling statistics", criterion_8},
        {9, "finite-n convergence", criterion_9},
    };
    return all;
}

outcome run_guarded(const criterion &c, double *seconds)
{
    const auto start = std::chrono::steady_clock::now();
    outcome result;
    try {
        result = c.run();
    } catch (const std::exception &e) {
        result.require(false, std::string("exception: ") + e.what());
    }
    if (seconds != nullptr) {
        *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return result;
}

} // namespace protnum::checks

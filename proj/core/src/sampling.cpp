#include <protnum/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <thread>

#include <json.hpp>

#include <protnum/errors.hpp>

namespace protnum
{

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial)
{
    // SplitMix64 finaliser over seed + (trial + 1) * golden gamma.
    std::uint64_t x = seed + (trial + 1) * 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return std::mt19937_64(x);
}

double uniform01(std::mt19937_64 &rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace
{

// Scans lo, hi, lo+1, hi-1, ... and returns the first index at which the
// running weight passes `target`. Subtree-size distributions put their mass
// at both ends, so this stops early on average.
template <typename Weight>
int boustrophedon(int lo, int hi, double target, Weight &&weight)
{
    double acc = 0;
    int last = -1;
    bool front = true;
    while (lo <= hi) {
        const int s = front ? lo++ : hi--;
        front = !front;
        const double w = weight(s);
        if (w > 0) {
            acc += w;
            last = s;
            if (acc > target) {
                return s;
            }
        }
    }
    return last;
}

} // namespace

tree_sampler::tree_sampler(family_spec family, int max_size, int cap) : m_family(std::move(family)), m_max(max_size)
{
    if (max_size > cap) {
        throw resource_error("sampling size " + std::to_string(max_size) + " exceeds the cap " + std::to_string(cap));
    }
    if (max_size < 1) {
        throw impossible_size_error("sampling needs n >= 1");
    }
    const bool cayley = m_family.kind == family_kind::simply_generated && m_family.weights == weight_kind::exponential;
    if (cayley) {
        return;
    }
    m_r = find_singularity(m_family, 20).rho.to_double();
    const auto n = static_cast<std::size_t>(max_size);
    m_a.assign(n + 1, 0.0);
    m_r_pow.assign(n + 1, 1.0);
    for (std::size_t i = 1; i <= n; ++i) {
        m_r_pow[i] = m_r_pow[i - 1] * m_r;
    }

    switch (m_family.kind) {
    case family_kind::simply_generated:
        if (m_family.weights == weight_kind::geometric) {
            m_forest.assign(n + 1, 0.0);
            m_forest[0] = 1;
            for (std::size_t m = 1; m <= n; ++m) {
                m_a[m] = m_r * m_forest[m - 1];
                double f = 0;
                for (std::size_t s = 1; s <= m; ++s) {
                    f += m_a[s] * m_forest[m - s];
                }
                m_forest[m] = f;
            }
        } else {
            for (const auto &q : m_family.phi) {
                m_phi.push_back(q.get_d());
            }
            const auto d = m_phi.size() - 1;
            m_power.assign(d + 1, std::vector<double>(n + 1, 0.0));
            m_power[0][0] = 1;
            for (std::size_t m = 1; m <= n; ++m) {
                // p_j(m-1) needs a_1..a_{m-1}.
                for (std::size_t j = 1; j <= d; ++j) {
                    double p = 0;
                    for (std::size_t s = 1; s <= m - 1; ++s) {
                        p += m_a[s] * m_power[j - 1][m - 1 - s];
                    }
                    m_power[j][m - 1] = p;
                }
                double total = 0;
                for (std::size_t j = 0; j <= d; ++j) {
                    total += m_phi[j] * m_power[j][m - 1];
                }
                m_a[m] = m_r * total;
            }
            for (std::size_t j = 1; j <= d; ++j) {
                double p = 0;
                for (std::size_t s = 1; s <= n; ++s) {
                    p += m_a[s] * m_power[j - 1][n - s];
                }
                m_power[j][n] = p;
            }
        }
        break;
    case family_kind::polya:
        m_a[1] = m_r;
        for (std::size_t m = 2; m <= n; ++m) {
            double total = 0;
            for (std::size_t d = 1; d < m; ++d) {
                for (std::size_t j = 1; j * d <= m - 1; ++j) {
                    total += static_cast<double>(d) * m_a[d] * m_a[m - j * d] * m_r_pow[(j - 1) * d];
                }
            }
            m_a[m] = total / static_cast<double>(m - 1);
        }
        break;
    case family_kind::non_plane_binary:
    case family_kind::complete_binary:
        m_a[0] = 1;
        for (std::size_t m = 1; m <= n; ++m) {
            double total = 0;
            for (std::size_t s = 0; s <= m - 1; ++s) {
                total += m_a[s] * m_a[m - 1 - s];
            }
            if (m_family.kind == family_kind::non_plane_binary) {
                if ((m - 1) % 2 == 0) {
                    total += m_a[(m - 1) / 2] * m_r_pow[(m - 1) / 2];
                }
                total /= 2;
            }
            m_a[m] = m_r * total;
        }
        break;
    }
}

double tree_sampler::scaled_count(int n) const
{
    return m_a.at(static_cast<std::size_t>(n));
}

tree tree_sampler::sample(int n, std::mt19937_64 &rng) const
{
    if (n > m_max) {
        throw resource_error("size " + std::to_string(n) + " is above the sampler's table size");
    }
    const bool binary = counts_internal_vertices(m_family);
    if (n < (binary ? 0 : 1)) {
        throw impossible_size_error("no tree of size " + std::to_string(n));
    }
    if (m_family.kind == family_kind::simply_generated && m_family.weights == weight_kind::exponential) {
        return sample_cayley(n, rng);
    }
    if (!(m_a[static_cast<std::size_t>(n)] > 0)) {
        throw impossible_size_error("no tree of size " + std::to_string(n) + " in " + m_family.name);
    }
    switch (m_family.kind) {
    case family_kind::simply_generated:
        return sample_plane(n, rng);
    case family_kind::polya:
        return canonical(sample_polya(n, rng));
    case family_kind::non_plane_binary:
        return canonical(sample_binary(n, rng));
    default:
        return sample_binary(n, rng);
    }
}

tree tree_sampler::sample_plane(int n, std::mt19937_64 &rng) const
{
    tree node;
    auto m = static_cast<std::size_t>(n - 1);
    if (m_family.weights == weight_kind::geometric) {
        while (m > 0) {
            const int s = boustrophedon(1, static_cast<int>(m), uniform01(rng) * m_forest[m],
                                        [&](int s) { return m_a[s] * m_forest[m - s]; });
            node.children.push_back(sample_plane(s, rng));
            m -= static_cast<std::size_t>(s);
        }
        return node;
    }
    double total = 0;
    for (std::size_t j = 0; j < m_phi.size(); ++j) {
        total += m_phi[j] * m_power[j][m];
    }
    double target = uniform01(rng) * total;
    std::size_t degree = 0;
    for (std::size_t j = 0; j < m_phi.size(); ++j) {
        const double w = m_phi[j] * m_power[j][m];
        if (w > 0) {
            degree = j;
            if ((target -= w) < 0) {
                break;
            }
        }
    }
    for (std::size_t c = degree; c >= 1; --c) {
        const auto &rest = m_power[c - 1];
        const int s = boustrophedon(1, static_cast<int>(m - (c - 1)), uniform01(rng) * m_power[c][m],
                                    [&](int s) { return m_a[s] * rest[m - s]; });
        node.children.push_back(sample_plane(s, rng));
        m -= static_cast<std::size_t>(s);
    }
    return node;
}

tree tree_sampler::sample_polya(int n, std::mt19937_64 &rng) const
{
    // Each step splits off j copies of one subtree of size d.
    tree node;
    auto m = static_cast<std::size_t>(n);
    while (m > 1) {
        double target = uniform01(rng) * static_cast<double>(m - 1) * m_a[m];
        std::size_t pick_d = 0;
        std::size_t pick_j = 0;
        std::size_t lo = 1;
        std::size_t hi = m - 1;
        bool front = true;
        while (lo <= hi && target >= 0) {
            const std::size_t d = front ? lo++ : hi--;
            front = !front;
            for (std::size_t j = 1; j * d <= m - 1; ++j) {
                const double w = static_cast<double>(d) * m_a[d] * m_a[m - j * d] * m_r_pow[(j - 1) * d];
                if (w > 0) {
                    pick_d = d;
                    pick_j = j;
                    if ((target -= w) < 0) {
                        break;
                    }
                }
            }
        }
        const tree sub = sample_polya(static_cast<int>(pick_d), rng);
        for (std::size_t c = 0; c < pick_j; ++c) {
            node.children.push_back(sub);
        }
        m -= pick_j * pick_d;
    }
    return node;
}

tree tree_sampler::sample_binary(int n, std::mt19937_64 &rng) const
{
    if (n == 0) {
        return tree::leaf();
    }
    const auto m = static_cast<std::size_t>(n - 1);
    const bool unordered = m_family.kind == family_kind::non_plane_binary;
    const double total = m_a[m + 1] / m_r;
    double target = uniform01(rng) * total;
    tree node;
    if (unordered && m % 2 == 0) {
        const double diagonal = 0.5 * m_a[m / 2] * m_r_pow[m / 2];
        if (target < diagonal) {
            const tree sub = sample_binary(static_cast<int>(m / 2), rng);
            node.children = {sub, sub};
            return node;
        }
        target -= diagonal;
    }
    const double half = unordered ? 0.5 : 1.0;
    const int s = boustrophedon(0, static_cast<int>(m), target,
                                [&](int s) { return half * m_a[s] * m_a[m - static_cast<std::size_t>(s)]; });
    node.children.push_back(sample_binary(s, rng));
    node.children.push_back(sample_binary(static_cast<int>(m) - s, rng));
    return node;
}

tree tree_sampler::sample_cayley(int n, std::mt19937_64 &rng) const
{
    // Uniform labelled tree from a Pruefer code, then a uniform root.
    const auto size = static_cast<std::size_t>(n);
    std::vector<std::vector<std::size_t>> adj(size);
    if (size >= 2) {
        std::vector<std::size_t> code(size - 2);
        std::vector<std::size_t> degree(size, 1);
        for (auto &c : code) {
            c = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(size));
            ++degree[c];
        }
        std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> leaves;
        for (std::size_t v = 0; v < size; ++v) {
            if (degree[v] == 1) {
                leaves.push(v);
            }
        }
        for (const auto c : code) {
            const auto leaf = leaves.top();
            leaves.pop();
            adj[leaf].push_back(c);
            adj[c].push_back(leaf);
            if (--degree[c] == 1) {
                leaves.push(c);
            }
        }
        const auto u = leaves.top();
        leaves.pop();
        const auto v = leaves.top();
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    const auto root = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(size));
    std::function<tree(std::size_t, std::size_t)> build = [&](std::size_t v, std::size_t parent) {
        tree t;
        for (const auto w : adj[v]) {
            if (w != parent) {
                t.children.push_back(build(w, v));
            }
        }
        return t;
    };
    return build(root, size);
}

tree sample_tree(const family_spec &family, int n, std::mt19937_64 &rng)
{
    const tree_sampler sampler(family, n);
    return sampler.sample(n, rng);
}

namespace
{

struct tally {
    long long root_sum = 0;
    long long root_sq = 0;
    long long vertex_sum = 0;
    long long vertex_sq = 0;
    std::vector<long long> root_ge;
    std::vector<long long> vertex_ge;

    static void bump(std::vector<long long> &counts, int p)
    {
        if (counts.size() < static_cast<std::size_t>(p)) {
            counts.resize(static_cast<std::size_t>(p), 0);
        }
        for (int k = 1; k <= p; ++k) {
            ++counts[static_cast<std::size_t>(k) - 1];
        }
    }

    void merge(const tally &o)
    {
        root_sum += o.root_sum;
        root_sq += o.root_sq;
        vertex_sum += o.vertex_sum;
        vertex_sq += o.vertex_sq;
        root_ge.resize(std::max(root_ge.size(), o.root_ge.size()), 0);
        vertex_ge.resize(std::max(vertex_ge.size(), o.vertex_ge.size()), 0);
        for (std::size_t i = 0; i < o.root_ge.size(); ++i) {
            root_ge[i] += o.root_ge[i];
        }
        for (std::size_t i = 0; i < o.vertex_ge.size(); ++i) {
            vertex_ge[i] += o.vertex_ge[i];
        }
    }
};

void run_trials(const tree_sampler &sampler, const sample_config &config, long first, long last, tally &out)
{
    const bool internal_only = counts_internal_vertices(sampler.family());
    for (long i = first; i < last; ++i) {
        auto rng = trial_engine(config.seed, static_cast<std::uint64_t>(i));
        const tree t = sampler.sample(config.n, rng);
        const auto prot = vertex_protections(t);
        const int root = prot.front();
        out.root_sum += root;
        out.root_sq += static_cast<long long>(root) * root;
        tally::bump(out.root_ge, root);

        const double u = uniform01(rng);
        int chosen = 0;
        if (internal_only) {
            const auto internal = static_cast<std::size_t>(config.n);
            auto pick = std::min(internal - 1, static_cast<std::size_t>(u * static_cast<double>(internal)));
            for (int p : prot) {
                if (p >= 1 && pick-- == 0) {
                    chosen = p;
                    break;
                }
            }
        } else {
            const auto idx = std::min(prot.size() - 1, static_cast<std::size_t>(u * static_cast<double>(prot.size())));
            chosen = prot[idx];
        }
        out.vertex_sum += chosen;
        out.vertex_sq += static_cast<long long>(chosen) * chosen;
        tally::bump(out.vertex_ge, chosen);
    }
}

} // namespace

empirical_summary empirical_protection(const sample_config &config)
{
    if (config.trials < 1) {
        throw domain_error("trials must be at least 1");
    }
    if (config.n < 1) {
        throw impossible_size_error("sampling needs n >= 1");
    }
    const auto family = make_family(config.family);
    const tree_sampler sampler(family, config.n);

    const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials)));
    std::vector<tally> parts(threads);
    std::vector<std::thread> pool;
    const long chunk = (config.trials + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const long first = static_cast<long>(t) * chunk;
        const long last = std::min(config.trials, first + chunk);
        if (t + 1 == threads) {
            run_trials(sampler, config, first, last, parts[t]);
        } else {
            pool.emplace_back(run_trials, std::cref(sampler), std::cref(config), first, last, std::ref(parts[t]));
        }
    }
    for (auto &th : pool) {
        th.join();
    }
    tally all;
    for (const auto &p : parts) {
        all.merge(p);
    }

    empirical_summary out;
    out.family = family.name;
    out.n = config.n;
    out.trials = config.trials;
    out.seed = config.seed;
    const auto trials = static_cast<double>(config.trials);
    out.root_mean = static_cast<double>(all.root_sum) / trials;
    out.vertex_mean = static_cast<double>(all.vertex_sum) / trials;
    out.variance_defined = config.trials > 1;
    if (out.variance_defined) {
        auto se = [&](long long sum, long long sq) {
            const double s = static_cast<double>(sum);
            const double var = (static_cast<double>(sq) - s * s / trials) / (trials - 1);
            return std::sqrt(std::max(var, 0.0) / trials);
        };
        out.root_se = se(all.root_sum, all.root_sq);
        out.vertex_se = se(all.vertex_sum, all.vertex_sq);
    } else {
        out.root_se = std::numeric_limits<double>::quiet_NaN();
        out.vertex_se = std::numeric_limits<double>::quiet_NaN();
    }
    for (auto c : all.root_ge) {
        out.per_k_frequencies.push_back(static_cast<double>(c) / trials);
    }
    for (auto c : all.vertex_ge) {
        out.vertex_per_k_frequencies.push_back(static_cast<double>(c) / trials);
    }
    return out;
}

std::string to_json(const empirical_summary &summary)
{
    nlohmann::ordered_json j;
    j["family"] = summary.family;
    j["n"] = summary.n;
    j["trials"] = summary.trials;
    j["seed"] = summary.seed;
    j["root_mean"] = summary.root_mean;
    j["root_se"] = summary.variance_defined ? nlohmann::ordered_json(summary.root_se) : nlohmann::ordered_json();
    j["vertex_mean"] = summary.vertex_mean;
    j["vertex_se"] = summary.variance_defined ? nlohmann::ordered_json(summary.vertex_se) : nlohmann::ordered_json();
    j["variance_defined"] = summary.variance_defined;
    j["per_k_frequencies"] = summary.per_k_frequencies;
    j["vertex_per_k_frequencies"] = summary.vertex_per_k_frequencies;
    return j.dump(2);
}

} // namespace protnum

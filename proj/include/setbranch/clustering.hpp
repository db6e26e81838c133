#ifndef SETBRANCH_CLUSTERING_HPP
#define SETBRANCH_CLUSTERING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

namespace setbranch {

inline constexpr double kVarianceFloor = 1e-9;

struct KMeansResult {
    std::vector<std::size_t> assignment;  // cluster index per score
    std::vector<double> centroids;        // mean of each non-empty cluster
    double distortion = 0;                // sum of squared distances
};

// Lloyd iteration in one dimension from the given starting centroids. Each
// score goes to its nearest centroid (ties to the lower index); centroids are
// recomputed as means until the assignment stops changing or the iteration
// cap is hit. Empty clusters are dropped and the rest renumbered in order.
inline KMeansResult kmeans_1d(std::span<const double> scores, std::span<const double> initial_centroids,
                              std::size_t max_iterations = 200) {
    KMeansResult r;
    r.centroids.assign(initial_centroids.begin(), initial_centroids.end());
    std::vector<std::size_t> previous;
    for (std::size_t iter = 0; iter < max_iterations && !r.centroids.empty(); ++iter) {
        std::vector<std::size_t> assign(scores.size(), 0);
        for (std::size_t i = 0; i < scores.size(); ++i) {
            double best = std::abs(scores[i] - r.centroids[0]);
            for (std::size_t j = 1; j < r.centroids.size(); ++j) {
                const double d = std::abs(scores[i] - r.centroids[j]);
                if (d < best) {
                    best = d;
                    assign[i] = j;
                }
            }
        }
        std::vector<double> sum(r.centroids.size(), 0);
        std::vector<std::size_t> count(r.centroids.size(), 0);
        for (std::size_t i = 0; i < scores.size(); ++i) {
            sum[assign[i]] += scores[i];
            ++count[assign[i]];
        }
        std::vector<std::size_t> remap(r.centroids.size(), 0);
        std::vector<double> next;
        for (std::size_t j = 0; j < r.centroids.size(); ++j) {
            if (count[j] == 0) continue;
            remap[j] = next.size();
            next.push_back(sum[j] / static_cast<double>(count[j]));
        }
        for (auto& a : assign) a = remap[a];
        r.centroids = std::move(next);
        const bool stable = assign == previous;
        previous = std::move(assign);
        if (stable) break;
    }
    r.assignment = previous;
    r.distortion = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double d = scores[i] - r.centroids[r.assignment[i]];
        r.distortion += d * d;
    }
    return r;
}

namespace detail {

// Log-likelihood of a hard clustering under identical spherical Gaussians
// with shared variance RSS / (n - k), floored; minus (2k / 2) log n.
inline double bic_from_parts(std::span<const std::size_t> counts, double rss, std::size_t n) {
    const std::size_t k = counts.size();
    const double dn = static_cast<double>(n);
    double variance = n > k ? rss / static_cast<double>(n - k) : 0.0;
    if (variance < kVarianceFloor) variance = kVarianceFloor;
    double loglik = 0;
    for (std::size_t c : counts)
        if (c > 0) loglik += static_cast<double>(c) * std::log(static_cast<double>(c) / dn);
    loglik -= 0.5 * dn * std::log(2.0 * std::numbers::pi * variance);
    loglik -= rss / (2.0 * variance);
    return loglik - static_cast<double>(k) * std::log(dn);
}

}  // namespace detail

// Bayesian information criterion of a 1-D hard clustering (larger is better).
// Free parameters: k means, k - 1 mixing weights, one shared variance.
inline double bic(std::span<const double> scores, std::span<const std::size_t> assignment,
                  std::span<const double> centroids) {
    std::vector<std::size_t> counts(centroids.size(), 0);
    double rss = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        ++counts[assignment[i]];
        const double d = scores[i] - centroids[assignment[i]];
        rss += d * d;
    }
    return detail::bic_from_parts(counts, rss, scores.size());
}

// Ordered partition of score indices. clusters[0] has the highest mean.
struct Clustering {
    std::vector<std::vector<std::size_t>> clusters;  // indices into the input, ascending
    std::vector<double> centroids;                   // mean score per cluster
    double bic = 0;

    std::size_t k() const { return clusters.size(); }
};

enum class XMeansSearch {
    Auto,    // exact when the number of contiguous partitions fits the budget
    Exact,   // every contiguous partition into at most kmax clusters
    Greedy,  // repeated bisection, best partition seen
};

struct XMeansOptions {
    std::size_t kmax = 4;
    XMeansSearch search = XMeansSearch::Auto;
    std::uint64_t exact_budget = 200000;
};

namespace detail {

// Distinct scores in ascending order with multiplicities.
struct ScoreGroups {
    std::vector<double> value;
    std::vector<std::size_t> count;
    std::vector<std::size_t> group_of;  // per input index
};

inline ScoreGroups group_scores(std::span<const double> scores) {
    ScoreGroups g;
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    g.group_of.assign(scores.size(), 0);
    for (std::size_t i : order) {
        if (g.value.empty() || g.value.back() != scores[i]) {
            g.value.push_back(scores[i]);
            g.count.push_back(0);
        }
        ++g.count.back();
        g.group_of[i] = g.value.size() - 1;
    }
    return g;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > (std::uint64_t{1} << 62)) return r;
    }
    return r;
}

inline std::uint64_t contiguous_partitions(std::size_t groups, std::size_t kcap) {
    std::uint64_t total = 0;
    for (std::size_t k = 1; k <= kcap; ++k) {
        total += binomial(groups - 1, k - 1);
        if (total > (std::uint64_t{1} << 62)) break;
    }
    return total;
}

// Cluster label per group (ascending score order) -> Clustering in output order.
inline Clustering finish(std::span<const double> scores, const ScoreGroups& g,
                         const std::vector<std::size_t>& label_of_group, std::size_t k) {
    std::vector<std::size_t> assignment(scores.size());
    std::vector<double> sum(k, 0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        assignment[i] = label_of_group[g.group_of[i]];
        sum[assignment[i]] += scores[i];
        ++count[assignment[i]];
    }
    std::vector<double> means(k);
    for (std::size_t j = 0; j < k; ++j) means[j] = sum[j] / static_cast<double>(count[j]);

    Clustering out;
    out.bic = bic(scores, assignment, means);
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < scores.size(); ++i) members[assignment[i]].push_back(i);
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (means[a] != means[b]) return means[a] > means[b];
        return members[a].front() < members[b].front();
    });
    for (std::size_t j : order) {
        out.clusters.push_back(std::move(members[j]));
        out.centroids.push_back(means[j]);
    }
    return out;
}

inline Clustering xmeans_exact(std::span<const double> scores, const ScoreGroups& g, std::size_t kcap) {
    const std::size_t m = g.value.size();
    const std::size_t n = scores.size();
    // rss[i][j]: squared deviation of groups i..j-1 around their mean, built
    // incrementally so runs of equal scores give exactly zero.
    std::vector<double> rss((m + 1) * (m + 1), 0);
    std::vector<std::size_t> cnt((m + 1) * (m + 1), 0);
    for (std::size_t i = 0; i < m; ++i) {
        double mean = 0;
        double m2 = 0;
        std::size_t c = 0;
        for (std::size_t j = i; j < m; ++j) {
            const auto add = static_cast<double>(g.count[j]);
            const double delta = g.value[j] - mean;
            const double total = static_cast<double>(c) + add;
            mean += delta * add / total;
            m2 += delta * delta * static_cast<double>(c) * add / total;
            c += g.count[j];
            rss[i * (m + 1) + j + 1] = m2;
            cnt[i * (m + 1) + j + 1] = c;
        }
    }

    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_bounds;
    std::vector<std::size_t> counts;
    for (std::size_t k = 1; k <= kcap; ++k) {
        // bounds[0] = 0 < bounds[1] < ... < bounds[k] = m
        std::vector<std::size_t> bounds(k + 1);
        for (std::size_t j = 0; j < k; ++j) bounds[j] = j;
        bounds[k] = m;
        for (;;) {
            double total = 0;
            counts.assign(k, 0);
            for (std::size_t j = 0; j < k; ++j) {
                total += rss[bounds[j] * (m + 1) + bounds[j + 1]];
                counts[j] = cnt[bounds[j] * (m + 1) + bounds[j + 1]];
            }
            const double value = bic_from_parts(counts, total, n);
            if (value > best) {
                best = value;
                best_bounds = bounds;
            }
            // next combination of interior bounds, lexicographic
            std::size_t j = k;
            while (j > 1) {
                --j;
                if (bounds[j] < m - (k - j)) break;
                if (j == 1) {
                    j = 0;
                    break;
                }
            }
            if (j == 0 || k == 1) break;
            ++bounds[j];
            for (std::size_t t = j + 1; t < k; ++t) bounds[t] = bounds[t - 1] + 1;
        }
    }

    const std::size_t k = best_bounds.size() - 1;
    std::vector<std::size_t> label(m, 0);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t t = best_bounds[j]; t < best_bounds[j + 1]; ++t) label[t] = j;
    return finish(scores, g, label, k);
}

inline Clustering xmeans_greedy(std::span<const double> scores, const ScoreGroups& g, std::size_t kmax) {
    // Bisecting search over runs of distinct scores. Each round splits one
    // cluster at its least-RSS cut, picking the cluster whose split gives the
    // best global BIC. Rounds continue to kmax; the best partition seen wins.
    const std::size_t m = g.value.size();
    const std::size_t n = scores.size();
    std::vector<double> s1(m + 1, 0), s2(m + 1, 0);
    std::vector<std::size_t> c(m + 1, 0);
    for (std::size_t t = 0; t < m; ++t) {
        const auto w = static_cast<double>(g.count[t]);
        s1[t + 1] = s1[t] + w * g.value[t];
        s2[t + 1] = s2[t] + w * g.value[t] * g.value[t];
        c[t + 1] = c[t] + g.count[t];
    }
    auto rss = [&](std::size_t a, std::size_t b) {
        if (b - a <= 1) return 0.0;
        const double sum = s1[b] - s1[a];
        return std::max(0.0, s2[b] - s2[a] - sum * sum / static_cast<double>(c[b] - c[a]));
    };
    auto score = [&](const std::vector<std::size_t>& bounds) {
        std::vector<std::size_t> counts;
        double total = 0;
        for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
            counts.push_back(c[bounds[j + 1]] - c[bounds[j]]);
            total += rss(bounds[j], bounds[j + 1]);
        }
        return bic_from_parts(counts, total, n);
    };

    std::vector<std::size_t> bounds{0, m};
    std::vector<std::size_t> best_bounds = bounds;
    double best = score(bounds);
    while (bounds.size() - 1 < kmax) {
        std::vector<std::size_t> round_best;
        double round_value = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
            const std::size_t a = bounds[j], b = bounds[j + 1];
            if (b - a < 2) continue;
            std::size_t cut = a + 1;
            double least = std::numeric_limits<double>::infinity();
            for (std::size_t t = a + 1; t < b; ++t) {
                const double r = rss(a, t) + rss(t, b);
                if (r < least) {
                    least = r;
                    cut = t;
                }
            }
            std::vector<std::size_t> next = bounds;
            next.insert(next.begin() + static_cast<std::ptrdiff_t>(j) + 1, cut);
            const double v = score(next);
            if (v > round_value) {
                round_value = v;
                round_best = std::move(next);
            }
        }
        if (round_best.empty()) break;
        bounds = std::move(round_best);
        if (round_value > best) {
            best = round_value;
            best_bounds = bounds;
        }
    }

    const std::size_t k = best_bounds.size() - 1;
    std::vector<std::size_t> label(m, 0);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t t = best_bounds[j]; t < best_bounds[j + 1]; ++t) label[t] = j;
    return finish(scores, g, label, k);
}

}  // namespace detail

// x-means over one score dimension. Starts from a single cluster and keeps a
// split only when it raises the BIC. Clusters come back as contiguous score
// ranges with equal scores never separated, ordered by descending mean.
//
// The exact search scores every contiguous partition of the distinct scores
// into at most kmax parts and keeps the best BIC (smallest k on ties). The
// greedy search bisects one cluster per round at its least-RSS cut and keeps
// the best partition seen on the way to kmax.
inline Clustering xmeans(std::span<const double> scores, const XMeansOptions& options = {}) {
    if (scores.empty()) return {};
    const auto groups = detail::group_scores(scores);
    const std::size_t kcap = std::max<std::size_t>(1, std::min(options.kmax, groups.value.size()));
    bool exact = options.search == XMeansSearch::Exact;
    if (options.search == XMeansSearch::Auto)
        exact = detail::contiguous_partitions(groups.value.size(), kcap) <= options.exact_budget;
    if (kcap == 1) {
        const std::vector<std::size_t> label(groups.value.size(), 0);
        return detail::finish(scores, groups, label, 1);
    }
    return exact ? detail::xmeans_exact(scores, groups, kcap) : detail::xmeans_greedy(scores, groups, kcap);
}

}  // namespace setbranch

#endif

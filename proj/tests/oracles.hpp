#pragma once

// Reference computations used by the unit and acceptance tests. They are
// written independently of src/ and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

inline double threshold(const std::vector<double>& p, double mu, double delta, int bo)
{
    long double sum = 0.0L;
    for (double v : p) {
        sum += std::sqrt(static_cast<long double>(v) * v);
    }
    long double denom = 1.0L;
    for (int i = 0; i < bo; ++i) {
        denom *= delta;
    }
    return static_cast<double>(mu * sum / (denom * p.size()));
}

struct Lambdas {
    double csma_miss = 1.0, gts_miss = 1.0, csma_hit = 1.0, gts_hit = 1.0;
};

inline double rate_update(double p, int nc, int ng, const Lambdas& l, int cap = 16)
{
    double v = p;
    if (nc == 0) v -= l.csma_miss / p;
    if (ng == 0) v -= l.gts_miss / p;
    if (nc > 0) v += l.csma_hit / p * std::exp2(std::min(nc, cap));
    if (ng > 0) v += l.gts_hit / p * std::exp2(std::min(ng, cap));
    return v;
}

struct Cand {
    std::uint32_t device;
    int state; // 0 low, 1 middle, 2 high
    double priority;
};

// Exhaustive search: among all subsets of eligible candidates that fit in
// `free_slots`, pick the one whose members, listed in descending priority
// with ascending id tie-break, compare lexicographically best. Returns the
// granted device ids in that order.
inline std::vector<std::uint32_t> best_grants(const std::vector<Cand>& cands, const double thr[3],
                                              int free_slots)
{
    std::vector<Cand> el;
    for (const auto& c : cands) {
        if (c.priority >= thr[c.state]) el.push_back(c);
    }
    auto better = [](const Cand& a, const Cand& b) {
        return a.priority != b.priority ? a.priority > b.priority : a.device < b.device;
    };
    const std::size_t n = el.size();
    std::vector<Cand> best;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<Cand> pick;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << i)) pick.push_back(el[i]);
        }
        if (static_cast<int>(pick.size()) > free_slots) continue;
        std::sort(pick.begin(), pick.end(), better);
        // larger sets win; among equal sizes the lexicographically better list wins
        bool wins = pick.size() > best.size();
        if (!wins && pick.size() == best.size()) {
            for (std::size_t i = 0; i < pick.size(); ++i) {
                if (better(pick[i], best[i])) { wins = true; break; }
                if (better(best[i], pick[i])) break;
            }
        }
        if (wins) best = pick;
    }
    std::vector<std::uint32_t> ids;
    for (const auto& c : best) ids.push_back(c.device);
    return ids;
}

inline double mean(const std::vector<double>& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double stderr_of_mean(const std::vector<double>& v)
{
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

inline std::vector<double> ranks(const std::vector<double>& v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (i + j) / 2.0 + 1.0;
        i = j + 1;
    }
    return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y)
{
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double mx = mean(rx), my = mean(ry);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return (sxx == 0 || syy == 0) ? 0.0 : sxy / std::sqrt(sxx * syy);
}

inline double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double mx = mean(x), my = mean(y);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace oracle

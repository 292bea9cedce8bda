#include "jedi/matching.hpp"

#include <algorithm>
#include <cstdlib>

namespace jedi {

std::int64_t sed_matching(const MatchCosts& c) {
    const std::int64_t l = c.l, m = c.m;
    std::vector<std::int64_t> prev(static_cast<std::size_t>(m) + 1), cur(prev.size());
    prev[0] = 0;
    for (std::int64_t j = 1; j <= m; ++j) prev[static_cast<std::size_t>(j)] =
        prev[static_cast<std::size_t>(j - 1)] + c.ins[static_cast<std::size_t>(j - 1)];
    for (std::int64_t i = 1; i <= l; ++i) {
        cur[0] = prev[0] + c.del[static_cast<std::size_t>(i - 1)];
        for (std::int64_t j = 1; j <= m; ++j) {
            std::int64_t best = prev[static_cast<std::size_t>(j)] + c.del[static_cast<std::size_t>(i - 1)];
            best = std::min(best, cur[static_cast<std::size_t>(j - 1)] + c.ins[static_cast<std::size_t>(j - 1)]);
            best = std::min(best, prev[static_cast<std::size_t>(j - 1)] + c.sub_at(i - 1, j - 1));
            cur[static_cast<std::size_t>(j)] = best;
        }
        std::swap(prev, cur);
    }
    return prev[static_cast<std::size_t>(m)];
}

namespace {

// Min-cost perfect matching on an n*n cost matrix (potentials + shortest
// augmenting paths, O(n^3)).
std::int64_t hungarian(const std::vector<std::int64_t>& a, std::int64_t n) {
    std::vector<std::int64_t> u(static_cast<std::size_t>(n) + 1, 0),
        v(static_cast<std::size_t>(n) + 1, 0), p(static_cast<std::size_t>(n) + 1, 0),
        way(static_cast<std::size_t>(n) + 1, 0);
    for (std::int64_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::int64_t j0 = 0;
        std::vector<std::int64_t> minv(static_cast<std::size_t>(n) + 1, kInfCost);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            std::int64_t i0 = p[static_cast<std::size_t>(j0)], delta = kInfCost, j1 = 0;
            for (std::int64_t j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                std::int64_t cur = a[static_cast<std::size_t>((i0 - 1) * n + (j - 1))] -
                                   u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (std::int64_t j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            std::int64_t j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::int64_t cost = 0;
    for (std::int64_t j = 1; j <= n; ++j)
        cost += a[static_cast<std::size_t>((p[static_cast<std::size_t>(j)] - 1) * n + (j - 1))];
    return cost;
}

} // namespace

std::int64_t bpm_matching(const MatchCosts& c) {
    const std::int64_t l = c.l, m = c.m, n = std::max(l, m);
    if (n == 0) return 0;
    // Pad to square: unmatched-left columns cost del(i), unmatched-right rows
    // cost ins(j); a real cell may also stand for "both unmatched", hence the
    // min with del+ins. Pad-pad cells are free.
    std::vector<std::int64_t> a(static_cast<std::size_t>(n * n), 0);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            std::int64_t cost;
            if (i < l && j < m)
                cost = std::min(c.sub_at(i, j),
                                c.del[static_cast<std::size_t>(i)] + c.ins[static_cast<std::size_t>(j)]);
            else if (i < l)
                cost = c.del[static_cast<std::size_t>(i)];
            else if (j < m)
                cost = c.ins[static_cast<std::size_t>(j)];
            else
                cost = 0;
            a[static_cast<std::size_t>(i * n + j)] = cost;
        }
    return hungarian(a, n);
}

GreedyResult greedy_matching_bound(const MatchCosts& c) {
    const std::int64_t l = c.l, m = c.m;
    if (l == 0 || m == 0) {
        std::int64_t s = 0;
        for (std::int64_t x : c.del) s += x;
        for (std::int64_t x : c.ins) s += x;
        return {s, true, s};
    }
    if (l == 1 && m == 1) {
        std::int64_t exact = std::min(c.sub_at(0, 0), c.del[0] + c.ins[0]);
        std::int64_t bound = std::max(std::min(c.sub_at(0, 0), c.del[0]),
                                      std::min(c.sub_at(0, 0), c.ins[0]));
        return {bound, true, exact};
    }

    std::vector<std::int64_t> left_pick(static_cast<std::size_t>(l), -1),
        right_pick(static_cast<std::size_t>(m), -1);
    std::int64_t sum_l = 0, sum_r = 0;
    for (std::int64_t i = 0; i < l; ++i) {
        std::int64_t best = c.del[static_cast<std::size_t>(i)];
        for (std::int64_t j = 0; j < m; ++j) {
            std::int64_t s = c.sub_at(i, j);
            if (s < best || (s == best && left_pick[static_cast<std::size_t>(i)] == -1)) {
                best = s;
                left_pick[static_cast<std::size_t>(i)] = j;
            }
        }
        sum_l += best;
    }
    for (std::int64_t j = 0; j < m; ++j) {
        std::int64_t best = c.ins[static_cast<std::size_t>(j)];
        for (std::int64_t i = 0; i < l; ++i) {
            std::int64_t s = c.sub_at(i, j);
            if (s < best || (s == best && right_pick[static_cast<std::size_t>(j)] == -1)) {
                best = s;
                right_pick[static_cast<std::size_t>(j)] = i;
            }
        }
        sum_r += best;
    }

    GreedyResult r;
    r.bound = std::max(sum_l, sum_r);

    // A side's picks are a feasible matching when the non-deletion picks are
    // injective and every child of the other side is picked; the pick sum is
    // then sandwiched between the bound and a feasible cost, so it is exact.
    auto feasible = [](const std::vector<std::int64_t>& pick, std::int64_t other) {
        std::vector<char> hit(static_cast<std::size_t>(other), 0);
        std::int64_t covered = 0;
        for (std::int64_t p : pick) {
            if (p == -1) continue;
            if (hit[static_cast<std::size_t>(p)]) return false;
            hit[static_cast<std::size_t>(p)] = 1;
            ++covered;
        }
        return covered == other;
    };
    if (sum_l >= sum_r && feasible(left_pick, m)) {
        r.exact = true;
        r.value = sum_l;
    } else if (sum_r >= sum_l && feasible(right_pick, l)) {
        r.exact = true;
        r.value = sum_r;
    }
    return r;
}

std::int64_t aggregate_size_bound(const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b) {
    const std::vector<std::int64_t>* lo = &a;
    const std::vector<std::int64_t>* hi = &b;
    if (lo->size() > hi->size()) std::swap(lo, hi);
    std::size_t k = hi->size() - lo->size();
    std::int64_t spill = (*hi)[k];
    return std::llabs(lo->back() - hi->back() + spill) + spill;
}

} // namespace jedi

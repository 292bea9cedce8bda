#include "jedi/jedi_order.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <stdexcept>

namespace jedi {

namespace {

void require_sorted(const JsonTree& t1, const JsonTree& t2) {
    if (!t1.key_sorted() || !t2.key_sorted())
        throw std::invalid_argument("ordered distance requires key-sorted trees");
}

// ---------------------------------------------------------------------------
// Quadratic reference

// Cell selects the table element type; int32 keeps the 16k-node tables near
// 2 GB. All arithmetic runs in int64 locals; stored values are bounded by
// |T1|+|T2| so the narrowing is lossless.
template <class Cell>
class OrderRun {
public:
    OrderRun(const JsonTree& a, const JsonTree& b)
        : t1_(a), t2_(b), n1_(a.size()), n2_(b.size()),
          tree_(static_cast<std::size_t>((n1_ + 1) * (n2_ + 1))),
          forest_(static_cast<std::size_t>((n1_ + 1) * (n2_ + 1))) {}

    std::int64_t run() {
        std::vector<std::int64_t> sed_prev, sed_cur;
        for (std::int64_t p1 = 1; p1 <= n1_; ++p1) {
            NodeId v = t1_.node_at_post(p1);
            const auto& cv = t1_.node(v).children;
            for (std::int64_t p2 = 1; p2 <= n2_; ++p2) {
                NodeId w = t2_.node_at_post(p2);
                const auto& cw = t2_.node(w).children;

                std::int64_t ins_f = kInfCost, ins_t = kInfCost;
                for (NodeId c2 : cw) {
                    std::int64_t pc = t2_.post(c2), sz = t2_.subtree_size(c2);
                    ins_f = std::min(ins_f, forest_at(p1, pc) - (sz - 1));
                    ins_t = std::min(ins_t, tree_at(p1, pc) - sz);
                }
                if (!cw.empty()) {
                    ins_f += t2_.subtree_size(w) - 1;
                    ins_t += t2_.subtree_size(w);
                }
                std::int64_t del_f = kInfCost, del_t = kInfCost;
                for (NodeId c1 : cv) {
                    std::int64_t pc = t1_.post(c1), sz = t1_.subtree_size(c1);
                    del_f = std::min(del_f, forest_at(pc, p2) - (sz - 1));
                    del_t = std::min(del_t, tree_at(pc, p2) - sz);
                }
                if (!cv.empty()) {
                    del_f += t1_.subtree_size(v) - 1;
                    del_t += t1_.subtree_size(v);
                }

                std::int64_t ren_f;
                if (cv.empty() && cw.empty()) ren_f = 0;
                else if (cv.empty()) ren_f = t2_.subtree_size(w) - 1;
                else if (cw.empty()) ren_f = t1_.subtree_size(v) - 1;
                else ren_f = sed_children(cv, cw, sed_prev, sed_cur);

                std::int64_t df = std::min({ins_f, del_f, ren_f});
                std::int64_t dt =
                    std::min({ins_t, del_t, df + node_align_cost(t1_, v, t2_, w)});
                forest_ref(p1, p2) = static_cast<Cell>(df);
                tree_ref(p1, p2) = static_cast<Cell>(dt);
            }
        }
        return tree_at(n1_, n2_);
    }

    DistanceTables tables() && {
        DistanceTables out;
        out.n1 = n1_;
        out.n2 = n2_;
        out.tree.assign(tree_.begin(), tree_.end());
        out.forest.assign(forest_.begin(), forest_.end());
        return out;
    }

private:
    const JsonTree& t1_;
    const JsonTree& t2_;
    std::int64_t n1_, n2_;
    std::vector<Cell> tree_, forest_;

    std::int64_t tree_at(std::int64_t p1, std::int64_t p2) const {
        return tree_[static_cast<std::size_t>(p1 * (n2_ + 1) + p2)];
    }
    std::int64_t forest_at(std::int64_t p1, std::int64_t p2) const {
        return forest_[static_cast<std::size_t>(p1 * (n2_ + 1) + p2)];
    }
    Cell& tree_ref(std::int64_t p1, std::int64_t p2) {
        return tree_[static_cast<std::size_t>(p1 * (n2_ + 1) + p2)];
    }
    Cell& forest_ref(std::int64_t p1, std::int64_t p2) {
        return forest_[static_cast<std::size_t>(p1 * (n2_ + 1) + p2)];
    }

    std::int64_t sed_children(const std::vector<NodeId>& cv, const std::vector<NodeId>& cw,
                              std::vector<std::int64_t>& prev, std::vector<std::int64_t>& cur) {
        const std::size_t m = cw.size();
        prev.resize(m + 1);
        cur.resize(m + 1);
        prev[0] = 0;
        for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + t2_.subtree_size(cw[j - 1]);
        for (std::size_t i = 1; i <= cv.size(); ++i) {
            std::int64_t dsz = t1_.subtree_size(cv[i - 1]);
            std::int64_t pc1 = t1_.post(cv[i - 1]);
            cur[0] = prev[0] + dsz;
            for (std::size_t j = 1; j <= m; ++j) {
                std::int64_t best = prev[j] + dsz;
                best = std::min(best, cur[j - 1] + t2_.subtree_size(cw[j - 1]));
                best = std::min(best, prev[j - 1] + tree_at(pc1, t2_.post(cw[j - 1])));
                cur[j] = best;
            }
            std::swap(prev, cur);
        }
        return prev[m];
    }
};

} // namespace

std::int64_t jedi_order_exact(const JsonTree& t1, const JsonTree& t2) {
    require_sorted(t1, t2);
    if (t1.size() + t2.size() >= (std::int64_t{1} << 31) / 4)
        throw std::invalid_argument("input too large for the quadratic reference");
    return OrderRun<std::int32_t>(t1, t2).run();
}

DistanceTables jedi_order_tables(const JsonTree& t1, const JsonTree& t2) {
    require_sorted(t1, t2);
    OrderRun<std::int64_t> run(t1, t2);
    run.run();
    return std::move(run).tables();
}

// ---------------------------------------------------------------------------
// Banded filter

namespace {

// Contiguous slice of a row, indexed by postorder position; reads outside the
// window are +inf (out-of-band cells).
struct Band {
    std::int64_t lo = 1, hi = 0;
    std::vector<std::int64_t> cells;

    void reset(std::int64_t l, std::int64_t h) {
        lo = l;
        hi = h;
        cells.assign(h >= l ? static_cast<std::size_t>(h - l + 1) : 0, kInfCost);
    }
    std::int64_t get(std::int64_t p) const {
        return (p < lo || p > hi) ? kInfCost : cells[static_cast<std::size_t>(p - lo)];
    }
    void set(std::int64_t p, std::int64_t v) {
        if (p >= lo && p <= hi) cells[static_cast<std::size_t>(p - lo)] = v;
    }
    void min_in(std::int64_t p, std::int64_t v) {
        if (p >= lo && p <= hi && v < cells[static_cast<std::size_t>(p - lo)])
            cells[static_cast<std::size_t>(p - lo)] = v;
    }
};

// Cost state of one internal left-tree node, alive from its favorable child's
// processing until its own.
struct NodeState {
    Band del_f, del_t; // windows centered on the node's own postorder
    Band dt_fc;        // window centered on the favorable child's postorder
    Band sed_prev, sed_cur;
    std::int64_t sed_prev_eps = 0, sed_cur_eps = 0;
};

struct FilterRun {
    const JsonTree& t1;
    const JsonTree& t2;
    std::int64_t tau;
    JofilterMetrics* metrics;
    std::int64_t n1, n2;

    // right tree, indexed by postorder position (1-based)
    std::vector<std::int64_t> w_size, w_parent_post, w_left_sib_post, w_sed_eps;
    std::vector<NodeId> w_id;

    std::vector<std::unique_ptr<NodeState>> states;
    std::int64_t live = 0;

    FilterRun(const JsonTree& a, const JsonTree& b, std::int64_t k, JofilterMetrics* m)
        : t1(a), t2(b), tau(k), metrics(m), n1(a.size()), n2(b.size()) {}

    std::int64_t lo_for(std::int64_t p) const { return std::max<std::int64_t>(1, p - tau); }
    std::int64_t hi_for(std::int64_t p) const { return std::min(n2, p + tau); }

    void prep_right() {
        std::size_t n = static_cast<std::size_t>(n2) + 1;
        w_size.assign(n, 0);
        w_parent_post.assign(n, 0);
        w_left_sib_post.assign(n, 0);
        w_sed_eps.assign(n, 0);
        w_id.assign(n, -1);
        for (std::int64_t p = 1; p <= n2; ++p) {
            NodeId w = t2.node_at_post(p);
            w_id[static_cast<std::size_t>(p)] = w;
            w_size[static_cast<std::size_t>(p)] = t2.subtree_size(w);
            NodeId q = t2.node(w).parent;
            if (q != -1) {
                w_parent_post[static_cast<std::size_t>(p)] = t2.post(q);
                std::int64_t ci = t2.child_index(w);
                const auto& sib = t2.node(q).children;
                std::int64_t eps = 0;
                for (std::int64_t k2 = 0; k2 <= ci; ++k2)
                    eps += t2.subtree_size(sib[static_cast<std::size_t>(k2)]);
                w_sed_eps[static_cast<std::size_t>(p)] = eps;
                if (ci > 0)
                    w_left_sib_post[static_cast<std::size_t>(p)] =
                        t2.post(sib[static_cast<std::size_t>(ci - 1)]);
            }
        }
    }

    NodeState* ensure_state(NodeId p) {
        auto& slot = states[static_cast<std::size_t>(p)];
        if (!slot) {
            slot = std::make_unique<NodeState>();
            std::int64_t pp = t1.post(p);
            slot->del_f.reset(lo_for(pp), hi_for(pp));
            slot->del_t.reset(lo_for(pp), hi_for(pp));
            std::int64_t pf = t1.post(t1.favorable_child(p));
            slot->dt_fc.reset(lo_for(pf), hi_for(pf));
            ++live;
            if (metrics && live > metrics->peak_states) metrics->peak_states = live;
        }
        return slot.get();
    }

    void release_state(NodeId v) {
        auto& slot = states[static_cast<std::size_t>(v)];
        if (slot) {
            slot.reset();
            --live;
        }
    }

    bool run() {
        prep_right();
        states.resize(static_cast<std::size_t>(n1));
        Band row_df, row_dt, pend_f, pend_t;
        std::int64_t answer = kInfCost;

        for (NodeId v : favorable_child_order(t1)) {
            const std::int64_t pv = t1.post(v);
            const std::int64_t lo = lo_for(pv), hi = hi_for(pv);
            row_df.reset(lo, hi);
            row_dt.reset(lo, hi);
            pend_f.reset(lo, hi);
            pend_t.reset(lo, hi);

            NodeState* sv = states[static_cast<std::size_t>(v)].get();
            const NodeId parent = t1.node(v).parent;
            const bool has_parent = parent != -1;
            const bool v_leaf = t1.node(v).children.empty();
            const std::int64_t v_size = t1.subtree_size(v);
            bool is_fav = false, leftmost = false, build_row = false;
            NodeState* sp = nullptr;
            if (has_parent) {
                is_fav = t1.favorable_child(parent) == v;
                leftmost = t1.child_index(v) == 0;
                build_row = leftmost || !is_fav;
                sp = ensure_state(parent);
                if (build_row) {
                    sp->sed_cur.reset(lo, hi);
                    sp->sed_cur_eps = (leftmost ? 0 : sp->sed_prev_eps) + v_size;
                }
            }

            for (std::int64_t pw = lo; pw <= hi; ++pw) {
                const std::int64_t wsz = w_size[static_cast<std::size_t>(pw)];
                const NodeId w = w_id[static_cast<std::size_t>(pw)];
                const bool w_leaf = wsz == 1;

                std::int64_t ins_f = kInfCost, ins_t = kInfCost;
                if (!w_leaf) {
                    std::int64_t pf2 = pend_f.get(pw), pt2 = pend_t.get(pw);
                    if (pf2 < kInfCost) ins_f = (wsz - 1) + pf2;
                    if (pt2 < kInfCost) ins_t = wsz + pt2;
                }
                const std::int64_t del_f = sv ? sv->del_f.get(pw) : kInfCost;
                const std::int64_t del_t = sv ? sv->del_t.get(pw) : kInfCost;

                std::int64_t ren_f;
                if (v_leaf) ren_f = w_leaf ? 0 : wsz - 1;
                else if (w_leaf) ren_f = v_size - 1;
                else ren_f = sv->sed_prev.get(pw - 1);

                const std::int64_t df = std::min({ins_f, del_f, ren_f});
                const std::int64_t dt =
                    std::min({ins_t, del_t, sat_add(df, node_align_cost(t1, v, t2, w))});
                row_df.set(pw, df);
                row_dt.set(pw, dt);
                if (metrics) ++metrics->cells;

                const std::int64_t qp = w_parent_post[static_cast<std::size_t>(pw)];
                if (qp != 0) {
                    if (df < kInfCost) pend_f.min_in(qp, df - (wsz - 1));
                    if (dt < kInfCost) pend_t.min_in(qp, dt - wsz);
                }

                if (has_parent) {
                    const std::int64_t p_size = t1.subtree_size(parent);
                    if (df < kInfCost) sp->del_f.min_in(pw, (p_size - 1) + df - (v_size - 1));
                    if (dt < kInfCost) sp->del_t.min_in(pw, p_size + dt - v_size);
                    if (is_fav) sp->dt_fc.set(pw, dt);
                    if (build_row && qp != 0) {
                        const std::int64_t ls = w_left_sib_post[static_cast<std::size_t>(pw)];
                        const std::int64_t left_val =
                            ls != 0 ? sp->sed_cur.get(ls) : sp->sed_cur_eps;
                        const std::int64_t above_val =
                            leftmost ? w_sed_eps[static_cast<std::size_t>(pw)]
                                     : sp->sed_prev.get(pw);
                        const std::int64_t above_left =
                            ls != 0 ? (leftmost ? w_sed_eps[static_cast<std::size_t>(ls)]
                                                : sp->sed_prev.get(ls))
                                    : (leftmost ? 0 : sp->sed_prev_eps);
                        const std::int64_t cell =
                            std::min({sat_add(left_val, wsz), sat_add(above_val, v_size),
                                      sat_add(above_left, dt)});
                        sp->sed_cur.set(pw, cell);
                        if (metrics) ++metrics->cells;
                    }
                }
            }

            if (has_parent) {
                const NodeId fc = t1.favorable_child(parent);
                if (build_row && t1.child_index(v) + 1 == t1.child_index(fc)) {
                    splice_favorable_row(sp, fc);
                } else if (build_row) {
                    sp->sed_prev = std::move(sp->sed_cur);
                    sp->sed_prev_eps = sp->sed_cur_eps;
                }
            }
            release_state(v);
            if (v == t1.root()) answer = row_dt.get(n2);
        }
        return answer <= tau;
    }

    // Rebuilds the row the favorable child would have contributed, over the
    // favorable child's own window, from the row just completed and the tree
    // distances recorded while the favorable child was processed. Always into
    // a fresh buffer: the cells read and written overlap.
    void splice_favorable_row(NodeState* sp, NodeId fc) {
        const std::int64_t pfc = t1.post(fc);
        const std::int64_t fc_size = t1.subtree_size(fc);
        Band fresh;
        fresh.reset(lo_for(pfc), hi_for(pfc));
        const std::int64_t eps = sp->sed_cur_eps + fc_size;
        for (std::int64_t pw = fresh.lo; pw <= fresh.hi; ++pw) {
            if (w_parent_post[static_cast<std::size_t>(pw)] == 0) continue;
            const std::int64_t ls = w_left_sib_post[static_cast<std::size_t>(pw)];
            const std::int64_t left_val = ls != 0 ? fresh.get(ls) : eps;
            const std::int64_t above_val = sp->sed_cur.get(pw);
            const std::int64_t above_left = ls != 0 ? sp->sed_cur.get(ls) : sp->sed_cur_eps;
            const std::int64_t cell = std::min(
                {sat_add(left_val, w_size[static_cast<std::size_t>(pw)]),
                 sat_add(above_val, fc_size), sat_add(above_left, sp->dt_fc.get(pw))});
            fresh.set(pw, cell);
            if (metrics) ++metrics->cells;
        }
        sp->sed_prev = std::move(fresh);
        sp->sed_prev_eps = eps;
    }
};

} // namespace

bool jofilter(const JsonTree& t1, const JsonTree& t2, std::int64_t tau,
              JofilterMetrics* metrics) {
    require_sorted(t1, t2);
    if (metrics) *metrics = {};
    if (tau < 0) return false;
    if (std::llabs(t1.size() - t2.size()) > tau) {
        if (metrics) metrics->size_exit = true;
        return false;
    }
    return FilterRun(t1, t2, tau, metrics).run();
}

std::vector<NodeId> tau_sed_cells(const JsonTree& t1, const JsonTree& t2, NodeId v,
                                  std::int64_t tau) {
    std::vector<NodeId> out;
    if (t1.node(v).parent == -1 || tau < 0) return out;
    const std::int64_t pv = t1.post(v);
    const std::int64_t lo = std::max<std::int64_t>(1, pv - tau);
    const std::int64_t hi = std::min(t2.size(), pv + tau);
    for (std::int64_t pw = lo; pw <= hi; ++pw) {
        NodeId w = t2.node_at_post(pw);
        if (t2.node(w).parent != -1) out.push_back(w);
    }
    return out;
}

} // namespace jedi

#include "qfun/cdcl.hpp"

#include <algorithm>
#include <cmath>

namespace qfun::sat {

namespace {

double luby(double y, std::uint64_t x) {
    std::uint64_t size = 1;
    int seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, seq);
}

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr std::uint64_t kRestartUnit = 100;

} // namespace

CdclSolver::CdclSolver(std::uint32_t num_vars) { reserve_vars(num_vars); }

void CdclSolver::seed_phases(std::uint64_t seed) {
    for (std::uint32_t v = 0; v < num_vars(); ++v) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (v + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        phase_[v] = static_cast<char>((z ^ (z >> 31)) & 1u);
    }
}

void CdclSolver::reserve_vars(std::uint32_t n) {
    const auto old = num_vars();
    if (n <= old) return;
    assigns_.resize(n, kUndef);
    phase_.resize(n, 0);
    level_.resize(n, 0);
    reason_.resize(n, kNoReason);
    activity_.resize(n, 0.0);
    seen_.resize(n, 0);
    heap_pos_.resize(n, -1);
    watches_.resize(2 * static_cast<std::size_t>(n));
    for (auto v = old; v < n; ++v) heap_insert(v);
}

bool CdclSolver::add_clause(std::span<const Lit> input) {
    if (!ok_) return false;
    if (level() > 0) backtrack(0);
    std::vector<Lit> lits(input.begin(), input.end());
    std::uint32_t max_var = 0;
    for (Lit l : lits) max_var = std::max(max_var, l.var() + 1);
    reserve_vars(max_var);
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());

    std::size_t kept = 0;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i + 1 < lits.size() && lits[i + 1] == ~lits[i]) return true;  // tautology
        const int v = value(lits[i]);
        if (v == 1) return true;
        if (v == kUndef) lits[kept++] = lits[i];
    }
    lits.resize(kept);
    if (lits.empty()) return ok_ = false;
    if (lits.size() == 1) {
        enqueue(lits[0], kNoReason);
        if (propagate() != kNoReason) ok_ = false;
        return ok_;
    }
    attach(std::move(lits), false);
    return true;
}

std::uint32_t CdclSolver::attach(std::vector<Lit> lits, bool learnt) {
    const auto cref = static_cast<std::uint32_t>(clauses_.size());
    watches_[lits[0].code].push_back({cref, lits[1]});
    watches_[lits[1].code].push_back({cref, lits[0]});
    clauses_.push_back(Clause{std::move(lits), learnt, false, 0.0});
    return cref;
}

void CdclSolver::enqueue(Lit l, std::uint32_t reason) {
    const auto v = l.var();
    assigns_[v] = l.negative() ? 0 : 1;
    level_[v] = level();
    reason_[v] = reason;
    trail_.push_back(l);
}

std::uint32_t CdclSolver::propagate() {
    std::uint32_t conflict = kNoReason;
    while (qhead_ < trail_.size() && conflict == kNoReason) {
        const Lit false_lit = ~trail_[qhead_++];
        auto& ws = watches_[false_lit.code];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            const Watcher w = ws[i];
            if (value(w.blocker) == 1) {
                ws[j++] = ws[i++];
                continue;
            }
            Clause& c = clauses_[w.cref];
            if (c.deleted) {
                ++i;
                continue;
            }
            auto& lits = c.lits;
            if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
            ++i;
            const Lit first = lits[0];
            if (first != w.blocker && value(first) == 1) {
                ws[j++] = Watcher{w.cref, first};
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < lits.size(); ++k) {
                if (value(lits[k]) != 0) {
                    std::swap(lits[1], lits[k]);
                    watches_[lits[1].code].push_back(Watcher{w.cref, first});
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = Watcher{w.cref, first};
            if (value(first) == 0) {
                conflict = w.cref;
                while (i < ws.size()) ws[j++] = ws[i++];
            } else {
                enqueue(first, w.cref);
            }
        }
        ws.resize(j);
    }
    if (conflict != kNoReason) qhead_ = trail_.size();
    return conflict;
}

void CdclSolver::analyze(std::uint32_t conflict, std::vector<Lit>& learnt, std::uint32_t& backtrack_level) {
    learnt.clear();
    learnt.push_back(Lit{});
    int pending = 0;
    bool have_p = false;
    Lit p{};
    std::size_t index = trail_.size();
    std::uint32_t cref = conflict;
    do {
        Clause& c = clauses_[cref];
        if (c.learnt) bump_clause(c);
        for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
            const Lit q = c.lits[k];
            const auto v = q.var();
            if (seen_[v] || level_[v] == 0) continue;
            bump_var(v);
            seen_[v] = 1;
            if (level_[v] >= level())
                ++pending;
            else
                learnt.push_back(q);
        }
        do {
            --index;
        } while (!seen_[trail_[index].var()]);
        p = trail_[index];
        have_p = true;
        cref = reason_[p.var()];
        seen_[p.var()] = 0;
        --pending;
    } while (pending > 0);
    learnt[0] = ~p;

    // Drop literals implied by the rest of the clause.
    const std::vector<Lit> original = learnt;
    std::size_t out = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
        const auto r = reason_[learnt[k].var()];
        bool redundant = r != kNoReason;
        if (redundant) {
            for (const Lit q : clauses_[r].lits) {
                if (q.var() == learnt[k].var()) continue;
                if (!seen_[q.var()] && level_[q.var()] > 0) {
                    redundant = false;
                    break;
                }
            }
        }
        if (!redundant) learnt[out++] = learnt[k];
    }
    learnt.resize(out);
    for (const Lit q : original) seen_[q.var()] = 0;

    backtrack_level = 0;
    if (learnt.size() > 1) {
        std::size_t max_i = 1;
        for (std::size_t k = 2; k < learnt.size(); ++k) {
            if (level_[learnt[k].var()] > level_[learnt[max_i].var()]) max_i = k;
        }
        std::swap(learnt[1], learnt[max_i]);
        backtrack_level = level_[learnt[1].var()];
    }
}

void CdclSolver::backtrack(std::uint32_t lvl) {
    if (level() <= lvl) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
        const auto v = trail_[i].var();
        phase_[v] = static_cast<char>(assigns_[v]);
        assigns_[v] = kUndef;
        reason_[v] = kNoReason;
        if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[lvl]);
    qhead_ = trail_.size();
    trail_lim_.resize(lvl);
}

void CdclSolver::bump_var(std::uint32_t v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (auto& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void CdclSolver::bump_clause(Clause& c) {
    c.activity += clause_inc_;
    if (c.activity > 1e20) {
        for (auto& cl : clauses_) {
            if (cl.learnt) cl.activity *= 1e-20;
        }
        clause_inc_ *= 1e-20;
    }
}

void CdclSolver::reduce_learnts() {
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t i = 0; i < clauses_.size(); ++i) {
        const Clause& c = clauses_[i];
        if (!c.learnt || c.deleted || c.lits.size() <= 2) continue;
        const auto v = c.lits[0].var();
        const bool locked = reason_[v] == i && value(c.lits[0]) == 1;
        if (!locked) candidates.push_back(i);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
        return clauses_[a].activity < clauses_[b].activity;
    });
    for (std::size_t k = 0; k < candidates.size() / 2; ++k) {
        Clause& c = clauses_[candidates[k]];
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
        --num_learnts_;
    }
    rebuild_watches();
}

void CdclSolver::rebuild_watches() {
    for (auto& ws : watches_) ws.clear();
    for (std::uint32_t i = 0; i < clauses_.size(); ++i) {
        const Clause& c = clauses_[i];
        if (c.deleted) continue;
        watches_[c.lits[0].code].push_back({i, c.lits[1]});
        watches_[c.lits[1].code].push_back({i, c.lits[0]});
    }
}

bool CdclSolver::heap_less(std::uint32_t a, std::uint32_t b) const {
    if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
    return a < b;
}

void CdclSolver::heap_insert(std::uint32_t v) {
    heap_pos_[v] = static_cast<std::int64_t>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
}

void CdclSolver::heap_up(std::size_t pos) {
    const auto v = heap_[pos];
    while (pos > 0) {
        const auto parent = (pos - 1) / 2;
        if (!heap_less(v, heap_[parent])) break;
        heap_[pos] = heap_[parent];
        heap_pos_[heap_[pos]] = static_cast<std::int64_t>(pos);
        pos = parent;
    }
    heap_[pos] = v;
    heap_pos_[v] = static_cast<std::int64_t>(pos);
}

void CdclSolver::heap_down(std::size_t pos) {
    const auto v = heap_[pos];
    for (;;) {
        auto child = 2 * pos + 1;
        if (child >= heap_.size()) break;
        if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
        if (!heap_less(heap_[child], v)) break;
        heap_[pos] = heap_[child];
        heap_pos_[heap_[pos]] = static_cast<std::int64_t>(pos);
        pos = child;
    }
    heap_[pos] = v;
    heap_pos_[v] = static_cast<std::int64_t>(pos);
}

std::uint32_t CdclSolver::heap_pop() {
    const auto top = heap_[0];
    heap_pos_[top] = -1;
    const auto last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[last] = 0;
        heap_down(0);
    }
    return top;
}

bool CdclSolver::solve(const Budget& budget) {
    if (!ok_) return false;
    if (level() > 0) backtrack(0);
    if (propagate() != kNoReason) return ok_ = false;

    max_learnts_ = std::max<std::size_t>(clauses_.size() / 3, 2000);
    std::uint64_t restarts = 0;
    std::uint64_t restart_limit = static_cast<std::uint64_t>(luby(2.0, restarts) * kRestartUnit);
    std::uint64_t since_restart = 0;
    std::vector<Lit> learnt;

    for (;;) {
        const auto conflict = propagate();
        if (conflict != kNoReason) {
            ++conflicts_;
            ++since_restart;
            if (level() == 0) return ok_ = false;
            std::uint32_t bt = 0;
            analyze(conflict, learnt, bt);
            backtrack(bt);
            if (learnt.size() == 1) {
                enqueue(learnt[0], kNoReason);
            } else {
                const auto cref = attach(learnt, true);
                bump_clause(clauses_[cref]);
                enqueue(learnt[0], cref);
                ++num_learnts_;
            }
            var_inc_ /= kVarDecay;
            clause_inc_ /= kClauseDecay;
            if ((conflicts_ & 255u) == 0) budget.check();
            if (since_restart >= restart_limit) {
                backtrack(0);
                since_restart = 0;
                restart_limit = static_cast<std::uint64_t>(luby(2.0, ++restarts) * kRestartUnit);
            }
            continue;
        }

        if (num_learnts_ >= max_learnts_ + trail_.size()) {
            reduce_learnts();
            max_learnts_ = max_learnts_ + max_learnts_ / 10;
        }

        std::uint32_t next = UINT32_MAX;
        while (!heap_.empty()) {
            const auto v = heap_pop();
            if (assigns_[v] == kUndef) {
                next = v;
                break;
            }
        }
        if (next == UINT32_MAX) {
            model_.assign(assigns_.begin(), assigns_.end());
            backtrack(0);
            return true;
        }
        ++decisions_;
        if ((decisions_ & 4095u) == 0) budget.check();
        trail_lim_.push_back(trail_.size());
        enqueue(phase_[next] ? Lit::pos(next) : Lit::neg(next), kNoReason);
    }
}

} // namespace qfun::sat

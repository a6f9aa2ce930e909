#pragma once

#include "zxdb/diagram.hpp"
#include "zxdb/rules.hpp"

#include <cassert>
#include <chrono>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace zxdb {

    /// How a rule's matches interact within one snapshot.
    ///   Independent:       all matches of one pass can be applied, in any order.
    ///   WeaklyIndependent: footprint-disjoint matches can be applied together.
    ///   Dependent:         overlapping matches invalidate each other; pick a
    ///                      disjoint subset.
    enum class RuleClass { Independent, WeaklyIndependent, Dependent };

    inline constexpr RuleClass classify(RuleId r) {
        switch (r) {
            case RuleId::GadgetFusion: return RuleClass::Independent;
            case RuleId::LocalComplementation:
            case RuleId::Pivot:
            case RuleId::PivotGadget: return RuleClass::WeaklyIndependent;
            case RuleId::IdentityRemoval:
            case RuleId::SpiderFusion:
            case RuleId::Bialgebra:
            case RuleId::PivotBoundary: return RuleClass::Dependent;
        }
        return RuleClass::Dependent;
    }

    inline const char* to_string(RuleClass c) {
        switch (c) {
            case RuleClass::Independent: return "independent";
            case RuleClass::WeaklyIndependent: return "weakly_independent";
            case RuleClass::Dependent: return "dependent";
        }
        return "?";
    }

    /// Greedy left-to-right fold: keeps a candidate iff none of its footprint
    /// nodes is already claimed by an earlier kept candidate.
    inline std::vector<Match> select_disjoint(std::span<const Match> candidates) {
        NodeId bound = 0;
        for (const auto& m: candidates) {
            for (auto v: m.footprint) bound = std::max(bound, v + 1);
        }
        std::vector<char>  marked(bound, 0);
        std::vector<Match> chosen;
        for (const auto& m: candidates) {
            bool free = true;
            for (auto v: m.footprint) {
                if (marked[v]) {
                    free = false;
                    break;
                }
            }
            if (!free) continue;
            for (auto v: m.footprint) marked[v] = 1;
            chosen.push_back(m);
        }
        return chosen;
    }

    struct PassReport {
        RuleId      rule{};
        std::size_t candidates   = 0;
        std::size_t applied      = 0;
        std::size_t stale        = 0; // candidates skipped because an earlier rewrite invalidated them
        std::size_t nodes_before = 0;
        std::size_t nodes_after  = 0;
        double      duration_s   = 0.0;
        bool        budget_exhausted = false;
    };

    inline std::string pass_report_csv_header() { return "rule,candidates,applied,nodes_before,nodes_after,duration_s"; }

    inline std::string to_csv_row(const PassReport& r) {
        std::ostringstream os;
        os.precision(9);
        os << rule_name(r.rule) << ',' << r.candidates << ',' << r.applied << ',' << r.nodes_before << ','
           << r.nodes_after << ',' << r.duration_s;
        return os.str();
    }

    struct PassOptions {
        /// Called after each successful rewrite, with the diagram already updated.
        std::function<void(const Diagram&, const Match&)> on_applied;
    };

    /// One snapshot-and-apply pass: match once, then apply every selected match.
    /// Independent rules apply all candidates; the others apply the greedy
    /// disjoint subset. A candidate that no longer holds is skipped and counted
    /// in `stale`.
    inline PassReport run_pass(Diagram& d, RuleId rule, const PassOptions& opts = {}) {
        const auto start = std::chrono::steady_clock::now();
        PassReport r;
        r.rule         = rule;
        r.nodes_before = d.node_count();
        auto candidates = find_matches(rule, d);
        r.candidates    = candidates.size();
        auto selected   = classify(rule) == RuleClass::Independent ? std::move(candidates) : select_disjoint(candidates);
#ifndef NDEBUG
        if (classify(rule) != RuleClass::Independent) {
            std::vector<NodeId> all;
            for (const auto& m: selected) all.insert(all.end(), m.footprint.begin(), m.footprint.end());
            const std::size_t total = all.size();
            assert(detail::sorted_unique(std::move(all)).size() == total && "selected footprints overlap");
        }
#endif
        for (const auto& m: selected) {
            if (try_apply(d, m)) {
                ++r.applied;
                if (opts.on_applied) opts.on_applied(d, m);
            } else {
                ++r.stale;
            }
        }
        r.nodes_after = d.node_count();
        r.duration_s  = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return r;
    }

    inline constexpr std::size_t default_max_passes = 10000;

    /// Repeats run_pass until a pass applies nothing. If max_passes passes all
    /// applied something, the last report is flagged budget_exhausted.
    inline std::vector<PassReport> run_to_fixpoint(Diagram& d, RuleId rule, std::size_t max_passes = default_max_passes,
                                                   const PassOptions& opts = {}) {
        std::vector<PassReport> reports;
        for (std::size_t i = 0; i < max_passes; ++i) {
            reports.push_back(run_pass(d, rule, opts));
            if (reports.back().applied == 0) return reports;
        }
        if (!reports.empty()) reports.back().budget_exhausted = true;
        return reports;
    }

    inline std::vector<RuleId> default_schedule() {
        return {RuleId::SpiderFusion,  RuleId::IdentityRemoval, RuleId::LocalComplementation, RuleId::Pivot,
                RuleId::PivotGadget,   RuleId::PivotBoundary,   RuleId::GadgetFusion};
    }

    inline bool budget_exhausted(std::span<const PassReport> reports) {
        for (const auto& r: reports) {
            if (r.budget_exhausted) return true;
        }
        return false;
    }

    /// Runs each rule of the schedule to its fixpoint, in order, and repeats
    /// the whole schedule until a round changes nothing.
    ///
    /// If the schedule contains any rule that needs graph-like form, the
    /// diagram is normalised first, and again before such a rule whenever an
    /// earlier rule has left the normal form.
    inline std::vector<PassReport> run_pipeline(Diagram& d, std::span<const RuleId> schedule,
                                                std::size_t max_rounds = default_max_passes,
                                                std::size_t max_passes = default_max_passes,
                                                const PassOptions& opts = {}) {
        std::vector<PassReport> reports;
        bool                    needs_graph_like = false;
        for (auto r: schedule) needs_graph_like = needs_graph_like || requires_graph_like(r);
        if (needs_graph_like) make_graph_like(d);
        for (std::size_t round = 0; round < max_rounds; ++round) {
            std::size_t applied = 0;
            for (auto rule: schedule) {
                if (requires_graph_like(rule) && !is_graph_like(d)) make_graph_like(d);
                auto part = run_to_fixpoint(d, rule, max_passes, opts);
                for (const auto& p: part) applied += p.applied;
                const bool exhausted = budget_exhausted(part);
                reports.insert(reports.end(), part.begin(), part.end());
                if (exhausted) return reports;
            }
            if (applied == 0) return reports;
        }
        if (!reports.empty()) reports.back().budget_exhausted = true;
        return reports;
    }

    inline std::vector<PassReport> run_pipeline(Diagram& d) {
        const auto s = default_schedule();
        return run_pipeline(d, s);
    }

} // namespace zxdb

// ============================================================================
// term_revealing.hpp — group-based run-time term quantization
//
// Term revealing (TR) partitions a vector of values into groups of g and keeps
// only the k largest power-of-two terms per group, shared across the group's
// values ("receding water": scan exponent levels from the top down, within a
// level scan values in group order, stop once k terms are taken; everything
// below the waterline is pruned). Values with few terms donate budget to
// values with many, so at equal average terms per value TR loses less mass
// than truncating each value independently.
// ============================================================================
#pragma once

#include <optional>
#include <vector>

#include "termrev/sdr.hpp"

namespace termrev {

// Hardware register limits. Analytics paths (histograms, sweeps) may relax
// the group size up to kMaxAnalyticsGroupSize to study larger groupings; the
// simulator always enforces the register limits.
constexpr int kMaxRegisterGroupSize = 8;
constexpr int kMaxAnalyticsGroupSize = 64;
constexpr int kMaxGroupBudget = 24;  // 5-bit budget register, k <= 24

// ----------------------------------------------------------------------------
// Domain types
// ----------------------------------------------------------------------------

struct GroupBudget {
    int group_size = 1;  // g
    int budget = 1;      // k, total terms kept across the group

    double alpha() const { return static_cast<double>(budget) / group_size; }

    // Throws std::invalid_argument when outside 1..=max_group_size /
    // 1..=max_budget. Budgets beyond the group's possible term count are
    // legal (they simply never prune).
    void validate(int max_group_size = kMaxRegisterGroupSize,
                  int max_budget = kMaxGroupBudget) const;
};

struct TermGroup {
    std::vector<TermExpansion> expansions;  // one per value, group order

    int size() const { return static_cast<int>(expansions.size()); }
    int total_terms() const;
};

struct RevealResult {
    TermGroup kept;                             // per-value highest-term prefixes
    int pruned_term_count = 0;                  // terms dropped across the group
    std::optional<int> waterline_exponent;      // level where the budget ran out;
                                                // empty when nothing was pruned
};

// Aggregate statistics from applying TR across a matrix.
struct TrReport {
    long long groups = 0;
    long long pruned_terms_total = 0;
    double mean_sigma = 0.0;  // mean per-group relative truncation error
    double max_sigma = 0.0;
};

// ----------------------------------------------------------------------------
// Operations
// ----------------------------------------------------------------------------

// Consecutive, order-preserving groups of g expansions; the tail group is
// padded with zero-valued expansions. Throws std::invalid_argument when g is
// outside 1..=max_group_size.
std::vector<TermGroup> partition_into_groups(const std::vector<TermExpansion>& vector,
                                             int g,
                                             int max_group_size = kMaxRegisterGroupSize);

// Top-k term selection. Scans levels from max(6, highest exponent present)
// down to 0, values in group order within a level; the k-th taken term fixes
// the waterline and all unvisited terms are pruned. A group with <= k terms
// is returned unchanged. Throws std::invalid_argument when k < 1.
RevealResult receding_water_select(const TermGroup& group, int k);

// Keeps the s highest-exponent terms of a data expansion (identity when it
// already has <= s terms). Throws std::invalid_argument when s < 1.
TermExpansion truncate_data_terms(const TermExpansion& x, int s);

// σ = Σ|pruned term values| / Σ|original term values| over the group; 0 when
// nothing was pruned or the group is all-zero. `after` must be the per-value
// prefix output of receding_water_select on `before` (std::invalid_argument
// otherwise).
double relative_truncation_error(const TermGroup& before, const TermGroup& after);

// Applies TR to a quantized matrix: within each row, consecutive runs of
// `budget.group_size` values form groups (the tail zero-padded), each group
// passed through receding_water_select under the chosen encoding, and the
// surviving terms are re-assembled into integers. Optionally accumulates a
// TrReport across all groups and/or the per-element kept term counts
// (row-major, used for term-pair accounting downstream).
QuantizedMatrix apply_tr(const QuantizedMatrix& m, const GroupBudget& budget,
                         Encoding encoding, TrReport* report = nullptr,
                         int max_group_size = kMaxRegisterGroupSize,
                         int max_budget = kMaxGroupBudget,
                         std::vector<int>* kept_term_counts = nullptr);

}  // namespace termrev

// ============================================================================
// term_revealing.cpp — receding-water group term selection
// ============================================================================
#include "termrev/term_revealing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace termrev {

int TermGroup::total_terms() const {
    int n = 0;
    for (const auto& e : expansions) n += e.term_count();
    return n;
}

void GroupBudget::validate(int max_group_size, int max_budget) const {
    if (group_size < 1 || group_size > max_group_size)
        throw std::invalid_argument("group size must be in 1..=" +
                                    std::to_string(max_group_size) + ", got " +
                                    std::to_string(group_size));
    if (budget < 1 || budget > max_budget)
        throw std::invalid_argument("group budget must be in 1..=" +
                                    std::to_string(max_budget) + ", got " +
                                    std::to_string(budget));
}

std::vector<TermGroup> partition_into_groups(const std::vector<TermExpansion>& vector,
                                             int g, int max_group_size) {
    if (g < 1 || g > max_group_size)
        throw std::invalid_argument("group size must be in 1..=" +
                                    std::to_string(max_group_size) + ", got " +
                                    std::to_string(g));
    std::vector<TermGroup> groups;
    groups.reserve((vector.size() + g - 1) / g);
    for (size_t base = 0; base < vector.size(); base += g) {
        TermGroup grp;
        grp.expansions.reserve(g);
        for (int j = 0; j < g; ++j) {
            const size_t idx = base + j;
            // Tail group: pad with zero-valued expansions (they own no terms
            // and never consume budget).
            grp.expansions.push_back(idx < vector.size() ? vector[idx]
                                                         : TermExpansion{});
        }
        groups.push_back(std::move(grp));
    }
    return groups;
}

RevealResult receding_water_select(const TermGroup& group, int k) {
    if (k < 1)
        throw std::invalid_argument("budget must be >= 1, got " + std::to_string(k));

    RevealResult result;
    const int total = group.total_terms();
    if (total <= k) {
        // Fewer terms than budget: identity, nothing pruned, no waterline.
        result.kept = group;
        result.pruned_term_count = 0;
        return result;
    }

    const int g = group.size();
    // Terms within an expansion are sorted by descending exponent, so a
    // per-value cursor visits each value's terms exactly in level order.
    std::vector<int> cursor(g, 0);
    int top = 6;  // default scan start; raised if higher terms are present
    for (const auto& e : group.expansions)
        if (!e.terms.empty()) top = std::max(top, e.terms.front().exponent);

    result.kept.expansions.assign(g, TermExpansion{});
    int taken = 0;
    for (int level = top; level >= 0 && taken < k; --level) {
        for (int i = 0; i < g && taken < k; ++i) {
            const auto& terms = group.expansions[i].terms;
            if (cursor[i] < static_cast<int>(terms.size()) &&
                terms[cursor[i]].exponent == level) {
                result.kept.expansions[i].terms.push_back(terms[cursor[i]]);
                ++cursor[i];
                ++taken;
                if (taken == k) result.waterline_exponent = level;
            }
        }
    }
    result.pruned_term_count = total - taken;
    return result;
}

TermExpansion truncate_data_terms(const TermExpansion& x, int s) {
    if (s < 1)
        throw std::invalid_argument("data term count must be >= 1, got " +
                                    std::to_string(s));
    if (x.term_count() <= s) return x;
    TermExpansion out;
    out.terms.assign(x.terms.begin(), x.terms.begin() + s);
    return out;
}

double relative_truncation_error(const TermGroup& before, const TermGroup& after) {
    if (before.size() != after.size())
        throw std::invalid_argument("group sizes differ: " +
                                    std::to_string(before.size()) + " vs " +
                                    std::to_string(after.size()));
    long long total = 0, kept = 0;
    for (int i = 0; i < before.size(); ++i) {
        const auto& b = before.expansions[i].terms;
        const auto& a = after.expansions[i].terms;
        if (a.size() > b.size() || !std::equal(a.begin(), a.end(), b.begin()))
            throw std::invalid_argument(
                "after-group value " + std::to_string(i) +
                " is not a leading-term prefix of the before-group value");
        for (const auto& t : b) total += 1LL << t.exponent;
        for (const auto& t : a) kept += 1LL << t.exponent;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(total - kept) / static_cast<double>(total);
}

QuantizedMatrix apply_tr(const QuantizedMatrix& m, const GroupBudget& budget,
                         Encoding encoding, TrReport* report, int max_group_size,
                         int max_budget, std::vector<int>* kept_term_counts) {
    budget.validate(max_group_size, max_budget);
    m.validate();

    QuantizedMatrix out = m;
    if (kept_term_counts)
        kept_term_counts->assign(static_cast<size_t>(m.rows) * m.cols, 0);
    double sigma_sum = 0.0, sigma_max = 0.0;
    long long group_count = 0, pruned_total = 0;

    const int g = budget.group_size;
    const int n = m.scheme.bitwidth;
    std::vector<TermExpansion> row_exp;
    row_exp.reserve(m.cols);
    for (int r = 0; r < m.rows; ++r) {
        row_exp.clear();
        for (int c = 0; c < m.cols; ++c)
            row_exp.push_back(expand(m.at(r, c), n, encoding));
        const auto groups = partition_into_groups(row_exp, g, max_group_size);
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            const auto selected = receding_water_select(groups[gi], budget.budget);
            const double sigma =
                relative_truncation_error(groups[gi], selected.kept);
            sigma_sum += sigma;
            sigma_max = std::max(sigma_max, sigma);
            pruned_total += selected.pruned_term_count;
            ++group_count;
            for (int j = 0; j < g; ++j) {
                const int c = static_cast<int>(gi) * g + j;
                if (c < m.cols) {
                    out.at(r, c) =
                        static_cast<int>(selected.kept.expansions[j].value());
                    if (kept_term_counts)
                        (*kept_term_counts)[static_cast<size_t>(r) * m.cols + c] =
                            selected.kept.expansions[j].term_count();
                }
            }
        }
    }
    if (report) {
        report->groups = group_count;
        report->pruned_terms_total = pruned_total;
        report->mean_sigma = group_count ? sigma_sum / group_count : 0.0;
        report->max_sigma = sigma_max;
    }
    return out;
}

}  // namespace termrev

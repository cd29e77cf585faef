#include <cmath>

#include "kpcert/kernels.hpp"

namespace kpcert::kernels::reference {

SlackMin min_slack(const SlackProblem& problem) {
    const PointTable& t = problem.points;
    const std::size_t grid = problem.first_weight.size();
    SlackMin best;
    for (std::size_t p = 0; p < problem.pairs.size(); ++p) {
        const auto [x, y, set] = problem.pairs[p];
        const double lhs = t.d(t.image[x], t.image[y]);
        const double first = first_term(t, x, y, problem.form);
        const double powered = std::pow(correction_base(t, x, y, problem.form), problem.beta);
        for (std::size_t g = 0; g < grid; ++g) {
            const double rhs = combine_rhs(problem.first_weight[g], first,
                                           problem.correction_weight[g], powered);
            const SlackMin here{rhs - lhs, p * grid + g};
            if (better(here, best)) best = here;
        }
    }
    return best;
}

KannanScan kannan_scan(const PointTable& t, std::span<const ConsecutivePair> pairs) {
    KannanScan scan;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [x, y, set] = pairs[p];
        const double lhs = t.d(t.image[x], t.image[y]);
        const double s = t.d(x, t.image[x]) + t.d(y, t.image[y]);
        const double slack = 0.5 * s - lhs;
        if (slack < scan.min_slack) scan.min_slack = slack;
        if (s == 0.0) {
            if (lhs > 0.0 && scan.zero_failure == npos) scan.zero_failure = p;
            continue;
        }
        const double ratio = 2.0 * lhs / s;
        if (ratio > scan.max_ratio) {
            scan.max_ratio = ratio;
            scan.ratio_pair = p;
        }
    }
    return scan;
}

std::vector<Violation> triangle_violations(const DistanceMatrix& dist, double tolerance) {
    const std::size_t n = dist.size();
    std::vector<Violation> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double excess = dist(i, j) - (dist(i, k) + dist(k, j));
                if (excess > tolerance) out.push_back({ViolationKind::triangle, {i, j, k}, excess});
            }
        }
    }
    return out;
}

bool relax_shortest_paths(DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    bool changed = false;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double dik = dist(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                const double via = dik + dist(k, j);
                if (via < dist(i, j)) {
                    dist(i, j) = via;
                    changed = true;
                }
            }
        }
    }
    return changed;
}

}  // namespace kpcert::kernels::reference

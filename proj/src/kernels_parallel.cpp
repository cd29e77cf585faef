#include <cmath>
#include <cstdint>

#include "kpcert/kernels.hpp"

namespace kpcert::kernels::parallel {

namespace {

// Loop bounds for OpenMP must be signed on older runtimes.
std::int64_t as_signed(std::size_t n) { return static_cast<std::int64_t>(n); }

void merge(KannanScan& into, const KannanScan& from) {
    if (from.min_slack < into.min_slack) into.min_slack = from.min_slack;
    if (from.zero_failure < into.zero_failure) into.zero_failure = from.zero_failure;
    if (from.ratio_pair != npos &&
        (from.max_ratio > into.max_ratio ||
         (from.max_ratio == into.max_ratio && from.ratio_pair < into.ratio_pair))) {
        into.max_ratio = from.max_ratio;
        into.ratio_pair = from.ratio_pair;
    }
}

}  // namespace

SlackMin min_slack(const SlackProblem& problem) {
    const PointTable& t = problem.points;
    const std::size_t grid = problem.first_weight.size();
    const std::int64_t pairs = as_signed(problem.pairs.size());
    SlackMin best;

#pragma omp parallel
    {
        SlackMin local;
#pragma omp for schedule(static) nowait
        for (std::int64_t sp = 0; sp < pairs; ++sp) {
            const auto p = static_cast<std::size_t>(sp);
            const auto [x, y, set] = problem.pairs[p];
            const double lhs = t.d(t.image[x], t.image[y]);
            const double first = first_term(t, x, y, problem.form);
            const double powered = std::pow(correction_base(t, x, y, problem.form), problem.beta);
            for (std::size_t g = 0; g < grid; ++g) {
                const double rhs = combine_rhs(problem.first_weight[g], first,
                                               problem.correction_weight[g], powered);
                const SlackMin here{rhs - lhs, p * grid + g};
                if (better(here, local)) local = here;
            }
        }
#pragma omp critical(kpcert_min_slack)
        if (better(local, best)) best = local;
    }
    return best;
}

KannanScan kannan_scan(const PointTable& t, std::span<const ConsecutivePair> pairs) {
    const std::int64_t count = as_signed(pairs.size());
    KannanScan scan;

#pragma omp parallel
    {
        KannanScan local;
#pragma omp for schedule(static) nowait
        for (std::int64_t sp = 0; sp < count; ++sp) {
            const auto p = static_cast<std::size_t>(sp);
            const auto [x, y, set] = pairs[p];
            const double lhs = t.d(t.image[x], t.image[y]);
            const double s = t.d(x, t.image[x]) + t.d(y, t.image[y]);
            const double slack = 0.5 * s - lhs;
            if (slack < local.min_slack) local.min_slack = slack;
            if (s == 0.0) {
                if (lhs > 0.0 && p < local.zero_failure) local.zero_failure = p;
                continue;
            }
            const double ratio = 2.0 * lhs / s;
            if (ratio > local.max_ratio) {
                local.max_ratio = ratio;
                local.ratio_pair = p;
            }
        }
#pragma omp critical(kpcert_kannan_scan)
        merge(scan, local);
    }
    return scan;
}

std::vector<Violation> triangle_violations(const DistanceMatrix& dist, double tolerance) {
    const std::size_t n = dist.size();
    std::vector<std::vector<Violation>> per_row(n);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t si = 0; si < as_signed(n); ++si) {
        const auto i = static_cast<std::size_t>(si);
        auto& out = per_row[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double excess = dist(i, j) - (dist(i, k) + dist(k, j));
                if (excess > tolerance) out.push_back({ViolationKind::triangle, {i, j, k}, excess});
            }
        }
    }

    std::vector<Violation> out;
    for (auto& row : per_row) out.insert(out.end(), row.begin(), row.end());
    return out;
}

bool relax_shortest_paths(DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    bool changed = false;
    for (std::size_t k = 0; k < n; ++k) {
        // Row k and column k are not modified while relaxing through k.
#pragma omp parallel for schedule(static) reduction(|| : changed)
        for (std::int64_t si = 0; si < as_signed(n); ++si) {
            const auto i = static_cast<std::size_t>(si);
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

}  // namespace kpcert::kernels::parallel

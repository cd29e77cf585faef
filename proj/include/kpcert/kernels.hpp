#pragma once

// Data-parallel inner loops. Each kernel exists twice: `parallel` (OpenMP)
// and `reference` (plain serial loops). Reductions carry the index of the
// winning element and break ties toward the smaller index, so both produce
// bit-identical results regardless of thread count.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "kpcert/cyclic.hpp"
#include "kpcert/metric.hpp"

namespace kpcert::kernels {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Flat views of the space and map read by the pair kernels.
struct PointTable {
    std::size_t n = 0;
    std::span<const double> dist;         // n x n row-major
    std::span<const PointIndex> image;    // T
    std::span<const double> norms;        // ||x||; unused by Kannan scans

    double d(PointIndex i, PointIndex j) const noexcept { return dist[i * n + j]; }
};

enum class RhsForm {
    kannan_pata,  // w1 [d(x,Tx) + d(y,Ty)] + wc [1 + |x| + |Tx| + |y| + |Ty|]^beta
    pata_banach,  // w1 d(x,y)               + wc [1 + |x| + |y|]^beta
};

struct SlackProblem {
    PointTable points;
    std::span<const ConsecutivePair> pairs;
    std::span<const double> first_weight;       // per grid value
    std::span<const double> correction_weight;  // per grid value
    double beta = 0.0;
    RhsForm form = RhsForm::kannan_pata;

    std::size_t check_count() const noexcept { return pairs.size() * first_weight.size(); }
};

/// Minimum of rhs - lhs over all checks; `check` = pair * grid_size + grid_index.
struct SlackMin {
    double slack = std::numeric_limits<double>::infinity();
    std::size_t check = npos;

    bool operator==(const SlackMin&) const = default;
};

inline bool better(const SlackMin& a, const SlackMin& b) noexcept {
    return a.slack < b.slack || (a.slack == b.slack && a.check < b.check);
}

inline double combine_rhs(double first_weight, double first, double correction_weight,
                          double powered) noexcept {
    // A zero weight must not turn an overflowed power into NaN.
    if (correction_weight == 0.0) return first_weight * first;
    return first_weight * first + correction_weight * powered;
}

inline double first_term(const PointTable& t, PointIndex x, PointIndex y, RhsForm form) noexcept {
    if (form == RhsForm::pata_banach) return t.d(x, y);
    return t.d(x, t.image[x]) + t.d(y, t.image[y]);
}

inline double correction_base(const PointTable& t, PointIndex x, PointIndex y,
                              RhsForm form) noexcept {
    if (form == RhsForm::pata_banach) return 1.0 + t.norms[x] + t.norms[y];
    return 1.0 + t.norms[x] + t.norms[t.image[x]] + t.norms[y] + t.norms[t.image[y]];
}

/// Pair-level terms of the Kannan-type scan.
struct KannanScan {
    double max_ratio = 0.0;           // max of 2 d(Tx,Ty) / S over pairs with S > 0
    std::size_t ratio_pair = npos;    // first pair attaining max_ratio (npos if none positive)
    std::size_t zero_failure = npos;  // first pair with S = 0 and d(Tx,Ty) > 0
    double min_slack = std::numeric_limits<double>::infinity();  // min of S/2 - d(Tx,Ty)

    bool operator==(const KannanScan&) const = default;
};

namespace reference {
SlackMin min_slack(const SlackProblem& problem);
KannanScan kannan_scan(const PointTable& points, std::span<const ConsecutivePair> pairs);
std::vector<Violation> triangle_violations(const DistanceMatrix& dist, double tolerance);
/// One Floyd-Warshall sweep in place; returns whether any entry decreased.
bool relax_shortest_paths(DistanceMatrix& dist);
}  // namespace reference

namespace parallel {
SlackMin min_slack(const SlackProblem& problem);
KannanScan kannan_scan(const PointTable& points, std::span<const ConsecutivePair> pairs);
std::vector<Violation> triangle_violations(const DistanceMatrix& dist, double tolerance);
bool relax_shortest_paths(DistanceMatrix& dist);
}  // namespace parallel

}  // namespace kpcert::kernels

#include "kpcert/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kpcert/errors.hpp"
#include "kpcert/kernels.hpp"

namespace kpcert {

DistanceMatrix::DistanceMatrix(std::size_t n, double fill) : n_(n), values_(n * n, fill) {}

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    DistanceMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) {
            throw StructuralError("distance matrix is not square: row " + std::to_string(i) +
                                  " has " + std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(rows.size()));
        }
        std::copy(rows[i].begin(), rows[i].end(), m.values_.begin() + static_cast<long>(i * m.n_));
    }
    return m;
}

std::vector<std::vector<double>> DistanceMatrix::rows() const {
    std::vector<std::vector<double>> out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        out[i].assign(values_.begin() + static_cast<long>(i * n_),
                      values_.begin() + static_cast<long>((i + 1) * n_));
    }
    return out;
}

double DistanceMatrix::max_entry() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, v);
    return m;
}

std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::negative: return "negative";
        case ViolationKind::asym: return "asym";
        case ViolationKind::diag: return "diag";
        case ViolationKind::triangle: return "triangle";
        case ViolationKind::coincident: return "coincident";
    }
    return "unknown";
}

double default_metric_tolerance(const DistanceMatrix& dist) noexcept {
    return 1e-9 * dist.max_entry();
}

ValidationReport validate_metric(const DistanceMatrix& dist, double tolerance, Backend backend) {
    const std::size_t n = dist.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(dist(i, j))) {
                throw StructuralError("non-finite distance at (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");
            }
        }
    }
    if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) {
        throw StructuralError("metric tolerance must be finite and non-negative");
    }

    ValidationReport report;
    auto& out = report.violations;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(dist(i, i)) > tolerance) {
            out.push_back({ViolationKind::diag, {i}, std::abs(dist(i, i))});
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = dist(i, j);
            if (-d > tolerance) out.push_back({ViolationKind::negative, {i, j}, -d});
            if (i < j) {
                const double gap = std::abs(d - dist(j, i));
                if (gap > tolerance) out.push_back({ViolationKind::asym, {i, j}, gap});
                if (d >= 0.0 && d <= tolerance && dist(j, i) <= tolerance) {
                    out.push_back({ViolationKind::coincident, {i, j}, d});
                }
            }
        }
    }
    auto triangles = backend == Backend::parallel
                         ? kernels::parallel::triangle_violations(dist, tolerance)
                         : kernels::reference::triangle_violations(dist, tolerance);
    out.insert(out.end(), triangles.begin(), triangles.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const Violation& a, const Violation& b) { return a.indices < b.indices; });
    return report;
}

DistanceMatrix shortest_path_repair(const DistanceMatrix& dist, Backend backend) {
    const std::size_t n = dist.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(dist(i, i)) || dist(i, i) != 0.0) {
            throw StructuralError("shortest_path_repair: nonzero diagonal at " + std::to_string(i));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (!std::isfinite(dist(i, j)) || dist(i, j) <= 0.0) {
                throw StructuralError("shortest_path_repair: non-positive entry at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            if (dist(i, j) != dist(j, i)) {
                throw StructuralError("shortest_path_repair: asymmetric at (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ")");
            }
        }
    }
    DistanceMatrix out = dist;
    // A sweep only lowers entries, so this reaches a fixpoint; in practice one
    // or two sweeps.
    while (backend == Backend::parallel ? kernels::parallel::relax_shortest_paths(out)
                                        : kernels::reference::relax_shortest_paths(out)) {
    }
    return out;
}

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    return labels;
}

FiniteMetricSpace FiniteMetricSpace::create(std::vector<std::string> labels, DistanceMatrix dist,
                                            std::optional<double> tolerance) {
    if (dist.size() == 0) throw StructuralError("a metric space needs at least one point");
    if (labels.size() != dist.size()) {
        throw StructuralError("got " + std::to_string(labels.size()) + " labels for " +
                              std::to_string(dist.size()) + " points");
    }
    ValidationReport report =
        validate_metric(dist, tolerance.value_or(default_metric_tolerance(dist)));
    if (!report.ok()) {
        throw MetricError("distance matrix is not a metric (" +
                              std::to_string(report.violations.size()) + " violations)",
                          std::move(report));
    }
    auto data = std::make_shared<Data>();
    data->max_distance = dist.max_entry();
    data->labels = std::move(labels);
    data->dist = std::move(dist);
    return FiniteMetricSpace(std::move(data));
}

FiniteMetricSpace FiniteMetricSpace::create(DistanceMatrix dist, std::optional<double> tolerance) {
    auto labels = default_labels(dist.size());
    return create(std::move(labels), std::move(dist), tolerance);
}

bool FiniteMetricSpace::operator==(const FiniteMetricSpace& other) const noexcept {
    return data_ == other.data_ ||
           (data_->labels == other.data_->labels && data_->dist == other.data_->dist);
}

AnchoredSpace::AnchoredSpace(FiniteMetricSpace space, PointIndex anchor)
    : space_(std::move(space)), anchor_(anchor) {
    if (anchor_ >= space_.size()) {
        throw StructuralError("anchor " + std::to_string(anchor_) + " out of range for " +
                              std::to_string(space_.size()) + " points");
    }
}

double AnchoredSpace::norm(PointIndex x) const {
    if (x >= space_.size()) {
        throw StructuralError("point " + std::to_string(x) + " out of range");
    }
    return space_.distance(x, anchor_);
}

std::vector<double> AnchoredSpace::norms() const {
    std::vector<double> out(space_.size());
    for (PointIndex x = 0; x < out.size(); ++x) out[x] = space_.distance(x, anchor_);
    return out;
}

}  // namespace kpcert

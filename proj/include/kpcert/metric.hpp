#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kpcert/backend.hpp"

namespace kpcert {

using PointIndex = std::size_t;

/// Square row-major matrix of distances. No metric axioms are implied.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n, double fill = 0.0);

    /// Throws StructuralError unless every row has `rows.size()` entries.
    static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * n_ + j]; }
    std::span<const double> data() const noexcept { return values_; }
    std::vector<std::vector<double>> rows() const;
    double max_entry() const noexcept;

    bool operator==(const DistanceMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

enum class ViolationKind { negative, asym, diag, triangle, coincident };

std::string_view to_string(ViolationKind kind) noexcept;

/// One metric-axiom violation. Indices are (i) for diag, (i, j) for
/// negative/asym/coincident and (i, j, k) for triangle with k the detour.
struct Violation {
    ViolationKind kind;
    std::vector<std::size_t> indices;
    double magnitude;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// 1e-9 times the largest entry.
double default_metric_tolerance(const DistanceMatrix& dist) noexcept;

/// Every axiom violation exceeding `tolerance`, sorted lexicographically by
/// indices. Throws StructuralError on non-finite entries.
ValidationReport validate_metric(const DistanceMatrix& dist, double tolerance,
                                 Backend backend = Backend::parallel);

/// All-pairs shortest paths, relaxed to a floating-point fixpoint so the
/// result satisfies the triangle inequality exactly and is idempotent.
/// Requires a symmetric matrix with zero diagonal and positive off-diagonal.
DistanceMatrix shortest_path_repair(const DistanceMatrix& dist,
                                    Backend backend = Backend::parallel);

class MetricError : public std::runtime_error {
public:
    MetricError(const std::string& what, ValidationReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

/// A validated finite metric space. Immutable; copies share storage.
class FiniteMetricSpace {
public:
    /// Throws MetricError carrying the report when `dist` is not a metric
    /// within `tolerance` (default_metric_tolerance when omitted).
    static FiniteMetricSpace create(std::vector<std::string> labels, DistanceMatrix dist,
                                    std::optional<double> tolerance = std::nullopt);
    /// Labels default to p0, p1, ...
    static FiniteMetricSpace create(DistanceMatrix dist,
                                    std::optional<double> tolerance = std::nullopt);

    std::size_t size() const noexcept { return data_->dist.size(); }
    double distance(PointIndex i, PointIndex j) const noexcept { return data_->dist(i, j); }
    const DistanceMatrix& matrix() const noexcept { return data_->dist; }
    const std::vector<std::string>& labels() const noexcept { return data_->labels; }
    const std::string& label(PointIndex i) const { return data_->labels.at(i); }
    double max_distance() const noexcept { return data_->max_distance; }

    bool operator==(const FiniteMetricSpace& other) const noexcept;

private:
    struct Data {
        std::vector<std::string> labels;
        DistanceMatrix dist;
        double max_distance = 0.0;
    };
    explicit FiniteMetricSpace(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

    std::shared_ptr<const Data> data_;
};

std::vector<std::string> default_labels(std::size_t n);

/// A metric space with a chosen "zero": ||x|| = d(x, anchor).
class AnchoredSpace {
public:
    AnchoredSpace(FiniteMetricSpace space, PointIndex anchor);

    const FiniteMetricSpace& space() const noexcept { return space_; }
    PointIndex anchor() const noexcept { return anchor_; }

    /// Throws StructuralError for an out-of-range index.
    double norm(PointIndex x) const;
    /// norm of every point, indexed by point.
    std::vector<double> norms() const;

private:
    FiniteMetricSpace space_;
    PointIndex anchor_;
};

inline double norm(const AnchoredSpace& anchored, PointIndex x) { return anchored.norm(x); }

}  // namespace kpcert

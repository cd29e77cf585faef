#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kpcert/certify.hpp"
#include "kpcert/cyclic.hpp"
#include "kpcert/metric.hpp"

namespace kpcert {

enum class Termination { fixed_point, cycle_detected, max_iter };

std::string_view to_string(Termination t) noexcept;

/// Orbit x_1 = start, x_{n+1} = T(x_n). iterates has one more entry than
/// steps; norms and set_index have one entry per iterate. set_index tracks a
/// membership that advances to the next set with every application.
struct PicardTrace {
    PointIndex start = 0;
    std::vector<PointIndex> iterates;
    std::vector<double> steps;            // d(x_{n+1}, x_n)
    std::vector<double> norms;            // c_n = ||x_n||
    std::vector<std::size_t> set_index;   // 0-based
    Termination terminated = Termination::max_iter;

    std::size_t applications() const noexcept { return steps.size(); }
    PointIndex last() const noexcept { return iterates.back(); }

    bool operator==(const PicardTrace&) const = default;
};

/// Applies T until the orbit repeats a point or reaches max_iter
/// applications. Throws StructuralError for a bad start or max_iter = 0.
PicardTrace iterate(const AnchoredSpace& anchored, const SelfMap& map,
                    const CyclicRepresentation& rep, PointIndex start, std::size_t max_iter);

/// One trace per start point, in start order.
std::vector<PicardTrace> iterate_all(const AnchoredSpace& anchored, const SelfMap& map,
                                     const CyclicRepresentation& rep, std::size_t max_iter,
                                     Backend backend = Backend::parallel);

/// Every x with T(x) = x, ascending.
std::vector<PointIndex> find_fixed_points_exhaustive(const SelfMap& map);

enum class InvariantKind {
    step_increase,      // steps[n+1] > steps[n] + tolerance
    nonzero_terminal,   // the trace did not end on a fixed point
    membership,         // x_n not in its tracked set, or the tracked set did not advance
};

std::string_view to_string(InvariantKind kind) noexcept;

struct InvariantFailure {
    InvariantKind kind;
    std::size_t n;   // 0-based position in the trace
    double before;
    double after;

    bool operator==(const InvariantFailure&) const = default;
};

/// Counts for the bound c_n <= (k-1) c_2 with n = k (mod m), 1 <= k <= m,
/// where c_n is measured from the trace start. Indexed by k-1. Reported only.
/// For k = 1 the bound is 0 and fails whenever the orbit has left its start,
/// which the counts make visible.
struct BoundednessTally {
    double c2 = 0.0;
    std::vector<std::size_t> pass;
    std::vector<std::size_t> fail;

    std::size_t total_fail() const noexcept;
};

struct TraceDiagnostics {
    PointIndex start = 0;
    std::vector<InvariantFailure> failures;
    double c_max = 0.0;  // max of the recorded norms
    BoundednessTally bound;

    bool ok() const noexcept { return failures.empty(); }
};

/// Checks a finite orbit against what a holding certificate implies; failures
/// are listed by InvariantKind. Also records c_max and the boundedness tally.
/// Throws PreconditionError unless the certificate holds.
TraceDiagnostics check_trace_invariants(const PicardTrace& trace, const Certificate& certificate,
                                        const CyclicRepresentation& rep,
                                        const FiniteMetricSpace& space);

struct SolveOptions {
    std::size_t max_iter = 0;  // 0 selects point count + 1
    CertifyOptions certify{};
};

struct FixedPointReport {
    std::vector<PointIndex> fixed_points;  // exhaustive scan, ascending
    bool unique = false;
    bool in_intersection = false;
    bool all_converge_to_same = false;
    std::vector<PicardTrace> traces;       // one per start point
    Certificate certificate;
    /// True when the certificate holds and the fixed-point conclusions were
    /// therefore checked; `violations` lists any that failed.
    bool asserted = false;
    std::vector<std::string> violations;
    std::vector<TraceDiagnostics> diagnostics;  // filled only when asserted

    bool conforms() const noexcept { return asserted && violations.empty(); }
};

/// Certifies the Kannan-Pata family over the cyclic representation, runs
/// Picard iteration from every point and scans for fixed points. Throws
/// PreconditionError when validate_cyclic fails.
FixedPointReport solve(const AnchoredSpace& anchored, const SelfMap& map,
                       const CyclicRepresentation& rep, const PataParams& params,
                       const EpsilonGrid& grid, const SolveOptions& options = {});

}  // namespace kpcert

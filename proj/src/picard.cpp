#include "kpcert/picard.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "kpcert/errors.hpp"

namespace kpcert {

namespace {

void require_consistent(const AnchoredSpace& anchored, const SelfMap& map,
                        const CyclicRepresentation& rep) {
    const std::size_t n = anchored.space().size();
    if (map.size() != n || rep.point_count() != n) {
        throw StructuralError("space, map and cyclic representation disagree on the point count");
    }
}

PicardTrace run_orbit(const AnchoredSpace& anchored, const SelfMap& map,
                      const CyclicRepresentation& rep, PointIndex start, std::size_t max_iter) {
    const FiniteMetricSpace& space = anchored.space();
    const std::size_t m = rep.set_count();

    const auto home = rep.memberships(start);
    if (home.empty()) {
        throw PreconditionError("start point " + std::to_string(start) + " is in no set");
    }

    PicardTrace trace;
    trace.start = start;
    trace.iterates.push_back(start);
    trace.norms.push_back(anchored.norm(start));
    trace.set_index.push_back(home.front());

    std::vector<unsigned char> visited(space.size(), 0);
    visited[start] = 1;
    PointIndex current = start;
    for (std::size_t app = 0; app < max_iter; ++app) {
        const PointIndex next = map(current);
        trace.iterates.push_back(next);
        trace.steps.push_back(space.distance(next, current));
        trace.norms.push_back(anchored.norm(next));

        // Follow the cyclic successor; fall back to any set holding the point
        // so a broken inclusion shows up as a membership jump.
        std::size_t tracked = next_set(trace.set_index.back(), m);
        if (!rep.contains(tracked, next)) {
            const auto sets = rep.memberships(next);
            if (!sets.empty()) tracked = sets.front();
        }
        trace.set_index.push_back(tracked);

        if (next == current) {
            trace.terminated = Termination::fixed_point;
            return trace;
        }
        if (visited[next]) {
            trace.terminated = Termination::cycle_detected;
            return trace;
        }
        visited[next] = 1;
        current = next;
    }
    trace.terminated = Termination::max_iter;
    return trace;
}

}  // namespace

std::string_view to_string(Termination t) noexcept {
    switch (t) {
        case Termination::fixed_point: return "fixed_point";
        case Termination::cycle_detected: return "cycle_detected";
        case Termination::max_iter: return "max_iter";
    }
    return "unknown";
}

std::string_view to_string(InvariantKind kind) noexcept {
    switch (kind) {
        case InvariantKind::step_increase: return "step_increase";
        case InvariantKind::nonzero_terminal: return "nonzero_terminal";
        case InvariantKind::membership: return "membership";
    }
    return "unknown";
}

PicardTrace iterate(const AnchoredSpace& anchored, const SelfMap& map,
                    const CyclicRepresentation& rep, PointIndex start, std::size_t max_iter) {
    require_consistent(anchored, map, rep);
    if (start >= map.size()) throw StructuralError("start point " + std::to_string(start) + " out of range");
    if (max_iter == 0) throw StructuralError("max_iter must be at least 1");
    return run_orbit(anchored, map, rep, start, max_iter);
}

std::vector<PicardTrace> iterate_all(const AnchoredSpace& anchored, const SelfMap& map,
                                     const CyclicRepresentation& rep, std::size_t max_iter,
                                     Backend backend) {
    require_consistent(anchored, map, rep);
    if (max_iter == 0) throw StructuralError("max_iter must be at least 1");
    const std::size_t n = map.size();
    for (PointIndex x = 0; x < n; ++x) {
        if (rep.memberships(x).empty()) {
            throw PreconditionError("point " + std::to_string(x) + " is in no set");
        }
    }

    std::vector<PicardTrace> traces(n);
    if (backend == Backend::reference) {
        for (PointIndex x = 0; x < n; ++x) traces[x] = run_orbit(anchored, map, rep, x, max_iter);
        return traces;
    }
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t sx = 0; sx < static_cast<std::int64_t>(n); ++sx) {
        const auto x = static_cast<PointIndex>(sx);
        traces[x] = run_orbit(anchored, map, rep, x, max_iter);
    }
    return traces;
}

std::vector<PointIndex> find_fixed_points_exhaustive(const SelfMap& map) {
    std::vector<PointIndex> out;
    for (PointIndex x = 0; x < map.size(); ++x) {
        if (map(x) == x) out.push_back(x);
    }
    return out;
}

std::size_t BoundednessTally::total_fail() const noexcept {
    std::size_t total = 0;
    for (std::size_t f : fail) total += f;
    return total;
}

TraceDiagnostics check_trace_invariants(const PicardTrace& trace, const Certificate& certificate,
                                        const CyclicRepresentation& rep,
                                        const FiniteMetricSpace& space) {
    if (!certificate.holds) {
        throw PreconditionError("trace invariants are only implied by a holding certificate");
    }
    if (trace.iterates.empty() || trace.steps.size() + 1 != trace.iterates.size() ||
        trace.set_index.size() != trace.iterates.size()) {
        throw StructuralError("malformed trace");
    }
    const double tol = certificate.tolerance;
    const std::size_t m = rep.set_count();

    TraceDiagnostics diag;
    diag.start = trace.start;

    for (std::size_t n = 1; n < trace.steps.size(); ++n) {
        if (trace.steps[n] > trace.steps[n - 1] + tol) {
            diag.failures.push_back(
                {InvariantKind::step_increase, n, trace.steps[n - 1], trace.steps[n]});
        }
    }

    const double terminal = trace.steps.empty() ? 0.0 : trace.steps.back();
    if (trace.terminated != Termination::fixed_point || terminal != 0.0) {
        diag.failures.push_back(
            {InvariantKind::nonzero_terminal, trace.steps.size(), terminal, 0.0});
    }

    for (std::size_t n = 0; n < trace.iterates.size(); ++n) {
        const std::size_t set = trace.set_index[n];
        const bool member = set < m && rep.contains(set, trace.iterates[n]);
        const bool advanced = n == 0 || set == next_set(trace.set_index[n - 1], m);
        if (!member || !advanced) {
            diag.failures.push_back({InvariantKind::membership, n,
                                     static_cast<double>(n == 0 ? set : trace.set_index[n - 1]),
                                     static_cast<double>(set)});
        }
    }

    diag.c_max = *std::max_element(trace.norms.begin(), trace.norms.end());

    // c_n measured from the orbit's own start, which plays the anchor's role
    // in the boundedness argument.
    auto& bound = diag.bound;
    bound.c2 = trace.steps.empty() ? 0.0 : trace.steps.front();
    bound.pass.assign(m, 0);
    bound.fail.assign(m, 0);
    for (std::size_t pos = 1; pos <= trace.iterates.size(); ++pos) {
        const double c_n = space.distance(trace.iterates[pos - 1], trace.start);
        const std::size_t k = wrap_index(pos, m);
        const double limit = static_cast<double>(k - 1) * bound.c2;
        if (c_n <= limit + tol) {
            ++bound.pass[k - 1];
        } else {
            ++bound.fail[k - 1];
        }
    }
    return diag;
}

FixedPointReport solve(const AnchoredSpace& anchored, const SelfMap& map,
                       const CyclicRepresentation& rep, const PataParams& params,
                       const EpsilonGrid& grid, const SolveOptions& options) {
    require_consistent(anchored, map, rep);
    const std::size_t n = map.size();

    FixedPointReport report;
    report.certificate = certify_cyclic_kannan_pata(anchored, map, rep, params, grid, options.certify);
    const std::size_t max_iter = options.max_iter == 0 ? n + 1 : options.max_iter;
    report.traces = iterate_all(anchored, map, rep, max_iter, options.certify.backend);
    report.fixed_points = find_fixed_points_exhaustive(map);

    const auto common = intersection(rep);
    const auto in_common = [&](PointIndex x) {
        return std::binary_search(common.begin(), common.end(), x);
    };
    report.unique = report.fixed_points.size() == 1;
    report.in_intersection = !report.fixed_points.empty() &&
                             std::all_of(report.fixed_points.begin(), report.fixed_points.end(), in_common);
    report.all_converge_to_same =
        std::all_of(report.traces.begin(), report.traces.end(), [&](const PicardTrace& t) {
            return t.terminated == Termination::fixed_point && t.last() == report.traces.front().last();
        });

    if (!report.certificate.holds) return report;

    report.asserted = true;
    auto& v = report.violations;
    if (!report.unique) {
        v.push_back("expected exactly one fixed point, found " +
                    std::to_string(report.fixed_points.size()));
    }
    if (!report.in_intersection) v.push_back("fixed point is not in the intersection of the sets");
    if (!report.all_converge_to_same) v.push_back("Picard iterates do not all reach the same point");

    std::vector<PointIndex> endpoints;
    for (const auto& t : report.traces) {
        if (t.terminated == Termination::fixed_point) endpoints.push_back(t.last());
        if (t.applications() > n) {
            v.push_back("trace from " + std::to_string(t.start) + " needed " +
                        std::to_string(t.applications()) + " applications for " +
                        std::to_string(n) + " points");
        }
    }
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());
    if (endpoints != report.fixed_points) {
        v.push_back("trace endpoints disagree with the exhaustive fixed-point scan");
    }

    for (PointIndex x : common) {
        if (!in_common(map(x))) {
            v.push_back("map sends intersection point " + std::to_string(x) + " outside the intersection");
        }
    }

    for (const auto& t : report.traces) {
        auto diag = check_trace_invariants(t, report.certificate, rep, anchored.space());
        for (const auto& f : diag.failures) {
            v.push_back("trace from " + std::to_string(t.start) + ": " +
                        std::string(to_string(f.kind)) + " at n=" + std::to_string(f.n));
        }
        report.diagnostics.push_back(std::move(diag));
    }
    return report;
}

}  // namespace kpcert

#pragma once

// Reference instances shared by the unit and acceptance suites.
//   E1: two points at distance 1, T swaps them, A_1 = {p0}, A_2 = {p1}.
//   E2: equilateral triangle of side 1, T constant at p2, A_1 = {p0,p2}, A_2 = {p1,p2}.
//   E3: collinear p0 - p1 - p2 with d(p0,p1) = 1, d(p1,p2) = 2, d(p0,p2) = 3,
//       T: p0 -> p1, p1 -> p1, p2 -> p0, A_1 = {p0,p1}, A_2 = {p1,p2}.
// All anchored at p0.

#include "kpcert/instance.hpp"

namespace kpcert::testing {

inline Instance make_instance(std::vector<std::vector<double>> dist, std::vector<PointIndex> image,
                              std::vector<std::vector<PointIndex>> sets) {
    auto space = FiniteMetricSpace::create(DistanceMatrix::from_rows(dist));
    const std::size_t n = space.size();
    return Instance{space, 0, SelfMap(std::move(image), n), CyclicRepresentation(std::move(sets), n),
                    std::nullopt, std::nullopt};
}

inline Instance e1() { return make_instance({{0, 1}, {1, 0}}, {1, 0}, {{0}, {1}}); }

inline Instance e2() {
    return make_instance({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, {2, 2, 2}, {{0, 2}, {1, 2}});
}

inline Instance e3() {
    return make_instance({{0, 1, 3}, {1, 0, 2}, {3, 2, 0}}, {1, 1, 0}, {{0, 1}, {1, 2}});
}

/// Lambda, with alpha = beta = 1 and psi(eps) = eps.
inline PataParams linear_params(double Lambda) { return PataParams{Lambda, 1.0, 1.0, PsiSpec{1.0, 1.0}}; }

}  // namespace kpcert::testing

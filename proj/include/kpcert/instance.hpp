#pragma once

#include <optional>

#include "kpcert/certify.hpp"
#include "kpcert/cyclic.hpp"
#include "kpcert/metric.hpp"

namespace kpcert {

/// A validated experiment. Fields beyond the space, anchor and map are
/// optional because only some conditions need them.
struct Instance {
    FiniteMetricSpace space;
    PointIndex anchor = 0;
    SelfMap map;
    std::optional<CyclicRepresentation> rep;
    std::optional<PataParams> pata;
    std::optional<EpsilonGrid> grid;

    AnchoredSpace anchored() const { return AnchoredSpace(space, anchor); }

    bool operator==(const Instance& other) const {
        return space == other.space && anchor == other.anchor && map == other.map &&
               rep == other.rep && pata == other.pata && grid == other.grid;
    }
};

}  // namespace kpcert

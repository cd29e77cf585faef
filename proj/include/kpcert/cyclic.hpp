#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kpcert/metric.hpp"

namespace kpcert {

/// A total self-map T on points 0..n-1; image()[i] is T(p_i).
class SelfMap {
public:
    /// Throws StructuralError if the image has the wrong length or any entry
    /// is not a point index.
    SelfMap(std::vector<PointIndex> image, std::size_t point_count);

    PointIndex operator()(PointIndex x) const noexcept { return image_[x]; }
    std::span<const PointIndex> image() const noexcept { return image_; }
    std::size_t size() const noexcept { return image_.size(); }

    bool operator==(const SelfMap&) const = default;

private:
    std::vector<PointIndex> image_;
};

/// The cover A_1..A_m. Sets are kept sorted and duplicate-free; they may
/// overlap. Coverage and the cyclic inclusions are checked by
/// validate_cyclic, not on construction, so invalid covers stay representable.
class CyclicRepresentation {
public:
    /// Throws StructuralError for an empty cover or set and for indices out of range.
    CyclicRepresentation(std::vector<std::vector<PointIndex>> sets, std::size_t point_count);

    /// The single-set cover A_1 = all points.
    static CyclicRepresentation whole(std::size_t point_count);

    std::size_t set_count() const noexcept { return sets_.size(); }
    std::size_t point_count() const noexcept { return point_count_; }
    std::span<const PointIndex> set(std::size_t i) const noexcept { return sets_[i]; }
    const std::vector<std::vector<PointIndex>>& sets() const noexcept { return sets_; }
    bool contains(std::size_t set, PointIndex x) const noexcept {
        return member_[x * sets_.size() + set] != 0;
    }
    /// Set indices (0-based, ascending) containing x.
    std::vector<std::size_t> memberships(PointIndex x) const;

    bool operator==(const CyclicRepresentation& other) const noexcept {
        return point_count_ == other.point_count_ && sets_ == other.sets_;
    }

private:
    std::vector<std::vector<PointIndex>> sets_;
    std::size_t point_count_;
    std::vector<unsigned char> member_;  // point-major n x m membership table
};

/// The unique i in [1, m] with i = j (mod m). Both arguments are 1-based and
/// must be at least 1.
std::size_t wrap_index(std::size_t j, std::size_t m);

/// 0-based successor of set index i in a cycle of m sets.
inline std::size_t next_set(std::size_t i, std::size_t m) noexcept { return i + 1 == m ? 0 : i + 1; }

struct InclusionFailure {
    std::size_t set;  // x is in A_set but T(x) is not in the next set
    PointIndex point;
    PointIndex image;

    bool operator==(const InclusionFailure&) const = default;
};

struct CyclicValidation {
    std::vector<InclusionFailure> inclusion_failures;
    std::vector<PointIndex> uncovered;

    bool ok() const noexcept { return inclusion_failures.empty() && uncovered.empty(); }
};

/// Checks that the sets cover every point and T(A_i) is a subset of A_{i+1}
/// (with A_{m+1} = A_1). Throws StructuralError if rep and map disagree on the
/// point count.
CyclicValidation validate_cyclic(const CyclicRepresentation& rep, const SelfMap& map);

struct ConsecutivePair {
    PointIndex x;
    PointIndex y;
    std::size_t set;  // x in A_set, y in the next set

    bool operator==(const ConsecutivePair&) const = default;
};

/// Every (x, y, i) with x in A_i and y in A_{i+1}, ordered by (i, x, y).
std::vector<ConsecutivePair> consecutive_pairs(const CyclicRepresentation& rep);

/// Points common to every set, ascending. May be empty.
std::vector<PointIndex> intersection(const CyclicRepresentation& rep);

}  // namespace kpcert

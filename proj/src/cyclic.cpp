#include "kpcert/cyclic.hpp"

#include <algorithm>
#include <string>

#include "kpcert/errors.hpp"

namespace kpcert {

SelfMap::SelfMap(std::vector<PointIndex> image, std::size_t point_count)
    : image_(std::move(image)) {
    if (image_.size() != point_count) {
        throw StructuralError("map has " + std::to_string(image_.size()) + " entries for " +
                              std::to_string(point_count) + " points");
    }
    for (std::size_t i = 0; i < image_.size(); ++i) {
        if (image_[i] >= point_count) {
            throw StructuralError("map sends point " + std::to_string(i) + " to " +
                                  std::to_string(image_[i]) + ", which is not a point");
        }
    }
}

CyclicRepresentation::CyclicRepresentation(std::vector<std::vector<PointIndex>> sets,
                                           std::size_t point_count)
    : sets_(std::move(sets)), point_count_(point_count) {
    if (sets_.empty()) throw StructuralError("a cyclic representation needs at least one set");
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        auto& s = sets_[i];
        if (s.empty()) throw StructuralError("set " + std::to_string(i) + " is empty");
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (s.back() >= point_count_) {
            throw StructuralError("set " + std::to_string(i) + " contains point " +
                                  std::to_string(s.back()) + ", which is not a point");
        }
    }
    member_.assign(point_count_ * sets_.size(), 0);
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        for (PointIndex x : sets_[i]) member_[x * sets_.size() + i] = 1;
    }
}

CyclicRepresentation CyclicRepresentation::whole(std::size_t point_count) {
    std::vector<PointIndex> all(point_count);
    for (PointIndex x = 0; x < point_count; ++x) all[x] = x;
    return CyclicRepresentation({std::move(all)}, point_count);
}

std::vector<std::size_t> CyclicRepresentation::memberships(PointIndex x) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        if (contains(i, x)) out.push_back(i);
    }
    return out;
}

std::size_t wrap_index(std::size_t j, std::size_t m) {
    if (j < 1 || m < 1) throw StructuralError("wrap_index takes 1-based j >= 1 and m >= 1");
    return (j - 1) % m + 1;
}

CyclicValidation validate_cyclic(const CyclicRepresentation& rep, const SelfMap& map) {
    if (rep.point_count() != map.size()) {
        throw StructuralError("cyclic representation covers " + std::to_string(rep.point_count()) +
                              " points but the map has " + std::to_string(map.size()));
    }
    CyclicValidation result;
    const std::size_t m = rep.set_count();
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t next = next_set(i, m);
        for (PointIndex x : rep.set(i)) {
            if (!rep.contains(next, map(x))) result.inclusion_failures.push_back({i, x, map(x)});
        }
    }
    for (PointIndex x = 0; x < rep.point_count(); ++x) {
        bool covered = false;
        for (std::size_t i = 0; i < m && !covered; ++i) covered = rep.contains(i, x);
        if (!covered) result.uncovered.push_back(x);
    }
    return result;
}

std::vector<ConsecutivePair> consecutive_pairs(const CyclicRepresentation& rep) {
    const std::size_t m = rep.set_count();
    std::size_t total = 0;
    for (std::size_t i = 0; i < m; ++i) total += rep.set(i).size() * rep.set(next_set(i, m)).size();

    std::vector<ConsecutivePair> pairs;
    pairs.reserve(total);
    for (std::size_t i = 0; i < m; ++i) {
        const auto next = rep.set(next_set(i, m));
        for (PointIndex x : rep.set(i)) {
            for (PointIndex y : next) pairs.push_back({x, y, i});
        }
    }
    return pairs;
}

std::vector<PointIndex> intersection(const CyclicRepresentation& rep) {
    std::vector<PointIndex> out;
    for (PointIndex x : rep.set(0)) {
        bool everywhere = true;
        for (std::size_t i = 1; i < rep.set_count() && everywhere; ++i) everywhere = rep.contains(i, x);
        if (everywhere) out.push_back(x);
    }
    return out;
}

}  // namespace kpcert

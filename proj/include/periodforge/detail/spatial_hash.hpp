#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace periodforge::detail {

// Uniform bucket grid for nearest-point queries within a radius below the cell size.
class SpatialHash {
public:
    explicit SpatialHash(double cell) : cell_(cell) {}

    void insert(const Eigen::Vector3d& p, int id) {
        buckets_[key(cell_of(p))].push_back(id);
        points_.resize(std::max<std::size_t>(points_.size(), id + 1));
        points_[id] = p;
    }

    // Nearest inserted point within `radius`, or -1. Ties go to the smaller id.
    int nearest(const Eigen::Vector3d& p, double radius, double* dist = nullptr) const {
        auto c = cell_of(p);
        int best = -1;
        double bd = radius;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    auto it = buckets_.find(key({c[0] + dx, c[1] + dy, c[2] + dz}));
                    if (it == buckets_.end()) continue;
                    for (int id : it->second) {
                        double d = (points_[id] - p).norm();
                        if (d < bd || (d == bd && best >= 0 && id < best)) {
                            bd = d;
                            best = id;
                        }
                    }
                }
        if (dist) *dist = bd;
        return best;
    }

private:
    std::array<std::int64_t, 3> cell_of(const Eigen::Vector3d& p) const {
        return {static_cast<std::int64_t>(std::floor(p.x() / cell_)), static_cast<std::int64_t>(std::floor(p.y() / cell_)),
                static_cast<std::int64_t>(std::floor(p.z() / cell_))};
    }
    static std::uint64_t key(const std::array<std::int64_t, 3>& c) {
        std::uint64_t h = 1469598103934665603ull;
        for (auto v : c) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 1099511628211ull;
        }
        return h;
    }

    double cell_;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
    std::vector<Eigen::Vector3d> points_;
};

}  // namespace periodforge::detail

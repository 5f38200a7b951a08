#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "qrc/qcore.h"

namespace qrc::detail {

/// Near-duplicate lookup for fixed-size complex arrays under the max-entry
/// distance. Each array is projected onto a fixed positive weight vector; two
/// arrays within `tol` of each other have keys within `radius`, so candidates
/// come from a key range and are confirmed by the caller's exact test.
class ProjectionIndex {
   public:
    ProjectionIndex(size_t size, double tol) : tol_(tol) {
        std::mt19937_64 gen(0x5EEDC0DEULL);
        std::uniform_real_distribution<double> u(0.5, 1.5);
        weights_.resize(2 * size);
        double total = 0;
        for (auto &w : weights_) {
            w = u(gen);
            total += w;
        }
        radius_ = tol * total * (1 + 1e-9) + 1e-14 * total;
    }

    double tol() const { return tol_; }

    double key(const complex_t *data) const {
        double k = 0;
        const size_t n = weights_.size() / 2;
        for (size_t i = 0; i < n; ++i) {
            k += weights_[2 * i] * data[i].real() + weights_[2 * i + 1] * data[i].imag();
        }
        return k;
    }

    /// First inserted id (in insertion order) whose entry satisfies `close`.
    template <class Pred>
    std::optional<size_t> find(double key, Pred &&close) const {
        std::optional<size_t> best;
        auto lo = keys_.lower_bound(key - radius_);
        auto hi = keys_.upper_bound(key + radius_);
        for (auto it = lo; it != hi; ++it) {
            if ((!best || it->second < *best) && close(it->second)) {
                best = it->second;
            }
        }
        return best;
    }

    void insert(double key, size_t id) { keys_.emplace(key, id); }

   private:
    double tol_;
    double radius_ = 0;
    std::vector<double> weights_;
    std::multimap<double, size_t> keys_;
};

}  // namespace qrc::detail

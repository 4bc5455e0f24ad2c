#pragma once

#include <array>
#include <functional>

#include "plap/grid.hpp"

namespace plap::testing {

inline grid::DomainPtr unit_box(int n, int resolution) {
    std::array<double, 3> ext{1.0, 1.0, 1.0};
    std::array<int, 3> res{resolution, resolution, resolution};
    return grid::build_domain(std::span(ext.data(), static_cast<std::size_t>(n)),
                              std::span(res.data(), static_cast<std::size_t>(n)));
}

inline grid::WeightField weight(const grid::DomainPtr& d,
                                const std::function<double(const Vec&)>& f) {
    return grid::WeightField(grid::sample(d, f));
}

inline Vec vec(std::initializer_list<double> v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) {
        out[k++] = x;
    }
    return out;
}

inline double max_abs_diff(const grid::ScalarField& a, const std::function<double(const Vec&)>& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - f(a.domain()->coordinate(i))));
    }
    return m;
}

}  // namespace plap::testing

#include <algorithm>
#include <numeric>

#include "plap/grid.hpp"

namespace plap::grid {

void Domain::build_simplices() {
    std::array<int, 3> perm{0, 1, 2};
    std::vector<std::array<int, 3>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.begin() + dim_));

    std::array<int, 3> cells{1, 1, 1};
    std::size_t cell_count = 1;
    for (int a = 0; a < dim_; ++a) {
        cells[a] = count_[a] - 1;
        cell_count *= static_cast<std::size_t>(cells[a]);
    }
    simplices_.clear();
    simplices_.reserve(cell_count * perms.size());

    std::array<int, 3> c{0, 0, 0};
    for (std::size_t cell = 0; cell < cell_count; ++cell) {
        std::size_t rest = cell;
        for (int a = 0; a < dim_; ++a) {
            c[a] = static_cast<int>(rest % static_cast<std::size_t>(cells[a]));
            rest /= static_cast<std::size_t>(cells[a]);
        }
        for (const auto& p : perms) {
            Simplex s;
            s.perm = p;
            auto corner = c;
            s.vertices[0] = node_index(corner);
            for (int k = 0; k < dim_; ++k) {
                corner[p[k]] += 1;
                s.vertices[k + 1] = node_index(corner);
            }
            simplices_.push_back(s);
        }
    }

    double factorial = 1.0;
    for (int k = 2; k <= dim_; ++k) {
        factorial *= k;
    }
    double cell_volume = 1.0;
    for (int a = 0; a < dim_; ++a) {
        cell_volume *= h_[a];
    }
    simplex_volume_ = cell_volume / factorial;
}

VectorField cell_gradient(const ScalarField& u) {
    if (u.location() != Location::Node) {
        throw InvalidArgument("cell_gradient: expects a node-located field");
    }
    const Domain& d = *u.domain();
    const int n = d.dimension();
    const auto& simplices = d.simplices();
    VectorField g(u.domain(), Location::Cell, Vec::Zero(n));
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        const auto& sx = simplices[s];
        Vec v(n);
        for (int k = 0; k < n; ++k) {
            const int axis = sx.perm[k];
            v[axis] = (u[sx.vertices[k + 1]] - u[sx.vertices[k]]) / d.spacing(axis);
        }
        g.set(s, v);
    }
    return g;
}

ScalarField to_cells(const ScalarField& u) {
    if (u.location() == Location::Cell) {
        return u;
    }
    const Domain& d = *u.domain();
    const int n = d.dimension();
    ScalarField out(u.domain(), Location::Cell);
    const auto& simplices = d.simplices();
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        double sum = 0.0;
        for (int k = 0; k <= n; ++k) {
            sum += u[simplices[s].vertices[k]];
        }
        out[s] = sum / (n + 1);
    }
    return out;
}

TensorField to_cells(const TensorField& a) {
    if (a.location() == Location::Cell) {
        return a;
    }
    const Domain& d = *a.domain();
    const int n = d.dimension();
    TensorField out(a.domain(), Location::Cell, Mat::Zero(n, n));
    const auto& simplices = d.simplices();
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        Mat sum = Mat::Zero(n, n);
        for (int k = 0; k <= n; ++k) {
            sum += a[simplices[s].vertices[k]];
        }
        out.set(s, sum / (n + 1));
    }
    return out;
}

}  // namespace plap::grid

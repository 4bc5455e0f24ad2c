#include "plap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace plap::grid {

Domain Domain::build(std::span<const double> extents, std::span<const int> resolution,
                     std::span<const double> origin) {
    const auto n = extents.size();
    if (n != 2 && n != 3) {
        throw InvalidArgument("domain dimension must be 2 or 3, got " + std::to_string(n));
    }
    if (resolution.size() != n) {
        throw InvalidArgument("resolution must have one entry per axis");
    }
    if (!origin.empty() && origin.size() != n) {
        throw InvalidArgument("origin must have one entry per axis");
    }

    Domain d;
    d.dim_ = static_cast<int>(n);
    d.node_count_ = 1;
    for (std::size_t a = 0; a < n; ++a) {
        if (!(extents[a] > 0.0) || !std::isfinite(extents[a])) {
            throw InvalidArgument("extent along axis " + std::to_string(a + 1) +
                                  " must be positive and finite");
        }
        if (resolution[a] < 3) {
            throw InvalidArgument("resolution along axis " + std::to_string(a + 1) +
                                  " must be at least 3");
        }
        d.extent_[a] = extents[a];
        d.origin_[a] = origin.empty() ? 0.0 : origin[a];
        d.count_[a] = resolution[a];
        d.h_[a] = extents[a] / (resolution[a] - 1);
        d.node_count_ *= static_cast<std::size_t>(resolution[a]);
    }

    d.boundary_slot_.assign(d.node_count_, -1);
    for (NodeId id = 0; id < d.node_count_; ++id) {
        const auto ijk = d.node_ijk(id);
        bool on_boundary = false;
        for (std::size_t a = 0; a < n; ++a) {
            on_boundary = on_boundary || ijk[a] == 0 || ijk[a] == d.count_[a] - 1;
        }
        if (on_boundary) {
            d.boundary_slot_[id] = static_cast<long>(d.boundary_.size());
            d.boundary_.push_back(id);
        } else {
            d.interior_.push_back(id);
        }
    }

    for (int a = 0; a < d.dim_; ++a) {
        for (int side : {-1, 1}) {
            Face face;
            face.axis = a;
            face.side = side;
            face.normal = Vec::Zero(d.dim_);
            face.normal[a] = side;
            const int fixed = side < 0 ? 0 : d.count_[a] - 1;
            for (NodeId id = 0; id < d.node_count_; ++id) {
                if (d.node_ijk(id)[a] == fixed) {
                    face.nodes.push_back(id);
                }
            }
            d.faces_.push_back(std::move(face));
        }
    }

    d.build_simplices();
    return d;
}

NodeId Domain::node_index(const std::array<int, 3>& ijk) const {
    NodeId id = 0;
    for (int a = dim_ - 1; a >= 0; --a) {
        id = id * static_cast<NodeId>(count_[a]) + static_cast<NodeId>(ijk[a]);
    }
    return id;
}

std::array<int, 3> Domain::node_ijk(NodeId id) const {
    std::array<int, 3> ijk{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
        ijk[a] = static_cast<int>(id % static_cast<NodeId>(count_[a]));
        id /= static_cast<NodeId>(count_[a]);
    }
    return ijk;
}

Vec Domain::coordinate(NodeId id) const {
    const auto ijk = node_ijk(id);
    Vec x(dim_);
    for (int a = 0; a < dim_; ++a) {
        // Pin the far face exactly to origin + extent.
        x[a] = ijk[a] == count_[a] - 1 ? origin_[a] + extent_[a] : origin_[a] + ijk[a] * h_[a];
    }
    return x;
}

double Domain::node_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) {
        v *= h_[a];
    }
    return v;
}

double Domain::volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) {
        v *= extent_[a];
    }
    return v;
}

double Domain::node_weight(NodeId id) const {
    const auto ijk = node_ijk(id);
    double w = 1.0;
    for (int a = 0; a < dim_; ++a) {
        const bool end = ijk[a] == 0 || ijk[a] == count_[a] - 1;
        w *= end ? 0.5 * h_[a] : h_[a];
    }
    return w;
}

std::vector<double> Domain::face_weights(const Face& face) const {
    std::vector<double> w;
    w.reserve(face.nodes.size());
    for (NodeId id : face.nodes) {
        const auto ijk = node_ijk(id);
        double weight = 1.0;
        for (int a = 0; a < dim_; ++a) {
            if (a == face.axis) {
                continue;
            }
            const bool end = ijk[a] == 0 || ijk[a] == count_[a] - 1;
            weight *= end ? 0.5 * h_[a] : h_[a];
        }
        w.push_back(weight);
    }
    return w;
}

DomainPtr build_domain(std::span<const double> extents, std::span<const int> resolution,
                       std::span<const double> origin) {
    return std::make_shared<const Domain>(Domain::build(extents, resolution, origin));
}

template <>
void TensorField::set(std::size_t i, const Mat& value) {
    Mat m = value;
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
        for (Eigen::Index k = j + 1; k < m.cols(); ++k) {
            m(k, j) = m(j, k);
        }
    }
    values_[i] = m;
}

WeightField::WeightField(ScalarField values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
            throw InvalidArgument("weight must be strictly positive and finite (entry " +
                                  std::to_string(i) + " is " + std::to_string(values_[i]) + ")");
        }
    }
}

BoundaryData::BoundaryData(DomainPtr domain)
    : domain_(std::move(domain)), values_(domain_->boundary_nodes().size(), 0.0) {}

BoundaryData::BoundaryData(DomainPtr domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_->boundary_nodes().size()) {
        throw InvalidArgument("boundary data size does not match the boundary node count");
    }
}

double BoundaryData::at_node(NodeId id) const {
    const long slot = domain_->boundary_slot(id);
    if (slot < 0) {
        throw InvalidArgument("node " + std::to_string(id) + " is not a boundary node");
    }
    return values_[static_cast<std::size_t>(slot)];
}

FaceField::FaceField(DomainPtr domain) : domain_(std::move(domain)) {
    for (const auto& face : domain_->faces()) {
        values_.emplace_back(face.nodes.size(), 0.0);
    }
}

double FaceField::max_abs() const {
    double m = 0.0;
    for (const auto& f : values_) {
        for (double v : f) {
            m = std::max(m, std::abs(v));
        }
    }
    return m;
}

FaceField operator-(const FaceField& a, const FaceField& b) {
    require_same_domain(a.domain(), b.domain(), "face field difference");
    FaceField out(a.domain());
    for (std::size_t f = 0; f < a.face_count(); ++f) {
        auto dst = out.face(f);
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] = a.face(f)[i] - b.face(f)[i];
        }
    }
    return out;
}

FaceField operator*(double s, const FaceField& a) {
    FaceField out(a.domain());
    for (std::size_t f = 0; f < a.face_count(); ++f) {
        auto dst = out.face(f);
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] = s * a.face(f)[i];
        }
    }
    return out;
}

ScalarField sample(const DomainPtr& domain, const std::function<double(const Vec&)>& f) {
    ScalarField u(domain);
    for (NodeId id = 0; id < domain->node_count(); ++id) {
        u[id] = f(domain->coordinate(id));
    }
    return u;
}

BoundaryData sample_boundary(const DomainPtr& domain, const std::function<double(const Vec&)>& f) {
    BoundaryData b(domain);
    const auto& nodes = domain->boundary_nodes();
    for (std::size_t s = 0; s < nodes.size(); ++s) {
        b[s] = f(domain->coordinate(nodes[s]));
    }
    return b;
}

namespace {

// d/dx_axis of a nodal array at node `id`.
double axis_derivative(const Domain& d, std::span<const double> u, NodeId id, int axis) {
    const auto ijk = d.node_ijk(id);
    const int i = ijk[axis];
    const int last = d.nodes_along(axis) - 1;
    const double h = d.spacing(axis);
    auto at = [&](int offset) {
        auto shifted = ijk;
        shifted[axis] = i + offset;
        return u[d.node_index(shifted)];
    };
    if (i == 0) {
        return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    }
    if (i == last) {
        return (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h);
    }
    return (at(1) - at(-1)) / (2.0 * h);
}

void require_nodes(const DomainPtr& d, Location loc, const char* what) {
    if (!d) {
        throw InvalidArgument(std::string(what) + ": field has no domain");
    }
    if (loc != Location::Node) {
        throw InvalidArgument(std::string(what) + ": expects a node-located field");
    }
}

}  // namespace

VectorField gradient(const ScalarField& u) {
    require_nodes(u.domain(), u.location(), "gradient");
    const Domain& d = *u.domain();
    const int n = d.dimension();
    VectorField g(u.domain(), Location::Node, Vec::Zero(n));
    for (NodeId id = 0; id < d.node_count(); ++id) {
        Vec v(n);
        for (int a = 0; a < n; ++a) {
            v[a] = axis_derivative(d, u.values(), id, a);
        }
        g.set(id, v);
    }
    return g;
}

ScalarField divergence(const VectorField& v) {
    require_nodes(v.domain(), v.location(), "divergence");
    const Domain& d = *v.domain();
    const int n = d.dimension();
    ScalarField out(v.domain());
    std::vector<double> comp(d.node_count());
    for (int a = 0; a < n; ++a) {
        for (NodeId id = 0; id < d.node_count(); ++id) {
            comp[id] = v[id][a];
        }
        for (NodeId id = 0; id < d.node_count(); ++id) {
            out[id] += axis_derivative(d, comp, id, a);
        }
    }
    return out;
}

BoundaryData boundary_trace(const ScalarField& u) {
    require_nodes(u.domain(), u.location(), "boundary_trace");
    const auto& nodes = u.domain()->boundary_nodes();
    std::vector<double> values(nodes.size());
    for (std::size_t s = 0; s < nodes.size(); ++s) {
        values[s] = u[nodes[s]];
    }
    return BoundaryData(u.domain(), std::move(values));
}

FaceField normal_component(const VectorField& v) {
    require_nodes(v.domain(), v.location(), "normal_component");
    FaceField out(v.domain());
    const auto& faces = v.domain()->faces();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        auto dst = out.face(f);
        for (std::size_t i = 0; i < faces[f].nodes.size(); ++i) {
            dst[i] = faces[f].normal.dot(v[faces[f].nodes[i]]);
        }
    }
    return out;
}

ScalarField extend_by_zero(const BoundaryData& f) {
    ScalarField u(f.domain());
    const auto& nodes = f.domain()->boundary_nodes();
    for (std::size_t s = 0; s < nodes.size(); ++s) {
        u[nodes[s]] = f[s];
    }
    return u;
}

double integrate(const ScalarField& u) {
    require_nodes(u.domain(), u.location(), "integrate");
    const Domain& d = *u.domain();
    double sum = 0.0;
    for (NodeId id = 0; id < d.node_count(); ++id) {
        sum += d.node_weight(id) * u[id];
    }
    return sum;
}

double boundary_integral(const FaceField& v) {
    const Domain& d = *v.domain();
    double sum = 0.0;
    for (std::size_t f = 0; f < d.faces().size(); ++f) {
        const auto w = d.face_weights(d.faces()[f]);
        const auto vals = v.face(f);
        for (std::size_t i = 0; i < w.size(); ++i) {
            sum += w[i] * vals[i];
        }
    }
    return sum;
}

double boundary_pairing(const BoundaryData& f, const FaceField& v) {
    require_same_domain(f.domain(), v.domain(), "boundary_pairing");
    const Domain& d = *v.domain();
    double sum = 0.0;
    for (std::size_t fi = 0; fi < d.faces().size(); ++fi) {
        const auto& face = d.faces()[fi];
        const auto w = d.face_weights(face);
        const auto vals = v.face(fi);
        for (std::size_t i = 0; i < w.size(); ++i) {
            sum += w[i] * f.at_node(face.nodes[i]) * vals[i];
        }
    }
    return sum;
}

void require_same_domain(const DomainPtr& a, const DomainPtr& b, const char* what) {
    if (a.get() != b.get()) {
        throw InvalidArgument(std::string(what) + ": fields live on different domains");
    }
}

}  // namespace plap::grid

#include "plap/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

namespace plap::jets {

constexpr int kMaxOrder = 40;

struct Layout {
    int nvars = 0;
    int order = 0;
    std::vector<MultiIndex> index;
    // Dense (order+1)^nvars table from multi-index to position.
    std::vector<int> lookup;
    // Products c[t] += a[left] * b[right], grouped by target t.
    std::vector<int> target_begin;
    std::vector<int> left;
    std::vector<int> right;

    long position(const MultiIndex& a) const {
        int deg = 0;
        long key = 0;
        for (int k = nvars - 1; k >= 0; --k) {
            if (a[k] < 0) {
                return -1;
            }
            deg += a[k];
            key = key * (order + 1) + a[k];
        }
        for (int k = nvars; k < 3; ++k) {
            if (a[k] != 0) {
                return -1;
            }
        }
        if (deg > order) {
            return -1;
        }
        return lookup[static_cast<std::size_t>(key)];
    }
};

namespace {

void enumerate(int nvars, int var, int remaining, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (var == nvars - 1) {
        cur[var] = remaining;
        out.push_back(cur);
        return;
    }
    for (int a = remaining; a >= 0; --a) {
        cur[var] = a;
        enumerate(nvars, var + 1, remaining - a, cur, out);
    }
    cur[var] = 0;
}

std::shared_ptr<const Layout> build_layout(int nvars, int order) {
    auto l = std::make_shared<Layout>();
    l->nvars = nvars;
    l->order = order;
    if (nvars == 0) {
        l->index.push_back({0, 0, 0});
        l->lookup.push_back(0);
    } else {
        for (int d = 0; d <= order; ++d) {
            MultiIndex cur{0, 0, 0};
            enumerate(nvars, 0, d, cur, l->index);
        }
        std::size_t table = 1;
        for (int k = 0; k < nvars; ++k) {
            table *= static_cast<std::size_t>(order + 1);
        }
        l->lookup.assign(table, -1);
        for (std::size_t i = 0; i < l->index.size(); ++i) {
            long key = 0;
            for (int k = nvars - 1; k >= 0; --k) {
                key = key * (order + 1) + l->index[i][k];
            }
            l->lookup[static_cast<std::size_t>(key)] = static_cast<int>(i);
        }
    }
    const auto size = l->index.size();
    l->target_begin.push_back(0);
    for (std::size_t t = 0; t < size; ++t) {
        const MultiIndex& g = l->index[t];
        // Every i <= g componentwise pairs with g - i.
        for (std::size_t i = 0; i <= t; ++i) {
            const MultiIndex& a = l->index[i];
            MultiIndex b{g[0] - a[0], g[1] - a[1], g[2] - a[2]};
            if (b[0] < 0 || b[1] < 0 || b[2] < 0) {
                continue;
            }
            l->left.push_back(static_cast<int>(i));
            l->right.push_back(static_cast<int>(l->position(b)));
        }
        l->target_begin.push_back(static_cast<int>(l->left.size()));
    }
    return l;
}

std::shared_ptr<const Layout> layout_for(int nvars, int order) {
    if (nvars < 0 || nvars > 3) {
        throw InvalidArgument("jets support 0 to 3 variables");
    }
    if (order < 0 || order > kMaxOrder) {
        throw InvalidArgument("jet order must lie in [0, " + std::to_string(kMaxOrder) + "]");
    }
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const Layout>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{nvars, order}];
    if (!slot) {
        slot = build_layout(nvars, order);
    }
    return slot;
}

void require_same_shape(const Jet& a, const Jet& b) {
    if (a.nvars() != b.nvars() || a.order() != b.order()) {
        std::ostringstream msg;
        msg << "jet shape mismatch: (" << a.nvars() << " vars, order " << a.order() << ") vs ("
            << b.nvars() << " vars, order " << b.order() << ")";
        throw InvalidArgument(msg.str());
    }
}

bool is_integer(double e) { return std::isfinite(e) && std::trunc(e) == e && std::abs(e) < 1e6; }

// Horner evaluation of sum_k d[k] r^k with r = a - a.value().
Jet horner(const std::vector<double>& d, const Jet& a) {
    Jet r = a;
    r.coefficients()[0] = 0.0;
    Jet out = Jet::constant(a.nvars(), a.order(), d.back());
    for (int k = static_cast<int>(d.size()) - 2; k >= 0; --k) {
        out = out * r;
        out.coefficients()[0] += d[static_cast<std::size_t>(k)];
    }
    return out;
}

}  // namespace

Jet::Jet(int nvars, int order)
    : nvars_(nvars), order_(order), layout_(layout_for(nvars, order)),
      coeff_(layout_->index.size(), 0.0) {}

Jet Jet::constant(int nvars, int order, double value) {
    Jet j(nvars, order);
    j.coeff_[0] = value;
    return j;
}

Jet Jet::variable(int nvars, int order, int axis, double value) {
    if (axis < 0 || axis >= nvars) {
        throw InvalidArgument("variable axis out of range");
    }
    Jet j = constant(nvars, order, value);
    if (order >= 1) {
        MultiIndex e{0, 0, 0};
        e[axis] = 1;
        j.set_coefficient(e, 1.0);
    }
    return j;
}

double Jet::coefficient(const MultiIndex& alpha) const {
    const long k = position(alpha);
    if (k < 0) {
        throw InvalidArgument("multi-index outside the jet");
    }
    return coeff_[static_cast<std::size_t>(k)];
}

double Jet::derivative(const MultiIndex& alpha) const {
    return coefficient(alpha) * multi_factorial(alpha);
}

void Jet::set_coefficient(const MultiIndex& alpha, double v) {
    const long k = position(alpha);
    if (k < 0) {
        throw InvalidArgument("multi-index outside the jet");
    }
    coeff_[static_cast<std::size_t>(k)] = v;
}

const MultiIndex& Jet::index(std::size_t k) const { return layout_->index[k]; }

long Jet::position(const MultiIndex& alpha) const { return layout_->position(alpha); }

Jet Jet::truncate(int order) const {
    if (order > order_) {
        throw InvalidArgument("cannot truncate a jet to a higher order");
    }
    Jet out(nvars_, order);
    // Same ordering by degree, so the lower-order block is a prefix.
    std::copy_n(coeff_.begin(), out.coeff_.size(), out.coeff_.begin());
    return out;
}

bool Jet::is_constant() const {
    return std::all_of(coeff_.begin() + 1, coeff_.end(), [](double c) { return c == 0.0; });
}

Jet& Jet::operator+=(const Jet& b) {
    require_same_shape(*this, b);
    for (std::size_t k = 0; k < coeff_.size(); ++k) {
        coeff_[k] += b.coeff_[k];
    }
    return *this;
}

Jet& Jet::operator-=(const Jet& b) {
    require_same_shape(*this, b);
    for (std::size_t k = 0; k < coeff_.size(); ++k) {
        coeff_[k] -= b.coeff_[k];
    }
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (double& c : coeff_) {
        c *= s;
    }
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator/(Jet a, double s) {
    if (s == 0.0) {
        throw DivisionByZeroConstantTerm("division of a jet by zero");
    }
    for (double& c : a.coefficients()) {
        c /= s;
    }
    return a;
}

Jet operator+(Jet a, double s) {
    a.coefficients()[0] += s;
    return a;
}
Jet operator+(double s, Jet a) { return std::move(a) + s; }
Jet operator-(Jet a, double s) {
    a.coefficients()[0] -= s;
    return a;
}
Jet operator-(double s, Jet a) { return -std::move(a) + s; }

Jet operator*(const Jet& a, const Jet& b) {
    require_same_shape(a, b);
    Jet out(a.nvars_, a.order_);
    const Layout& l = *a.layout_;
    for (std::size_t t = 0; t < out.coeff_.size(); ++t) {
        double acc = 0.0;
        for (int k = l.target_begin[t]; k < l.target_begin[t + 1]; ++k) {
            acc += a.coeff_[static_cast<std::size_t>(l.left[k])] *
                   b.coeff_[static_cast<std::size_t>(l.right[k])];
        }
        out.coeff_[t] = acc;
    }
    return out;
}

Jet operator/(const Jet& a, const Jet& b) {
    require_same_shape(a, b);
    const double b0 = b.coeff_[0];
    if (b0 == 0.0) {
        throw DivisionByZeroConstantTerm("jet division by a denominator with zero constant term");
    }
    Jet c(a.nvars_, a.order_);
    const Layout& l = *a.layout_;
    for (std::size_t t = 0; t < c.coeff_.size(); ++t) {
        double acc = a.coeff_[t];
        for (int k = l.target_begin[t]; k < l.target_begin[t + 1]; ++k) {
            const auto r = static_cast<std::size_t>(l.right[k]);
            if (r != 0) {
                acc -= c.coeff_[static_cast<std::size_t>(l.left[k])] * b.coeff_[r];
            }
        }
        c.coeff_[t] = acc / b0;
    }
    return c;
}

Jet operator/(double s, const Jet& b) { return Jet::constant(b.nvars(), b.order(), s) / b; }

Jet pow(const Jet& base, double exponent) {
    const double b0 = base.value();
    if (is_integer(exponent)) {
        const auto m = static_cast<long>(std::abs(exponent));
        Jet acc = Jet::constant(base.nvars(), base.order(), 1.0);
        for (long k = 0; k < m; ++k) {
            acc = acc * base;
        }
        if (exponent < 0) {
            if (b0 == 0.0) {
                throw DivisionByZeroConstantTerm("negative power of a jet with zero constant term");
            }
            acc = 1.0 / acc;
        }
        return acc;
    }
    if (!(b0 > 0.0)) {
        std::ostringstream msg;
        msg << "non-integer power " << exponent << " of a jet with constant term " << b0;
        throw DomainError(msg.str());
    }
    std::vector<double> d(static_cast<std::size_t>(base.order()) + 1);
    d[0] = std::pow(b0, exponent);
    for (std::size_t k = 1; k < d.size(); ++k) {
        d[k] = d[k - 1] * (exponent - static_cast<double>(k) + 1.0) / (static_cast<double>(k) * b0);
    }
    return horner(d, base);
}

Jet pow(const Jet& base, const Jet& exponent) {
    if (exponent.is_constant()) {
        return pow(base, exponent.value());
    }
    return exp(exponent * log(base));
}

Jet exp(const Jet& a) {
    std::vector<double> d(static_cast<std::size_t>(a.order()) + 1);
    d[0] = std::exp(a.value());
    for (std::size_t k = 1; k < d.size(); ++k) {
        d[k] = d[k - 1] / static_cast<double>(k);
    }
    return horner(d, a);
}

Jet log(const Jet& a) {
    const double a0 = a.value();
    if (!(a0 > 0.0)) {
        std::ostringstream msg;
        msg << "log of a jet with constant term " << a0;
        throw DomainError(msg.str());
    }
    std::vector<double> d(static_cast<std::size_t>(a.order()) + 1);
    d[0] = std::log(a0);
    double inv = 1.0;
    for (std::size_t k = 1; k < d.size(); ++k) {
        inv /= a0;
        d[k] = (k % 2 == 1 ? 1.0 : -1.0) * inv / static_cast<double>(k);
    }
    return horner(d, a);
}

Jet sqrt(const Jet& a) {
    const double a0 = a.value();
    if (!(a0 > 0.0)) {
        if (a0 == 0.0 && a.is_constant()) {
            return a;
        }
        std::ostringstream msg;
        msg << "sqrt of a jet with constant term " << a0;
        throw DomainError(msg.str());
    }
    std::vector<double> d(static_cast<std::size_t>(a.order()) + 1);
    d[0] = std::sqrt(a0);
    for (std::size_t k = 1; k < d.size(); ++k) {
        d[k] = d[k - 1] * (1.5 - static_cast<double>(k)) / (static_cast<double>(k) * a0);
    }
    return horner(d, a);
}

namespace {

Jet trig(const Jet& a, bool cosine) {
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    // Derivatives of sin cycle through sin, cos, -sin, -cos.
    const std::array<double, 4> cyc = cosine ? std::array<double, 4>{c, -s, -c, s}
                                             : std::array<double, 4>{s, c, -s, -c};
    std::vector<double> d(static_cast<std::size_t>(a.order()) + 1);
    for (std::size_t k = 0; k < d.size(); ++k) {
        d[k] = cyc[k % 4] / factorial(static_cast<int>(k));
    }
    return horner(d, a);
}

}  // namespace

Jet sin(const Jet& a) { return trig(a, false); }
Jet cos(const Jet& a) { return trig(a, true); }

Jet partial(const Jet& a, int axis) {
    if (axis < 0 || axis >= a.nvars()) {
        throw InvalidArgument("partial: axis out of range");
    }
    if (a.order() == 0) {
        throw InvalidArgument("partial of an order-0 jet");
    }
    Jet out(a.nvars(), a.order() - 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        MultiIndex up = out.index(k);
        up[axis] += 1;
        out.coefficients()[k] = up[axis] * a.coefficient(up);
    }
    return out;
}

Jet slice(const Jet& a, int k) {
    if (a.nvars() < 1 || k < 0 || k > a.order()) {
        throw InvalidArgument("slice index out of range");
    }
    Jet out(a.nvars() - 1, a.order() - k);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const MultiIndex& b = out.index(i);
        out.coefficients()[i] = a.coefficient({k, b[0], b[1]});
    }
    return out;
}

void set_slice(Jet& a, int k, const Jet& s) {
    if (a.nvars() < 1 || k < 0 || k > a.order() || s.nvars() != a.nvars() - 1 ||
        s.order() < a.order() - k) {
        throw InvalidArgument("set_slice: shape mismatch");
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        const MultiIndex& b = s.index(i);
        if (b[0] + b[1] + k <= a.order()) {
            a.set_coefficient({k, b[0], b[1]}, s.coefficients()[i]);
        }
    }
}

Jet compose(std::span<const double> taylor, const Jet& a) {
    if (taylor.empty()) {
        throw InvalidArgument("compose: empty coefficient list");
    }
    std::vector<double> d(static_cast<std::size_t>(a.order()) + 1, 0.0);
    std::copy_n(taylor.begin(), std::min(d.size(), taylor.size()), d.begin());
    return horner(d, a);
}

Jet integrate(const Jet& a, double constant) {
    if (a.nvars() != 1) {
        throw InvalidArgument("integrate expects a univariate jet");
    }
    Jet out(1, a.order() + 1);
    out.coefficients()[0] = constant;
    for (int k = 0; k <= a.order(); ++k) {
        out.coefficients()[static_cast<std::size_t>(k) + 1] =
            a.coefficients()[static_cast<std::size_t>(k)] / (k + 1);
    }
    return out;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

double multi_factorial(const MultiIndex& alpha) {
    return factorial(alpha[0]) * factorial(alpha[1]) * factorial(alpha[2]);
}

double max_difference(const Jet& a, const Jet& b) {
    require_same_shape(a, b);
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m = std::max(m, std::abs(a.coefficients()[k] - b.coefficients()[k]));
    }
    return m;
}

}  // namespace plap::jets

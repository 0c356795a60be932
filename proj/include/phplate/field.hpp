#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace phplate {

/// Scalar samples on the N1 x N2 node grid, row-major in i (z1 direction).
class Field {
public:
    Field() = default;
    Field(int n1, int n2, double value = 0.0)
        : n1_(n1), n2_(n2), v_((size_t)n1 * n2, value) {}

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    size_t size() const { return v_.size(); }

    double& operator()(int i, int j) {
        assert(i >= 0 && i < n1_ && j >= 0 && j < n2_);
        return v_[(size_t)i * n2_ + j];
    }
    double operator()(int i, int j) const {
        assert(i >= 0 && i < n1_ && j >= 0 && j < n2_);
        return v_[(size_t)i * n2_ + j];
    }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    bool all_finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    Field& operator+=(const Field& o) {
        assert(same_shape(o));
        for (size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
        return *this;
    }
    Field& operator-=(const Field& o) {
        assert(same_shape(o));
        for (size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
        return *this;
    }
    Field& operator*=(double a) {
        for (double& x : v_) x *= a;
        return *this;
    }

    bool same_shape(const Field& o) const { return n1_ == o.n1_ && n2_ == o.n2_; }

private:
    int n1_ = 0, n2_ = 0;
    std::vector<double> v_;
};

inline Field operator-(const Field& a, const Field& b) {
    Field r = a;
    r -= b;
    return r;
}

/// Node grid extended by two ghost layers on every side.
/// Index range i in [-2, n1+1], j in [-2, n2+1].
class GhostField {
public:
    GhostField() = default;
    GhostField(int n1, int n2, double value = 0.0)
        : n1_(n1), n2_(n2), v_((size_t)(n1 + 4) * (n2 + 4), value) {}

    int n1() const { return n1_; }
    int n2() const { return n2_; }

    double& operator()(int i, int j) {
        assert(i >= -2 && i < n1_ + 2 && j >= -2 && j < n2_ + 2);
        return v_[(size_t)(i + 2) * (n2_ + 4) + (j + 2)];
    }
    double operator()(int i, int j) const {
        assert(i >= -2 && i < n1_ + 2 && j >= -2 && j < n2_ + 2);
        return v_[(size_t)(i + 2) * (n2_ + 4) + (j + 2)];
    }

    /// flat index used by the ghost-closure rule tables
    int flat(int i, int j) const { return (i + 2) * (n2_ + 4) + (j + 2); }
    double& operator[](int k) { return v_[k]; }
    double operator[](int k) const { return v_[k]; }
    size_t raw_size() const { return v_.size(); }

    void set_interior(const Field& f) {
        assert(f.n1() == n1_ && f.n2() == n2_);
        for (int i = 0; i < n1_; ++i)
            for (int j = 0; j < n2_; ++j) (*this)(i, j) = f(i, j);
    }

    Field interior() const {
        Field f(n1_, n2_);
        for (int i = 0; i < n1_; ++i)
            for (int j = 0; j < n2_; ++j) f(i, j) = (*this)(i, j);
        return f;
    }

private:
    int n1_ = 0, n2_ = 0;
    std::vector<double> v_;
};

} // namespace phplate

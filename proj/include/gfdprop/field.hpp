#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "gfdprop/error.hpp"

namespace gfdprop {

/// Dense 2-D array of doubles, row-major in j (index = j*nx + i).
class Field2D {
public:
    Field2D() = default;
    Field2D(int nx, int ny, double fill = 0.0)
        : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * ny, fill) {}

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * nx_ + i]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    bool same_shape(const Field2D& o) const { return nx_ == o.nx_ && ny_ == o.ny_; }

    void fill(double v) { data_.assign(data_.size(), v); }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Fixed left-to-right accumulation for reproducibility.
    double sum() const {
        double s = 0.0;
        for (double v : data_) s += v;
        return s;
    }

    double sum_abs() const {
        double s = 0.0;
        for (double v : data_) s += std::abs(v);
        return s;
    }

    bool operator==(const Field2D& o) const {
        return nx_ == o.nx_ && ny_ == o.ny_ && data_ == o.data_;
    }

private:
    int nx_ = 0;
    int ny_ = 0;
    std::vector<double> data_;
};

/// L-inf norm of the difference between two same-shaped fields.
inline double max_abs_diff(const Field2D& a, const Field2D& b) {
    if (!a.same_shape(b)) throw Error(Errc::ShapeMismatch, "max_abs_diff on mismatched fields");
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
        m = std::max(m, std::abs(a.raw()[n] - b.raw()[n]));
    return m;
}

}  // namespace gfdprop

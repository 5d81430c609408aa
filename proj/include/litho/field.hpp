#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "litho/errors.hpp"

namespace litho {

using complexd = std::complex<double>;

// Dense row-major 2-D array. Most fields are n x n on the computational
// window; padded convolution scratch uses larger shapes.
template <typename T>
class Field {
public:
    Field() = default;
    Field(int rows, int cols, T fill = T{}) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t size() const { return data_.size(); }

    T& operator()(int r, int c) { return data_[size_t(r) * cols_ + c]; }
    const T& operator()(int r, int c) const { return data_[size_t(r) * cols_ + c]; }
    T& operator[](size_t i) { return data_[i]; }
    const T& operator[](size_t i) const { return data_[i]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    // zero-extended accessor
    T at0(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_) return T{};
        return (*this)(r, c);
    }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    bool same_shape(const Field& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using RealField = Field<double>;
using ComplexField = Field<complexd>;

inline ComplexField to_complex(const RealField& a) {
    ComplexField out(a.rows(), a.cols());
    for (size_t i = 0; i < a.size(); ++i) out[i] = complexd(a[i], 0.0);
    return out;
}

inline RealField real_part(const ComplexField& a) {
    RealField out(a.rows(), a.cols());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i].real();
    return out;
}

inline double max_abs(const RealField& a) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

inline double max_abs(const ComplexField& a) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

inline double min_value(const RealField& a) {
    double m = a.size() ? a[0] : 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::min(m, a[i]);
    return m;
}

inline double max_value(const RealField& a) {
    double m = a.size() ? a[0] : 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i]);
    return m;
}

inline double sum(const RealField& a) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i];
    return s;
}

// l2 norm of the difference relative to the l2 norm of the reference
inline double rel_l2_error(const RealField& got, const RealField& ref) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < ref.size(); ++i) {
        double d = got[i] - ref[i];
        num += d * d;
        den += ref[i] * ref[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double rel_l2_error(const ComplexField& got, const ComplexField& ref) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < ref.size(); ++i) {
        num += std::norm(got[i] - ref[i]);
        den += std::norm(ref[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

} // namespace litho

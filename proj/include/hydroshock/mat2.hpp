#pragma once

#include <array>
#include <complex>

namespace hydroshock {

using cplx = std::complex<double>;

template <class T>
struct Mat2T {
    std::array<std::array<T, 2>, 2> a{};

    T& operator()(int i, int j) { return a[i][j]; }
    const T& operator()(int i, int j) const { return a[i][j]; }
    T det() const { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }
    T trace() const { return a[0][0] + a[1][1]; }
};

using Mat2 = Mat2T<double>;
using Mat2c = Mat2T<cplx>;
using Vec2c = std::array<cplx, 2>;

inline Mat2c operator*(const Mat2c& x, const Mat2c& y) {
    Mat2c r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
    return r;
}

inline Vec2c operator*(const Mat2c& m, const Vec2c& v) {
    return {m(0, 0) * v[0] + m(0, 1) * v[1], m(1, 0) * v[0] + m(1, 1) * v[1]};
}

inline Mat2c complexify(const Mat2& m) {
    Mat2c r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = m(i, j);
    return r;
}

inline Mat2 inverse(const Mat2& m) {
    const double d = m.det();
    Mat2 r;
    r(0, 0) = m(1, 1) / d;
    r(0, 1) = -m(0, 1) / d;
    r(1, 0) = -m(1, 0) / d;
    r(1, 1) = m(0, 0) / d;
    return r;
}

inline double norm(const Vec2c& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

} // namespace hydroshock

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <type_traits>

namespace rlftn {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixR = Matrix<double>;
using MatrixC = Matrix<Complex>;
using VectorR = Vector<double>;
using VectorC = Vector<Complex>;

template <class Scalar>
inline constexpr bool is_complex_v = false;
template <class T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

}  // namespace rlftn

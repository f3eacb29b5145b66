// Shared scalar-templated dense types and the square-image container.

#ifndef BILEVEL_TYPES_HPP
#define BILEVEL_TYPES_HPP

#include <Eigen/Core>
#include <stdexcept>

namespace bilevel {

template <class Scalar>
using Vec = Eigen::Vector<Scalar, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Square pixel grid stored as a flat vector of length side^2.
/// Pixel (ix, iy) lives at data[iy * side + ix], ix varying fastest.
template <class Scalar>
struct Image {
  Index side = 0;
  Vec<Scalar> data;

  Image() = default;
  Image(Index side_, Vec<Scalar> data_) : side(side_), data(std::move(data_)) {
    if (data.size() != side * side)
      throw std::invalid_argument("Image: data length must equal side^2");
  }

  static Image zero(Index side_) {
    return Image(side_, Vec<Scalar>::Zero(side_ * side_));
  }
};

/// True iff n is a power of two (and positive).
inline bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace bilevel

#endif

#pragma once

#include "capharm/meshkit.hpp"

#include <vector>

namespace capharm::diskgrid {

using Vec2 = Eigen::Vector2d;

/// Roșca's equal-area square-to-disk map, scaled so [-1, 1]^2 lands on the
/// unit disk (areas shrink by the constant pi/4).
///   |y| <= |x|:  (x cos(pi y / 4x), x sin(pi y / 4x))
///   |x| <  |y|:  (y sin(pi x / 4y), y cos(pi x / 4y))
/// The square boundary goes to the unit circle.
Vec2 square_to_disk(double x, double y);
/// Inverse of square_to_disk.
Vec2 disk_to_square(const Vec2& q);

struct Grid {
    std::vector<Vec2> points;          // p*p points, row-major in the square
    std::vector<meshkit::Face> faces;  // counter-clockwise in the disk plane
};

/// p x p square lattice on [-1, 1]^2 pushed through square_to_disk and
/// Delaunay-triangulated by Lawson flips from a diagonal split. p >= 2.
Grid disk_grid(int p);

/// Flips interior edges until every one is locally Delaunay in the plane.
/// Returns the number of flips.
std::size_t lawson_flip(const std::vector<Vec2>& points, std::vector<meshkit::Face>& faces);

}  // namespace capharm::diskgrid

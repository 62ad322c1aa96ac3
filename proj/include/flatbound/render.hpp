#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flatbound/flats.hpp"
#include "flatbound/loss.hpp"

namespace flatbound {

struct Annotation {
    Vec point;
    std::string label;
};

/// SVG 1.1 ternary diagram of a 3-outcome property in a fixed 600x520
/// viewBox. Outcome 0 sits bottom left, 1 bottom right, 2 on top. Output is a
/// pure function of the inputs. Throws PreconditionError for other outcome counts.
std::string render_simplex(const PropertyCells& target, const std::vector<Annotation>& annotations = {},
                           const std::vector<Flat>& flats = {}, const std::string& title = {});
std::string render_simplex(const DiscreteLoss& loss, const std::vector<Annotation>& annotations = {},
                           const std::vector<Flat>& flats = {}, const std::string& title = {});

/// Pixel position of a barycentric point.
std::pair<Rational, Rational> simplex_to_pixel(const Vec& p);

/// Fixed two-decimal rendering of an exact rational, rounding half away from zero.
std::string format_fixed(const Rational& x);

}  // namespace flatbound

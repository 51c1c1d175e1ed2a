#pragma once

#include "spamri/grids.hpp"

namespace spamri {

/// sqrt(mean((a - b)^2))
double rmse(const ImageGrid& a, const ImageGrid& b);

/// Pearson correlation of the flattened maps. Throws NumericalError when
/// either map is constant.
double corrcoef(const ImageGrid& u, const ImageGrid& v);

/// Pixelwise |a - b|.
ImageGrid abs_error(const ImageGrid& a, const ImageGrid& b);

}  // namespace spamri

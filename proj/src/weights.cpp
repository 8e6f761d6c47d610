#include "niklab/weights.hpp"

#include <algorithm>
#include <cmath>

#include "niklab/geometry.hpp"

namespace niklab {

double WeightSpec::eval(double t, double lo, double hi) const {
  switch (kind) {
    case WeightKind::Uniform:
      return 1.0;
    case WeightKind::Polynomial: {
      double acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
      return acc;
    }
    case WeightKind::Cosine:
      return (1.0 + amplitude * std::cos(t)) / kTwoPi;
    case WeightKind::Custom: {
      if (values.size() < 2)
        raise(ErrorCode::UnsupportedWeight, "custom weight needs >= 2 samples");
      const double u = (t - lo) / (hi - lo) * static_cast<double>(values.size() - 1);
      const auto i = static_cast<std::size_t>(
          std::clamp(u, 0.0, static_cast<double>(values.size() - 2)));
      const double frac = u - static_cast<double>(i);
      return values[i] * (1.0 - frac) + values[i + 1] * frac;
    }
  }
  return 1.0;
}

void WeightSpec::validate() const {
  if (sign != 1 && sign != -1)
    raise(ErrorCode::InvalidWeight, "weight sign must be +1 or -1");
  switch (kind) {
    case WeightKind::Uniform:
      break;
    case WeightKind::Polynomial:
      if (coeffs.empty())
        raise(ErrorCode::InvalidWeight, "polynomial weight needs coefficients");
      break;
    case WeightKind::Cosine:
      if (std::abs(amplitude) > 1.0)
        raise(ErrorCode::InvalidWeight,
              "cosine amplitude must satisfy |a| <= 1 to stay sign-definite");
      break;
    case WeightKind::Custom:
      if (values.size() < 2)
        raise(ErrorCode::InvalidWeight, "custom weight needs >= 2 samples");
      for (double v : values)
        if (v < 0.0)
          raise(ErrorCode::InvalidWeight, "custom weight samples must be >= 0");
      break;
  }
}

}  // namespace niklab
